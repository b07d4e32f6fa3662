#pragma once

#include <cstdint>

namespace lsim {

using HostId = std::int32_t;
using SwitchId = std::int32_t;
using PortId = std::int32_t;
using FlowId = std::int32_t;

}  // namespace lsim
