#include "lsim/link.hpp"

#include <string>

#include "lsim/error.hpp"

namespace lsim {

SimTime SerializationTime(std::int64_t bytes, std::int64_t capacity_bytes_per_s) {
  const Int128 num = static_cast<Int128>(bytes) * kPsPerSecond;
  const Int128 ps = (num + capacity_bytes_per_s - 1) / capacity_bytes_per_s;
  return SimTime::FromPs(static_cast<std::int64_t>(ps));
}

Transmission Link::Transmit(std::int64_t bytes, SimTime start) {
  if (start < busy_until_) {
    throw Error(ErrorCode::kLinkBusy,
                "link busy until " + std::to_string(busy_until_.ps()) +
                    " ps, transmission requested at " +
                    std::to_string(start.ps()) + " ps");
  }
  const SimTime done = start + SerializationTime(bytes, config_.capacity_bytes_per_s);
  busy_until_ = done;
  return {done, done + config_.propagation};
}

}  // namespace lsim
