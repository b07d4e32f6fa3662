#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsim {

enum class ErrorCode {
  kSchedulingInPast,
  kInvalidParameter,
  kInvalidHost,
  kLinkBusy,
  kBufferOverflow,
  kMisroutedPacket,
  kUnknownFlow,
  kNoDeliveries,
  kLifecycle,
  kIo,
  kParse,
  kValidation,
  kAuditFailure,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lsim
