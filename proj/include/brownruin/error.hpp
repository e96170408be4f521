#pragma once

#include <stdexcept>
#include <string>

namespace brownruin {

// Values mirror br_status in brownruin.h.
enum class ErrorCode {
  kDomain = 1,
  kNonPositiveDrift = 2,
  kCorrelationOutOfRange = 3,
  kNonPositiveTime = 4,
  kNotPositiveDefinite = 5,
  kInfeasibleB = 6,
  kBoxDegenerate = 7,
  kBoundaryHit = 8,
  kConfig = 9,
  kInvalidArgument = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code) noexcept;

}  // namespace brownruin
