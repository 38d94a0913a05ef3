#pragma once

#include <stdexcept>
#include <string>

namespace polylat {

enum class ErrorCode {
  invalid_argument = 1,  // malformed input or violated precondition
  domain = 2,            // mathematically undefined (divergent series, zero divisor)
  scale_exceeded = 3,    // problem too large for the requested (oracle or exponential) path
  io = 4,
  audit_failed = 5,
  internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::invalid_argument, what);
}

}  // namespace polylat
