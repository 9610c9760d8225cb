#pragma once

#include <stdexcept>
#include <string>

namespace risemf {

enum class ErrorCode {
  InvalidArgument = 1,
  CoincidentPoint,
  BehindPlane,
  NoLimitDefined,
  UnknownPreset,
  Infeasible,
  Parse,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

} // namespace detail
} // namespace risemf
