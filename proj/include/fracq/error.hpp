#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracq {

enum class ErrorCode {
  invalid_argument,
  pole,
  multiplier_singularity,
  singular_power,
  branch_cut,
  ill_conditioned,
  grid_mismatch,
  degree_guard,
  dimension_cap,
  io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::pole: return "pole";
    case ErrorCode::multiplier_singularity: return "multiplier_singularity";
    case ErrorCode::singular_power: return "singular_power";
    case ErrorCode::branch_cut: return "branch_cut";
    case ErrorCode::ill_conditioned: return "ill_conditioned";
    case ErrorCode::grid_mismatch: return "grid_mismatch";
    case ErrorCode::degree_guard: return "degree_guard";
    case ErrorCode::dimension_cap: return "dimension_cap";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace fracq
