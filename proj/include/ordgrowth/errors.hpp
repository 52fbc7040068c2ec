#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ordgrowth {

// Failure conditions surfaced by the toolkit. Every throw site attaches the
// diagnostics it has (grid resolution, margins, witnesses) to the message.
enum class errc {
  order_inconclusive,
  dominant_witness_not_found,
  bisection_stall,
  rot_f_near_zero,
  f_not_positive,
  dimension_mismatch,
  zero_class,
  hypothesis_failed,
  resolution_too_coarse,
  negative_under_tolerance,
  config_error,
};

inline std::string_view to_string(errc c) {
  switch (c) {
    case errc::order_inconclusive: return "ORDER_INCONCLUSIVE";
    case errc::dominant_witness_not_found: return "DOMINANT_WITNESS_NOT_FOUND";
    case errc::bisection_stall: return "BISECTION_STALL";
    case errc::rot_f_near_zero: return "ROT_F_NEAR_ZERO";
    case errc::f_not_positive: return "F_NOT_POSITIVE";
    case errc::dimension_mismatch: return "DIMENSION_MISMATCH";
    case errc::zero_class: return "ZERO_CLASS";
    case errc::hypothesis_failed: return "HYPOTHESIS_FAILED";
    case errc::resolution_too_coarse: return "RESOLUTION_TOO_COARSE";
    case errc::negative_under_tolerance: return "NEGATIVE_UNDER_TOLERANCE";
    case errc::config_error: return "CONFIG_ERROR";
  }
  return "UNKNOWN";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace ordgrowth
