#pragma once

#include <stdexcept>
#include <string>

namespace nak {

enum class errc {
  invalid_input,
  division_by_zero,
  insufficient_precision,
  no_square_root,
  out_of_domain,
  unsupported_measure,
  too_large,
  invalid_configuration,
  construction_failure,
  ambiguity_failure,
  invalid_schedule,
  invalid_family,
};

inline const char* errc_name(errc k) {
  switch (k) {
    case errc::invalid_input: return "invalid-input";
    case errc::division_by_zero: return "division-by-zero";
    case errc::insufficient_precision: return "insufficient-precision";
    case errc::no_square_root: return "no-square-root";
    case errc::out_of_domain: return "out-of-domain";
    case errc::unsupported_measure: return "unsupported-measure";
    case errc::too_large: return "too-large";
    case errc::invalid_configuration: return "invalid-configuration";
    case errc::construction_failure: return "construction-failure";
    case errc::ambiguity_failure: return "ambiguity-failure";
    case errc::invalid_schedule: return "invalid-schedule";
    case errc::invalid_family: return "invalid-family";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& what_arg)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + what_arg), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw error(kind, msg); }

inline void require(bool cond, errc kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace nak
