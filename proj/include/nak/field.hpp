#pragma once

#include <string>

#include "nak/error.hpp"

namespace nak {

// A non-Archimedean local field with residue characteristic p:
// characteristic 0 means the p-adic field Q_p, characteristic p means F_p((t)).
// Ramification index e and residue degree f are carried for interface
// completeness; this build supports e = f = 1 only and rejects anything else
// at construction.
struct FieldSpec {
  long characteristic = 0;  // 0 or p
  long p = 2;
  int e = 1;
  int f = 1;

  long q() const { return p; }
  bool is_char_p() const { return characteristic != 0; }
  char uniformizer() const { return is_char_p() ? 't' : 'p'; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline bool is_small_prime(long p) {
  if (p < 2 || p > (1L << 20)) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline void validate_field(const FieldSpec& fs) {
  require(is_small_prime(fs.p), errc::invalid_input, "p must be a prime below 2^20");
  require(fs.characteristic == 0 || fs.characteristic == fs.p, errc::invalid_input,
          "characteristic must be 0 or p");
  require(fs.e == 1 && fs.f == 1, errc::invalid_input,
          "only unramified prime fields (e = f = 1) are supported");
}

inline FieldSpec field_Qp(long p) {
  FieldSpec fs{0, p, 1, 1};
  validate_field(fs);
  return fs;
}

inline FieldSpec field_Fpt(long p) {
  FieldSpec fs{p, p, 1, 1};
  validate_field(fs);
  return fs;
}

inline std::string field_name(const FieldSpec& fs) {
  if (fs.is_char_p()) return "F_" + std::to_string(fs.p) + "((t))";
  return "Q_" + std::to_string(fs.p);
}

}  // namespace nak
