#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "nak/field.hpp"
#include "nak/rational.hpp"

namespace nak {

// An element of Q_p or F_p((t)) known to finite precision. Digits are the
// representatives {0, ..., p-1}, little-endian from index v, so the element
// is d[0]*pi^v + d[1]*pi^(v+1) + ... and is known modulo pi^abs_prec.
// Invariants: !zero implies d.front() != 0 and v + (long)d.size() == abs_prec;
// zero (the zero-to-precision sentinel, valuation +infinity) implies d.empty().
struct Elem {
  FieldSpec field;
  bool zero = true;
  long v = 0;
  long abs_prec = 0;
  std::vector<uint32_t> d;

  long rel_prec() const { return zero ? 0 : abs_prec - v; }
};

struct Disk {
  Elem center;
  long radius_exp = 0;  // radius q^{-radius_exp}

  const FieldSpec& field() const { return center.field; }
};

Elem make_zero(const FieldSpec& fs, long abs_prec);
// Builds the element with the given leading index and digit string, stripping
// leading zero digits; abs_prec is v + digits.size() regardless of stripping.
Elem make_elem(const FieldSpec& fs, long v, std::vector<uint32_t> digits);
Elem one_elem(const FieldSpec& fs, long rel_prec);

// Digit at position i: 0 below the leading index, error at or above abs_prec.
uint32_t digit_at(const Elem& x, long i);

std::optional<long> valuation(const Elem& x);           // nullopt = +infinity
std::optional<long> norm_exp(const Elem& x);            // |x| = q^result; nullopt = zero bound
Rational norm_value(const Elem& x);                     // q^{-v}, 0 for the zero sentinel

Elem add(const Elem& x, const Elem& y);
Elem neg(const Elem& x);
Elem sub(const Elem& x, const Elem& y);
Elem mul(const Elem& x, const Elem& y);
Elem invert(const Elem& x);
Elem div(const Elem& x, const Elem& y);
Elem pow_elem(const Elem& x, const BigInt& n);
Elem shift(const Elem& x, long k);  // multiply by pi^k, exact

Elem integral_part(const Elem& x);    // [x]: digits at indices >= 0
Elem fractional_part(const Elem& x);  // {x}: digits at indices < 0

// Truncate to absolute precision m (m <= abs_prec).
Elem truncate_abs(const Elem& x, long m);

// Same field, digits agree up to the smaller of the two precisions.
bool equals(const Elem& x, const Elem& y);
// Digits agree at all indices below m; both precisions must reach m.
bool equals_mod(const Elem& x, const Elem& y, long m);

// Characteristic 0 only: num/den embedded with rel_prec digits from its
// valuation. Characteristic p: num and den reduce to prime-field constants.
Elem from_rational(const FieldSpec& fs, const BigInt& num, const BigInt& den, long rel_prec);
Elem from_rational(const FieldSpec& fs, const Rational& r, long rel_prec);
// Characteristic p only: Laurent-series quotient of two t-polynomials given
// little-endian from t^0.
Elem from_poly(const FieldSpec& fs, const std::vector<uint32_t>& num,
               const std::vector<uint32_t>& den, long rel_prec);

// Exact value of the digit string as a rational (characteristic 0 only).
Rational to_rational(const Elem& x);

// Unit part sum d[i] p^i as an integer (characteristic 0 only).
BigInt unit_to_int(const Elem& x);
std::vector<uint32_t> digits_from_int(BigInt u, long count, long p);

// Square root by Hensel lifting. p odd: relative precision is preserved and
// the two roots differ by sign; canonical root has the smaller leading digit.
// p = 2, characteristic 0: requires unit part congruent 1 mod 8 (so rel_prec
// >= 3), returns relative precision rel_prec - 1, canonical root is the
// numerically smallest of the four lifts. branch_hint selects the root with
// that leading digit and must match some root.
Elem hensel_sqrt(const Elem& x, std::optional<uint32_t> branch_hint = std::nullopt);

bool disk_contains(const Disk& d, const Elem& x);
std::vector<Disk> disk_sons(const Disk& d);

// Uniform digits beyond the disk's fixed prefix, deterministic per generator
// state. target_abs_prec >= disk radius exponent.
Elem random_element(const Disk& d, std::mt19937_64& rng, long target_abs_prec);

uint32_t uniform_digit(std::mt19937_64& rng, long p);

}  // namespace nak
