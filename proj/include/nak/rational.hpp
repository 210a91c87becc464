#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

#include "nak/error.hpp"

namespace nak {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt pow_int(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigInt pow_int(long base, unsigned long e) { return pow_int(BigInt(base), e); }

// q^e for integer e of either sign.
inline Rational pow_rat(long q, long e) {
  BigInt p = pow_int(q, static_cast<unsigned long>(e < 0 ? -e : e));
  Rational r;
  if (e >= 0)
    r = Rational(p);
  else
    r = Rational(1) / Rational(p);
  r.canonicalize();
  return r;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// floor(r) as a BigInt.
inline BigInt floor_rat(const Rational& r) {
  return floor_div(r.get_num(), r.get_den());
}

// ceil(r) as a BigInt.
inline BigInt ceil_rat(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

// Multiplicity of prime p in n (n != 0). Also divides out: n -> n / p^result.
inline unsigned long remove_factor(BigInt& n, const BigInt& p) {
  return mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

inline long vp_of(const BigInt& n, long p) {
  require(n != 0, errc::invalid_input, "p-adic multiplicity of zero");
  BigInt tmp = n;
  return static_cast<long>(remove_factor(tmp, BigInt(p)));
}

inline std::string rat_str(const Rational& r) { return r.get_str(); }

// Decimal shadow for report output; exact values stay rational.
inline double rat_shadow(const Rational& r) { return r.get_d(); }

// Natural log of a positive rational, stable far outside double range.
inline double log_rat(const Rational& r) {
  require(r > 0, errc::invalid_input, "log of a nonpositive value");
  signed long en, ed;
  double mn = mpz_get_d_2exp(&en, r.get_num().get_mpz_t());
  double md = mpz_get_d_2exp(&ed, r.get_den().get_mpz_t());
  return std::log(mn) - std::log(md) + (static_cast<double>(en) - ed) * std::log(2.0);
}

inline bool fits_long(const BigInt& n) { return n.fits_slong_p(); }

inline long to_long(const BigInt& n) {
  require(n.fits_slong_p(), errc::too_large, "integer exceeds machine range");
  return n.get_si();
}

}  // namespace nak
