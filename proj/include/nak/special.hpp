#pragma once

#include <vector>

#include "nak/element.hpp"
#include "nak/io.hpp"

namespace nak {

// Quadratic Pisot-Chabauty data: the root xi of p^k x^2 + x + p^l with
// |xi|_p = p^k. Its conjugate has |.|_p = p^{-l}, and both Archimedean
// embeddings have modulus p^{(l-k)/2} < 1.
struct PisotChabautySpec {
  long p = 3;
  long k = 2;
  long l = 1;
};

void validate_pisot_spec(const PisotChabautySpec& spec);

// xi = (-1 - s) / (2 p^k) where s = sqrt(1 - 4 p^{k+l}) on the branch that
// keeps the numerator as large as possible: s = 1 mod p for odd p, s = 1
// mod 4 for p = 2. prec is the relative precision of the result; the
// minimal-polynomial residual and |xi|_p = p^k are asserted post-hoc.
Elem pisot_value(const PisotChabautySpec& spec, long prec);

// T_n = xi_1^n + xi_2^n as exact rationals: T_0 = 2, T_1 = -p^{-k},
// T_{n+2} = -p^{-k} T_{n+1} - p^{l-k} T_n. Denominators are powers of p.
struct TraceSequence {
  PisotChabautySpec spec;
  std::vector<Rational> T;  // indices 0..n_max
};

TraceSequence trace_sequence(const PisotChabautySpec& spec, long n_max);

// |T_n|_inf <= 2 p^{(l-k)n/2}, compared exactly as num^2 p^{(k-l)n} <= 4 den^2.
bool trace_archimedean_bound(const PisotChabautySpec& spec, const Rational& Tn, long n);

// Least n with 2 p^{(l-k)n/2} < 1, i.e. 4 p^{ln} < p^{kn}; from there on
// |T_n|_inf < 1 is guaranteed and the floor claim applies.
long pisot_n0(const PisotChabautySpec& spec);

struct LimitRow {
  long n = 0;
  Rational norm_int;           // |[xi^n]|_p (upper bound when int_vanishes)
  bool int_vanishes = false;   // [xi^n] is 0 to working precision
  Rational norm_int_p1;        // |[xi^n] + 1|_p (upper bound when flagged)
  bool int_p1_vanishes = false;
  Rational norm_err;   // |xi^n - T_n|_p, exact (= p^{-ln})
  bool floor_known = false;   // |T_n|_inf < 1, so [T_n] is 0 or -1
  long floor_trace = 0;       // [T_n] when floor_known and in the set
  bool floor_in_set = false;  // [T_n] in {0, -1}
};

struct LimitPointTable {
  PisotChabautySpec spec;
  long n0 = 0;
  std::vector<LimitRow> rows;  // n = 1..n_max
};

// The two-path witness that ([xi^n]) clusters only at 0 and -1: the p-adic
// power on one side, the rational trace recurrence embedded on the other.
// pre: prec >= (k + l) n_max + guard so no row degenerates.
LimitPointTable limit_point_table(const PisotChabautySpec& spec, long n_max, long prec);

Json limit_table_to_json(const LimitPointTable& t);
std::string limit_table_csv(const LimitPointTable& t);

}  // namespace nak
