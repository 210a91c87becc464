#pragma once

#include <vector>

#include "nak/element.hpp"

namespace nak {

enum class MapKind { power, affine, geometric };

// f(x) = coeff * x^n on the scaling disk around an anchor (power),
// f(x) = coeff * x + offset (affine), or f_n(x) = coeff^n * x (geometric
// member n). Affine and geometric maps scale distances everywhere; their
// domain field is the orbit's reference disk, not a restriction.
struct ScalingMapSpec {
  MapKind kind = MapKind::affine;
  Elem coeff;
  Elem offset;
  BigInt n = 1;
  Disk domain;
};

// Largest disk around the anchor on which a power map scales distances:
// radius |a|/q^{e+1} in characteristic 0, |a|/q in characteristic p.
Disk scaling_domain(const Elem& anchor);

ScalingMapSpec make_power_map(const Elem& alpha, const BigInt& n, const Elem& anchor);
ScalingMapSpec make_affine_map(const Elem& beta, const Elem& c);
ScalingMapSpec make_geometric_map(const Elem& beta, const BigInt& n);

struct ScalingExponent {
  bool is_scaling = true;  // false: characteristic-p power map with p | n
  long lambda = 0;         // ratio exponent; the Holder base exponent when !is_scaling
  BigInt holder_pow = 1;   // p^{v_p(n)}, the Holder exponent when !is_scaling
};

ScalingExponent scaling_exponent(const ScalingMapSpec& spec);

Elem apply_map(const ScalingMapSpec& spec, const Elem& x);

// Exponent of |f(x) - f(y)| predicted from |x - y| alone: lambda + ex for
// scaling maps, base + holder * ex for the characteristic-p Holder case.
// nullopt when x = y to the shared precision (the distance-zero sentinel).
std::optional<long> predicted_distance(const ScalingMapSpec& spec, const Elem& x, const Elem& y);

// lambda_n = -v(alpha) - e*v_p(n) - (n-1)*v(a) for n in [n_from, n_from+count)
// (characteristic 0; drop the v_p term in characteristic p away from p | n).
std::vector<long> power_lambda_schedule(const FieldSpec& fs, long v_alpha, long v_anchor,
                                        long n_from, long count);

// Sum of squared lambda-class sizes over the given schedule entries.
BigInt count_KN(const std::vector<long>& lambdas);

struct LambdaClass {
  std::vector<long> members;
  bool within_bound = false;  // #members <= e log_p(N+k)/gamma + 1, checked exactly
};

// Indices m in [k, N+k-1] with m*gamma - e*v_p(m) equal to n's key.
LambdaClass lambda_class(long gamma, long n, long k, long N, const FieldSpec& fs);

// 1-based index of the first schedule entry with lambda_n >= H0: the cut
// where q^{lambda_n} times a diameter q^{-H0} reaches 1. 0 if none.
long n0_cut(const std::vector<long>& lambdas, long H0);

struct KNAudit {
  BigInt kn;
  bool within_bound = false;  // kn <= N (e log_p(N+n0)/gamma + 1), checked exactly
};

// Audit of the class-count bound for the power family alpha x^n over
// n in [n0, n0+N): anchor norm exponent gamma > 0.
KNAudit kn_bound_audit(const FieldSpec& fs, long v_alpha, long gamma, long n0, long N);

}  // namespace nak
