#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nak/io.hpp"
#include "nak/scaling.hpp"

namespace nak {

// Target sequence b_n for the Moran constraints |[f_n(x)] - b_n| <= q^{-H_n}.
// Constant (default: zero), an explicit list, or per-index seeded random
// elements of the ring of integers.
struct TargetGen {
  enum class Kind { constant, list, random };
  Kind kind = Kind::constant;
  Elem value;               // constant: the value; zero sentinel => b_n = 0
  std::vector<Elem> list;   // list: b_1, b_2, ...
  uint64_t seed = 0;        // random
};

Elem target_at(const TargetGen& g, const FieldSpec& fs, long index, long prec);

// A homogeneous Moran schedule: start radius exponent H0, constraint depths
// lambda_n (1-based, entries are the scaling-ratio exponents of the maps) and
// widths H_n >= 0. Valid iff lambda_1 >= H0 and lambda_{n+1} - lambda_n >= H_n.
struct MoranSchedule {
  long H0 = 0;
  std::vector<BigInt> lambdas;
  std::vector<BigInt> Hs;
  TargetGen targets;
  // Analytic limit of the dimension ratio, present when rule-generated.
  std::optional<Rational> limit;
};

void validate_schedule(const MoranSchedule& s);

MoranSchedule make_schedule(long H0, std::vector<BigInt> lambdas, std::vector<BigInt> Hs,
                            TargetGen targets = {});
// lambda_n = a*n + c, H_n = h; analytic limit (a - h)/a.
MoranSchedule affine_schedule(long a, long c, long h, long H0, long count);
// lambda_n = n - 1 (maps indexed from 0), H_n = 1, H0 = 0: empty branch set,
// one point per start disk.
MoranSchedule mahler_schedule(long count);
// Exponents of the power family alpha*x^{m_n} over the disk of norm q^L,
// m_n enumerating the integers not divisible by p^K; H_n = H. The first
// member (m = 1) is absorbed into the start disk, so entry j covers m_{j+1}.
// Analytic limit 1 - (1 - p^{-K}) H/L.
MoranSchedule prop61_schedule(long p, long K, long H, long L, long count, long v_alpha = 0);
// lambda rule "a*n + c" given as "2n", "n+3", "5n+1"; H rule a bare integer.
MoranSchedule schedule_from_rules(const std::string& lambda_rule, const std::string& h_rule,
                                  long H0, long count);

struct GammaDim {
  std::vector<Rational> ratios;  // (lambda_n - sum_{k<n} H_k) / (lambda_n + H_n)
  Rational liminf_estimate;      // min over the tail n > horizon/2
  std::optional<Rational> analytic_limit;
};

GammaDim gamma_dim(const MoranSchedule& s, long horizon);

// Dimension bounds for a general Moran construction: each level-(k-1) disk
// holds >= m_k level-k disks, separated by >= delta_k, of radius <= d_k.
// lower_k = log(m_1...m_{k-1}) / -log(m_k delta_k),
// upper_k = log(m_1...m_k) / -log(d_k); liminf estimated as the tail min.
struct MoranBounds {
  std::vector<double> lower_seq, upper_seq;
  double lower = 0, upper = 0;
};

MoranBounds moran_bounds(const std::vector<long>& m, const std::vector<Rational>& delta,
                         const std::vector<Rational>& d);

// Exact variant when everything is a power of one base: m_k = q^{a_k},
// delta_k = q^{-s_k}, d_k = q^{-t_k}; the base cancels from the ratios.
struct MoranBoundsExact {
  std::vector<Rational> lower_seq, upper_seq;
  Rational lower, upper;
};

MoranBoundsExact moran_bounds_exp(const std::vector<BigInt>& a, const std::vector<BigInt>& s,
                                  const std::vector<BigInt>& t);

// The (m, delta, d) exponents a schedule's construction tree realizes:
// a_1 = lambda_1 - H0, a_n = lambda_n - lambda_{n-1} - H_{n-1},
// s_n = lambda_n - 1, t_n = lambda_n + H_n (so m_n delta_n = q d_{n-1}).
struct MoranExponents {
  std::vector<BigInt> a, s, t;
};

MoranExponents schedule_to_moran(const MoranSchedule& s);

// Levels in [H0, horizon) where the construction tree branches q ways:
// [H0, lambda_1 - 1] and each [lambda_n + H_n, lambda_{n+1} - 1].
struct BranchLevels {
  std::vector<long> levels;
  long horizon = 0;
};

BranchLevels branch_levels(const MoranSchedule& s, long horizon);

struct ConstraintRow {
  long index = 0;     // 1-based schedule entry
  long achieved = 0;  // valuation of [f_n(x)] - b_n (its precision if zero)
  long required = 0;  // H_n
  bool pass = false;
};

struct MembershipCertificate {
  std::vector<ConstraintRow> rows;
  bool pass = false;
  long horizon = 0;  // working absolute precision
};

struct ConstructedPoint {
  Elem x;
  MembershipCertificate cert;
};

// Greedy digit descent for a point of the Moran set: process digit levels
// H0..precision-1; inside a constraint window [lambda_n, lambda_n + H_n) the
// unique admissible digit is committed (no digit -> construction-failure,
// several -> ambiguity-failure: the map is not scaling at that depth); free
// levels extend by digit 0. Constraints with lambda_n + H_n <= precision -
// guard are enforced and certified.
ConstructedPoint construct_point(const std::vector<ScalingMapSpec>& maps, const MoranSchedule& s,
                                 const Disk& start, long precision, long guard = 8);

// Recompute every certificate row from scratch for a given point.
MembershipCertificate verify_certificate(const std::vector<ScalingMapSpec>& maps,
                                         const MoranSchedule& s, const Elem& x, long precision,
                                         long guard = 8);

// Digit-n of the image is the 0-digit of [g_n(x)]; an isometry of the ring
// of integers when each g_n has ratio exponent exactly n.
Elem psi_encode(const std::vector<ScalingMapSpec>& g, const Elem& x, long prec);

// Dimension of the set of digit strings with frequency vector P along a
// branch set of upper density rho: (1 - rho) - rho * sum p_j log_m p_j.
double freq_set_dim(long m, const Rational& rho, const std::vector<Rational>& P);

// 1 - (1 - p^{-K}) H/L: dimension of the biased set carved from the disk of
// norm q^L by width-H constraints along the p^K-free exponents.
Rational dim_prop61(long p, long K, long H, long L);
// eta / (1 + eps - eta*eps): the refinement lower bound, -> 1 as eta -> 1.
Rational dim_prop71(const Rational& eta, const Rational& eps);
// gamma_z / (gamma_z + tau_exp) with gamma_z = log_q |z|, tau_exp = log_q tau.
Rational dim_prop72(const Rational& gamma_z, const Rational& tau_exp);

struct Prop72Build {
  std::vector<BigInt> n_seq;
  MoranSchedule schedule;
};

// Greedy minimal (n_k): p never divides n_k, (n_1 - 1) gamma_z >= H0 +
// v_alpha, (n_{k+1} - n_k) gamma_z >= n_k tau_exp, and n_{k+1} >= k^2 *
// (n_1 + ... + n_k) so the prefix-sum ratio vanishes. H_k = ceil(n_k
// tau_exp), lambda_k = -v_alpha + (n_k - 1) gamma_z.
Prop72Build build_prop72_schedule(long p, long gamma_z, const Rational& tau_exp, long H0,
                                  long v_alpha, long count);

struct Prop71Build {
  std::vector<BigInt> refined;    // full refined exponent list
  std::vector<BigInt> exponents;  // exponent backing schedule entry n
  MoranSchedule schedule;
};

// Refine (r_n) so consecutive ratios stay below 1 + eps (minimal insertions
// keeping p^K inert), find the least shift N with lambda_1 > H0 and every
// audited gap above K / (eta * gamma_z), and emit H_n =
// floor((1 - eta) * gap_n) * gamma_z. count entries are produced.
Prop71Build prop71_schedule(const std::vector<long>& r, long p, long K, long gamma_z,
                            long v_alpha, const Rational& eta, const Rational& eps, long H0,
                            long count);

Json schedule_to_json(const MoranSchedule& s);
MoranSchedule schedule_from_json(const Json& j);
Json certificate_to_json(const MembershipCertificate& c);

}  // namespace nak
