#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nak/io.hpp"
#include "nak/measures.hpp"
#include "nak/orbit.hpp"

namespace nak {

// Generator under study: power is ([,A x^n]) with fixed coefficient A,
// geometric is ([,B^n x]) with fixed ratio B.
enum class GenKind { power, geometric };

// One experiment run. The point x is either given explicitly or drawn
// Haar-uniformly from the sphere |x| = q^sphere_radius; the companion slot
// holds the power coefficient (optional, default 1) or the geometric ratio
// (required, norm > 1).
struct ExperimentConfig {
  FieldSpec field = field_Qp(2);
  GenKind kind = GenKind::power;
  std::optional<Elem> companion;
  std::optional<Elem> x;
  bool x_sampled = false;  // set by the runners when x was drawn, not given
  long sphere_radius = 1;
  long sample_digits = 64;
  std::uint64_t seed = 1;
  long trial = 0;
  // Kept-term count for run_koksma; exponent range for run_char_p.
  long N = 0;
  std::vector<long> levels = {1};
  OrbitFilter filter = OrbitFilter::all;
  long filter_k = 1;
  // Report frequencies without verdicts (the open char-p power question).
  bool exploratory = false;
  // Bypass the generator and score these cell ids directly.
  std::optional<std::vector<long>> stub_ids;
};

// One exact pass/fail comparison. lhs and rhs are rationals so the verdict
// is reproducible from the report alone; relation is one of
// "<=", "<", ">=", ">", "==".
struct Verdict {
  std::string name;
  bool pass = false;
  Rational lhs;
  Rational rhs;
  std::string relation;
};

struct ReportSection {
  std::string name;
  MeasureSpec measure;
  std::vector<FrequencyReport> levels;
  std::vector<Verdict> verdicts;
};

struct RunReport {
  ExperimentConfig config;
  std::string runner;
  std::vector<ReportSection> sections;
  double wall_seconds = 0.0;
  bool all_pass() const;
};

// Squared statistical tolerance: (4 sqrt(q^level / n))^2 = 16 q^level / n.
// Discrepancy d passes iff d^2 <= tolerance_sq, compared exactly.
Rational tolerance_sq(long level, long n_terms, const FieldSpec& fs);

// Haar-uniform point on the sphere |x| = q^radius: the digit at index
// -radius is nonzero-uniform, the remaining `digits - 1` digits uniform.
// The stream is fixed by (seed, trial) and is stable across platforms.
Elem random_sphere_point(const FieldSpec& fs, long radius, long digits,
                         std::uint64_t seed, long trial = 0);

// Distribution of ([,A x^n]) or ([,B^n x]) under the filter, scored per
// level against Haar with the statistical tolerance. Power kind in
// characteristic p requires the coprime filter unless exploratory.
RunReport run_koksma(const ExperimentConfig& cfg);

// Characteristic-p study of ([,x^n]) over the full range n <= N: hull
// occupancy of the Frobenius set at each level, the p^k-exactly-divisible
// subsequence against mu_k, and the full sequence against mu_star with a
// Haar separation check where mu_star and Haar disagree.
RunReport run_char_p(const ExperimentConfig& cfg);

// Exhaustive finite-quotient oracle grid: Haar invariance for affine maps
// of ratio exponent 0..max_lambda, and pairwise decorrelation for
// lambda_f > lambda_g with disk radius exponent gamma <= lambda_f - lambda_g.
RunReport run_oracles(const FieldSpec& fs, long max_lambda, long target_level = 2);

Json report_to_json(const RunReport& r);
std::string report_to_csv(const RunReport& r);

// Equality of serialized reports ignoring wall-clock fields.
bool reports_equal_modulo_time(const Json& a, const Json& b);

const char* gen_kind_name(GenKind k);
const char* filter_name(OrbitFilter f);

}  // namespace nak
