#pragma once

#include <string>
#include <vector>

#include "nak/scaling.hpp"

namespace nak {

// Measures on the ring of integers: Haar; mu_k, the image of Haar under
// x -> x^{p^k} (characteristic p only); and mu_star, the normalized mixture
// (1 - 1/p) sum_k p^{-k} mu_k that the all-n power orbit equidistributes to.
enum class MeasureKind { haar, mu_k, mu_star };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::haar;
  long k = 0;  // the k of mu_k
};

enum class Tristate { yes, no, unknown };

// Membership of x in S_k = {digits vanish at every index not divisible by
// p^k}. level is the caller's resolution: digits at [0, level) decide. The
// answer is unknown when no known digit violates but level exceeds x's
// precision.
Tristate in_S_k(const Elem& x, long k, std::optional<long> level = std::nullopt);

// Does the level-m cell with this id meet the closure of S_k (equivalently:
// are the cell center's digits at non-multiples of p^k all zero)?
bool cell_meets_S_k(long cell_id, long level, long k, long p);

Rational haar_disk(const Disk& d);
Rational mu_k_disk(const Disk& d, long k);
Rational mu_star_disk(const Disk& d);
Rational measure_disk(const MeasureSpec& ms, const Disk& d);

// The level-m cell containing the digits of id written base q.
Disk cell_disk(const FieldSpec& fs, long level, long cell_id);
long cell_count(const FieldSpec& fs, long level);  // q^level, capped
long cell_id_of(const Elem& x, long level);

struct CellRecord {
  long cell_id = 0;
  std::string center;
  Rational expected;
  long observed = 0;
};

struct FrequencyReport {
  long level = 0;
  long n_terms = 0;
  std::vector<CellRecord> cells;
  Rational discrepancy;   // max over cells of |observed/N - expected|
  Rational l1_deviation;  // sum over cells of |observed/N - expected|
};

FrequencyReport empirical_frequencies(const std::vector<long>& cell_ids, long level,
                                      const FieldSpec& fs, const MeasureSpec& ms);
FrequencyReport empirical_frequencies(const std::vector<Elem>& seq, long level,
                                      const MeasureSpec& ms);
Rational discrepancy(const std::vector<Elem>& seq, long level, const MeasureSpec& ms);

struct InvarianceOracle {
  bool pass = false;
  std::vector<long> counts;  // per target cell
};

// Exhaustive finite-quotient check that the reduction of a scaling map with
// ratio exponent lambda >= 0 pushes counting measure mod pi^m onto Haar at
// the target level: every target cell receives exactly q^{m - target_level}
// residues. Affine and geometric maps only; m >= lambda + target_level.
InvarianceOracle oracle_haar_invariance(const ScalingMapSpec& spec, long m, long target_level);

struct DecorrelationOracle {
  bool pass = false;
  Rational joint;     // measure of the joint preimage
  Rational expected;  // mu(D)^2
};

// Exhaustive check that two scaling-map reductions decorrelate exactly:
// mu(f^{-1}D meet g^{-1}D) = mu(D)^2 for a disk D of radius exponent gamma,
// lambda_f > lambda_g >= 0, 0 <= gamma <= lambda_f - lambda_g,
// m >= lambda_f + gamma.
DecorrelationOracle oracle_decorrelation(const ScalingMapSpec& f, const ScalingMapSpec& g,
                                         const Disk& d, long m);

}  // namespace nak
