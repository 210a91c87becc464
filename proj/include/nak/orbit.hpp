#pragma once

#include <vector>

#include "nak/element.hpp"

namespace nak {

// Subsequence filters over the exponent n. exact_power keeps v_p(n) == K,
// not_power keeps v_p(n) < K, coprime keeps v_p(n) == 0.
enum class OrbitFilter { all, coprime, exact_power, not_power };

struct OrbitSpec {
  long count = 0;   // kept terms wanted; 0 = bounded by n_max alone
  long n_max = 0;   // range cap on n; 0 = bounded by count alone
  long level = 1;   // cell depth of the reported ids
  OrbitFilter filter = OrbitFilter::all;
  long K = 1;       // the K of exact_power / not_power
};

struct OrbitCells {
  std::vector<long> ns;   // exponents kept, increasing
  std::vector<long> ids;  // cell id of [A * M^n] at spec.level
};

// Cell ids of the integral parts [A * M^n] for n = 1, 2, ... under the
// filter. A and M are taken as the exact points named by their digit
// strings; the result is exact for every reported term. Cost per step is
// linear in the working window, so the whole orbit is O(n_max^2 / 64)
// word operations with a small constant.
OrbitCells orbit_cells(const Elem& A, const Elem& M, const OrbitSpec& spec);

// Same contract through the element API at full tracked precision.
// Quadratic in n_max with element-arithmetic constants; for cross-checks
// and small ranges only.
OrbitCells orbit_cells_reference(const Elem& A, const Elem& M, const OrbitSpec& spec);

// Largest exponent the spec can visit before count or n_max stops it.
long orbit_n_stop(const OrbitSpec& spec, long p);

}  // namespace nak
