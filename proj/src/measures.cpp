#include "nak/measures.hpp"

#include <algorithm>

#include "nak/io.hpp"

namespace nak {

namespace {

constexpr long kEnumCap = 10000000;

long vp_long(long n, long p) {
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

void require_in_ring(const Elem& x) {
  require(x.zero || x.v >= 0, errc::invalid_input, "element outside the ring of integers");
}

void require_ring_disk(const Disk& d) {
  require(d.radius_exp >= 0, errc::invalid_input, "disk radius exceeds the ring of integers");
  require_in_ring(d.center);
  require(d.center.abs_prec >= d.radius_exp, errc::invalid_input, "disk center under-resolved");
}

// Number of multiples of p^k in [0, m).
long free_indices(long m, long k, long p) {
  if (m <= 0) return 0;
  BigInt pk = pow_int(p, static_cast<unsigned long>(k));
  BigInt t = (BigInt(m) + pk - 1) / pk;
  return to_long(t);
}

void bump_odometer(std::vector<uint32_t>& digits, long p) {
  for (auto& dg : digits) {
    if (++dg < static_cast<uint32_t>(p)) return;
    dg = 0;
  }
}

}  // namespace

Tristate in_S_k(const Elem& x, long k, std::optional<long> level) {
  require(k >= 0, errc::invalid_input, "k must be >= 0");
  require_in_ring(x);
  long L = level.value_or(x.abs_prec);
  require(L >= 0, errc::invalid_input, "level must be >= 0");
  long known = std::min(L, x.abs_prec);
  for (long i = 1; i < known; ++i)
    if (vp_long(i, x.field.p) < k && digit_at(x, i) != 0) return Tristate::no;
  return L <= x.abs_prec ? Tristate::yes : Tristate::unknown;
}

bool cell_meets_S_k(long cell_id, long level, long k, long p) {
  for (long i = 0; i < level; ++i) {
    long dg = cell_id % p;
    cell_id /= p;
    if (i != 0 && vp_long(i, p) < k && dg != 0) return false;
  }
  return true;
}

Rational haar_disk(const Disk& d) {
  require_ring_disk(d);
  return pow_rat(d.field().q(), -d.radius_exp);
}

Rational mu_k_disk(const Disk& d, long k) {
  require(k >= 0, errc::invalid_input, "k must be >= 0");
  if (k == 0) return haar_disk(d);
  require(d.field().is_char_p(), errc::unsupported_measure,
          "mu_k lives on characteristic-p fields");
  require_ring_disk(d);
  long m = d.radius_exp;
  for (long i = 1; i < m; ++i)
    if (vp_long(i, d.field().p) < k && digit_at(d.center, i) != 0) return Rational(0);
  return pow_rat(d.field().q(), -free_indices(m, k, d.field().p));
}

Rational mu_star_disk(const Disk& d) {
  require(d.field().is_char_p(), errc::unsupported_measure,
          "mu_star lives on characteristic-p fields");
  require_ring_disk(d);
  long m = d.radius_exp;
  long p = d.field().p;
  if (m == 0) return Rational(1);
  // K* = least k with p^k >= m; from there every mu_k(d) is q^{-1} times the
  // indicator that digits 1..m-1 vanish, and the geometric tail sums exactly.
  long kstar = 0;
  BigInt pk(1);
  while (pk < m) {
    pk *= p;
    ++kstar;
  }
  Rational head(0);
  Rational norm = Rational(p - 1, p);
  for (long k = 0; k < kstar; ++k) head += norm * pow_rat(p, -k) * mu_k_disk(d, k);
  bool tail_compat = true;
  for (long i = 1; i < m && tail_compat; ++i)
    if (digit_at(d.center, i) != 0) tail_compat = false;
  Rational tail = tail_compat ? pow_rat(p, -kstar) * Rational(1, p) : Rational(0);
  Rational out = head + tail;
  out.canonicalize();
  return out;
}

Rational measure_disk(const MeasureSpec& ms, const Disk& d) {
  switch (ms.kind) {
    case MeasureKind::haar: return haar_disk(d);
    case MeasureKind::mu_k: return mu_k_disk(d, ms.k);
    case MeasureKind::mu_star: return mu_star_disk(d);
  }
  fail(errc::unsupported_measure, "bad measure kind");
}

long cell_count(const FieldSpec& fs, long level) {
  require(level >= 0, errc::invalid_input, "level must be >= 0");
  BigInt c = pow_int(fs.q(), static_cast<unsigned long>(level));
  require(c <= kEnumCap, errc::too_large, "cell enumeration exceeds the cap");
  return to_long(c);
}

Disk cell_disk(const FieldSpec& fs, long level, long cell_id) {
  long count = cell_count(fs, level);
  require(cell_id >= 0 && cell_id < count, errc::invalid_input, "cell id out of range");
  std::vector<uint32_t> digits(static_cast<size_t>(level), 0);
  long id = cell_id;
  for (long i = 0; i < level; ++i) {
    digits[i] = static_cast<uint32_t>(id % fs.p);
    id /= fs.p;
  }
  return Disk{make_elem(fs, 0, std::move(digits)), level};
}

long cell_id_of(const Elem& x, long level) {
  require_in_ring(x);
  require(x.abs_prec >= level, errc::insufficient_precision, "element shallower than the level");
  long id = 0, w = 1;
  for (long i = 0; i < level; ++i) {
    id += static_cast<long>(digit_at(x, i)) * w;
    w *= x.field.p;
  }
  return id;
}

FrequencyReport empirical_frequencies(const std::vector<long>& cell_ids, long level,
                                      const FieldSpec& fs, const MeasureSpec& ms) {
  long count = cell_count(fs, level);
  require(!cell_ids.empty(), errc::invalid_input, "empty sequence");
  FrequencyReport rep;
  rep.level = level;
  rep.n_terms = static_cast<long>(cell_ids.size());
  std::vector<long> observed(static_cast<size_t>(count), 0);
  for (long id : cell_ids) {
    require(id >= 0 && id < count, errc::invalid_input, "cell id out of range");
    ++observed[static_cast<size_t>(id)];
  }
  Rational n(rep.n_terms);
  rep.discrepancy = Rational(0);
  rep.l1_deviation = Rational(0);
  for (long id = 0; id < count; ++id) {
    CellRecord rec;
    rec.cell_id = id;
    Disk cd = cell_disk(fs, level, id);
    rec.center = format_elem(cd.center);
    rec.expected = measure_disk(ms, cd);
    rec.observed = observed[static_cast<size_t>(id)];
    Rational dev = Rational(rec.observed) / n - rec.expected;
    dev.canonicalize();
    if (dev < 0) dev = -dev;
    if (dev > rep.discrepancy) rep.discrepancy = dev;
    rep.l1_deviation += dev;
    rep.cells.push_back(std::move(rec));
  }
  rep.l1_deviation.canonicalize();
  return rep;
}

FrequencyReport empirical_frequencies(const std::vector<Elem>& seq, long level,
                                      const MeasureSpec& ms) {
  require(!seq.empty(), errc::invalid_input, "empty sequence");
  std::vector<long> ids;
  ids.reserve(seq.size());
  for (const Elem& x : seq) ids.push_back(cell_id_of(x, level));
  return empirical_frequencies(ids, level, seq.front().field, ms);
}

Rational discrepancy(const std::vector<Elem>& seq, long level, const MeasureSpec& ms) {
  return empirical_frequencies(seq, level, ms).discrepancy;
}

InvarianceOracle oracle_haar_invariance(const ScalingMapSpec& spec, long m, long target_level) {
  require(spec.kind != MapKind::power, errc::invalid_configuration,
          "power maps are not scaling on the whole ring");
  auto se = scaling_exponent(spec);
  require(se.lambda >= 0, errc::invalid_configuration, "ratio exponent must be >= 0");
  require(target_level >= 0 && m >= se.lambda + target_level, errc::invalid_configuration,
          "need m >= lambda + target_level");
  const FieldSpec& fs = spec.coeff.field;
  require(spec.coeff.rel_prec() >= m, errc::insufficient_precision, "coefficient under-resolved");
  if (spec.kind == MapKind::affine)
    require(spec.offset.abs_prec >= target_level, errc::insufficient_precision,
            "offset under-resolved");
  BigInt total = pow_int(fs.q(), static_cast<unsigned long>(m));
  require(total <= kEnumCap, errc::too_large, "residue enumeration exceeds the cap");
  long n_res = to_long(total);
  long n_cells = cell_count(fs, target_level);

  InvarianceOracle out;
  out.counts.assign(static_cast<size_t>(n_cells), 0);
  std::vector<uint32_t> digits(static_cast<size_t>(m), 0);
  for (long r = 0; r < n_res; ++r) {
    Elem x = make_elem(fs, 0, digits);
    Elem fx = apply_map(spec, x);
    ++out.counts[static_cast<size_t>(cell_id_of(integral_part(fx), target_level))];
    bump_odometer(digits, fs.p);
  }
  long expect = n_res;
  for (long i = 0; i < target_level; ++i) expect /= fs.p;
  out.pass = std::all_of(out.counts.begin(), out.counts.end(),
                         [&](long c) { return c == expect; });
  return out;
}

DecorrelationOracle oracle_decorrelation(const ScalingMapSpec& f, const ScalingMapSpec& g,
                                         const Disk& d, long m) {
  require(f.kind != MapKind::power && g.kind != MapKind::power, errc::invalid_configuration,
          "power maps are not scaling on the whole ring");
  auto sf = scaling_exponent(f), sg = scaling_exponent(g);
  require(sf.lambda > sg.lambda && sg.lambda >= 0, errc::invalid_configuration,
          "need lambda_f > lambda_g >= 0");
  require_ring_disk(d);
  long gamma = d.radius_exp;
  require(gamma <= sf.lambda - sg.lambda, errc::invalid_configuration,
          "need gamma <= lambda_f - lambda_g");
  require(m >= sf.lambda + gamma, errc::invalid_configuration, "need m >= lambda_f + gamma");
  const FieldSpec& fs = f.coeff.field;
  require(fs == g.coeff.field && fs == d.field(), errc::invalid_input, "field spec mismatch");
  require(f.coeff.rel_prec() >= m && g.coeff.rel_prec() >= m, errc::insufficient_precision,
          "coefficient under-resolved");
  BigInt total = pow_int(fs.q(), static_cast<unsigned long>(m));
  require(total <= kEnumCap, errc::too_large, "residue enumeration exceeds the cap");
  long n_res = to_long(total);

  long hits = 0;
  std::vector<uint32_t> digits(static_cast<size_t>(m), 0);
  for (long r = 0; r < n_res; ++r) {
    Elem x = make_elem(fs, 0, digits);
    bump_odometer(digits, fs.p);
    Elem fx = integral_part(apply_map(f, x));
    if (!equals_mod(fx, d.center, gamma)) continue;
    Elem gx = integral_part(apply_map(g, x));
    if (equals_mod(gx, d.center, gamma)) ++hits;
  }
  DecorrelationOracle out;
  out.joint = Rational(hits) / Rational(n_res);
  out.joint.canonicalize();
  out.expected = pow_rat(fs.q(), -2 * gamma);
  out.pass = out.joint == out.expected;
  return out;
}

}  // namespace nak
