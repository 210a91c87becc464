#include "nak/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>

#include "nak/error.hpp"
#include "nak/scaling.hpp"

namespace nak {

namespace {

// The (seed, trial) pair fixes the stream; mt19937_64 and seed_seq are
// bit-specified by the standard, so replays agree across platforms.
std::mt19937_64 stream_for(std::uint64_t seed, long trial) {
  std::seed_seq sq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                   static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(trial),
                   static_cast<std::uint32_t>(0x9e3779b9u)};
  return std::mt19937_64(sq);
}

// Rejection draw in [lo, hi]; avoids std::uniform_int_distribution, whose
// output is implementation-defined.
uint32_t draw_in(std::mt19937_64& eng, uint32_t lo, uint32_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = ~0ull - (~0ull % span);
  std::uint64_t r;
  do {
    r = eng();
  } while (r >= limit);
  return lo + static_cast<uint32_t>(r % span);
}

long ipow_long(long b, long e) {
  BigInt r = pow_int(b, static_cast<unsigned long>(e));
  require(fits_long(r), errc::too_large, "power out of range");
  return to_long(r);
}

void check_levels(const std::vector<long>& levels) {
  require(!levels.empty(), errc::invalid_configuration, "levels list is empty");
  for (long l : levels)
    require(l >= 1, errc::invalid_configuration, "levels start at 1");
}

void check_operand(const Elem& e, const FieldSpec& fs, const char* what) {
  require(e.field == fs, errc::invalid_configuration,
          std::string(what) + " lives in a different field");
  require(!e.zero, errc::invalid_configuration, std::string(what) + " is zero");
}

Rational sq(const Rational& r) { return r * r; }

// mpq_class(a, b) skips canonicalization, which exact comparison needs.
Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Verdict make_verdict(std::string name, const Rational& lhs,
                     const Rational& rhs, std::string relation) {
  Verdict v;
  v.name = std::move(name);
  v.lhs = lhs;
  v.rhs = rhs;
  v.relation = std::move(relation);
  if (v.relation == "<=")
    v.pass = lhs <= rhs;
  else if (v.relation == "<")
    v.pass = lhs < rhs;
  else if (v.relation == ">=")
    v.pass = lhs >= rhs;
  else if (v.relation == ">")
    v.pass = lhs > rhs;
  else if (v.relation == "==")
    v.pass = lhs == rhs;
  else
    fail(errc::invalid_input, "unknown verdict relation");
  return v;
}

std::vector<long> ids_at_level(const std::vector<long>& ids_max, long q_level) {
  std::vector<long> out(ids_max.size());
  for (size_t i = 0; i < ids_max.size(); ++i) out[i] = ids_max[i] % q_level;
  return out;
}

long vp_long(long n, long p) {
  long k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

// Largest cell-mass gap |ms - Haar| at the level, exact.
Rational haar_gap(const MeasureSpec& ms, long level, const FieldSpec& fs) {
  const long count = cell_count(fs, level);
  Rational haar(1, count);
  haar.canonicalize();
  Rational best(0);
  for (long c = 0; c < count; ++c) {
    Rational gap = measure_disk(ms, cell_disk(fs, level, c)) - haar;
    if (gap < 0) gap = -gap;
    if (gap > best) best = gap;
  }
  return best;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const char* measure_kind_name(MeasureKind k) {
  switch (k) {
    case MeasureKind::haar: return "haar";
    case MeasureKind::mu_k: return "mu_k";
    case MeasureKind::mu_star: return "mu_star";
  }
  return "?";
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["field"] = {{"characteristic", c.field.characteristic}, {"p", c.field.p}};
  j["kind"] = gen_kind_name(c.kind);
  j["companion"] = c.companion ? elem_to_json(*c.companion) : Json(nullptr);
  j["x_source"] = c.stub_ids ? "stub" : (c.x_sampled ? "random-sphere" : "explicit");
  j["x"] = c.x ? elem_to_json(*c.x) : Json(nullptr);
  j["sphere_radius"] = c.sphere_radius;
  j["sample_digits"] = c.sample_digits;
  j["seed"] = c.seed;
  j["trial"] = c.trial;
  j["N"] = c.N;
  j["levels"] = c.levels;
  j["filter"] = filter_name(c.filter);
  j["filter_k"] = c.filter_k;
  j["exploratory"] = c.exploratory;
  if (c.stub_ids) j["stub_ids"] = *c.stub_ids;
  return j;
}

Json frequency_report_to_json(const FrequencyReport& fr) {
  Json j;
  j["level"] = fr.level;
  j["n_terms"] = fr.n_terms;
  j["discrepancy"] = rational_to_json(fr.discrepancy);
  j["l1_deviation"] = rational_to_json(fr.l1_deviation);
  Json cells = Json::array();
  for (const CellRecord& c : fr.cells) {
    Json cj;
    cj["id"] = c.cell_id;
    cj["center"] = c.center;
    cj["expected"] = rational_to_json(c.expected);
    cj["observed"] = c.observed;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

}  // namespace

const char* gen_kind_name(GenKind k) {
  return k == GenKind::power ? "power" : "geometric";
}

const char* filter_name(OrbitFilter f) {
  switch (f) {
    case OrbitFilter::all: return "all";
    case OrbitFilter::coprime: return "coprime";
    case OrbitFilter::exact_power: return "exact-power";
    case OrbitFilter::not_power: return "not-power";
  }
  return "?";
}

bool RunReport::all_pass() const {
  for (const ReportSection& s : sections)
    for (const Verdict& v : s.verdicts)
      if (!v.pass) return false;
  return true;
}

Rational tolerance_sq(long level, long n_terms, const FieldSpec& fs) {
  require(n_terms >= 1, errc::invalid_input, "tolerance needs a positive count");
  Rational t(16 * BigInt(cell_count(fs, level)), BigInt(n_terms));
  t.canonicalize();
  return t;
}

Elem random_sphere_point(const FieldSpec& fs, long radius, long digits,
                         std::uint64_t seed, long trial) {
  require(digits >= 1, errc::invalid_configuration,
          "sample needs at least one digit");
  auto eng = stream_for(seed, trial);
  const uint32_t top = static_cast<uint32_t>(fs.p - 1);
  std::vector<uint32_t> d(static_cast<size_t>(digits));
  d[0] = draw_in(eng, 1, top);
  for (long i = 1; i < digits; ++i)
    d[static_cast<size_t>(i)] = draw_in(eng, 0, top);
  return make_elem(fs, -radius, std::move(d));
}

RunReport run_koksma(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const FieldSpec& fs = cfg.field;
  check_levels(cfg.levels);
  require(cfg.filter != OrbitFilter::exact_power || fs.is_char_p(),
          errc::invalid_configuration,
          "the exact-power filter needs characteristic p");

  RunReport rr;
  rr.config = cfg;
  rr.runner = "koksma";
  const long level_max = *std::max_element(cfg.levels.begin(), cfg.levels.end());

  std::vector<long> ids_max;
  if (cfg.stub_ids) {
    ids_max = *cfg.stub_ids;
    require(!ids_max.empty(), errc::invalid_configuration, "empty stub");
    const long count = cell_count(fs, level_max);
    for (long id : ids_max)
      require(id >= 0 && id < count, errc::invalid_configuration,
              "stub id out of range");
  } else {
    require(cfg.N >= 1, errc::invalid_configuration, "N must be positive");
    OrbitSpec os;
    os.count = cfg.N;
    os.level = level_max;
    os.filter = cfg.filter;
    os.K = cfg.filter_k;
    // A sampled point is the exact element named by its digits. Geometric
    // windows read x's digits shifted by n times the ratio's valuation, and in
    // characteristic p the powers of a short draw keep its polynomial
    // structure, so in both cases the draw must cover every window in range.
    // Characteristic-0 powers are exempt: carries mix truncated tails.
    long digits = cfg.sample_digits;
    if (!cfg.x) {
      const long n_stop = orbit_n_stop(os, fs.p);
      if (cfg.kind == GenKind::geometric && cfg.companion && cfg.companion->v < 0)
        digits = std::max(digits, cfg.sphere_radius + n_stop * (-cfg.companion->v) +
                                      level_max + 2);
      else if (cfg.kind == GenKind::power && fs.is_char_p())
        digits = std::max(digits,
                          std::max(1L, cfg.sphere_radius) * n_stop + level_max + 2);
    }
    Elem x = cfg.x ? *cfg.x
                   : random_sphere_point(fs, cfg.sphere_radius, digits,
                                         cfg.seed, cfg.trial);
    check_operand(x, fs, "x");
    Elem a, m;
    if (cfg.kind == GenKind::power) {
      require(x.v < 0, errc::invalid_configuration,
              "x must lie outside the closed unit disk");
      if (fs.is_char_p() && !cfg.exploratory)
        require(cfg.filter == OrbitFilter::coprime, errc::invalid_configuration,
                "power sequences in characteristic p need the coprime filter");
      a = cfg.companion ? *cfg.companion : one_elem(fs, cfg.sample_digits);
      check_operand(a, fs, "coefficient");
      m = x;
    } else {
      require(cfg.companion.has_value(), errc::invalid_configuration,
              "geometric kind needs an explicit ratio");
      Elem b = *cfg.companion;
      check_operand(b, fs, "ratio");
      require(b.v < 0, errc::invalid_configuration,
              "ratio must lie outside the closed unit disk");
      a = x;
      m = b;
    }
    rr.config.x = x;
    rr.config.x_sampled = !cfg.x.has_value();
    OrbitCells oc = orbit_cells(a, m, os);
    ids_max = std::move(oc.ids);
  }

  ReportSection sec;
  sec.name = "haar";
  sec.measure = MeasureSpec{MeasureKind::haar, 0};
  for (long level : cfg.levels) {
    const long q_level = cell_count(fs, level);
    FrequencyReport fr =
        empirical_frequencies(ids_at_level(ids_max, q_level), level, fs, sec.measure);
    if (!cfg.exploratory)
      sec.verdicts.push_back(make_verdict(
          "uniform_l" + std::to_string(level), sq(fr.discrepancy),
          tolerance_sq(level, fr.n_terms, fs), "<="));
    sec.levels.push_back(std::move(fr));
  }
  rr.sections.push_back(std::move(sec));
  rr.wall_seconds = seconds_since(t0);
  return rr;
}

RunReport run_char_p(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const FieldSpec& fs = cfg.field;
  require(fs.is_char_p(), errc::invalid_configuration,
          "characteristic-p study needs a positive-characteristic field");
  require(cfg.kind == GenKind::power, errc::invalid_configuration,
          "characteristic-p study uses the power sequence");
  require(!cfg.companion.has_value(), errc::invalid_configuration,
          "characteristic-p study fixes the coefficient at 1");
  require(cfg.N >= 1, errc::invalid_configuration, "N must be positive");
  check_levels(cfg.levels);
  const long p = fs.p;
  const long k = cfg.filter_k;
  require(k >= 1, errc::invalid_configuration, "filter order must be >= 1");
  require(k < 40 && cfg.N >= ipow_long(p, k), errc::invalid_configuration,
          "range too small for the exact-power filter");

  RunReport rr;
  rr.config = cfg;
  rr.runner = "char_p";
  const long level_max = *std::max_element(cfg.levels.begin(), cfg.levels.end());

  OrbitSpec os;
  os.n_max = cfg.N;
  os.level = level_max;
  os.filter = OrbitFilter::all;

  // Powers of a short draw keep its polynomial structure (no carries), so a
  // sampled point must carry one digit per window the range will read.
  long digits = cfg.sample_digits;
  if (!cfg.x)
    digits = std::max(digits, std::max(1L, cfg.sphere_radius) * orbit_n_stop(os, p) +
                                  level_max + 2);
  Elem x = cfg.x ? *cfg.x
                 : random_sphere_point(fs, cfg.sphere_radius, digits, cfg.seed,
                                       cfg.trial);
  check_operand(x, fs, "x");
  require(x.v < 0, errc::invalid_configuration,
          "x must lie outside the closed unit disk");
  rr.config.x = x;
  rr.config.x_sampled = !cfg.x.has_value();

  OrbitCells oc = orbit_cells(one_elem(fs, cfg.sample_digits), x, os);

  std::vector<long> kept;  // ids with v_p(n) = k, the mu_k subsequence
  kept.reserve(oc.ids.size() / static_cast<size_t>(ipow_long(p, k)) + 1);
  for (size_t i = 0; i < oc.ns.size(); ++i)
    if (vp_long(oc.ns[i], p) == k) kept.push_back(oc.ids[i]);

  ReportSection haar_sec;
  haar_sec.name = "haar_full";
  haar_sec.measure = MeasureSpec{MeasureKind::haar, 0};
  ReportSection muk_sec;
  muk_sec.name = "mu_k_filtered";
  muk_sec.measure = MeasureSpec{MeasureKind::mu_k, k};
  ReportSection mus_sec;
  mus_sec.name = "mu_star_full";
  mus_sec.measure = MeasureSpec{MeasureKind::mu_star, 0};

  for (long level : cfg.levels) {
    const long q_level = cell_count(fs, level);
    const std::string ltag = "_l" + std::to_string(level);

    FrequencyReport fh = empirical_frequencies(ids_at_level(oc.ids, q_level),
                                               level, fs, haar_sec.measure);
    if (!cfg.exploratory) {
      long hull_hits = 0;
      long hull_cells = 0;
      for (const CellRecord& c : fh.cells)
        if (cell_meets_S_k(c.cell_id, level, 1, p)) {
          hull_hits += c.observed;
          ++hull_cells;
        }
      haar_sec.verdicts.push_back(
          make_verdict("hull_occupancy" + ltag, ratio(hull_hits, cfg.N),
                       ratio(cfg.N / p, cfg.N), ">="));
      const long ceil_lp = (level + p - 1) / p;
      haar_sec.verdicts.push_back(make_verdict(
          "hull_haar" + ltag, ratio(hull_cells, q_level),
          ratio(1, ipow_long(p, level - ceil_lp)), "=="));
      // Separation from Haar is only decidable once the budget resolves the
      // exact mu_star gap: the empirical measure sits within tol of mu_star,
      // so |emp - Haar| > 3 tol is predicted exactly when gap > 4 tol.
      const Rational gap = haar_gap(mus_sec.measure, level, fs);
      const Rational tol_sq = tolerance_sq(level, fh.n_terms, fs);
      if (sq(gap) > Rational(16) * tol_sq)
        haar_sec.verdicts.push_back(make_verdict(
            "haar_separation" + ltag, sq(fh.discrepancy),
            Rational(9) * tol_sq, ">"));
    }
    haar_sec.levels.push_back(std::move(fh));

    FrequencyReport fk = empirical_frequencies(ids_at_level(kept, q_level),
                                               level, fs, muk_sec.measure);
    if (!cfg.exploratory)
      muk_sec.verdicts.push_back(make_verdict(
          "mu_k" + ltag, sq(fk.discrepancy),
          tolerance_sq(level, fk.n_terms, fs), "<="));
    muk_sec.levels.push_back(std::move(fk));

    FrequencyReport fm = empirical_frequencies(ids_at_level(oc.ids, q_level),
                                               level, fs, mus_sec.measure);
    if (!cfg.exploratory)
      mus_sec.verdicts.push_back(make_verdict(
          "mu_star" + ltag, sq(fm.discrepancy),
          tolerance_sq(level, fm.n_terms, fs), "<="));
    mus_sec.levels.push_back(std::move(fm));
  }

  rr.sections.push_back(std::move(haar_sec));
  rr.sections.push_back(std::move(muk_sec));
  rr.sections.push_back(std::move(mus_sec));
  rr.wall_seconds = seconds_since(t0);
  return rr;
}

RunReport run_oracles(const FieldSpec& fs, long max_lambda, long target_level) {
  const auto t0 = std::chrono::steady_clock::now();
  require(max_lambda >= 0, errc::invalid_input, "max lambda must be >= 0");
  require(target_level >= 1, errc::invalid_input, "target level must be >= 1");

  RunReport rr;
  rr.runner = "oracles";
  rr.config.field = fs;
  rr.config.levels = {target_level};
  rr.config.N = 0;

  // Operands need enough resolved digits that every enumerated image keeps
  // the target level sharp; one digit would starve the products.
  const long wp = 2 * max_lambda + target_level + 8;
  auto unit_of_norm = [&fs, wp](long lambda) {
    std::vector<uint32_t> d(static_cast<size_t>(wp), 0);
    d[0] = 1;
    return make_elem(fs, -lambda, d);
  };

  ReportSection inv;
  inv.name = "haar_invariance";
  inv.measure = MeasureSpec{MeasureKind::haar, 0};
  for (long lambda = 0; lambda <= max_lambda; ++lambda) {
    ScalingMapSpec f = make_affine_map(unit_of_norm(lambda), make_zero(fs, wp));
    InvarianceOracle io = oracle_haar_invariance(f, lambda + target_level, target_level);
    const auto [mn, mx] =
        std::minmax_element(io.counts.begin(), io.counts.end());
    const Rational expect(ipow_long(fs.q(), lambda));
    const std::string tag = "_lambda" + std::to_string(lambda);
    inv.verdicts.push_back(make_verdict("fiber_min" + tag, Rational(*mn), expect, "=="));
    inv.verdicts.push_back(make_verdict("fiber_max" + tag, Rational(*mx), expect, "=="));
  }
  rr.sections.push_back(std::move(inv));

  ReportSection dec;
  dec.name = "decorrelation";
  dec.measure = MeasureSpec{MeasureKind::haar, 0};
  for (long lf = 1; lf <= max_lambda; ++lf)
    for (long lg = 0; lg < lf; ++lg)
      for (long gamma = 0; gamma <= lf - lg; ++gamma) {
        ScalingMapSpec f = make_affine_map(unit_of_norm(lf), make_zero(fs, wp));
        ScalingMapSpec g = make_affine_map(unit_of_norm(lg), make_zero(fs, wp));
        Disk d{make_zero(fs, wp), gamma};
        DecorrelationOracle od = oracle_decorrelation(f, g, d, lf + gamma);
        dec.verdicts.push_back(make_verdict(
            "joint_f" + std::to_string(lf) + "_g" + std::to_string(lg) +
                "_gamma" + std::to_string(gamma),
            od.joint, od.expected, "=="));
      }
  rr.sections.push_back(std::move(dec));
  rr.wall_seconds = seconds_since(t0);
  return rr;
}

Json report_to_json(const RunReport& r) {
  Json j;
  j["schema"] = "nak-report/1";
  j["runner"] = r.runner;
  j["config"] = config_to_json(r.config);
  j["all_pass"] = r.all_pass();
  j["wall_seconds"] = r.wall_seconds;
  Json sections = Json::array();
  for (const ReportSection& s : r.sections) {
    Json sj;
    sj["name"] = s.name;
    sj["measure"] = {{"kind", measure_kind_name(s.measure.kind)},
                     {"k", s.measure.k}};
    Json levels = Json::array();
    for (const FrequencyReport& fr : s.levels)
      levels.push_back(frequency_report_to_json(fr));
    sj["levels"] = std::move(levels);
    Json verdicts = Json::array();
    for (const Verdict& v : s.verdicts) {
      Json vj;
      vj["name"] = v.name;
      vj["pass"] = v.pass;
      vj["lhs"] = rational_to_json(v.lhs);
      vj["relation"] = v.relation;
      vj["rhs"] = rational_to_json(v.rhs);
      verdicts.push_back(std::move(vj));
    }
    sj["verdicts"] = std::move(verdicts);
    sections.push_back(std::move(sj));
  }
  j["sections"] = std::move(sections);
  return j;
}

std::string report_to_csv(const RunReport& r) {
  std::ostringstream os;
  os << "section,level,n_terms,cell_id,center,expected_num,expected_den,observed\n";
  for (const ReportSection& s : r.sections)
    for (const FrequencyReport& fr : s.levels)
      for (const CellRecord& c : fr.cells)
        os << s.name << ',' << fr.level << ',' << fr.n_terms << ','
           << c.cell_id << ',' << '"' << c.center << '"' << ','
           << c.expected.get_num().get_str() << ','
           << c.expected.get_den().get_str() << ',' << c.observed << '\n';
  return os.str();
}

bool reports_equal_modulo_time(const Json& a, const Json& b) {
  Json ca = a;
  Json cb = b;
  ca.erase("wall_seconds");
  cb.erase("wall_seconds");
  return ca == cb;
}

}  // namespace nak
