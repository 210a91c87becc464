#include "nak/exceptional.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <random>

namespace nak {

namespace {

// Tail liminf estimate: min over 1-based indices n > size/2. Entries marked
// negative carry no bound and are skipped.
Rational tail_min_rat(const std::vector<Rational>& seq) {
  require(!seq.empty(), errc::invalid_input, "empty sequence");
  size_t from = seq.size() / 2;
  Rational best;
  bool have = false;
  for (size_t i = from; i < seq.size(); ++i) {
    if (seq[i] < 0) continue;
    if (!have || seq[i] < best) {
      best = seq[i];
      have = true;
    }
  }
  return have ? best : Rational(-1);
}

double tail_min_dbl(const std::vector<double>& seq) {
  require(!seq.empty(), errc::invalid_input, "empty sequence");
  size_t from = seq.size() / 2;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = from; i < seq.size(); ++i) best = std::min(best, seq[i]);
  return best;
}

long checked_window_level(const BigInt& v) { return to_long(v); }

}  // namespace

Elem target_at(const TargetGen& g, const FieldSpec& fs, long index, long prec) {
  require(index >= 1, errc::invalid_input, "target index is 1-based");
  require(prec >= 0, errc::invalid_input, "target precision must be >= 0");
  switch (g.kind) {
    case TargetGen::Kind::constant: {
      if (g.value.zero && g.value.d.empty() && g.value.abs_prec == 0)
        return make_zero(fs, prec);
      require(g.value.field == fs, errc::invalid_input, "target field mismatch");
      require(g.value.abs_prec >= prec, errc::insufficient_precision, "target under-resolved");
      return truncate_abs(g.value, prec);
    }
    case TargetGen::Kind::list: {
      require(static_cast<size_t>(index) <= g.list.size(), errc::invalid_input,
              "target list exhausted");
      const Elem& b = g.list[static_cast<size_t>(index - 1)];
      require(b.field == fs, errc::invalid_input, "target field mismatch");
      require(b.abs_prec >= prec, errc::insufficient_precision, "target under-resolved");
      return truncate_abs(b, prec);
    }
    case TargetGen::Kind::random: {
      std::seed_seq seq{static_cast<uint64_t>(g.seed), static_cast<uint64_t>(index)};
      std::mt19937_64 rng(seq);
      return random_element(Disk{make_zero(fs, 0), 0}, rng, prec);
    }
  }
  fail(errc::invalid_input, "bad target kind");
}

void validate_schedule(const MoranSchedule& s) {
  require(!s.lambdas.empty(), errc::invalid_schedule, "schedule has no entries");
  require(s.lambdas.size() == s.Hs.size(), errc::invalid_schedule,
          "lambda and H sequences differ in length");
  require(s.lambdas.front() >= s.H0, errc::invalid_schedule, "need lambda_1 >= H0");
  for (size_t n = 0; n < s.Hs.size(); ++n)
    require(s.Hs[n] >= 0, errc::invalid_schedule, "H entries must be >= 0");
  for (size_t n = 0; n + 1 < s.lambdas.size(); ++n)
    require(s.lambdas[n + 1] - s.lambdas[n] >= s.Hs[n], errc::invalid_schedule,
            "need lambda_{n+1} - lambda_n >= H_n");
}

MoranSchedule make_schedule(long H0, std::vector<BigInt> lambdas, std::vector<BigInt> Hs,
                            TargetGen targets) {
  MoranSchedule s;
  s.H0 = H0;
  s.lambdas = std::move(lambdas);
  s.Hs = std::move(Hs);
  s.targets = std::move(targets);
  validate_schedule(s);
  return s;
}

MoranSchedule affine_schedule(long a, long c, long h, long H0, long count) {
  require(a >= 1, errc::invalid_schedule, "lambda rule must grow");
  require(count >= 1, errc::invalid_input, "count must be >= 1");
  MoranSchedule s;
  s.H0 = H0;
  for (long n = 1; n <= count; ++n) {
    s.lambdas.emplace_back(BigInt(a) * n + c);
    s.Hs.emplace_back(h);
  }
  s.limit = Rational(a - h, a);
  s.limit->canonicalize();
  validate_schedule(s);
  return s;
}

MoranSchedule mahler_schedule(long count) {
  require(count >= 1, errc::invalid_input, "count must be >= 1");
  MoranSchedule s;
  s.H0 = 0;
  for (long n = 0; n < count; ++n) {
    s.lambdas.emplace_back(n);
    s.Hs.emplace_back(1);
  }
  s.limit = Rational(0);
  validate_schedule(s);
  return s;
}

MoranSchedule prop61_schedule(long p, long K, long H, long L, long count, long v_alpha) {
  require(p >= 2 && K >= 1 && H >= 1 && L >= 1, errc::invalid_input, "bad prop61 parameters");
  require(count >= 1, errc::invalid_input, "count must be >= 1");
  BigInt pK = pow_int(p, static_cast<unsigned long>(K));
  MoranSchedule s;
  s.H0 = H - v_alpha;
  BigInt m(1);
  for (long i = 0; i < count; ++i) {
    do {
      ++m;
    } while (mpz_divisible_p(m.get_mpz_t(), pK.get_mpz_t()));
    s.lambdas.emplace_back(BigInt(-v_alpha) - vp_of(m, p) + (m - 1) * L);
    s.Hs.emplace_back(H);
  }
  s.limit = Rational(1) - Rational((pK - 1) * H, pK * L);
  s.limit->canonicalize();
  validate_schedule(s);
  return s;
}

MoranSchedule schedule_from_rules(const std::string& lambda_rule, const std::string& h_rule,
                                  long H0, long count) {
  std::string r;
  for (char ch : lambda_rule)
    if (!std::isspace(static_cast<unsigned char>(ch))) r.push_back(ch);
  size_t npos = r.find('n');
  require(npos != std::string::npos, errc::invalid_input,
          "lambda rule must contain n (form: a*n + c, e.g. \"2n+1\")");
  std::string as = r.substr(0, npos);
  if (!as.empty() && as.back() == '*') as.pop_back();
  try {
    long a = as.empty() ? 1 : std::stol(as);
    long c = 0;
    if (npos + 1 < r.size()) {
      std::string cs = r.substr(npos + 1);
      require(cs[0] == '+' || cs[0] == '-', errc::invalid_input, "bad lambda rule tail");
      c = std::stol(cs);
    }
    long h = std::stol(h_rule);
    return affine_schedule(a, c, h, H0, count);
  } catch (const std::logic_error&) {
    fail(errc::invalid_input, "unparsable schedule rule");
  }
}

GammaDim gamma_dim(const MoranSchedule& s, long horizon) {
  validate_schedule(s);
  require(horizon >= 1, errc::invalid_input, "horizon must be >= 1");
  size_t n_used = std::min(static_cast<size_t>(horizon), s.lambdas.size());
  GammaDim out;
  BigInt prefix(0);
  for (size_t n = 0; n < n_used; ++n) {
    BigInt den = s.lambdas[n] + s.Hs[n];
    // den = 0 only for a vacuous depth-0 first window; the ratio is 1 there.
    Rational ratio = den == 0 ? Rational(1) : Rational(s.lambdas[n] - prefix, den);
    ratio.canonicalize();
    out.ratios.push_back(ratio);
    prefix += s.Hs[n];
  }
  out.liminf_estimate = tail_min_rat(out.ratios);
  out.analytic_limit = s.limit;
  return out;
}

MoranBounds moran_bounds(const std::vector<long>& m, const std::vector<Rational>& delta,
                         const std::vector<Rational>& d) {
  size_t K = m.size();
  require(K >= 1 && delta.size() == K && d.size() == K, errc::invalid_input,
          "sequences must share a length");
  MoranBounds out;
  double inf = std::numeric_limits<double>::infinity();
  double prefix = 0;  // log(m_1 ... m_{k-1})
  for (size_t k = 0; k < K; ++k) {
    double logm = std::log(static_cast<double>(m[k]));
    double den_low = -(logm + log_rat(delta[k]));
    out.lower_seq.push_back(den_low > 0 ? prefix / den_low : inf);
    prefix += logm;
    double den_up = -log_rat(d[k]);
    out.upper_seq.push_back(den_up > 0 ? prefix / den_up : inf);
  }
  out.lower = tail_min_dbl(out.lower_seq);
  out.upper = tail_min_dbl(out.upper_seq);
  return out;
}

MoranBoundsExact moran_bounds_exp(const std::vector<BigInt>& a, const std::vector<BigInt>& s,
                                  const std::vector<BigInt>& t) {
  size_t K = a.size();
  require(K >= 1 && s.size() == K && t.size() == K, errc::invalid_input,
          "sequences must share a length");
  MoranBoundsExact out;
  BigInt prefix(0);
  for (size_t k = 0; k < K; ++k) {
    BigInt den_low = s[k] - a[k];
    Rational low = den_low > 0 ? Rational(prefix, den_low) : Rational(-1);
    low.canonicalize();
    out.lower_seq.push_back(low);
    prefix += a[k];
    Rational up = t[k] > 0 ? Rational(prefix, t[k]) : Rational(-1);
    up.canonicalize();
    out.upper_seq.push_back(up);
  }
  out.lower = tail_min_rat(out.lower_seq);
  out.upper = tail_min_rat(out.upper_seq);
  return out;
}

MoranExponents schedule_to_moran(const MoranSchedule& s) {
  validate_schedule(s);
  MoranExponents out;
  for (size_t n = 0; n < s.lambdas.size(); ++n) {
    BigInt prev = n == 0 ? BigInt(s.H0) : s.lambdas[n - 1] + s.Hs[n - 1];
    out.a.push_back(s.lambdas[n] - prev);
    out.s.push_back(s.lambdas[n] - 1);
    out.t.push_back(s.lambdas[n] + s.Hs[n]);
  }
  return out;
}

BranchLevels branch_levels(const MoranSchedule& s, long horizon) {
  validate_schedule(s);
  require(horizon >= s.H0, errc::invalid_input, "horizon below the start level");
  BigInt coverage = s.lambdas.back() + s.Hs.back();
  require(BigInt(horizon) <= coverage, errc::invalid_input, "horizon beyond schedule coverage");
  BranchLevels out;
  out.horizon = horizon;
  BigInt h0_b(s.H0), hcap = BigInt(horizon) - 1;
  auto emit = [&](const BigInt& lo_b, const BigInt& hi_b) {
    // clip to [H0, horizon)
    BigInt lo = std::max(lo_b, h0_b);
    BigInt hi = std::min(hi_b, hcap);
    for (BigInt i = lo; i <= hi; ++i) out.levels.push_back(checked_window_level(i));
  };
  emit(BigInt(s.H0), s.lambdas.front() - 1);
  for (size_t n = 0; n + 1 < s.lambdas.size(); ++n)
    emit(s.lambdas[n] + s.Hs[n], s.lambdas[n + 1] - 1);
  return out;
}

namespace {

struct Window {
  long lo = 0;
  long hi = 0;  // exclusive
  size_t idx = 0;
};

// Constraints whose full window fits under precision - guard, with map
// consistency checked against the schedule.
std::vector<Window> audited_windows(const std::vector<ScalingMapSpec>& maps,
                                    const MoranSchedule& s, const FieldSpec& fs, long precision,
                                    long guard) {
  size_t used = 0;
  for (size_t n = 0; n < s.lambdas.size(); ++n) {
    if (s.lambdas[n] + s.Hs[n] <= precision - guard)
      used = n + 1;
    else
      break;
  }
  require(maps.size() >= used, errc::invalid_input, "fewer maps than audited constraints");
  std::vector<Window> ws;
  for (size_t n = 0; n < used; ++n) {
    ScalingExponent se = scaling_exponent(maps[n]);
    require(se.is_scaling, errc::invalid_configuration, "map is not scaling");
    require(BigInt(se.lambda) == s.lambdas[n], errc::invalid_configuration,
            "map ratio exponent disagrees with the schedule");
    require(maps[n].coeff.field == fs, errc::invalid_input, "map field mismatch");
    if (s.Hs[n] == 0) continue;  // vacuous constraint
    Window w;
    w.lo = to_long(s.lambdas[n]);
    w.hi = to_long(s.lambdas[n] + s.Hs[n]);
    w.idx = n;
    ws.push_back(w);
  }
  return ws;
}

}  // namespace

ConstructedPoint construct_point(const std::vector<ScalingMapSpec>& maps, const MoranSchedule& s,
                                 const Disk& start, long precision, long guard) {
  validate_schedule(s);
  const FieldSpec& fs = start.center.field;
  require(start.radius_exp == s.H0, errc::invalid_input,
          "start disk radius exponent must equal H0");
  require(guard >= 0 && precision > s.H0, errc::invalid_input, "bad precision window");
  require(start.center.abs_prec >= precision, errc::insufficient_precision,
          "start center shallower than the working precision");
  std::vector<Window> ws = audited_windows(maps, s, fs, precision, guard);
  for (const Window& w : ws)
    if (maps[w.idx].kind == MapKind::power)
      require(maps[w.idx].domain.radius_exp <= s.H0 &&
                  disk_contains(maps[w.idx].domain, start.center),
              errc::invalid_configuration, "start disk leaves a power map's scaling domain");

  Elem x = start.center;
  size_t wi = 0;
  for (long lvl = s.H0; lvl < precision; ++lvl) {
    while (wi < ws.size() && lvl >= ws[wi].hi) ++wi;
    if (wi >= ws.size() || lvl < ws[wi].lo) continue;  // free level: extend by digit 0
    const Window& w = ws[wi];
    long depth = lvl - w.lo + 1;
    Elem b = target_at(s.targets, fs, static_cast<long>(w.idx) + 1, depth);
    int hits = 0;
    Elem chosen;
    for (uint32_t c = 0; c < static_cast<uint32_t>(fs.q()); ++c) {
      // c * pi^lvl is exact, so pad with zero digits up to the working
      // precision; a bare single-digit summand would truncate the sum.
      std::vector<uint32_t> dd(static_cast<size_t>(precision - lvl), 0);
      dd[0] = c;
      Elem cand = c == 0 ? x : add(x, make_elem(fs, lvl, std::move(dd)));
      Elem img = integral_part(apply_map(maps[w.idx], cand));
      if (equals_mod(img, b, depth)) {
        ++hits;
        chosen = cand;
      }
    }
    if (hits == 0)
      fail(errc::construction_failure, "no digit satisfies the constraint (map not scaling?)");
    if (hits > 1)
      fail(errc::ambiguity_failure, "several digits satisfy the constraint (ratio too small?)");
    x = chosen;
  }
  ConstructedPoint out;
  out.x = x;
  out.cert = verify_certificate(maps, s, x, precision, guard);
  return out;
}

MembershipCertificate verify_certificate(const std::vector<ScalingMapSpec>& maps,
                                         const MoranSchedule& s, const Elem& x, long precision,
                                         long guard) {
  validate_schedule(s);
  const FieldSpec& fs = x.field;
  MembershipCertificate cert;
  cert.horizon = precision;
  cert.pass = true;
  size_t used = 0;
  for (size_t n = 0; n < s.lambdas.size(); ++n) {
    if (s.lambdas[n] + s.Hs[n] <= precision - guard)
      used = n + 1;
    else
      break;
  }
  require(maps.size() >= used, errc::invalid_input, "fewer maps than audited constraints");
  for (size_t n = 0; n < used; ++n) {
    long Hn = to_long(s.Hs[n]);
    Elem img = integral_part(apply_map(maps[n], x));
    require(img.abs_prec >= Hn, errc::insufficient_precision,
            "image precision below the constraint width");
    Elem b = target_at(s.targets, fs, static_cast<long>(n) + 1, Hn);
    Elem e = sub(truncate_abs(img, Hn), b);
    ConstraintRow row;
    row.index = static_cast<long>(n) + 1;
    row.achieved = e.zero ? e.abs_prec : e.v;
    row.required = Hn;
    row.pass = row.achieved >= Hn;
    cert.pass = cert.pass && row.pass;
    cert.rows.push_back(row);
  }
  return cert;
}

Elem psi_encode(const std::vector<ScalingMapSpec>& g, const Elem& x, long prec) {
  require(prec >= 1, errc::invalid_input, "precision must be >= 1");
  require(g.size() >= static_cast<size_t>(prec), errc::invalid_family,
          "family shorter than the requested precision");
  const FieldSpec& fs = x.field;
  require(x.zero || x.v >= 0, errc::invalid_input, "element outside the ring of integers");
  require(x.abs_prec >= prec, errc::insufficient_precision, "element shallower than precision");
  std::vector<uint32_t> digits(static_cast<size_t>(prec), 0);
  for (long n = 0; n < prec; ++n) {
    const ScalingMapSpec& gn = g[static_cast<size_t>(n)];
    require(gn.kind != MapKind::power, errc::invalid_family,
            "family members must scale on the whole ring");
    require(gn.coeff.field == fs, errc::invalid_family, "family field mismatch");
    ScalingExponent se = scaling_exponent(gn);
    require(se.is_scaling && se.lambda == n, errc::invalid_family,
            "member n must have ratio exponent exactly n");
    Elem img = integral_part(apply_map(gn, x));
    require(img.abs_prec >= 1, errc::insufficient_precision, "image has no 0-digit");
    digits[static_cast<size_t>(n)] = digit_at(img, 0);
  }
  Elem out = make_elem(fs, 0, std::move(digits));
  return out;
}

double freq_set_dim(long m, const Rational& rho, const std::vector<Rational>& P) {
  require(m >= 2, errc::invalid_input, "alphabet size must be >= 2");
  require(rho >= 0 && rho <= 1, errc::invalid_input, "density must lie in [0, 1]");
  require(P.size() == static_cast<size_t>(m), errc::invalid_input,
          "probability vector length must equal the alphabet size");
  Rational sum(0);
  Rational u(1, m);
  bool uniform = true;
  for (const Rational& pj : P) {
    require(pj >= 0, errc::invalid_input, "negative probability");
    sum += pj;
    if (pj != u) uniform = false;
  }
  sum.canonicalize();
  require(sum == 1, errc::invalid_input, "probabilities must sum to 1");
  if (rho == 0 || uniform) return 1.0;
  double entropy = 0;  // sum p_j log_m p_j, with 0 log 0 = 0
  for (const Rational& pj : P) {
    if (pj == 0) continue;
    double pd = rat_shadow(pj);
    entropy += pd * std::log(pd);
  }
  entropy /= std::log(static_cast<double>(m));
  double rd = rat_shadow(rho);
  return (1.0 - rd) - rd * entropy;
}

Rational dim_prop61(long p, long K, long H, long L) {
  require(p >= 2 && K >= 1 && H >= 1 && L >= 1, errc::invalid_input, "bad parameters");
  BigInt pK = pow_int(p, static_cast<unsigned long>(K));
  Rational out = Rational(1) - Rational((pK - 1) * H, pK * L);
  out.canonicalize();
  return out;
}

Rational dim_prop71(const Rational& eta, const Rational& eps) {
  require(eta > 0 && eta <= 1, errc::invalid_input, "need 0 < eta <= 1");
  require(eps >= 0 && eps < 1, errc::invalid_input, "need 0 <= eps < 1");
  Rational out = eta / (Rational(1) + eps - eta * eps);
  out.canonicalize();
  return out;
}

Rational dim_prop72(const Rational& gamma_z, const Rational& tau_exp) {
  require(gamma_z > 0, errc::invalid_input, "need |z| > 1");
  require(tau_exp > 0, errc::invalid_input, "need tau > 1");
  Rational out = gamma_z / (gamma_z + tau_exp);
  out.canonicalize();
  return out;
}

Prop72Build build_prop72_schedule(long p, long gamma_z, const Rational& tau_exp, long H0,
                                  long v_alpha, long count) {
  require(p >= 2 && gamma_z >= 1 && count >= 1, errc::invalid_input, "bad parameters");
  require(tau_exp > 0, errc::invalid_input, "need tau > 1");
  Prop72Build out;
  out.schedule.H0 = H0;
  BigInt prefix(0);
  for (long k = 0; k < count; ++k) {
    BigInt n;
    if (k == 0) {
      // (n - 1) gamma_z >= H0 + v_alpha
      n = 1 + ceil_rat(Rational(std::max(0L, H0 + v_alpha), gamma_z));
      if (n < 1) n = 1;
    } else {
      const BigInt& last = out.n_seq.back();
      // (n - last) gamma_z >= last * tau_exp
      n = last + ceil_rat(Rational(last) * tau_exp / gamma_z);
      BigInt floor_growth = BigInt(k) * k * prefix;  // vanishing prefix-sum ratio
      if (n < floor_growth) n = floor_growth;
      if (n <= last) n = last + 1;
    }
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) ++n;
    out.n_seq.push_back(n);
    prefix += n;
    out.schedule.lambdas.emplace_back(BigInt(-v_alpha) + (n - 1) * gamma_z);
    out.schedule.Hs.emplace_back(ceil_rat(Rational(n) * tau_exp));
  }
  out.schedule.limit = dim_prop72(Rational(gamma_z), tau_exp);
  validate_schedule(out.schedule);
  return out;
}

Prop71Build prop71_schedule(const std::vector<long>& r, long p, long K, long gamma_z,
                            long v_alpha, const Rational& eta, const Rational& eps, long H0,
                            long count) {
  require(p >= 2 && K >= 1 && gamma_z >= 1 && count >= 1, errc::invalid_input, "bad parameters");
  require(eta > 0 && eta < 1, errc::invalid_input, "need 0 < eta < 1");
  require(eps > 0 && eps < 1, errc::invalid_input, "need 0 < eps < 1");
  require(r.size() >= 9, errc::invalid_input, "sequence too short to audit");
  BigInt pK = pow_int(p, static_cast<unsigned long>(K));
  for (size_t i = 0; i < r.size(); ++i) {
    require(r[i] >= 1 && (i == 0 || r[i] > r[i - 1]), errc::invalid_schedule,
            "exponent sequence must be strictly increasing");
    require(!mpz_divisible_p(BigInt(r[i]).get_mpz_t(), pK.get_mpz_t()), errc::invalid_schedule,
            "p^K divides an exponent");
  }
  // Finite-horizon audit of gaps -> infinity: the last quarter must reach a
  // strictly larger gap than the first quarter ever does.
  size_t gaps = r.size() - 1;
  long head_max = 0, tail_max = 0;
  for (size_t i = 0; i < gaps; ++i) {
    long g = r[i + 1] - r[i];
    if (i < gaps / 4) head_max = std::max(head_max, g);
    if (i >= gaps - gaps / 4) tail_max = std::max(tail_max, g);
  }
  require(tail_max > head_max, errc::invalid_schedule, "gaps do not grow over the horizon");

  // Refinement: keep consecutive ratios <= 1 + eps with minimal insertions,
  // never hitting a multiple of p^K.
  std::vector<BigInt> rt;
  rt.emplace_back(r[0]);
  Rational growth = Rational(1) + eps;
  for (size_t i = 1; i < r.size(); ++i) {
    BigInt next(r[i]);
    while (Rational(next) > growth * Rational(rt.back())) {
      BigInt cand = floor_rat(growth * Rational(rt.back()));
      while (cand > rt.back() && mpz_divisible_p(cand.get_mpz_t(), pK.get_mpz_t())) --cand;
      require(cand > rt.back(), errc::invalid_schedule,
              "refinement stalls: eps too small at this scale");
      rt.push_back(cand);
    }
    rt.push_back(next);
  }

  // N-shift: lambda_1 > H0 and every audited gap above K / (eta * gamma_z).
  Rational gap_floor = Rational(K) / (eta * gamma_z);
  // explicit BigInt return: a deduced gmp expression template would dangle
  auto lambda_of = [&](const BigInt& base) -> BigInt {
    return BigInt(-v_alpha) - vp_of(base, p) + (base - 1) * gamma_z;
  };
  size_t N = 0;
  for (size_t cand = 1; cand + count < rt.size() + 1; ++cand) {
    if (lambda_of(rt[cand - 1]) <= H0) continue;
    bool ok = true;
    for (long n = 1; n <= count && ok; ++n) {
      size_t hi = cand + static_cast<size_t>(n) - 1;
      if (hi >= rt.size()) {
        ok = false;
        break;
      }
      if (Rational(rt[hi] - rt[hi - 1]) <= gap_floor) ok = false;
    }
    if (ok) {
      N = cand;
      break;
    }
  }
  require(N >= 1, errc::invalid_schedule, "no admissible shift within the horizon");

  Prop71Build out;
  out.refined = rt;
  MoranSchedule& s = out.schedule;
  s.H0 = H0;
  Rational keep = Rational(1) - eta;
  for (long n = 1; n <= count; ++n) {
    size_t at = N + static_cast<size_t>(n) - 2;  // 0-based r~_{n+N-1}
    out.exponents.push_back(rt[at]);
    s.lambdas.push_back(lambda_of(rt[at]));
    BigInt gap = rt[at + 1] - rt[at];
    s.Hs.push_back(floor_rat(keep * Rational(gap)) * gamma_z);
  }
  validate_schedule(s);
  return out;
}

Json schedule_to_json(const MoranSchedule& s) {
  Json j;
  j["H0"] = s.H0;
  Json ls = Json::array(), hs = Json::array();
  for (const BigInt& l : s.lambdas) ls.push_back(l.get_str());
  for (const BigInt& h : s.Hs) hs.push_back(h.get_str());
  j["lambdas"] = std::move(ls);
  j["Hs"] = std::move(hs);
  Json t;
  switch (s.targets.kind) {
    case TargetGen::Kind::constant:
      t["kind"] = "constant";
      t["value"] = (s.targets.value.zero && s.targets.value.d.empty() &&
                    s.targets.value.abs_prec == 0)
                       ? Json(nullptr)
                       : elem_to_json(s.targets.value);
      break;
    case TargetGen::Kind::list: {
      t["kind"] = "list";
      Json vs = Json::array();
      for (const Elem& b : s.targets.list) vs.push_back(elem_to_json(b));
      t["values"] = std::move(vs);
      break;
    }
    case TargetGen::Kind::random:
      t["kind"] = "random";
      t["seed"] = s.targets.seed;
      break;
  }
  j["targets"] = std::move(t);
  j["limit"] = s.limit ? rational_to_json(*s.limit) : Json(nullptr);
  return j;
}

MoranSchedule schedule_from_json(const Json& j) {
  MoranSchedule s;
  s.H0 = j.at("H0").get<long>();
  for (const auto& l : j.at("lambdas")) s.lambdas.emplace_back(l.get<std::string>());
  for (const auto& h : j.at("Hs")) s.Hs.emplace_back(h.get<std::string>());
  if (j.contains("targets")) {
    const Json& t = j.at("targets");
    std::string kind = t.at("kind").get<std::string>();
    if (kind == "constant") {
      s.targets.kind = TargetGen::Kind::constant;
      if (!t.at("value").is_null()) s.targets.value = elem_from_json(t.at("value"));
    } else if (kind == "list") {
      s.targets.kind = TargetGen::Kind::list;
      for (const auto& v : t.at("values")) s.targets.list.push_back(elem_from_json(v));
    } else if (kind == "random") {
      s.targets.kind = TargetGen::Kind::random;
      s.targets.seed = t.at("seed").get<uint64_t>();
    } else {
      fail(errc::invalid_input, "bad target kind");
    }
  }
  if (j.contains("limit") && !j.at("limit").is_null()) {
    Rational lim(BigInt(j.at("limit").at("num").get<std::string>()),
                 BigInt(j.at("limit").at("den").get<std::string>()));
    lim.canonicalize();
    s.limit = lim;
  }
  validate_schedule(s);
  return s;
}

Json certificate_to_json(const MembershipCertificate& c) {
  Json j;
  j["pass"] = c.pass;
  j["horizon"] = c.horizon;
  Json rows = Json::array();
  for (const ConstraintRow& r : c.rows) {
    Json row;
    row["n"] = r.index;
    row["achieved"] = r.achieved;
    row["required"] = r.required;
    row["pass"] = r.pass;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace nak
