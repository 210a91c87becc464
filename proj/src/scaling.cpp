#include "nak/scaling.hpp"

#include <map>

namespace nak {

namespace {

long vp_long(long n, long p) {
  require(n != 0, errc::invalid_input, "valuation of zero index");
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

Disk scaling_domain(const Elem& anchor) {
  require(!anchor.zero, errc::invalid_input, "power-map anchor must be nonzero");
  long m = anchor.v + (anchor.field.is_char_p() ? 1 : anchor.field.e + 1);
  require(anchor.abs_prec >= m, errc::invalid_input, "anchor under-resolved for its domain");
  return Disk{anchor, m};
}

ScalingMapSpec make_power_map(const Elem& alpha, const BigInt& n, const Elem& anchor) {
  require(!alpha.zero, errc::invalid_input, "zero coefficient");
  require(n >= 1, errc::invalid_input, "power exponent must be >= 1");
  ScalingMapSpec s;
  s.kind = MapKind::power;
  s.coeff = alpha;
  s.offset = make_zero(alpha.field, alpha.abs_prec);
  s.n = n;
  s.domain = scaling_domain(anchor);
  return s;
}

ScalingMapSpec make_affine_map(const Elem& beta, const Elem& c) {
  require(!beta.zero, errc::invalid_input, "zero coefficient");
  require(beta.field == c.field, errc::invalid_input, "field spec mismatch");
  ScalingMapSpec s;
  s.kind = MapKind::affine;
  s.coeff = beta;
  s.offset = c;
  s.n = 1;
  s.domain = Disk{make_zero(beta.field, 0), 0};
  return s;
}

ScalingMapSpec make_geometric_map(const Elem& beta, const BigInt& n) {
  require(!beta.zero, errc::invalid_input, "zero coefficient");
  require(n >= 0, errc::invalid_input, "geometric index must be >= 0");
  ScalingMapSpec s;
  s.kind = MapKind::geometric;
  s.coeff = beta;
  s.offset = make_zero(beta.field, 0);
  s.n = n;
  s.domain = Disk{make_zero(beta.field, 0), 0};
  return s;
}

ScalingExponent scaling_exponent(const ScalingMapSpec& spec) {
  const FieldSpec& fs = spec.coeff.field;
  ScalingExponent out;
  switch (spec.kind) {
    case MapKind::affine:
      out.lambda = -spec.coeff.v;
      return out;
    case MapKind::geometric: {
      BigInt l = -spec.n * BigInt(spec.coeff.v);
      out.lambda = to_long(l);
      return out;
    }
    case MapKind::power:
      break;
  }
  const Elem& a = spec.domain.center;
  long va = a.v, valpha = spec.coeff.v;
  long h = vp_of(spec.n, fs.p);
  if (!fs.is_char_p()) {
    BigInt l = -BigInt(valpha) - BigInt(h) * fs.e - (spec.n - 1) * BigInt(va);
    out.lambda = to_long(l);
    return out;
  }
  if (h == 0) {
    BigInt l = -BigInt(valpha) - (spec.n - 1) * BigInt(va);
    out.lambda = to_long(l);
    return out;
  }
  out.is_scaling = false;
  out.holder_pow = pow_int(fs.p, static_cast<unsigned long>(h));
  BigInt l = -BigInt(valpha) - (spec.n - out.holder_pow) * BigInt(va);
  out.lambda = to_long(l);
  return out;
}

Elem apply_map(const ScalingMapSpec& spec, const Elem& x) {
  switch (spec.kind) {
    case MapKind::power:
      require(disk_contains(spec.domain, x), errc::out_of_domain,
              "point outside the scaling domain");
      return mul(spec.coeff, pow_elem(x, spec.n));
    case MapKind::affine:
      return add(mul(spec.coeff, x), spec.offset);
    case MapKind::geometric:
      return mul(pow_elem(spec.coeff, spec.n), x);
  }
  fail(errc::invalid_input, "bad map kind");
}

std::optional<long> predicted_distance(const ScalingMapSpec& spec, const Elem& x, const Elem& y) {
  Elem d = sub(x, y);
  if (d.zero) return std::nullopt;
  long ex = -d.v;
  ScalingExponent se = scaling_exponent(spec);
  if (se.is_scaling) return se.lambda + ex;
  BigInt r = BigInt(se.lambda) + se.holder_pow * BigInt(ex);
  return to_long(r);
}

std::vector<long> power_lambda_schedule(const FieldSpec& fs, long v_alpha, long v_anchor,
                                        long n_from, long count) {
  require(n_from >= 1 && count >= 0, errc::invalid_input, "bad schedule range");
  std::vector<long> out;
  out.reserve(static_cast<size_t>(count));
  for (long n = n_from; n < n_from + count; ++n) {
    long h = vp_long(n, fs.p);
    if (fs.is_char_p()) {
      require(h == 0, errc::invalid_input, "p | n is not scaling in characteristic p");
      out.push_back(-v_alpha - (n - 1) * v_anchor);
    } else {
      out.push_back(-v_alpha - h * fs.e - (n - 1) * v_anchor);
    }
  }
  return out;
}

BigInt count_KN(const std::vector<long>& lambdas) {
  std::map<long, long> counts;
  for (long l : lambdas) ++counts[l];
  BigInt kn = 0;
  for (const auto& [l, c] : counts) kn += BigInt(c) * BigInt(c);
  return kn;
}

LambdaClass lambda_class(long gamma, long n, long k, long N, const FieldSpec& fs) {
  require(gamma >= 1, errc::invalid_input, "gamma must be >= 1");
  require(n >= 1 && k >= 1 && N >= 1, errc::invalid_input, "indices must be positive");
  long p = fs.p;
  auto key = [&](long m) { return m * gamma - fs.e * vp_long(m, p); };
  long target = key(n);
  LambdaClass out;
  for (long m = k; m <= N + k - 1; ++m)
    if (key(m) == target) out.members.push_back(m);
  long c = static_cast<long>(out.members.size());
  // Exact form of #members <= e log_p(N+k)/gamma + 1.
  out.within_bound =
      c <= 1 || pow_int(p, static_cast<unsigned long>((c - 1) * gamma)) <=
                    pow_int(N + k, static_cast<unsigned long>(fs.e));
  return out;
}

long n0_cut(const std::vector<long>& lambdas, long H0) {
  for (size_t i = 0; i < lambdas.size(); ++i)
    if (lambdas[i] >= H0) return static_cast<long>(i) + 1;
  return 0;
}

KNAudit kn_bound_audit(const FieldSpec& fs, long v_alpha, long gamma, long n0, long N) {
  require(gamma >= 1, errc::invalid_input, "anchor norm exponent must be positive");
  require(n0 >= 1 && N >= 1, errc::invalid_input, "bad audit range");
  auto sched = power_lambda_schedule(fs, v_alpha, -gamma, n0, N);
  KNAudit out;
  out.kn = count_KN(sched);
  if (out.kn <= N) {
    out.within_bound = true;
    return out;
  }
  // kn <= N (e log_p(N+n0)/gamma + 1), exactly: p^{(kn-N) gamma} <= (N+n0)^{N e}.
  BigInt lhs = pow_int(fs.p, static_cast<unsigned long>(to_long((out.kn - N) * gamma)));
  BigInt rhs = pow_int(N + n0, static_cast<unsigned long>(N) * static_cast<unsigned long>(fs.e));
  out.within_bound = lhs <= rhs;
  return out;
}

}  // namespace nak
