#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "nak/exceptional.hpp"

using namespace nak;

namespace {

errc thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.kind();
  }
  return static_cast<errc>(-1);  // nothing thrown
}

Elem deep_unit_power(const FieldSpec& fs, long v, long abs_prec) {
  std::vector<uint32_t> d(static_cast<size_t>(abs_prec - v), 0);
  d[0] = 1;
  return make_elem(fs, v, std::move(d));
}

// Integers m >= 2 with p^K not dividing m, in order.
std::vector<long> inert_integers(long p, long K, long count) {
  long pk = 1;
  for (long i = 0; i < K; ++i) pk *= p;
  std::vector<long> out;
  for (long m = 2; static_cast<long>(out.size()) < count; ++m)
    if (m % pk != 0) out.push_back(m);
  return out;
}

}  // namespace

TEST_CASE("schedule validation rejects malformed data") {
  CHECK_THROWS_AS((void)make_schedule(0, {}, {}), error);
  CHECK_THROWS_AS((void)make_schedule(0, {BigInt(3)}, {BigInt(1), BigInt(1)}), error);
  CHECK_THROWS_AS((void)make_schedule(0, {BigInt(3)}, {BigInt(-1)}), error);
  CHECK_THROWS_AS((void)make_schedule(4, {BigInt(3)}, {BigInt(1)}), error);
  // gap 2 below width 3
  CHECK_THROWS_AS((void)make_schedule(0, {BigInt(2), BigInt(4)}, {BigInt(3), BigInt(1)}), error);
  CHECK(thrown_code([] { (void)make_schedule(0, {}, {}); }) == errc::invalid_schedule);

  MoranSchedule ok = make_schedule(1, {BigInt(2), BigInt(5)}, {BigInt(3), BigInt(0)});
  CHECK(ok.lambdas.size() == 2);
}

TEST_CASE("target generators are deterministic and bounded") {
  FieldSpec q3 = field_Qp(3);
  TargetGen zero;  // default constant zero
  Elem b = target_at(zero, q3, 4, 6);
  CHECK(b.zero);
  CHECK(b.abs_prec == 6);

  TargetGen cst;
  cst.value = from_rational(q3, Rational(1, 2), 12);
  Elem c1 = target_at(cst, q3, 1, 5);
  Elem c9 = target_at(cst, q3, 9, 5);
  CHECK(equals(c1, c9));
  CHECK(c1.abs_prec == 5);
  CHECK_THROWS_AS((void)target_at(cst, q3, 1, 20), error);  // under-resolved

  TargetGen lst;
  lst.kind = TargetGen::Kind::list;
  lst.list = {one_elem(q3, 8), from_rational(q3, Rational(2), 8)};
  CHECK(equals(target_at(lst, q3, 2, 8), lst.list[1]));
  CHECK_THROWS_AS((void)target_at(lst, q3, 3, 4), error);  // exhausted

  TargetGen rnd;
  rnd.kind = TargetGen::Kind::random;
  rnd.seed = 11;
  Elem r1 = target_at(rnd, q3, 5, 20);
  Elem r2 = target_at(rnd, q3, 5, 20);
  Elem r3 = target_at(rnd, q3, 6, 20);
  CHECK(equals(r1, r2));
  CHECK(!equals(r1, r3));
  CHECK((r1.zero || r1.v >= 0));
}

TEST_CASE("dimension ratios for an affine depth rule") {
  // lambda_n = 2n, H = 1: ratio_n = (n + 1) / (2n + 1), limit 1/2.
  MoranSchedule s = affine_schedule(2, 0, 1, 0, 10000);
  GammaDim g = gamma_dim(s, 10000);
  REQUIRE(g.ratios.size() == 10000);
  CHECK(g.ratios[0] == Rational(2, 3));
  CHECK(g.ratios[4] == Rational(6, 11));
  for (long n = 1; n <= 50; ++n) CHECK(g.ratios[n - 1] == Rational(n + 1, 2 * n + 1));
  CHECK(g.liminf_estimate == Rational(10001, 20001));
  CHECK(std::abs(rat_shadow(g.liminf_estimate) - 0.5) < 1e-4);
  REQUIRE(g.analytic_limit.has_value());
  CHECK(*g.analytic_limit == Rational(1, 2));

  GammaDim short_view = gamma_dim(s, 10);
  CHECK(short_view.ratios.size() == 10);
}

TEST_CASE("fully constrained schedule has dimension zero and no branch levels") {
  MoranSchedule s = mahler_schedule(50);
  GammaDim g = gamma_dim(s, 50);
  for (const Rational& r : g.ratios) CHECK(r == Rational(0));
  CHECK(g.liminf_estimate == Rational(0));
  REQUIRE(g.analytic_limit.has_value());
  CHECK(*g.analytic_limit == Rational(0));

  BranchLevels bl = branch_levels(s, 30);
  CHECK(bl.levels.empty());
}

TEST_CASE("power map family dimension approaches its closed form from below") {
  CHECK(dim_prop61(3, 1, 1, 6) == Rational(8, 9));
  CHECK(dim_prop61(2, 1, 1, 10) == Rational(19, 20));
  CHECK(dim_prop61(3, 2, 2, 11) == Rational(1) - Rational(8 * 2, 9 * 11));

  MoranSchedule s = prop61_schedule(3, 1, 1, 6, 2000);
  REQUIRE(s.limit.has_value());
  CHECK(*s.limit == Rational(8, 9));
  // entries with exponent 2 mod 3 form the lower envelope (8j - 2)/(9j - 2)
  GammaDim g = gamma_dim(s, 2000);
  for (long k = 1; k <= 10; ++k)
    CHECK(g.ratios[2 * k - 2] == Rational(16 * k - 10, 18 * k - 11));
  CHECK(g.liminf_estimate == Rational(8 * 1001 - 2, 9 * 1001 - 2));
  CHECK(g.liminf_estimate < Rational(8, 9));
  CHECK(Rational(8, 9) - g.liminf_estimate < Rational(1, 10000));
}

TEST_CASE("covering and separation bounds on plain Moran data") {
  // Full dyadic tree: bounds collapse to 1.
  std::vector<long> m(40, 2);
  std::vector<Rational> d, delta;
  for (long k = 1; k <= 40; ++k) {
    d.emplace_back(Rational(1, pow_int(2, static_cast<unsigned long>(k))));
    delta.push_back(d.back());
  }
  MoranBounds full = moran_bounds(m, delta, d);
  CHECK(full.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.upper == doctest::Approx(1.0).epsilon(1e-12));

  // Two children at scale 4^{-k}: dimension 1/2.
  std::vector<long> m2(60, 2);
  std::vector<Rational> d2, delta2;
  for (long k = 1; k <= 60; ++k) {
    d2.emplace_back(Rational(1, pow_int(4, static_cast<unsigned long>(k))));
    delta2.push_back(d2.back());
  }
  MoranBounds half = moran_bounds(m2, delta2, d2);
  CHECK(half.upper == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.lower == doctest::Approx(30.0 / 61.0).epsilon(1e-12));
  CHECK(half.lower < half.upper);

  CHECK_THROWS_AS((void)moran_bounds({2}, {}, {}), error);
}

TEST_CASE("schedule exponents, exact bounds, and ratios agree") {
  MoranSchedule s;
  s.H0 = 0;
  for (long k = 1; k <= 1000; ++k) {
    s.lambdas.emplace_back(BigInt(1000000) * k * k);
    s.Hs.emplace_back(1);
  }
  validate_schedule(s);

  MoranExponents me = schedule_to_moran(s);
  CHECK(me.a[0] == BigInt(1000000));
  CHECK(me.a[1] == s.lambdas[1] - s.lambdas[0] - 1);
  CHECK(me.s[0] == s.lambdas[0] - 1);
  CHECK(me.t[0] == s.lambdas[0] + 1);

  MoranBoundsExact mb = moran_bounds_exp(me.a, me.s, me.t);
  GammaDim g = gamma_dim(s, 1000);
  REQUIRE(mb.upper_seq.size() == g.ratios.size());
  for (size_t k = 0; k < g.ratios.size(); ++k) CHECK(mb.upper_seq[k] == g.ratios[k]);
  CHECK(mb.upper == g.liminf_estimate);

  double lo = rat_shadow(mb.lower), up = rat_shadow(mb.upper), li = rat_shadow(g.liminf_estimate);
  CHECK(std::abs(lo - up) < 1e-9);
  CHECK(std::abs(lo - li) < 1e-9);
  CHECK(lo > 1.0 - 1e-8);
  CHECK(up < 1.0);
}

TEST_CASE("branch levels carve out the unconstrained depths") {
  MoranSchedule s = prop61_schedule(3, 1, 1, 30, 150);
  BranchLevels bl = branch_levels(s, 6000);
  double density = static_cast<double>(bl.levels.size()) / (6000.0 - 1.0);
  CHECK(std::abs(density - 44.0 / 45.0) < 0.01);
  CHECK(std::is_sorted(bl.levels.begin(), bl.levels.end()));
  // constrained depths are exactly the lambda_n below the horizon
  for (long lvl : bl.levels) CHECK(lvl >= 1);

  // H = 0 leaves every level free.
  MoranSchedule free = affine_schedule(5, 0, 0, 0, 20);
  BranchLevels all = branch_levels(free, 100);
  REQUIRE(all.levels.size() == 100);
  for (size_t i = 0; i < all.levels.size(); ++i) CHECK(all.levels[i] == static_cast<long>(i));

  CHECK_THROWS_AS((void)branch_levels(free, 101), error);
  MoranSchedule off = affine_schedule(5, 0, 0, 3, 20);
  CHECK_THROWS_AS((void)branch_levels(off, 2), error);
}

TEST_CASE("digit-by-digit construction lands every power constraint") {
  FieldSpec q3 = field_Qp(3);
  const long prec = 200;
  MoranSchedule s = prop61_schedule(3, 1, 1, 6, 25);
  std::vector<long> ms = inert_integers(3, 1, 25);

  Elem alpha = one_elem(q3, 220);
  Elem center = deep_unit_power(q3, -6, prec);
  std::vector<ScalingMapSpec> maps;
  for (long m : ms) maps.push_back(make_power_map(alpha, BigInt(m), center));

  ConstructedPoint cp = construct_point(maps, s, Disk{center, 1}, prec, 8);
  CHECK(cp.cert.pass);
  REQUIRE(cp.cert.rows.size() == 21);  // lambda + H <= 192 covers m <= 32
  for (const ConstraintRow& r : cp.cert.rows) {
    CHECK(r.pass);
    CHECK(r.required == 1);
    CHECK(r.achieved >= 1);
  }
  CHECK(cp.x.v == -6);
  CHECK(cp.x.abs_prec == prec);
  CHECK(equals_mod(cp.x, center, 1));

  // independent recheck: the integral part of x^m starts with a zero digit
  for (size_t i = 0; i < cp.cert.rows.size(); ++i) {
    Elem y = integral_part(pow_elem(cp.x, BigInt(ms[i])));
    REQUIRE(y.abs_prec >= 1);
    CHECK(digit_at(y, 0) == 0);
  }

  // deterministic
  ConstructedPoint again = construct_point(maps, s, Disk{center, 1}, prec, 8);
  CHECK(equals(cp.x, again.x));

  // a map whose ratio exponent disagrees with the schedule is rejected
  std::vector<ScalingMapSpec> bad = maps;
  bad[0] = make_power_map(alpha, BigInt(ms[0] + 3), center);
  CHECK(thrown_code([&] { (void)construct_point(bad, s, Disk{center, 1}, prec, 8); }) ==
        errc::invalid_configuration);

  CHECK_THROWS_AS((void)construct_point(maps, s, Disk{center, 2}, prec, 8), error);
  Elem shallow = deep_unit_power(q3, -6, 150);
  CHECK(thrown_code([&] { (void)construct_point(maps, s, Disk{shallow, 1}, prec, 8); }) ==
        errc::insufficient_precision);
}

TEST_CASE("width-zero constraints leave the start point untouched") {
  FieldSpec q5 = field_Qp(5);
  MoranSchedule s = affine_schedule(5, 0, 0, 0, 4);
  Elem beta = from_rational(q5, Rational(1, 3125), 50);  // v = -5, so member n scales by 5^{5n}
  std::vector<ScalingMapSpec> maps;
  for (long n = 1; n <= 4; ++n) maps.push_back(make_geometric_map(beta, BigInt(n)));

  Elem c = from_rational(q5, Rational(2, 7), 45);
  ConstructedPoint cp = construct_point(maps, s, Disk{c, 0}, 40, 8);
  CHECK(cp.cert.pass);
  CHECK(equals_mod(cp.x, c, 40));
  for (const ConstraintRow& r : cp.cert.rows) {
    CHECK(r.required == 0);
    CHECK(r.pass);
  }
}

TEST_CASE("construction tracks seeded random targets") {
  FieldSpec q3 = field_Qp(3);
  const long prec = 100;
  MoranSchedule s = prop61_schedule(3, 1, 1, 6, 12);
  s.targets.kind = TargetGen::Kind::random;
  s.targets.seed = 7;
  std::vector<long> ms = inert_integers(3, 1, 12);

  Elem alpha = one_elem(q3, 120);
  Elem center = deep_unit_power(q3, -6, prec);
  std::vector<ScalingMapSpec> maps;
  for (long m : ms) maps.push_back(make_power_map(alpha, BigInt(m), center));

  ConstructedPoint cp = construct_point(maps, s, Disk{center, 1}, prec, 8);
  CHECK(cp.cert.pass);
  REQUIRE(cp.cert.rows.size() == 10);  // lambda + H <= 92 covers m <= 16
  for (size_t i = 0; i < cp.cert.rows.size(); ++i) {
    Elem y = integral_part(pow_elem(cp.x, BigInt(ms[i])));
    Elem b = target_at(s.targets, q3, static_cast<long>(i) + 1, 1);
    CHECK(digit_at(y, 0) == digit_at(b, 0));
  }
}

TEST_CASE("digit encoder reproduces translations and preserves distances") {
  FieldSpec q5 = field_Qp(5);
  auto diagonal = [&](const Elem& shift, long count) {
    std::vector<ScalingMapSpec> g;
    for (long n = 0; n < count; ++n) {
      Elem beta = from_rational(q5, Rational(1, pow_int(5, static_cast<unsigned long>(n))), 40);
      g.push_back(make_affine_map(beta, mul(beta, shift)));
    }
    return g;
  };

  std::mt19937_64 rng(99);
  Disk ring{make_zero(q5, 0), 0};
  Elem x = random_element(ring, rng, 40);

  std::vector<ScalingMapSpec> ident = diagonal(make_zero(q5, 40), 30);
  Elem px = psi_encode(ident, x, 30);
  CHECK(px.abs_prec == 30);
  CHECK(equals_mod(px, x, 30));

  Elem c = from_rational(q5, Rational(3, 7), 45);
  std::vector<ScalingMapSpec> trans = diagonal(c, 30);
  CHECK(equals_mod(psi_encode(trans, x, 30), add(x, c), 30));

  // an arbitrary admissible family is an isometry on the ring
  std::vector<ScalingMapSpec> mixed;
  for (long n = 0; n < 24; ++n) {
    Elem beta = from_rational(q5, Rational(1, pow_int(5, static_cast<unsigned long>(n))), 40);
    Elem cn = random_element(ring, rng, 40);
    mixed.push_back(make_affine_map(beta, mul(beta, cn)));
  }
  for (int trial = 0; trial < 200; ++trial) {
    Elem a = random_element(ring, rng, 30);
    Elem b = random_element(ring, rng, 30);
    Elem diff = sub(a, b);
    if (diff.zero || diff.v >= 24) continue;
    Elem pd = sub(psi_encode(mixed, a, 24), psi_encode(mixed, b, 24));
    REQUIRE(!pd.zero);
    CHECK(pd.v == diff.v);
  }
  // a pair differing exactly at depth 13
  std::vector<uint32_t> bump(30 - 13, 0);
  bump[0] = 2;
  Elem y = add(x, make_elem(q5, 13, std::move(bump)));
  Elem pd = sub(psi_encode(mixed, x, 24), psi_encode(mixed, y, 24));
  REQUIRE(!pd.zero);
  CHECK(pd.v == 13);

  // family validation
  std::vector<ScalingMapSpec> shrt = diagonal(make_zero(q5, 40), 5);
  CHECK(thrown_code([&] { (void)psi_encode(shrt, x, 10); }) == errc::invalid_family);
  std::vector<ScalingMapSpec> wrong = diagonal(make_zero(q5, 40), 10);
  wrong[3] = wrong[4];  // ratio exponent 4 at slot 3
  CHECK(thrown_code([&] { (void)psi_encode(wrong, x, 10); }) == errc::invalid_family);
  std::vector<ScalingMapSpec> pw = diagonal(make_zero(q5, 40), 10);
  pw[2] = make_power_map(one_elem(q5, 20), BigInt(3), deep_unit_power(q5, -1, 10));
  CHECK(thrown_code([&] { (void)psi_encode(pw, x, 10); }) == errc::invalid_family);

  Elem outside = deep_unit_power(q5, -2, 20);
  CHECK_THROWS_AS((void)psi_encode(ident, outside, 10), error);
  Elem shallow = random_element(ring, rng, 8);
  CHECK(thrown_code([&] { (void)psi_encode(ident, shallow, 20); }) ==
        errc::insufficient_precision);
}

TEST_CASE("frequency set dimension closed form") {
  CHECK(freq_set_dim(2, Rational(1, 2), {Rational(1, 2), Rational(1, 2)}) == 1.0);
  CHECK(freq_set_dim(2, Rational(0), {Rational(9, 10), Rational(1, 10)}) == 1.0);
  CHECK(freq_set_dim(2, Rational(1, 2), {Rational(1), Rational(0)}) == 0.5);
  double d = freq_set_dim(3, Rational(1), {Rational(1, 2), Rational(1, 2), Rational(0)});
  CHECK(d == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-12));
  double mid = freq_set_dim(2, Rational(1, 3), {Rational(1, 4), Rational(3, 4)});
  CHECK(mid > 2.0 / 3.0);
  CHECK(mid < 1.0);

  CHECK_THROWS_AS((void)freq_set_dim(1, Rational(0), {Rational(1)}), error);
  CHECK_THROWS_AS((void)freq_set_dim(2, Rational(2), {Rational(1, 2), Rational(1, 2)}), error);
  CHECK_THROWS_AS((void)freq_set_dim(2, Rational(1, 2), {Rational(1, 2)}), error);
  CHECK_THROWS_AS((void)freq_set_dim(2, Rational(1, 2), {Rational(3, 4), Rational(1, 2)}), error);
}

TEST_CASE("closed-form dimensions for the tower constructions") {
  CHECK(dim_prop71(Rational(1, 2), Rational(1, 2)) == Rational(2, 5));
  CHECK(dim_prop71(Rational(1), Rational(1, 4)) == Rational(1));
  CHECK(dim_prop72(Rational(1), Rational(1)) == Rational(1, 2));
  CHECK(dim_prop72(Rational(3), Rational(2)) == Rational(3, 5));
  CHECK_THROWS_AS((void)dim_prop71(Rational(0), Rational(1, 2)), error);
  CHECK_THROWS_AS((void)dim_prop71(Rational(1, 2), Rational(1)), error);
  CHECK_THROWS_AS((void)dim_prop72(Rational(0), Rational(1)), error);
}

TEST_CASE("greedy exponent tower meets its side conditions") {
  // q = 5, |z| = q, tau = q, delta = q^{-2}
  Prop72Build b = build_prop72_schedule(5, 1, Rational(1), 2, 0, 40);
  REQUIRE(b.n_seq.size() == 40);
  CHECK(b.n_seq[0] == BigInt(3));
  BigInt prefix(0);
  for (size_t k = 0; k < b.n_seq.size(); ++k) {
    const BigInt& n = b.n_seq[k];
    CHECK(!mpz_divisible_ui_p(n.get_mpz_t(), 5));
    if (k == 0) {
      CHECK(n - 1 >= 2);
    } else {
      CHECK(b.n_seq[k] - b.n_seq[k - 1] >= b.n_seq[k - 1]);
      CHECK(n >= BigInt(k) * k * prefix);
    }
    CHECK(b.schedule.lambdas[k] == n - 1);
    CHECK(b.schedule.Hs[k] == n);
    prefix += n;
  }
  GammaDim g = gamma_dim(b.schedule, 40);
  REQUIRE(g.analytic_limit.has_value());
  CHECK(*g.analytic_limit == Rational(1, 2));
  double li = rat_shadow(g.liminf_estimate);
  CHECK(li >= 0.5 - 0.01);
  CHECK(li <= 0.5);
}

TEST_CASE("audited exponent sequences build valid towers or are rejected") {
  auto squares = [](long from, long count) {
    std::vector<long> r;
    for (long k = from; static_cast<long>(r.size()) < count; ++k)
      if (k % 3 != 0) r.push_back(k * k);
    return r;
  };

  Prop71Build b = prop71_schedule(squares(7, 60), 3, 1, 1, 0, Rational(1, 2), Rational(1, 2), 1,
                                  8);
  REQUIRE(b.schedule.lambdas.size() == 8);
  CHECK(b.refined.size() > 60);  // ratio over 3/2 forces insertions
  for (size_t n = 0; n < 8; ++n) {
    const BigInt& ex = b.exponents[n];
    CHECK(!mpz_divisible_ui_p(ex.get_mpz_t(), 3));
    CHECK(b.schedule.lambdas[n] == ex - 1);  // vp = 0, gamma_z = 1
    auto it = std::find(b.refined.begin(), b.refined.end(), ex);
    REQUIRE(it != b.refined.end());
    REQUIRE(it + 1 != b.refined.end());
    BigInt gap = *(it + 1) - *it;
    CHECK(b.schedule.Hs[n] == floor_rat(Rational(gap) / 2));
  }
  CHECK(b.schedule.lambdas[0] > 1);
  double li = rat_shadow(gamma_dim(b.schedule, 8).liminf_estimate);
  CHECK(li > rat_shadow(dim_prop71(Rational(1, 2), Rational(1, 2))));
  CHECK(li < 0.60);

  // bounded gaps never pass the growth audit
  std::vector<long> arith;
  for (long n = 1; static_cast<long>(arith.size()) < 60; ++n)
    if ((2 * n) % 3 != 0) arith.push_back(2 * n);
  CHECK(thrown_code([&] {
          (void)prop71_schedule(arith, 3, 1, 1, 0, Rational(1, 2), Rational(1, 2), 1, 8);
        }) == errc::invalid_schedule);

  // refinement cannot bridge a ratio of 4 starting from 1 with eps = 1/2
  CHECK(thrown_code([&] {
          (void)prop71_schedule(squares(1, 60), 3, 1, 1, 0, Rational(1, 2), Rational(1, 2), 1, 8);
        }) == errc::invalid_schedule);

  // a p^K-divisible exponent is rejected outright
  std::vector<long> bad = squares(7, 20);
  bad[5] = bad[4] + 9 - (bad[4] % 9 + 9) % 9 + 9;  // next multiple of 9 above bad[4]
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  if (bad.size() >= 9)
    CHECK(thrown_code([&] {
            (void)prop71_schedule(bad, 3, 2, 1, 0, Rational(1, 2), Rational(1, 2), 1, 4);
          }) == errc::invalid_schedule);
}

TEST_CASE("tower schedule admits a certified point construction") {
  FieldSpec q3 = field_Qp(3);
  auto squares = [](long from, long count) {
    std::vector<long> r;
    for (long k = from; static_cast<long>(r.size()) < count; ++k)
      if (k % 3 != 0) r.push_back(k * k);
    return r;
  };
  Prop71Build b = prop71_schedule(squares(7, 12), 3, 1, 1, 0, Rational(1, 2), Rational(1, 2), 1,
                                  3);
  const long prec = 110;
  Elem alpha = one_elem(q3, 130);
  Elem center = deep_unit_power(q3, -1, prec);
  std::vector<ScalingMapSpec> maps;
  for (const BigInt& ex : b.exponents) maps.push_back(make_power_map(alpha, ex, center));

  ConstructedPoint cp = construct_point(maps, b.schedule, Disk{center, 1}, prec, 8);
  CHECK(cp.cert.pass);
  CHECK(cp.cert.rows.size() == 3);
  for (size_t i = 0; i < cp.cert.rows.size(); ++i) {
    Elem y = integral_part(pow_elem(cp.x, b.exponents[i]));
    long H = to_long(b.schedule.Hs[i]);
    REQUIRE(y.abs_prec >= H);
    bool vanishes = y.zero ? y.abs_prec >= H : y.v >= H;
    CHECK(vanishes);
  }
}

TEST_CASE("widening any constraint never raises the dimension estimate") {
  MoranSchedule base = prop61_schedule(3, 1, 1, 6, 40);
  Rational d0 = gamma_dim(base, 40).liminf_estimate;
  std::mt19937_64 rng(5);
  int tried = 0;
  for (int it = 0; it < 200 && tried < 100; ++it) {
    MoranSchedule s = base;
    size_t idx = rng() % s.Hs.size();
    if (idx + 1 < s.lambdas.size() &&
        s.lambdas[idx + 1] - s.lambdas[idx] < s.Hs[idx] + 1)
      continue;
    s.Hs[idx] += 1;
    validate_schedule(s);
    ++tried;
    CHECK(gamma_dim(s, 40).liminf_estimate <= d0);
  }
  CHECK(tried == 100);
}

TEST_CASE("schedules and certificates serialize losslessly") {
  FieldSpec q3 = field_Qp(3);
  MoranSchedule s = prop61_schedule(3, 1, 1, 6, 5);
  s.targets.kind = TargetGen::Kind::list;
  s.targets.list = {from_rational(q3, Rational(1, 2), 10), one_elem(q3, 10),
                    from_rational(q3, Rational(4, 5), 10), make_zero(q3, 10), one_elem(q3, 10)};

  MoranSchedule back = schedule_from_json(schedule_to_json(s));
  CHECK(back.H0 == s.H0);
  REQUIRE(back.lambdas.size() == s.lambdas.size());
  for (size_t i = 0; i < s.lambdas.size(); ++i) {
    CHECK(back.lambdas[i] == s.lambdas[i]);
    CHECK(back.Hs[i] == s.Hs[i]);
  }
  CHECK(back.targets.kind == TargetGen::Kind::list);
  REQUIRE(back.targets.list.size() == 5);
  for (size_t i = 0; i < 5; ++i) CHECK(equals(back.targets.list[i], s.targets.list[i]));
  REQUIRE(back.limit.has_value());
  CHECK(*back.limit == Rational(8, 9));

  // random-target round trip keeps the seed
  MoranSchedule r = affine_schedule(2, 0, 1, 0, 3);
  r.targets.kind = TargetGen::Kind::random;
  r.targets.seed = 424242;
  MoranSchedule r2 = schedule_from_json(schedule_to_json(r));
  CHECK(r2.targets.kind == TargetGen::Kind::random);
  CHECK(r2.targets.seed == 424242);

  MembershipCertificate cert;
  cert.pass = true;
  cert.horizon = 40;
  cert.rows = {{1, 5, 3, true}, {2, 9, 9, true}};
  Json j = certificate_to_json(cert);
  CHECK(j["pass"] == true);
  CHECK(j["horizon"] == 40);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["n"] == 1);
  CHECK(j["rows"][0]["achieved"] == 5);
  CHECK(j["rows"][1]["required"] == 9);
}

TEST_CASE("textual depth rules parse into schedules") {
  MoranSchedule s = schedule_from_rules("2n+1", "1", 0, 5);
  REQUIRE(s.lambdas.size() == 5);
  CHECK(s.lambdas[0] == BigInt(3));
  CHECK(s.lambdas[4] == BigInt(11));
  CHECK(s.Hs[2] == BigInt(1));
  REQUIRE(s.limit.has_value());
  CHECK(*s.limit == Rational(1, 2));

  MoranSchedule t = schedule_from_rules("n", "0", 0, 4);
  CHECK(t.lambdas[3] == BigInt(4));
  CHECK(*t.limit == Rational(1));

  MoranSchedule u = schedule_from_rules("3 * n - 2", "1", 1, 4);
  CHECK(u.lambdas[0] == BigInt(1));
  CHECK(u.lambdas[1] == BigInt(4));

  CHECK_THROWS_AS((void)schedule_from_rules("5", "1", 0, 3), error);
  CHECK_THROWS_AS((void)schedule_from_rules("n", "2", 0, 3), error);  // gap below width
  CHECK_THROWS_AS((void)schedule_from_rules("xn+q", "1", 0, 3), error);
}
