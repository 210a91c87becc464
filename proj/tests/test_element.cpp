#include <doctest.h>

#include <random>

#include "nak/element.hpp"
#include "oracles.hpp"

using namespace nak;

namespace {

Elem rand_nonzero(const FieldSpec& fs, std::mt19937_64& rng, long v_lo, long v_hi, long rel_lo,
                  long rel_hi) {
  std::uniform_int_distribution<long> vd(v_lo, v_hi), rd(rel_lo, rel_hi);
  long v = vd(rng), rel = rd(rng);
  std::vector<uint32_t> d(static_cast<size_t>(rel));
  for (auto& dg : d) dg = uniform_digit(rng, fs.p);
  d[0] = 1 + uniform_digit(rng, fs.p - 1);
  return make_elem(fs, v, std::move(d));
}

}  // namespace

TEST_CASE("construction keeps the digit invariants") {
  auto fs = field_Qp(5);
  Elem x = make_elem(fs, -1, {1, 2, 3, 0});
  CHECK(!x.zero);
  CHECK(x.v == -1);
  CHECK(x.abs_prec == 3);
  CHECK(x.v + static_cast<long>(x.d.size()) == x.abs_prec);
  CHECK(x.d.front() != 0);

  Elem y = make_elem(fs, 2, {0, 0, 4});
  CHECK(y.v == 4);
  CHECK(y.abs_prec == 5);
  CHECK(y.d == std::vector<uint32_t>{4});

  Elem z = make_elem(fs, 2, {0, 0, 0});
  CHECK(z.zero);
  CHECK(z.abs_prec == 5);

  CHECK_THROWS_AS(make_elem(fs, 0, {5}), error);
  CHECK_THROWS_AS(field_Qp(6), error);
  CHECK_THROWS_AS(field_Qp(1), error);
}

TEST_CASE("digit_at resolves known digits and rejects unknown ones") {
  auto fs = field_Qp(5);
  Elem x = make_elem(fs, -1, {1, 2, 3});
  CHECK(digit_at(x, -3) == 0);
  CHECK(digit_at(x, -1) == 1);
  CHECK(digit_at(x, 1) == 3);
  CHECK_THROWS_AS(digit_at(x, 2), error);
  Elem z = make_zero(fs, 4);
  CHECK(digit_at(z, 3) == 0);
  CHECK_THROWS_AS(digit_at(z, 4), error);
}

TEST_CASE("from_rational matches trial-digit long division") {
  auto fs = field_Qp(5);
  // Oracle: 86/5 = 5^{-1} * 86 with p not dividing 86.
  auto odg = oracle::rational_digits(86, 1, 5, 3);
  CHECK(odg == std::vector<uint32_t>{1, 2, 3});
  Elem x = from_rational(fs, 86, 5, 3);
  CHECK(x.v == -1);
  CHECK(x.d == odg);
  CHECK(x.abs_prec == 2);

  // -1 has the all-(p-1) expansion.
  Elem m1 = from_rational(fs, -1, 1, 4);
  CHECK(m1.v == 0);
  CHECK(m1.d == std::vector<uint32_t>{4, 4, 4, 4});

  // 1/3 by the same oracle.
  auto othird = oracle::rational_digits(1, 3, 5, 6);
  Elem third = from_rational(fs, 1, 3, 6);
  CHECK(third.v == 0);
  CHECK(third.d == othird);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    long num = static_cast<long>(rng() % 20000) - 10000;
    long den = static_cast<long>(rng() % 999) + 1;
    if (num == 0) num = 7;
    while (den % 5 == 0) ++den;
    long a = oracle::vp_loop(num, 5);
    Elem e = from_rational(fs, num, den, 8);
    CHECK(e.v == a);
    BigInt unum = BigInt(num) / pow_int(5, static_cast<unsigned long>(a));
    CHECK(e.d == oracle::rational_digits(unum, den, 5, 8));
  }
}

TEST_CASE("to_rational inverts from_rational modulo the precision") {
  auto fs = field_Qp(3);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 40; ++t) {
    long num = static_cast<long>(rng() % 5000) - 2500;
    long den = static_cast<long>(rng() % 200) + 1;
    if (num == 0) num = 1;
    while (den % 3 == 0) ++den;
    Elem e = from_rational(fs, num, den, 7);
    Rational diff = to_rational(e) - Rational(num, den);
    diff.canonicalize();
    if (diff != 0) {
      long vd = oracle::vp_loop(diff.get_num(), 3) - oracle::vp_loop(diff.get_den(), 3);
      CHECK(vd >= e.abs_prec);
    }
  }
}

TEST_CASE("addition carries in characteristic 0 and stays digitwise in characteristic p") {
  auto q5 = field_Qp(5);
  Elem two = from_rational(q5, 2, 1, 3);
  Elem three = from_rational(q5, 3, 1, 3);
  Elem five = add(two, three);
  CHECK(equals(five, from_rational(q5, 5, 1, 2)));
  CHECK(five.v == 1);
  CHECK(five.abs_prec == 3);

  auto f2 = field_Fpt(2);
  Elem a = make_elem(f2, 0, {1, 1});
  Elem s = add(a, a);
  CHECK(s.zero);
  CHECK(s.abs_prec == 2);

  auto f3 = field_Fpt(3);
  Elem b = make_elem(f3, 0, {2, 2, 1});
  Elem c = make_elem(f3, 0, {2, 1, 0});
  Elem d = add(b, c);
  CHECK(d.v == 0);
  CHECK(d.d == std::vector<uint32_t>{1, 0, 1});
}

TEST_CASE("additive precision is the minimum absolute precision") {
  auto fs = field_Qp(7);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    Elem x = rand_nonzero(fs, rng, -3, 3, 1, 9);
    Elem y = rand_nonzero(fs, rng, -3, 3, 1, 9);
    Elem s = add(x, y);
    CHECK(s.abs_prec == std::min(x.abs_prec, y.abs_prec));
    Elem back = sub(s, y);
    CHECK(equals(back, x));
    Elem cancel = add(x, neg(x));
    CHECK(cancel.zero);
    CHECK(cancel.abs_prec == x.abs_prec);
  }
}

TEST_CASE("multiplication shifts valuations and keeps relative precision") {
  auto fs = field_Qp(5);
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    Elem x = rand_nonzero(fs, rng, -4, 4, 2, 9);
    Elem y = rand_nonzero(fs, rng, -4, 4, 2, 9);
    Elem z = mul(x, y);
    CHECK(z.v == x.v + y.v);
    CHECK(z.rel_prec() == std::min(x.rel_prec(), y.rel_prec()));
    // Cross-check the digit string against exact rational arithmetic.
    Rational exact = to_rational(x) * to_rational(y);
    Elem expect = from_rational(fs, exact, z.rel_prec());
    CHECK(equals(z, expect));
  }
}

TEST_CASE("characteristic-p multiplication is carry-free convolution") {
  auto fs = field_Fpt(3);
  std::mt19937_64 rng(15);
  for (int t = 0; t < 50; ++t) {
    Elem x = rand_nonzero(fs, rng, -2, 2, 2, 7);
    Elem y = rand_nonzero(fs, rng, -2, 2, 2, 7);
    Elem z = mul(x, y);
    long rel = std::min(x.rel_prec(), y.rel_prec());
    CHECK(z.v == x.v + y.v);
    auto expect = oracle::conv(x.d, y.d, rel, 3);
    Elem w = make_elem(fs, x.v + y.v, expect);
    CHECK(equals(z, w));
  }
}

TEST_CASE("inversion and division undo multiplication") {
  for (FieldSpec fs : {field_Qp(5), field_Fpt(2), field_Fpt(3)}) {
    std::mt19937_64 rng(16);
    for (int t = 0; t < 30; ++t) {
      Elem x = rand_nonzero(fs, rng, -3, 3, 2, 8);
      Elem xi = invert(x);
      CHECK(xi.v == -x.v);
      Elem prod = mul(x, xi);
      CHECK(equals(prod, one_elem(fs, x.rel_prec())));
      Elem y = rand_nonzero(fs, rng, -3, 3, 2, 8);
      CHECK(equals(mul(div(x, y), y), x));
    }
  }
  CHECK_THROWS_AS(invert(make_zero(field_Qp(5), 3)), error);
}

TEST_CASE("powers agree with repeated multiplication and rational arithmetic") {
  auto fs = field_Qp(5);
  Elem x = from_rational(fs, 86, 5, 6);
  Elem x3 = pow_elem(x, 3);
  CHECK(equals(x3, mul(x, mul(x, x))));
  Rational exact = Rational(86, 5) * Rational(86, 5) * Rational(86, 5);
  CHECK(equals(x3, from_rational(fs, exact, 6)));
  CHECK(equals(pow_elem(x, 0), one_elem(fs, 6)));
  CHECK(equals(pow_elem(x, -2), invert(mul(x, x))));

  auto f2 = field_Fpt(2);
  Elem y = make_elem(f2, -1, {1, 0, 1, 1, 0, 1});
  Elem y5 = pow_elem(y, 5);
  Elem acc = one_elem(f2, 6);
  for (int i = 0; i < 5; ++i) acc = mul(acc, y);
  CHECK(equals(y5, acc));
}

TEST_CASE("integral and fractional parts split the expansion at index zero") {
  auto fs = field_Qp(5);
  Elem x = from_rational(fs, 86, 5, 4);  // digits 1,2,3,0 from v = -1
  Elem ip = integral_part(x);
  CHECK(equals(ip, from_rational(fs, 17, 1, 3)));
  Elem fp = fractional_part(x);
  CHECK(equals(fp, from_rational(fs, 1, 5, 4)));
  CHECK(equals(add(ip, fp), x));

  Elem whole = from_rational(fs, 12, 1, 4);
  CHECK(equals(integral_part(whole), whole));
  CHECK(fractional_part(whole).zero);

  Elem deep = make_elem(fs, -5, {2, 1});  // abs_prec = -3 < 0
  CHECK_THROWS_AS(integral_part(deep), error);
  Elem fdeep = fractional_part(deep);
  CHECK(fdeep.abs_prec == -3);
}

TEST_CASE("equality compares digits up to the shared precision") {
  auto fs = field_Qp(3);
  Elem a = make_elem(fs, 0, {1, 2, 1, 0, 2});
  Elem b = make_elem(fs, 0, {1, 2, 1});
  Elem c = make_elem(fs, 0, {1, 2, 2});
  CHECK(equals(a, b));
  CHECK(!equals(a, c));
  CHECK(equals_mod(a, c, 2));
  CHECK(!equals_mod(a, c, 3));
  CHECK_THROWS_AS(equals_mod(b, c, 4), error);
  CHECK(equals(make_zero(fs, 2), make_elem(fs, 3, {1})));
  CHECK(!equals(make_zero(fs, 4), make_elem(fs, 3, {1})));
}

TEST_CASE("shift multiplies by powers of the uniformizer exactly") {
  auto fs = field_Fpt(2);
  Elem x = make_elem(fs, -1, {1, 1});
  Elem y = shift(x, 3);
  CHECK(y.v == 2);
  CHECK(y.abs_prec == x.abs_prec + 3);
  CHECK(equals(x, shift(y, -3)));
}

TEST_CASE("from_poly divides Laurent polynomials") {
  auto fs = field_Fpt(2);
  Elem geo = from_poly(fs, {1}, {1, 1}, 5);
  CHECK(geo.v == 0);
  CHECK(geo.d == std::vector<uint32_t>{1, 1, 1, 1, 1});
  // Round-trip: result times denominator recovers the numerator.
  auto prod = oracle::conv(geo.d, {1, 1}, 5, 2);
  CHECK(prod == std::vector<uint32_t>{1, 0, 0, 0, 0});

  auto f3 = field_Fpt(3);
  Elem r = from_poly(f3, {0, 0, 2, 1}, {0, 1, 2}, 6);
  CHECK(r.v == 1);
  auto back = oracle::conv(r.d, {1, 2}, 6, 3);
  CHECK(back == std::vector<uint32_t>{2, 1, 0, 0, 0, 0});

  CHECK_THROWS_AS(from_poly(f3, {1}, {0, 0}, 4), error);
  CHECK_THROWS_AS(from_poly(field_Qp(3), {1}, {1}, 4), error);
}

TEST_CASE("hensel_sqrt lifts odd-p square roots and keeps relative precision") {
  auto fs = field_Qp(5);
  Elem six = from_rational(fs, 6, 1, 6);
  Elem r = hensel_sqrt(six);
  CHECK(r.rel_prec() == 6);
  CHECK(r.d[0] == 1);  // canonical branch: smaller leading digit
  CHECK(equals(mul(r, r), six));
  // Frozen: the canonical root of 6 is 16 mod 25.
  CHECK(equals_mod(r, from_rational(fs, 16, 1, 2), 2));

  Elem other = hensel_sqrt(six, 4);
  CHECK(other.d[0] == 4);
  CHECK(equals(other, neg(r)));
  CHECK_THROWS_AS(hensel_sqrt(six, 2), error);

  CHECK_THROWS_AS(hensel_sqrt(from_rational(fs, 2, 1, 4)), error);   // non-residue
  CHECK_THROWS_AS(hensel_sqrt(from_rational(fs, 10, 1, 4)), error);  // odd valuation

  std::mt19937_64 rng(17);
  for (int t = 0; t < 25; ++t) {
    Elem x = rand_nonzero(fs, rng, -2, 2, 3, 8);
    Elem sq = mul(x, x);
    Elem root = hensel_sqrt(sq);
    CHECK(root.rel_prec() == sq.rel_prec());
    CHECK(equals(mul(root, root), sq));
    bool matches = equals(root, x) || equals(root, neg(x));
    CHECK(matches);
  }
}

TEST_CASE("hensel_sqrt at p=2 needs 1 mod 8 and loses one digit") {
  auto fs = field_Qp(2);
  Elem u = from_rational(fs, 17, 1, 8);
  Elem r = hensel_sqrt(u);
  CHECK(r.rel_prec() == 7);
  CHECK(equals_mod(mul(r, r), truncate_abs(u, 7), 7));
  // Frozen: canonical root of 17 is 7 mod 16 (the four lifts mod 32 are
  // 7, 9, 23, 25; classes mod 16 are {7, 9}; 7 is numerically smaller).
  CHECK(unit_to_int(truncate_abs(r, 4)) == 7);

  CHECK(equals(hensel_sqrt(u, 1), r));
  CHECK_THROWS_AS(hensel_sqrt(u, 0), error);
  CHECK_THROWS_AS(hensel_sqrt(from_rational(fs, 5, 1, 6)), error);  // 5 mod 8
  CHECK_THROWS_AS(hensel_sqrt(from_rational(fs, 17, 1, 2)), error); // too shallow

  std::mt19937_64 rng(18);
  for (int t = 0; t < 25; ++t) {
    Elem x = rand_nonzero(fs, rng, -2, 2, 4, 9);
    Elem sq = mul(x, x);
    Elem root = hensel_sqrt(sq);
    CHECK(root.rel_prec() == sq.rel_prec() - 1);
    CHECK(equals(mul(root, root), sq));
  }
}

TEST_CASE("hensel_sqrt in F_2((t)) is the inverse Frobenius") {
  auto fs = field_Fpt(2);
  Elem x = make_elem(fs, 0, {1, 0, 1});  // 1 + t^2
  Elem r = hensel_sqrt(x);
  CHECK(r.v == 0);
  CHECK(r.d == std::vector<uint32_t>{1, 1});
  CHECK_THROWS_AS(hensel_sqrt(make_elem(fs, 0, {1, 1})), error);
  Elem shifted = make_elem(fs, -2, {1, 0, 0, 0, 1});
  Elem rs = hensel_sqrt(shifted);
  CHECK(rs.v == -1);
  CHECK(equals_mod(mul(rs, rs), shifted, shifted.abs_prec / 2));
}

TEST_CASE("disk membership and sons") {
  auto fs = field_Qp(3);
  Elem c = from_rational(fs, 4, 1, 5);
  Disk d{c, 2};
  CHECK(disk_contains(d, from_rational(fs, 13, 1, 3)));   // 13 = 4 + 9
  CHECK(!disk_contains(d, from_rational(fs, 5, 1, 3)));
  CHECK_THROWS_AS(disk_contains(d, from_rational(fs, 4, 1, 1)), error);

  auto sons = disk_sons(d);
  CHECK(sons.size() == 3);
  for (const auto& s : sons) {
    CHECK(s.radius_exp == 3);
    CHECK(disk_contains(d, s.center));
  }
  CHECK(disk_contains(sons[0], c));
  for (size_t i = 0; i < sons.size(); ++i)
    for (size_t j = i + 1; j < sons.size(); ++j)
      CHECK(!equals_mod(sons[i].center, sons[j].center, 3));
}

TEST_CASE("random_element is deterministic per seed and uniform beyond the prefix") {
  auto fs = field_Fpt(2);
  Disk d{make_elem(fs, 0, {1, 0, 1}), 3};
  std::mt19937_64 r1(99), r2(99), r3(100);
  Elem a = random_element(d, r1, 10);
  Elem b = random_element(d, r2, 10);
  Elem c = random_element(d, r3, 10);
  CHECK(equals(a, b));
  CHECK(a.abs_prec == 10);
  CHECK(disk_contains(d, a));
  CHECK(disk_contains(d, c));
  CHECK_THROWS_AS(random_element(d, r1, 2), error);

  // Digit frequencies over 1e5 draws stay within 4/sqrt(1e5) of 1/q.
  auto q5 = field_Qp(5);
  Disk unit{make_zero(q5, 0), 0};
  std::mt19937_64 rng(4242);
  const long N = 100000;
  std::vector<long> counts(5, 0);
  for (long i = 0; i < N; ++i) {
    Elem x = random_element(unit, rng, 1);
    ++counts[digit_at(x, 0)];
  }
  double tol = 4.0 / std::sqrt(static_cast<double>(N));
  for (long c5 = 0; c5 < 5; ++c5) {
    double freq = static_cast<double>(counts[c5]) / N;
    CHECK(std::abs(freq - 0.2) < tol);
  }
}

TEST_CASE("zero sentinel arithmetic tracks the precision bound") {
  auto fs = field_Qp(5);
  Elem z3 = make_zero(fs, 3);
  Elem x = make_elem(fs, 1, {2, 0, 1});  // abs_prec 4
  Elem s = add(z3, x);
  CHECK(!s.zero);
  CHECK(s.abs_prec == 3);
  Elem m = mul(z3, x);
  CHECK(m.zero);
  CHECK(m.abs_prec == 4);  // 3 + v(x)
  Elem mz = mul(z3, make_zero(fs, 2));
  CHECK(mz.abs_prec == 5);
  CHECK(valuation(z3) == std::nullopt);
  CHECK(norm_exp(z3) == std::nullopt);
  CHECK(norm_value(z3) == 0);
  CHECK(norm_value(x) == Rational(1, 5));
}
