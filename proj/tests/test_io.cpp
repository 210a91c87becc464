#include <doctest.h>

#include "nak/io.hpp"

using namespace nak;

TEST_CASE("canonical text format round-trips") {
  auto q5 = field_Qp(5);
  Elem x = from_rational(q5, 86, 5, 3);
  CHECK(format_elem(x) == "Qp{p=5; v=-1; digits=1,2,3; prec=3}");
  Elem back = parse_elem(format_elem(x));
  CHECK(back.field == x.field);
  CHECK(back.v == x.v);
  CHECK(back.d == x.d);
  CHECK(back.abs_prec == x.abs_prec);

  auto f2 = field_Fpt(2);
  Elem y = make_elem(f2, 0, {1, 0, 1});
  CHECK(format_elem(y) == "Fpt{p=2; v=0; digits=1,0,1; prec=3}");
  CHECK(equals(parse_elem("Fpt{p=2; v=0; digits=1,0,1; prec=3}"), y));

  Elem z = make_zero(q5, 4);
  std::string zs = format_elem(z);
  CHECK(zs == "Qp{p=5; zero; prec=4}");
  Elem zb = parse_elem(zs);
  CHECK(zb.zero);
  CHECK(zb.abs_prec == 4);
}

TEST_CASE("parser rejects malformed elements") {
  CHECK_THROWS_AS(parse_elem("Zp{p=5; v=0; digits=1; prec=1}"), error);
  CHECK_THROWS_AS(parse_elem("Qp{p=5; v=0; digits=5; prec=1}"), error);    // digit >= p
  CHECK_THROWS_AS(parse_elem("Qp{p=5; v=0; digits=0,1; prec=2}"), error);  // leading zero
  CHECK_THROWS_AS(parse_elem("Qp{p=5; v=0; digits=1,2; prec=3}"), error);  // prec mismatch
  CHECK_THROWS_AS(parse_elem("Qp{p=5; v=0; digits=1,2; prec=2"), error);   // no brace
  CHECK_THROWS_AS(parse_elem("Qp{p=4; v=0; digits=1; prec=1}"), error);    // composite p
  CHECK_THROWS_AS(parse_elem("Qp{p=5; digits=1; prec=1}"), error);         // missing v
  CHECK_THROWS_AS(parse_elem("Qp{p=5; v=0; digits=1,x; prec=2}"), error);
}

TEST_CASE("json serialization round-trips and validates") {
  auto q3 = field_Qp(3);
  Elem x = make_elem(q3, -2, {2, 0, 1, 1});
  Json j = elem_to_json(x);
  CHECK(j["char"] == 0);
  CHECK(j["p"] == 3);
  CHECK(j["v"] == -2);
  CHECK(j["abs_prec"] == 2);
  Elem back = elem_from_json(j);
  CHECK(back.v == x.v);
  CHECK(back.d == x.d);
  CHECK(back.abs_prec == x.abs_prec);

  Elem z = make_zero(field_Fpt(2), 6);
  Json jz = elem_to_json(z);
  CHECK(jz["v"] == "inf");
  Elem zb = elem_from_json(jz);
  CHECK(zb.zero);
  CHECK(zb.abs_prec == 6);

  Json bad = j;
  bad["digits"] = {0, 1};
  CHECK_THROWS_AS(elem_from_json(bad), error);
  Json bad2 = j;
  bad2["abs_prec"] = 7;
  CHECK_THROWS_AS(elem_from_json(bad2), error);
}

TEST_CASE("rational json carries exact parts plus a decimal shadow") {
  Rational r(-53, 81);
  Json j = rational_to_json(r);
  CHECK(j["num"] == "-53");
  CHECK(j["den"] == "81");
  CHECK(j["dec"].get<double>() == doctest::Approx(-0.654321).epsilon(1e-6));
}

TEST_CASE("disk formatting") {
  auto q5 = field_Qp(5);
  Disk d{from_rational(q5, 3, 1, 4), 2};
  CHECK(format_disk(d) == "D(Qp{p=5; v=0; digits=3,0,0,0; prec=4}, m=2)");
  Json j = disk_to_json(d);
  CHECK(j["radius_exp"] == 2);
}
