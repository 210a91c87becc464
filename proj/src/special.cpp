#include "nak/special.hpp"

#include <sstream>

#include "nak/field.hpp"

namespace nak {

namespace {

Rational pnorm(long p, long v) {
  if (v >= 0) return Rational(1, pow_int(p, static_cast<unsigned long>(v)));
  return Rational(pow_int(p, static_cast<unsigned long>(-v)));
}

}  // namespace

void validate_pisot_spec(const PisotChabautySpec& spec) {
  require(is_small_prime(spec.p), errc::invalid_input, "p must be a small prime");
  require(spec.l >= 1 && spec.k > spec.l, errc::invalid_input, "need k > l >= 1");
}

Elem pisot_value(const PisotChabautySpec& spec, long prec) {
  validate_pisot_spec(spec);
  require(prec >= 4, errc::invalid_input, "precision too small");
  FieldSpec fs = field_Qp(spec.p);
  long rel = prec + spec.k + 8;

  BigInt disc = 1 - 4 * pow_int(spec.p, static_cast<unsigned long>(spec.k + spec.l));
  Elem s = hensel_sqrt(from_rational(fs, Rational(disc), rel));
  // Branch with the unit numerator -1 - s: s = 1 mod p (odd p) keeps
  // -1 - s = -2 mod p; for p = 2 take s = 1 mod 4 so that v(1 + s) = 1.
  if (spec.p == 2) {
    if (digit_at(s, 1) != 0) s = neg(s);
  } else {
    if (digit_at(s, 0) != 1) s = neg(s);
  }

  Elem num = neg(add(one_elem(fs, rel + spec.k + 4), s));
  Elem den = from_rational(fs, Rational(2 * pow_int(spec.p, static_cast<unsigned long>(spec.k))),
                           rel + 4);
  Elem xi = div(num, den);
  require(!xi.zero && xi.v == -spec.k, errc::construction_failure, "branch has the small norm");
  require(xi.rel_prec() >= prec, errc::insufficient_precision, "lost too many digits");
  xi = truncate_abs(xi, -spec.k + prec);

  // residual of the minimal polynomial vanishes to working precision
  Elem pk = from_rational(fs, Rational(pow_int(spec.p, static_cast<unsigned long>(spec.k))),
                          rel + 4);
  Elem pl = from_rational(fs, Rational(pow_int(spec.p, static_cast<unsigned long>(spec.l))),
                          rel + 4);
  Elem resid = add(add(mul(pk, mul(xi, xi)), xi), pl);
  require(resid.zero, errc::construction_failure, "minimal polynomial residual is nonzero");
  return xi;
}

TraceSequence trace_sequence(const PisotChabautySpec& spec, long n_max) {
  validate_pisot_spec(spec);
  require(n_max >= 2, errc::invalid_input, "need n_max >= 2");
  BigInt pk = pow_int(spec.p, static_cast<unsigned long>(spec.k));
  BigInt pl = pow_int(spec.p, static_cast<unsigned long>(spec.l));
  TraceSequence out;
  out.spec = spec;
  out.T.reserve(static_cast<size_t>(n_max) + 1);
  out.T.emplace_back(2);
  out.T.emplace_back(Rational(-1, pk));
  for (long n = 2; n <= n_max; ++n) {
    Rational next = (-out.T[static_cast<size_t>(n - 1)] - pl * out.T[static_cast<size_t>(n - 2)]) /
                    Rational(pk);
    next.canonicalize();
    // traces live in Z[1/p]
    BigInt den = next.get_den();
    remove_factor(den, BigInt(spec.p));
    require(den == 1, errc::construction_failure, "trace denominator is not a p-power");
    out.T.push_back(std::move(next));
  }
  return out;
}

bool trace_archimedean_bound(const PisotChabautySpec& spec, const Rational& Tn, long n) {
  require(n >= 0, errc::invalid_input, "negative index");
  BigInt num = Tn.get_num();
  if (num < 0) num = -num;
  BigInt lhs = num * num * pow_int(spec.p, static_cast<unsigned long>((spec.k - spec.l) * n));
  BigInt rhs = 4 * Tn.get_den() * Tn.get_den();
  return lhs <= rhs;
}

long pisot_n0(const PisotChabautySpec& spec) {
  validate_pisot_spec(spec);
  long n = 1;
  while (4 * pow_int(spec.p, static_cast<unsigned long>(spec.l * n)) >=
         pow_int(spec.p, static_cast<unsigned long>(spec.k * n)))
    ++n;
  return n;
}

LimitPointTable limit_point_table(const PisotChabautySpec& spec, long n_max, long prec) {
  validate_pisot_spec(spec);
  require(n_max >= 2, errc::invalid_input, "need n_max >= 2");
  const long guard = 8;
  require(prec >= (spec.k + spec.l) * n_max + guard, errc::insufficient_precision,
          "precision below the power-growth budget");

  FieldSpec fs = field_Qp(spec.p);
  Elem xi = pisot_value(spec, prec);
  TraceSequence tr = trace_sequence(spec, n_max);

  LimitPointTable out;
  out.spec = spec;
  out.n0 = pisot_n0(spec);

  Elem one = one_elem(fs, prec + 4);
  Elem neg_one = neg(one);
  Elem pw = one;
  for (long n = 1; n <= n_max; ++n) {
    pw = mul(pw, xi);
    LimitRow row;
    row.n = n;

    Elem ip = integral_part(pw);
    row.int_vanishes = ip.zero;
    row.norm_int = pnorm(spec.p, ip.zero ? ip.abs_prec : ip.v);
    Elem ip1 = add(ip, one);
    row.int_p1_vanishes = ip1.zero;
    row.norm_int_p1 = pnorm(spec.p, ip1.zero ? ip1.abs_prec : ip1.v);

    const Rational& Tn = tr.T[static_cast<size_t>(n)];
    Elem err = sub(pw, from_rational(fs, Tn, prec + 4));
    require(!err.zero, errc::insufficient_precision, "trace error vanished to precision");
    row.norm_err = pnorm(spec.p, err.v);

    row.floor_known = mpz_cmpabs(Tn.get_num().get_mpz_t(), Tn.get_den().get_mpz_t()) < 0;
    if (row.floor_known) {
      Elem ipT = integral_part(from_rational(fs, Tn, prec + 4));
      if (ipT.zero) {
        row.floor_trace = 0;
        row.floor_in_set = true;
      } else if (equals_mod(ipT, neg_one, ipT.abs_prec)) {
        row.floor_trace = -1;
        row.floor_in_set = true;
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

Json limit_table_to_json(const LimitPointTable& t) {
  Json j;
  j["p"] = t.spec.p;
  j["k"] = t.spec.k;
  j["l"] = t.spec.l;
  j["n0"] = t.n0;
  Json rows = Json::array();
  for (const LimitRow& r : t.rows) {
    Json row;
    row["n"] = r.n;
    row["norm_int"] = rational_to_json(r.norm_int);
    row["int_vanishes"] = r.int_vanishes;
    row["norm_int_plus1"] = rational_to_json(r.norm_int_p1);
    row["int_plus1_vanishes"] = r.int_p1_vanishes;
    row["norm_err"] = rational_to_json(r.norm_err);
    row["floor_known"] = r.floor_known;
    if (r.floor_known && r.floor_in_set) row["floor_trace"] = r.floor_trace;
    row["floor_in_set"] = r.floor_in_set;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string limit_table_csv(const LimitPointTable& t) {
  std::ostringstream os;
  os << "n,norm_int,norm_int_plus1,norm_err,floor_known,floor_trace,floor_in_set\n";
  for (const LimitRow& r : t.rows) {
    os << r.n << ',' << rat_str(r.norm_int) << ',' << rat_str(r.norm_int_p1) << ','
       << rat_str(r.norm_err) << ',' << (r.floor_known ? 1 : 0) << ','
       << (r.floor_known && r.floor_in_set ? r.floor_trace : 0) << ','
       << (r.floor_in_set ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace nak
