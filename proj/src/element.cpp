#include "nak/element.hpp"

#include <algorithm>
#include <cstdlib>

namespace nak {

namespace {

void require_same_field(const Elem& x, const Elem& y) {
  require(x.field == y.field, errc::invalid_input, "field spec mismatch");
}

long modinv_small(long a, long p) {
  long t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    long q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  require(r == 1, errc::division_by_zero, "non-invertible residue");
  return ((t % p) + p) % p;
}

std::vector<uint32_t> conv_trunc(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                                 long n, long p) {
  std::vector<uint32_t> out(static_cast<size_t>(n), 0);
  long alen = std::min<long>(static_cast<long>(a.size()), n);
  for (long i = 0; i < alen; ++i) {
    if (a[i] == 0) continue;
    uint64_t ai = a[i];
    long jmax = std::min<long>(static_cast<long>(b.size()), n - i);
    for (long j = 0; j < jmax; ++j) {
      out[i + j] = static_cast<uint32_t>((out[i + j] + ai * b[j]) % static_cast<uint64_t>(p));
    }
  }
  return out;
}

// Series division num/den mod t^n; den[0] != 0.
std::vector<uint32_t> div_series(const std::vector<uint32_t>& num, const std::vector<uint32_t>& den,
                                 long n, long p) {
  std::vector<uint32_t> out(static_cast<size_t>(n), 0);
  uint64_t d0inv = static_cast<uint64_t>(modinv_small(den[0], p));
  for (long j = 0; j < n; ++j) {
    uint64_t acc = j < static_cast<long>(num.size()) ? num[j] : 0;
    long imax = std::min<long>(static_cast<long>(den.size()) - 1, j);
    for (long i = 1; i <= imax; ++i) {
      uint64_t s = static_cast<uint64_t>(den[i]) * out[j - i] % static_cast<uint64_t>(p);
      acc = (acc + static_cast<uint64_t>(p) - s) % static_cast<uint64_t>(p);
    }
    out[j] = static_cast<uint32_t>(acc % static_cast<uint64_t>(p) * d0inv % static_cast<uint64_t>(p));
  }
  return out;
}

BigInt pow_p(long p, long e) {
  require(e >= 0, errc::invalid_input, "negative power");
  return pow_int(p, static_cast<unsigned long>(e));
}

}  // namespace

Elem make_zero(const FieldSpec& fs, long abs_prec) {
  validate_field(fs);
  Elem z;
  z.field = fs;
  z.zero = true;
  z.v = 0;
  z.abs_prec = abs_prec;
  return z;
}

Elem make_elem(const FieldSpec& fs, long v, std::vector<uint32_t> digits) {
  validate_field(fs);
  for (uint32_t dg : digits)
    require(dg < static_cast<uint32_t>(fs.p), errc::invalid_input, "digit out of range");
  long abs = v + static_cast<long>(digits.size());
  size_t lead = 0;
  while (lead < digits.size() && digits[lead] == 0) ++lead;
  if (lead == digits.size()) return make_zero(fs, abs);
  Elem x;
  x.field = fs;
  x.zero = false;
  x.v = v + static_cast<long>(lead);
  x.abs_prec = abs;
  x.d.assign(digits.begin() + static_cast<long>(lead), digits.end());
  return x;
}

Elem one_elem(const FieldSpec& fs, long rel_prec) {
  require(rel_prec >= 1, errc::invalid_input, "rel_prec must be positive");
  std::vector<uint32_t> d(static_cast<size_t>(rel_prec), 0);
  d[0] = 1;
  return make_elem(fs, 0, std::move(d));
}

uint32_t digit_at(const Elem& x, long i) {
  require(i < x.abs_prec, errc::insufficient_precision, "digit beyond known precision");
  if (x.zero || i < x.v) return 0;
  return x.d[static_cast<size_t>(i - x.v)];
}

std::optional<long> valuation(const Elem& x) {
  if (x.zero) return std::nullopt;
  return x.v;
}

std::optional<long> norm_exp(const Elem& x) {
  if (x.zero) return std::nullopt;
  return -x.v;
}

Rational norm_value(const Elem& x) {
  if (x.zero) return Rational(0);
  return pow_rat(x.field.q(), -x.v);
}

Elem truncate_abs(const Elem& x, long m) {
  require(m <= x.abs_prec, errc::invalid_input, "truncation beyond known precision");
  if (x.zero || x.v >= m) return make_zero(x.field, m);
  std::vector<uint32_t> d(x.d.begin(), x.d.begin() + (m - x.v));
  return make_elem(x.field, x.v, std::move(d));
}

Elem add(const Elem& x, const Elem& y) {
  require_same_field(x, y);
  long n = std::min(x.abs_prec, y.abs_prec);
  long lo = n;
  if (!x.zero) lo = std::min(lo, x.v);
  if (!y.zero) lo = std::min(lo, y.v);
  if (lo >= n) return make_zero(x.field, n);
  long p = x.field.p;
  std::vector<uint32_t> out(static_cast<size_t>(n - lo), 0);
  if (x.field.is_char_p()) {
    for (long i = lo; i < n; ++i)
      out[i - lo] = static_cast<uint32_t>((digit_at(x, i) + digit_at(y, i)) % p);
  } else {
    uint64_t carry = 0;
    for (long i = lo; i < n; ++i) {
      uint64_t s = digit_at(x, i) + static_cast<uint64_t>(digit_at(y, i)) + carry;
      out[i - lo] = static_cast<uint32_t>(s % static_cast<uint64_t>(p));
      carry = s / static_cast<uint64_t>(p);
    }
  }
  return make_elem(x.field, lo, std::move(out));
}

Elem neg(const Elem& x) {
  if (x.zero) return x;
  long p = x.field.p;
  std::vector<uint32_t> out(x.d.size());
  if (x.field.is_char_p()) {
    for (size_t i = 0; i < x.d.size(); ++i)
      out[i] = static_cast<uint32_t>((p - x.d[i]) % p);
  } else {
    // p's-complement of the digit string; leading digit stays nonzero.
    uint64_t borrow = 1;
    for (size_t i = 0; i < x.d.size(); ++i) {
      uint64_t s = static_cast<uint64_t>(p) - 1 - x.d[i] + borrow;
      out[i] = static_cast<uint32_t>(s % static_cast<uint64_t>(p));
      borrow = s / static_cast<uint64_t>(p);
    }
  }
  return make_elem(x.field, x.v, std::move(out));
}

Elem sub(const Elem& x, const Elem& y) { return add(x, neg(y)); }

BigInt unit_to_int(const Elem& x) {
  require(!x.field.is_char_p(), errc::invalid_input, "unit_to_int is characteristic-0 only");
  require(!x.zero, errc::invalid_input, "unit of the zero sentinel");
  BigInt u = 0;
  for (size_t i = x.d.size(); i-- > 0;) {
    u *= x.field.p;
    u += x.d[i];
  }
  return u;
}

std::vector<uint32_t> digits_from_int(BigInt u, long count, long p) {
  require(count >= 0 && u >= 0, errc::invalid_input, "bad digit extraction");
  std::vector<uint32_t> out(static_cast<size_t>(count), 0);
  for (long i = 0; i < count && u != 0; ++i) {
    out[i] = static_cast<uint32_t>(mpz_tdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(),
                                                 static_cast<unsigned long>(p)));
  }
  return out;
}

Elem mul(const Elem& x, const Elem& y) {
  require_same_field(x, y);
  if (x.zero || y.zero) {
    long n;
    if (x.zero && y.zero)
      n = x.abs_prec + y.abs_prec;
    else if (x.zero)
      n = x.abs_prec + y.v;
    else
      n = y.abs_prec + x.v;
    return make_zero(x.field, n);
  }
  long rel = std::min(x.rel_prec(), y.rel_prec());
  long v = x.v + y.v;
  if (x.field.is_char_p()) {
    auto out = conv_trunc(x.d, y.d, rel, x.field.p);
    return make_elem(x.field, v, std::move(out));
  }
  BigInt u = unit_to_int(x) * unit_to_int(y);
  BigInt m = pow_p(x.field.p, rel);
  u %= m;
  return make_elem(x.field, v, digits_from_int(u, rel, x.field.p));
}

Elem invert(const Elem& x) {
  require(!x.zero, errc::division_by_zero, "inverting the zero sentinel");
  long rel = x.rel_prec();
  if (x.field.is_char_p()) {
    std::vector<uint32_t> one{1};
    auto out = div_series(one, x.d, rel, x.field.p);
    return make_elem(x.field, -x.v, std::move(out));
  }
  BigInt m = pow_p(x.field.p, rel);
  BigInt u = unit_to_int(x);
  BigInt r;
  int ok = mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
  require(ok != 0, errc::division_by_zero, "unit not invertible");
  return make_elem(x.field, -x.v, digits_from_int(r, rel, x.field.p));
}

Elem div(const Elem& x, const Elem& y) { return mul(x, invert(y)); }

Elem pow_elem(const Elem& x, const BigInt& n) {
  if (n < 0) return pow_elem(invert(x), -n);
  if (n == 0) return one_elem(x.field, x.zero ? std::max(1L, x.abs_prec) : x.rel_prec());
  if (x.zero) {
    BigInt np = n * BigInt(x.abs_prec);
    return make_zero(x.field, to_long(np));
  }
  BigInt vv = n * BigInt(x.v);
  long v = to_long(vv);
  long rel = x.rel_prec();
  if (!x.field.is_char_p()) {
    BigInt m = pow_p(x.field.p, rel);
    BigInt r;
    mpz_powm(r.get_mpz_t(), unit_to_int(x).get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    return make_elem(x.field, v, digits_from_int(r, rel, x.field.p));
  }
  std::vector<uint32_t> acc{1};
  acc.resize(static_cast<size_t>(rel), 0);
  std::vector<uint32_t> base = x.d;
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    acc = conv_trunc(acc, acc, rel, x.field.p);
    if (mpz_tstbit(n.get_mpz_t(), i)) acc = conv_trunc(acc, base, rel, x.field.p);
  }
  return make_elem(x.field, v, std::move(acc));
}

Elem shift(const Elem& x, long k) {
  Elem y = x;
  y.v += k;
  y.abs_prec += k;
  return y;
}

Elem integral_part(const Elem& x) {
  require(x.abs_prec >= 0, errc::insufficient_precision,
          "integral part needs the fractional digits resolved");
  if (x.zero || x.v >= 0) return x;
  std::vector<uint32_t> d(x.d.begin() + (0 - x.v), x.d.end());
  return make_elem(x.field, 0, std::move(d));
}

Elem fractional_part(const Elem& x) {
  if (x.zero) return x;
  long cut = std::min(x.abs_prec, 0L);
  long ext = std::max(x.abs_prec, 0L);
  if (x.v >= cut) return make_zero(x.field, ext);
  std::vector<uint32_t> d(x.d.begin(), x.d.begin() + (cut - x.v));
  // Digits in [0, abs_prec) of a fractional part are zero by definition, so
  // they may be claimed; digits in [abs_prec, 0) may not.
  d.resize(static_cast<size_t>((cut - x.v) + ext), 0);
  return make_elem(x.field, x.v, std::move(d));
}

bool equals(const Elem& x, const Elem& y) {
  require_same_field(x, y);
  long m = std::min(x.abs_prec, y.abs_prec);
  Elem a = truncate_abs(x, m), b = truncate_abs(y, m);
  return a.zero == b.zero && (a.zero || (a.v == b.v && a.d == b.d));
}

bool equals_mod(const Elem& x, const Elem& y, long m) {
  require_same_field(x, y);
  require(x.abs_prec >= m && y.abs_prec >= m, errc::insufficient_precision,
          "comparison beyond known precision");
  Elem a = truncate_abs(x, m), b = truncate_abs(y, m);
  return a.zero == b.zero && (a.zero || (a.v == b.v && a.d == b.d));
}

Elem from_rational(const FieldSpec& fs, const BigInt& num, const BigInt& den, long rel_prec) {
  validate_field(fs);
  require(den != 0, errc::division_by_zero, "zero denominator");
  require(rel_prec >= 1, errc::invalid_input, "rel_prec must be positive");
  if (num == 0) return make_zero(fs, rel_prec);
  long p = fs.p;
  if (fs.is_char_p()) {
    // Integers land in the prime field.
    BigInt dn = den % p;
    require(dn != 0, errc::division_by_zero, "denominator divisible by p");
    BigInt nm = num % p;
    if (nm < 0) nm += p;
    if (dn < 0) dn += p;
    long c = to_long(nm) * modinv_small(to_long(dn), p) % p;
    std::vector<uint32_t> d(static_cast<size_t>(rel_prec), 0);
    d[0] = static_cast<uint32_t>(c);
    return make_elem(fs, 0, std::move(d));
  }
  BigInt n = num, dd = den;
  long a = static_cast<long>(remove_factor(n, BigInt(p)));
  long b = static_cast<long>(remove_factor(dd, BigInt(p)));
  long v = a - b;
  BigInt m = pow_p(p, rel_prec);
  BigInt dinv;
  int ok = mpz_invert(dinv.get_mpz_t(), dd.get_mpz_t(), m.get_mpz_t());
  require(ok != 0, errc::division_by_zero, "denominator not invertible");
  BigInt u = n * dinv % m;
  if (u < 0) u += m;
  return make_elem(fs, v, digits_from_int(u, rel_prec, p));
}

Elem from_rational(const FieldSpec& fs, const Rational& r, long rel_prec) {
  return from_rational(fs, r.get_num(), r.get_den(), rel_prec);
}

Elem from_poly(const FieldSpec& fs, const std::vector<uint32_t>& num,
               const std::vector<uint32_t>& den, long rel_prec) {
  validate_field(fs);
  require(fs.is_char_p(), errc::invalid_input, "from_poly needs a characteristic-p field");
  require(rel_prec >= 1, errc::invalid_input, "rel_prec must be positive");
  auto ordof = [&](const std::vector<uint32_t>& c) -> long {
    for (size_t i = 0; i < c.size(); ++i) {
      require(c[i] < static_cast<uint32_t>(fs.p), errc::invalid_input, "coefficient out of range");
      if (c[i] != 0) return static_cast<long>(i);
    }
    return -1;
  };
  long on = ordof(num), od = ordof(den);
  require(od >= 0, errc::division_by_zero, "zero denominator polynomial");
  if (on < 0) return make_zero(fs, rel_prec);
  std::vector<uint32_t> n2(num.begin() + on, num.end());
  std::vector<uint32_t> d2(den.begin() + od, den.end());
  auto out = div_series(n2, d2, rel_prec, fs.p);
  return make_elem(fs, on - od, std::move(out));
}

Rational to_rational(const Elem& x) {
  require(!x.field.is_char_p(), errc::invalid_input, "to_rational is characteristic-0 only");
  if (x.zero) return Rational(0);
  Rational r(unit_to_int(x));
  return r * pow_rat(x.field.p, x.v);
}

Elem hensel_sqrt(const Elem& x, std::optional<uint32_t> branch_hint) {
  require(!x.zero, errc::invalid_input, "square root of the zero sentinel");
  const FieldSpec& fs = x.field;
  long p = fs.p;
  require(x.v % 2 == 0, errc::no_square_root, "odd valuation");
  long vh = x.v / 2;
  long rel = x.rel_prec();

  if (fs.is_char_p() && p == 2) {
    // Squaring is the Frobenius: a root exists iff odd-offset digits vanish.
    for (size_t i = 1; i < x.d.size(); i += 2)
      require(x.d[i] == 0, errc::no_square_root, "odd-index coefficient present");
    std::vector<uint32_t> out((x.d.size() + 1) / 2);
    for (size_t i = 0; i < out.size(); ++i) out[i] = x.d[2 * i];
    if (branch_hint) require(*branch_hint == out[0], errc::invalid_input, "branch hint matches no root");
    return make_elem(fs, vh, std::move(out));
  }

  if (p != 2) {
    // Brute-force the residue root, then Newton-lift.
    long u0 = x.d[0];
    long r0 = 0;
    for (long c = 1; c < p; ++c)
      if (c * c % p == static_cast<long>(u0)) {
        r0 = c;
        break;
      }
    require(r0 != 0, errc::no_square_root, "unit is a non-residue");
    long inv2 = modinv_small(2, p);
    Elem root;
    if (fs.is_char_p()) {
      std::vector<uint32_t> r{static_cast<uint32_t>(r0)};
      long have = 1;
      while (have < rel) {
        long want = std::min(rel, 2 * have);
        r.resize(static_cast<size_t>(want), 0);
        auto q = div_series(x.d, r, want, p);
        for (long i = 0; i < want; ++i)
          q[i] = static_cast<uint32_t>((static_cast<uint64_t>(q[i]) + r[i]) % static_cast<uint64_t>(p) *
                                       static_cast<uint64_t>(inv2) % static_cast<uint64_t>(p));
        r = std::move(q);
        have = want;
      }
      root = make_elem(fs, vh, std::move(r));
    } else {
      BigInt u = unit_to_int(x);
      BigInt r(r0);
      long have = 1;
      while (have < rel) {
        long want = std::min(rel, 2 * have);
        BigInt m = pow_p(p, want);
        BigInt rinv, inv2m;
        mpz_invert(rinv.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
        mpz_invert(inv2m.get_mpz_t(), BigInt(2).get_mpz_t(), m.get_mpz_t());
        r = (r + u % m * rinv) % m * inv2m % m;
        have = want;
      }
      root = make_elem(fs, vh, digits_from_int(r, rel, p));
    }
    Elem other = neg(root);
    // Canonical branch: smaller leading digit.
    Elem canon = root.d[0] <= other.d[0] ? root : other;
    if (!branch_hint) return canon;
    if (*branch_hint == root.d[0]) return root;
    if (*branch_hint == other.d[0]) return other;
    fail(errc::invalid_input, "branch hint matches no root");
  }

  // p = 2, characteristic 0. Roots exist iff the unit is 1 mod 8; the four
  // lifts mod 2^rel collapse to two field roots known mod 2^{rel-1}.
  require(rel >= 3, errc::insufficient_precision, "need the unit mod 8");
  BigInt u = unit_to_int(x);
  require(u % 8 == 1, errc::no_square_root, "unit not 1 mod 8");
  BigInt r(1);
  long m = 2;
  while (m + 1 < rel) {
    BigInt diff = u - r * r;
    // diff divisible by 2^{m+1}; its next bit decides the lift.
    if (mpz_tstbit(diff.get_mpz_t(), static_cast<mp_bitcnt_t>(m + 1))) {
      BigInt bit;
      mpz_setbit(bit.get_mpz_t(), static_cast<mp_bitcnt_t>(m));
      r += bit;
    }
    ++m;
  }
  long relr = rel - 1;
  BigInt mod = pow_p(2, relr);
  BigInt a = r % mod;
  BigInt b = (mod - a) % mod;
  BigInt canon_u = std::min(a, b);
  if (branch_hint) require(*branch_hint == 1, errc::invalid_input, "branch hint matches no root");
  return make_elem(fs, vh, digits_from_int(canon_u, relr, 2));
}

bool disk_contains(const Disk& d, const Elem& x) {
  require(d.center.abs_prec >= d.radius_exp, errc::invalid_input, "disk center under-resolved");
  return equals_mod(x, d.center, d.radius_exp);
}

std::vector<Disk> disk_sons(const Disk& d) {
  require(d.center.abs_prec >= d.radius_exp, errc::invalid_input, "disk center under-resolved");
  long m = d.radius_exp;
  Elem base = truncate_abs(d.center, m);
  std::vector<Disk> out;
  for (long j = 0; j < d.field().p; ++j) {
    std::vector<uint32_t> digits;
    long v0;
    if (base.zero) {
      v0 = m;
      digits = {static_cast<uint32_t>(j)};
    } else {
      v0 = base.v;
      digits = base.d;
      digits.push_back(static_cast<uint32_t>(j));
    }
    out.push_back(Disk{make_elem(d.field(), v0, std::move(digits)), m + 1});
  }
  return out;
}

uint32_t uniform_digit(std::mt19937_64& rng, long p) {
  uint64_t pp = static_cast<uint64_t>(p);
  uint64_t lim = UINT64_MAX - UINT64_MAX % pp;
  uint64_t z;
  do {
    z = rng();
  } while (z >= lim);
  return static_cast<uint32_t>(z % pp);
}

Elem random_element(const Disk& d, std::mt19937_64& rng, long target_abs_prec) {
  require(target_abs_prec >= d.radius_exp, errc::invalid_input,
          "target precision below disk radius exponent");
  require(d.center.abs_prec >= d.radius_exp, errc::invalid_input, "disk center under-resolved");
  long m = d.radius_exp;
  Elem base = truncate_abs(d.center, m);
  std::vector<uint32_t> digits;
  long v0;
  if (base.zero) {
    v0 = m;
  } else {
    v0 = base.v;
    digits = base.d;
  }
  for (long i = m; i < target_abs_prec; ++i) digits.push_back(uniform_digit(rng, d.field().p));
  return make_elem(d.field(), v0, std::move(digits));
}

}  // namespace nak
