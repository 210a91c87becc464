#include "nak/orbit.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>

#include <gmp.h>
#include <gmpxx.h>

#include "nak/error.hpp"
#include "nak/measures.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define NAK_X86 1
#else
#define NAK_X86 0
#endif

namespace nak {

namespace {

bool filter_pass(long n, OrbitFilter f, long K, long p) {
  switch (f) {
    case OrbitFilter::all:
      return true;
    case OrbitFilter::coprime:
      return n % p != 0;
    case OrbitFilter::exact_power:
    case OrbitFilter::not_power: {
      long v = 0, m = n;
      while (v <= K && m % p == 0) {
        m /= p;
        ++v;
      }
      return f == OrbitFilter::exact_power ? v == K : v < K;
    }
  }
  return true;
}

// Range bound that surely contains `count` filtered exponents.
long plan_n_stop_impl(const OrbitSpec& s, long p) {
  if (s.n_max > 0) return s.n_max;
  require(s.count > 0, errc::invalid_input, "orbit needs count or n_max");
  switch (s.filter) {
    case OrbitFilter::all:
      return s.count;
    case OrbitFilter::coprime:
      return s.count + s.count / (p - 1) + p + 2;
    case OrbitFilter::not_power:
      return 2 * s.count + p + 2;
    case OrbitFilter::exact_power: {
      long pk1 = 1;
      for (long i = 0; i <= s.K; ++i) {
        require(pk1 <= (1L << 40) / p, errc::too_large, "filter power too large");
        pk1 *= p;
      }
      require(s.count <= (1L << 40) / pk1, errc::too_large, "filter too sparse for count");
      return s.count / (p - 1) * pk1 + 2 * pk1 + 2;
    }
  }
  return s.count;
}

void validate(const Elem& A, const Elem& M, const OrbitSpec& s, long& pL) {
  require(A.field.characteristic == M.field.characteristic && A.field.p == M.field.p,
          errc::invalid_input, "orbit operands from different fields");
  require(!A.zero && !M.zero, errc::invalid_input, "orbit needs nonzero coefficient and base");
  require(s.level >= 1, errc::invalid_input, "level must be positive");
  require(s.count >= 0 && s.n_max >= 0, errc::invalid_input, "negative orbit bounds");
  require(s.count <= (1L << 40) && s.n_max <= (1L << 40), errc::too_large, "orbit too long");
  require(std::labs(A.v) <= (1L << 20) && std::labs(M.v) <= (1L << 20), errc::too_large,
          "valuation out of supported range");
  if (s.filter == OrbitFilter::exact_power || s.filter == OrbitFilter::not_power)
    require(s.K >= 1, errc::invalid_input, "filter needs K >= 1");
  pL = 1;
  for (long i = 0; i < s.level; ++i) {
    require(pL <= ((1L << 31) - 1) / A.field.p, errc::too_large, "level too deep for packed ids");
    pL *= A.field.p;
  }
}

// Digits at [beta, beta+L) packed base p when the term's valuation shift e is
// <= 0 (beta = -e); for 0 < e < L the cell keeps e leading zero digits.
long low_branch_id(unsigned long low_digits, long e, long p) {
  long pe = 1;
  for (long i = 0; i < e; ++i) pe *= p;
  return static_cast<long>(low_digits) * pe;
}

// ---- characteristic 0: fixed-modulus chain, block windows ------------------
//
// X = U_A * U_M^n reduced mod p^T for one fixed T above the highest window,
// so every digit of X below T is exact for the whole run (a modular chain
// never recovers digits above a cut, so the cut must clear the last window
// from the start). Windows are read from a narrow companion Y ~ floor(X /
// p^shift) that is rebased from X once per block of K terms; the digits Y
// drops below `shift` cost it at most a deficit of p^{DM*j} after j steps,
// which can reach a window only by rippling through the guard digits under
// it as one run of (p-1)s. That near-overflow state is detected exactly at
// each read and repaired by rebasing from X, so the ids are always exact.
OrbitCells orbit_char0(const Elem& A, const Elem& M, const OrbitSpec& s, long pL, long n_stop) {
  const unsigned long p = static_cast<unsigned long>(A.field.p);
  const long L = s.level;
  const long vA = A.v, vM = M.v;

  auto beta_of = [&](long n) {
    long e = vA + n * vM;
    return e < 0 ? -e : 0L;
  };
  const long beta_max = std::max(beta_of(1), beta_of(n_stop));
  const long T = beta_max + L + 4;
  long db = 1;
  while ((1ul << db) < p && db < 32) ++db;
  require(T <= (1L << 26) / db, errc::too_large, "orbit window height out of range");

  const long DM = static_cast<long>(M.d.size());
  mpz_class UM = 0, UA = 0;
  for (size_t i = M.d.size(); i-- > 0;) {
    UM *= p;
    UM += M.d[i];
  }
  for (size_t i = A.d.size(); i-- > 0;) {
    UA *= p;
    UA += A.d[i];
  }

  mpz_class PT, X, UK, Ps, PW, Pd, Pr, Y, Q, B, t1, t2;
  mpz_ui_pow_ui(PT.get_mpz_t(), p, static_cast<unsigned long>(T));
  X = UA * UM;  // term n = 1
  mpz_tdiv_r(X.get_mpz_t(), X.get_mpz_t(), PT.get_mpz_t());
  if (vM != 0) mpz_ui_pow_ui(Pr.get_mpz_t(), p, static_cast<unsigned long>(std::labs(vM)));

  // With vM >= 0 the window never climbs, shift stays 0 and Y is exact, so
  // one block covers the run; a climbing window gets blocks of K terms.
  long K = n_stop;
  if (vM < 0) K = std::max(16L, std::min(256L, 65536 / std::max(1L, DM)));
  bool have_UK = false;

  OrbitCells out;
  long kept = 0;
  bool done = false;
  for (long n0 = 1; n0 <= n_stop && !done;) {
    const long last = std::min(n0 + K - 1, n_stop);
    const long b_lo = std::min(beta_of(n0), beta_of(last));
    const long b_hi = std::max(beta_of(n0), beta_of(last));
    const long shift = vM < 0 ? std::max(0L, b_lo - (DM * K + 2)) : 0L;
    const long W = b_hi + L + 2 - shift;
    mpz_ui_pow_ui(PW.get_mpz_t(), p, static_cast<unsigned long>(W));
    if (shift > 0) mpz_ui_pow_ui(Ps.get_mpz_t(), p, static_cast<unsigned long>(shift));

    auto rebase = [&](long j) {
      if (j == 0) {
        mpz_set(t2.get_mpz_t(), X.get_mpz_t());
      } else {
        mpz_powm_ui(t2.get_mpz_t(), UM.get_mpz_t(), static_cast<unsigned long>(j), PT.get_mpz_t());
        mpz_mul(t2.get_mpz_t(), t2.get_mpz_t(), X.get_mpz_t());
        mpz_tdiv_r(t2.get_mpz_t(), t2.get_mpz_t(), PT.get_mpz_t());
      }
      if (shift > 0) mpz_tdiv_q(t2.get_mpz_t(), t2.get_mpz_t(), Ps.get_mpz_t());
      mpz_tdiv_r(Y.get_mpz_t(), t2.get_mpz_t(), PW.get_mpz_t());
    };
    rebase(0);
    long c = 0;  // deficit of Y against floor(X/p^shift) is below p^c

    long d = beta_of(n0) - shift;
    mpz_ui_pow_ui(Pd.get_mpz_t(), p, static_cast<unsigned long>(d));

    for (long n = n0;; ++n) {
      long e = vA + n * vM;
      long id = 0;
      if (e <= 0) {
        mpz_tdiv_qr(Q.get_mpz_t(), B.get_mpz_t(), Y.get_mpz_t(), Pd.get_mpz_t());
        if (shift > 0 && c > 0 &&
            mpz_sizeinbase(B.get_mpz_t(), 2) + 1 >= mpz_sizeinbase(Pd.get_mpz_t(), 2)) {
          mpz_sub(t1.get_mpz_t(), Pd.get_mpz_t(), B.get_mpz_t());
          if (static_cast<long>(mpz_sizeinbase(t1.get_mpz_t(), 2)) <= db * c + 1) {
            mpz_ui_pow_ui(t2.get_mpz_t(), p, static_cast<unsigned long>(c));
            if (mpz_cmp(t1.get_mpz_t(), t2.get_mpz_t()) <= 0) {
              rebase(n - n0);
              c = 0;
              mpz_tdiv_qr(Q.get_mpz_t(), B.get_mpz_t(), Y.get_mpz_t(), Pd.get_mpz_t());
            }
          }
        }
        id = static_cast<long>(mpz_tdiv_ui(Q.get_mpz_t(), static_cast<unsigned long>(pL)));
      } else if (e < L) {
        unsigned long pLe = 1;
        for (long i = 0; i < L - e; ++i) pLe *= p;
        id = low_branch_id(mpz_tdiv_ui(Y.get_mpz_t(), pLe), e, A.field.p);
      }
      if (filter_pass(n, s.filter, s.K, A.field.p)) {
        out.ns.push_back(n);
        out.ids.push_back(id);
        if (s.count > 0 && ++kept == s.count) {
          done = true;
          break;
        }
      }
      if (n == last) break;
      mpz_mul(Y.get_mpz_t(), Y.get_mpz_t(), UM.get_mpz_t());
      mpz_tdiv_r(Y.get_mpz_t(), Y.get_mpz_t(), PW.get_mpz_t());
      c += DM;
      long d2 = beta_of(n + 1) - shift;
      if (d2 > d && d2 - d == -vM) {
        mpz_mul(Pd.get_mpz_t(), Pd.get_mpz_t(), Pr.get_mpz_t());
      } else if (d2 < d && d - d2 == vM) {
        mpz_divexact(Pd.get_mpz_t(), Pd.get_mpz_t(), Pr.get_mpz_t());
      } else if (d2 != d) {
        mpz_ui_pow_ui(Pd.get_mpz_t(), p, static_cast<unsigned long>(d2));
      }
      d = d2;
    }
    if (done || last == n_stop) break;
    if (!have_UK) {
      mpz_powm_ui(UK.get_mpz_t(), UM.get_mpz_t(), static_cast<unsigned long>(K), PT.get_mpz_t());
      have_UK = true;
    }
    mpz_mul(X.get_mpz_t(), X.get_mpz_t(), UK.get_mpz_t());
    mpz_tdiv_r(X.get_mpz_t(), X.get_mpz_t(), PT.get_mpz_t());
    n0 += K;
  }
  return out;
}

// ---- characteristic 2: carryless word chain --------------------------------

#if NAK_X86
__attribute__((target("pclmul,sse4.1"))) inline void clmul64(uint64_t a, uint64_t b, uint64_t& lo,
                                                             uint64_t& hi) {
  __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                   _mm_cvtsi64_si128(static_cast<long long>(b)), 0x00);
  lo = static_cast<uint64_t>(_mm_cvtsi128_si64(r));
  hi = static_cast<uint64_t>(_mm_extract_epi64(r, 1));
}

bool cpu_clmul() {
  return __builtin_cpu_supports("pclmul") && __builtin_cpu_supports("sse4.1");
}
#else
bool cpu_clmul() { return false; }
#endif

#if NAK_X86
// Coefficient i of the polynomial lives in bit i % 64 of word i / 64. The
// chain stays truncated mod t^T for one fixed T above the highest window
// (coefficients above a cut never come back), so every window read, a mask
// and shift, is exact.
__attribute__((target("pclmul,sse4.1"))) OrbitCells orbit_char2(const Elem& A, const Elem& M,
                                                                const OrbitSpec& s, long n_stop) {
  const long L = s.level;
  const long vA = A.v, vM = M.v;

  long beta_max = std::max({0L, -(vA + vM), -(vA + n_stop * vM)});
  const long T = beta_max + L + 4;
  require(T <= (1L << 26), errc::too_large, "orbit window height out of range");
  size_t cap = static_cast<size_t>(T) / 64 + M.d.size() / 64 + 4;

  std::vector<uint64_t> UM(M.d.size() / 64 + 1, 0), X(cap + 2, 0), Y(cap + 2, 0);
  for (size_t i = 0; i < M.d.size(); ++i)
    if (M.d[i]) UM[i / 64] |= 1ull << (i % 64);
  size_t uw = UM.size();
  while (uw > 1 && UM[uw - 1] == 0) --uw;

  std::vector<uint64_t> UA(A.d.size() / 64 + 1, 0);
  for (size_t i = 0; i < A.d.size(); ++i)
    if (A.d[i]) UA[i / 64] |= 1ull << (i % 64);
  size_t aw = UA.size();
  while (aw > 1 && UA[aw - 1] == 0) --aw;

  size_t xw = 0;
  auto mul_into = [&](const std::vector<uint64_t>& src, size_t sw) {
    size_t wT = static_cast<size_t>(T + 63) / 64;
    size_t need = std::min(cap, wT + 1);
    std::fill(Y.begin(), Y.begin() + static_cast<long>(std::min(cap + 2, need + uw + 1)), 0);
    for (size_t k = 0; k < uw; ++k) {
      uint64_t u = UM[k];
      if (!u) continue;
      size_t jmax = std::min(sw, need >= k ? need - k : 0);
      for (size_t j = 0; j < jmax; ++j) {
        uint64_t lo, hi;
        clmul64(src[j], u, lo, hi);
        Y[j + k] ^= lo;
        Y[j + k + 1] ^= hi;
      }
    }
    std::swap(X, Y);
    xw = std::min(cap, wT + 1);
    long top = T % 64;
    size_t wfull = static_cast<size_t>(T) / 64;
    if (top) X[wfull] &= (1ull << top) - 1;
    for (size_t w = wfull + (top ? 1 : 0); w < xw; ++w) X[w] = 0;
  };

  mul_into(UA, aw);  // term n = 1

  // Squaring spreads coefficients, so M^(2^j) has support only on multiples of
  // 2^j and its residue-0 polynomial is M itself. Stepping by M^(2^j) therefore
  // splits the state into 2^j independent residue classes mod 2^j whose step
  // operand truncates to T/2^j bits, cutting the per-step cost by the stride.
  const long Tw = (T + 63) / 64;
  const long Mww = static_cast<long>(std::min<size_t>(uw, static_cast<size_t>(Tw) + 1));
  int jstride = 0;
  {
    double best = static_cast<double>(n_stop) * static_cast<double>(Tw) * static_cast<double>(Mww);
    for (int j = 1; j <= 10 && (1L << j) <= n_stop; ++j) {
      long S = 1L << j;
      long Tc = (T + S - 1) / S;
      double wc = static_cast<double>((Tc + 63) / 64);
      double wu =
          static_cast<double>((std::min<long>(static_cast<long>(M.d.size()), Tc) + 63) / 64);
      double cost = static_cast<double>(S - 1) * static_cast<double>(Tw) * static_cast<double>(Mww) +
                    static_cast<double>(n_stop) * S * wc * wu;
      if (cost < best) {
        best = cost;
        jstride = j;
      }
    }
  }

  if (jstride == 0) {
    OrbitCells out;
    long kept = 0;
    for (long n = 1;; ++n) {
      long e = vA + n * vM;
      long id = 0;
      if (e <= 0) {
        long beta = -e;
        size_t w = static_cast<size_t>(beta) / 64;
        int off = static_cast<int>(beta % 64);
        uint64_t bits = X[w] >> off;
        if (off && w + 1 < xw) bits |= X[w + 1] << (64 - off);
        id = static_cast<long>(bits & ((1ull << L) - 1));
      } else if (e < L) {
        id = low_branch_id(static_cast<unsigned long>(X[0] & ((1ull << (L - e)) - 1)), e, 2);
      }
      if (filter_pass(n, s.filter, s.K, 2)) {
        out.ns.push_back(n);
        out.ids.push_back(id);
        if (s.count > 0 && ++kept == s.count) break;
      }
      if (n == n_stop) break;
      mul_into(X, xw);
    }
    return out;
  }

  const long S = 1L << jstride;
  const long Tc = (T + S - 1) / S;
  const size_t needw = static_cast<size_t>(Tc + 63) / 64;
  const size_t Wc = needw + 1;
  const uint64_t topmask = (Tc % 64) ? ((1ull << (Tc % 64)) - 1) : ~0ull;

  std::vector<uint64_t> U2(needw + 1, 0);
  for (size_t i = 0; i < M.d.size() && i < static_cast<size_t>(Tc); ++i)
    if (M.d[i]) U2[i / 64] |= 1ull << (i % 64);
  size_t u2w = U2.size();
  while (u2w > 1 && U2[u2w - 1] == 0) --u2w;

  std::vector<uint64_t> C(static_cast<size_t>(S) * Wc, 0), P(needw + u2w + 2, 0);
  std::vector<long> flat(static_cast<size_t>(n_stop) + 1, 0);

  auto read_bit = [&](long pos) -> int {
    size_t cls = static_cast<size_t>(pos & (S - 1));
    long idx = pos >> jstride;
    return static_cast<int>((C[cls * Wc + static_cast<size_t>(idx) / 64] >> (idx % 64)) & 1);
  };

  const long rmax = std::min(S, n_stop);
  for (long r = 1; r <= rmax; ++r) {
    // X holds the T-bit string of A * M^r; deal it out by residue class
    std::fill(C.begin(), C.end(), 0);
    for (size_t w = 0; w < xw; ++w) {
      uint64_t bits = X[w];
      while (bits) {
        long pos = static_cast<long>(w) * 64 + __builtin_ctzll(bits);
        bits &= bits - 1;
        size_t cls = static_cast<size_t>(pos & (S - 1));
        long idx = pos >> jstride;
        C[cls * Wc + static_cast<size_t>(idx) / 64] |= 1ull << (idx % 64);
      }
    }
    for (long n = r;; n += S) {
      long e = vA + n * vM;
      long id = 0;
      if (e <= 0) {
        long beta = -e;
        for (int b = 0; b < static_cast<int>(L); ++b)
          if (read_bit(beta + b)) id |= 1L << b;
      } else if (e < L) {
        unsigned long low = 0;
        for (int b = 0; b < static_cast<int>(L - e); ++b)
          if (read_bit(b)) low |= 1ul << b;
        id = low_branch_id(low, e, 2);
      }
      flat[static_cast<size_t>(n)] = id;
      if (n + S > n_stop) break;
      for (long c = 0; c < S; ++c) {
        uint64_t* Yc = &C[static_cast<size_t>(c) * Wc];
        std::fill(P.begin(), P.end(), 0);
        for (size_t k = 0; k < u2w && k < needw; ++k) {
          uint64_t u = U2[k];
          if (!u) continue;
          size_t qmax = needw - k;
          for (size_t q = 0; q < qmax; ++q) {
            uint64_t lo, hi;
            clmul64(Yc[q], u, lo, hi);
            P[q + k] ^= lo;
            P[q + k + 1] ^= hi;
          }
        }
        std::copy(P.begin(), P.begin() + static_cast<long>(needw), Yc);
        Yc[needw - 1] &= topmask;
        Yc[needw] = 0;
      }
    }
    if (r < rmax) mul_into(X, xw);  // X becomes A * M^(r+1)
  }

  OrbitCells out;
  long kept = 0;
  for (long n = 1; n <= n_stop; ++n) {
    if (!filter_pass(n, s.filter, s.K, 2)) continue;
    out.ns.push_back(n);
    out.ids.push_back(flat[static_cast<size_t>(n)]);
    if (s.count > 0 && ++kept == s.count) break;
  }
  return out;
}
#endif

// ---- characteristic p: packed-slot convolution ------------------------------
//
// Coefficient i lives in a 32-bit slot (two per word); one mpn multiply
// convolves the slot polynomials with every convolution sum below 2^32,
// then a linear pass reduces slots mod p. The chain stays truncated mod
// t^T for one fixed T above the highest window, so slot reads are exact.

inline uint32_t slot_get(const std::vector<uint64_t>& a, long i) {
  uint64_t w = a[static_cast<size_t>(i) >> 1];
  return (i & 1) ? static_cast<uint32_t>(w >> 32) : static_cast<uint32_t>(w);
}

inline void slot_set(std::vector<uint64_t>& a, long i, uint32_t v) {
  uint64_t& w = a[static_cast<size_t>(i) >> 1];
  if (i & 1)
    w = (w & 0xffffffffull) | (static_cast<uint64_t>(v) << 32);
  else
    w = (w & ~0xffffffffull) | v;
}

OrbitCells orbit_charp(const Elem& A, const Elem& M, const OrbitSpec& s, long n_stop) {
  static_assert(sizeof(mp_limb_t) == sizeof(uint64_t), "orbit kernel expects 64-bit limbs");
  const long p = A.field.p;
  const long L = s.level;
  const long vA = A.v, vM = M.v;

  require(static_cast<unsigned long long>(M.d.size()) * (p - 1) * (p - 1) < (1ull << 32),
          errc::too_large, "base too long for packed convolution");

  long beta_max = std::max({0L, -(vA + vM), -(vA + n_stop * vM)});
  const long T = beta_max + L + 4;
  require(T <= (1L << 22), errc::too_large, "orbit window height out of range");
  size_t wcap = static_cast<size_t>(T) / 2 + 2;

  long um = static_cast<long>(M.d.size());
  std::vector<uint64_t> UM(static_cast<size_t>(um) / 2 + 1, 0);
  for (long i = 0; i < um; ++i) slot_set(UM, i, M.d[static_cast<size_t>(i)]);
  size_t uw = static_cast<size_t>(um + 1) / 2;

  std::vector<uint64_t> X(wcap, 0), Y(wcap + uw + 2, 0);
  // digits of A at or above T never reach a window
  long xs = std::min<long>(static_cast<long>(A.d.size()), T);
  for (long i = 0; i < xs; ++i) slot_set(X, i, A.d[static_cast<size_t>(i)]);

  auto step_mul = [&]() {
    size_t xw = static_cast<size_t>(xs + 1) / 2;
    std::fill(Y.begin(), Y.end(), 0);
    if (xw >= uw)
      mpn_mul(reinterpret_cast<mp_limb_t*>(Y.data()), reinterpret_cast<const mp_limb_t*>(X.data()),
              static_cast<mp_size_t>(xw), reinterpret_cast<const mp_limb_t*>(UM.data()),
              static_cast<mp_size_t>(uw));
    else
      mpn_mul(reinterpret_cast<mp_limb_t*>(Y.data()), reinterpret_cast<const mp_limb_t*>(UM.data()),
              static_cast<mp_size_t>(uw), reinterpret_cast<const mp_limb_t*>(X.data()),
              static_cast<mp_size_t>(xw));
    long prod_slots = std::min<long>(xs + um, T);
    size_t pw = static_cast<size_t>(prod_slots + 1) / 2;
    for (size_t w = 0; w < pw; ++w) {
      uint64_t x = Y[w];
      uint32_t lo = static_cast<uint32_t>(x) % static_cast<uint32_t>(p);
      uint32_t hi = static_cast<uint32_t>(x >> 32) % static_cast<uint32_t>(p);
      Y[w] = (static_cast<uint64_t>(hi) << 32) | lo;
    }
    if (prod_slots & 1) slot_set(Y, prod_slots, 0);
    std::fill(X.begin(), X.end(), 0);
    std::copy(Y.begin(), Y.begin() + static_cast<long>(pw), X.begin());
    xs = prod_slots;
  };

  step_mul();  // term n = 1

  OrbitCells out;
  long kept = 0;
  for (long n = 1;; ++n) {
    long e = vA + n * vM;
    long id = 0;
    if (e <= 0) {
      long beta = -e, w = 1;
      for (long i = 0; i < L; ++i) {
        long pos = beta + i;
        if (pos < xs) id += static_cast<long>(slot_get(X, pos)) * w;
        w *= p;
      }
    } else if (e < L) {
      unsigned long low = 0, w = 1;
      for (long i = 0; i < L - e; ++i) {
        if (i < xs) low += slot_get(X, i) * w;
        w *= static_cast<unsigned long>(p);
      }
      id = low_branch_id(low, e, p);
    }
    if (filter_pass(n, s.filter, s.K, p)) {
      out.ns.push_back(n);
      out.ids.push_back(id);
      if (s.count > 0 && ++kept == s.count) break;
    }
    if (n == n_stop) break;
    step_mul();
  }
  return out;
}

}  // namespace

long orbit_n_stop(const OrbitSpec& spec, long p) { return plan_n_stop_impl(spec, p); }

OrbitCells orbit_cells(const Elem& A, const Elem& M, const OrbitSpec& s) {
  long pL = 0;
  validate(A, M, s, pL);
  long n_stop = plan_n_stop_impl(s, A.field.p);
  if (A.field.characteristic == 0) return orbit_char0(A, M, s, pL, n_stop);
#if NAK_X86
  if (A.field.p == 2 && s.level < 32 && cpu_clmul()) return orbit_char2(A, M, s, n_stop);
#endif
  return orbit_charp(A, M, s, n_stop);
}

OrbitCells orbit_cells_reference(const Elem& A, const Elem& M, const OrbitSpec& s) {
  long pL = 0;
  validate(A, M, s, pL);
  long n_stop = plan_n_stop_impl(s, A.field.p);
  const FieldSpec& fs = A.field;
  long vA = A.v, vM = M.v;
  long beta_max = std::max({0L, -(vA + vM), -(vA + n_stop * vM)});
  long R = beta_max + s.level + 4;

  auto pad_exact = [&](const Elem& x) {
    std::vector<uint32_t> d(x.d);
    if (static_cast<long>(d.size()) < R) d.resize(static_cast<size_t>(R), 0);
    return make_elem(fs, x.v, std::move(d));
  };
  Elem Mx = pad_exact(M);
  Elem cur = mul(pad_exact(A), Mx);

  OrbitCells out;
  long kept = 0;
  for (long n = 1;; ++n) {
    if (filter_pass(n, s.filter, s.K, fs.p)) {
      out.ns.push_back(n);
      out.ids.push_back(cell_id_of(integral_part(cur), s.level));
      if (s.count > 0 && ++kept == s.count) break;
    }
    if (n == n_stop) break;
    cur = mul(cur, Mx);
  }
  return out;
}

}  // namespace nak
