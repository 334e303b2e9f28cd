#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "ball.hpp"
#include "complex.hpp"
#include "jet.hpp"
#include "primetools.hpp"
#include "zetafn.hpp"

namespace bvk {

// Exact Laurent polynomial in x and y with integer coefficients; the key is
// (power of x, power of y).
class BiPoly {
 public:
  using Key = std::pair<int, int>;

  BiPoly() = default;
  static BiPoly monomial(long c, int i, int j) {
    BiPoly p;
    if (c != 0) p.terms_[{i, j}] = c;
    return p;
  }
  static BiPoly constant(long c) { return monomial(c, 0, 0); }

  const std::map<Key, mpz_class>& terms() const { return terms_; }
  mpz_class coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? mpz_class(0) : it->second;
  }
  bool is_zero() const { return terms_.empty(); }
  int min_x_degree() const {
    int m = 1 << 30;
    for (const auto& [k, c] : terms_) m = std::min(m, k.first);
    return m;
  }

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    BiPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
  }
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
    BiPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, -c);
    return r;
  }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
  }
  BiPoly shifted(int di, int dj) const {
    BiPoly r;
    for (const auto& [k, c] : terms_) r.terms_[{k.first + di, k.second + dj}] = c;
    return r;
  }
  // Value at y = 1, as a polynomial in x (index = power, must be >= 0).
  std::vector<mpz_class> at_y_one() const {
    std::vector<mpz_class> out;
    for (const auto& [k, c] : terms_) {
      if (k.first < 0) throw DomainError("negative x power");
      if (static_cast<int>(out.size()) <= k.first) out.resize(static_cast<std::size_t>(k.first) + 1);
      out[static_cast<std::size_t>(k.first)] += c;
    }
    return out;
  }

 private:
  void add_term(const Key& k, const mpz_class& c) {
    mpz_class& slot = terms_[k];
    slot += c;
    if (slot == 0) terms_.erase(k);
  }

  std::map<Key, mpz_class> terms_;
};

struct AccelPolys {
  BiPoly s2, s3, s4, r4;
  std::vector<mpz_class> q;  // q[j]: sum over k of |coeff of x^j y^k in R4|
};

inline AccelPolys build_accel_polys() {
  auto one_minus = [](int i, int j) { return BiPoly::constant(1) - BiPoly::monomial(1, i, j); };
  AccelPolys a;
  BiPoly xy = one_minus(1, 1), x_over_y = one_minus(1, -1);
  a.s2 = xy * x_over_y -
         BiPoly::monomial(1, 2, 0) * (BiPoly::constant(2) - BiPoly::monomial(1, 0, 1) - BiPoly::monomial(1, 0, -1));
  a.s3 = a.s2 * one_minus(2, 1) * one_minus(2, -1);
  BiPoly c3 = one_minus(3, 0);
  a.s4 = a.s3 * one_minus(3, 2) * one_minus(3, -2) * c3 * c3;
  BiPoly x2 = one_minus(2, 0);
  BiPoly x3y = one_minus(3, 1), x3_over_y = one_minus(3, -1);
  BiPoly denom = xy * x_over_y * x2 * x2 * x3y * x3y * x3_over_y * x3_over_y;
  BiPoly diff = a.s4 - denom;
  if (diff.min_x_degree() < 4) throw DomainError("S4 - denominator not divisible by x^4");
  a.r4 = diff.shifted(-4, 4);
  for (const auto& [k, c] : a.r4.terms()) {
    if (static_cast<int>(a.q.size()) <= k.first) a.q.resize(static_cast<std::size_t>(k.first) + 1);
    a.q[static_cast<std::size_t>(k.first)] += abs(c);
  }
  return a;
}

inline const AccelPolys& accel_polys() {
  static const AccelPolys polys = build_accel_polys();
  return polys;
}

struct TruncationProfile {
  std::uint64_t cutoff = 0;
  Ball d_of_c;  // Q(1/C) / ((1-1/C)^2 (1-1/C^2)^2 (1-1/C^3)^4)
  Ball delta;   // D(C)/C^4
  Ball rho;     // log of the tail product is bounded by rho
  Ball err;     // |H_C(t) - H(t)| <= err for every real t
};

inline TruncationProfile truncation_profile(std::uint64_t cutoff) {
  if (cutoff < 67) throw DomainError("truncation profile requires C >= 67");
  const AccelPolys& polys = accel_polys();
  TruncationProfile p;
  p.cutoff = cutoff;
  Ball c(static_cast<long>(cutoff));
  Ball u = Ball(1) / c;
  Ball qv;
  for (auto it = polys.q.rbegin(); it != polys.q.rend(); ++it) qv = qv * u + Ball(*it);
  Ball den = sqr(Ball(1) - u) * sqr(Ball(1) - sqr(u)) * sqr(sqr(Ball(1) - u * sqr(u)));
  p.d_of_c = qv / den;
  p.delta = p.d_of_c / sqr(sqr(c));
  if (!p.delta.certainly_less(Ball(1))) throw DomainError("delta(C) not below 1");
  p.rho = p.d_of_c / (Ball(1) - p.delta) * tail_inv_p4_bound(cutoff);
  Ball e = exp(p.rho) - Ball(1);
  p.err = Ball::exact(e.upper());
  return p;
}

// One Euler factor of H: 1 - 2 x^2 (1 - cos theta) / (1 - 2 x cos theta + x^2)
// with x = 1/p, theta = t log p.
template <class T>
T h_factor(std::uint32_t p, const T& t) {
  Ball x = Ball(1) / Ball(static_cast<long>(p));
  T c = cos(t * log(Ball(static_cast<long>(p))));
  T den = (Ball(1) + sqr(x)) - ldexp(x, 1) * c;
  return Ball(1) - (ldexp(sqr(x), 1) * (Ball(1) - c)) / den;
}

// Truncated Euler product over p <= P, without tail certificate. Every
// omitted factor is at most 1, so this over-estimates H(t).
inline Ball h_direct(const Ball& t, std::uint64_t limit) {
  if (limit < 2) throw DomainError("h_direct requires P >= 2");
  PrimeTable table = primes_up_to(limit);
  constexpr std::size_t chunk = 4096;
  std::size_t blocks = (table.primes.size() + chunk - 1) / chunk;
  std::vector<Ball> parts(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Ball acc(1);
    std::size_t end = std::min(table.primes.size(), (b + 1) * chunk);
    for (std::size_t i = b * chunk; i < end; ++i) acc = acc * h_factor(table.primes[i], t);
    parts[b] = std::move(acc);
  });
  Ball total(1);
  for (const auto& p : parts) total = total * p;
  return total;
}

// Lower and upper Taylor bounds 1 - c2 t^2 <= H(t) <= 1 - c2 t^2 + 2.56 t^4
// for |t| <= 1/2.
struct TaylorBounds {
  Ball lo, hi;
};

inline TaylorBounds h_taylor_bounds(const Ball& t, const Ball& c2) {
  if (!(abs(t).upper() <= 0.5)) throw DomainError("Taylor bounds need |t| <= 1/2");
  Ball t2 = sqr(t);
  Ball lo = Ball(1) - c2 * t2;
  Ball hi = lo + Ball::from_string("2.56") * sqr(t2);
  return {lo, hi};
}

// H(t) via zeta values at 2 + it, 3 + it, 3 + 2it times the rapidly
// converging product of F4(1/p, p^{it}) over p <= C.
class AcceleratedH {
 public:
  explicit AcceleratedH(std::uint64_t cutoff)
      : profile_(truncation_profile(cutoff)), zeta2_(Ball(2), 20, 256), zeta3_(Ball(3), 20, 256) {
    PrimeTable table = primes_up_to(cutoff);
    for (std::uint32_t p : table.primes) {
      Factor f;
      Ball bp(static_cast<long>(p));
      Ball x = Ball(1) / bp;
      Ball x2 = sqr(x), x3 = x2 * x;
      f.log_p = log(bp);
      f.two_x = ldexp(x, 1);
      f.one_plus_x2 = Ball(1) + x2;
      f.two_x2 = ldexp(x2, 1);
      f.one_plus_x4 = Ball(1) + sqr(x2);
      f.inv_one_minus_x2_sq = Ball(1) / sqr(Ball(1) - x2);
      f.one_plus_x6 = Ball(1) + sqr(x3);
      f.two_x3 = ldexp(x3, 1);
      f.one_minus_x3_sq = sqr(Ball(1) - x3);
      factors_.push_back(std::move(f));
    }
    Ball z2 = sqr(Ball::pi()) / Ball(6);
    Ball z3 = zeta_real(Ball(3));
    scale_ = sqr(z3) / sqr(z2);
  }

  const TruncationProfile& profile() const { return profile_; }

  // H_C(t), the accelerated truncated product (no tail error added).
  template <class T>
  T truncated(const T& t) const {
    double t_hi = value_of(t).mag();
    EmParams p1 = em_params_for(t_hi);
    EmParams p2 = em_params_for(2.0 * t_hi);
    T z2 = norm(zeta2_(t, p1.n_terms));
    T z3 = norm(zeta3_(t, p1.n_terms));
    T t2 = ldexp(t, 1);
    T z32 = norm(zeta3_(t2, p2.n_terms));
    T acc = z2 * z32 / sqr(z3) * scale_;
    for (const Factor& f : factors_) acc = acc * factor(f, t);
    return acc;
  }

  // H(t) enclosure: H_C(t) widened by the truncation certificate.
  Ball operator()(const Ball& t) const {
    Ball v = truncated(abs(t));
    v.widen(profile_.err.upper());
    return v;
  }

  std::size_t prime_count() const { return factors_.size(); }

 private:
  struct Factor {
    Ball log_p, two_x, one_plus_x2, two_x2, one_plus_x4, inv_one_minus_x2_sq, one_plus_x6, two_x3,
        one_minus_x3_sq;
  };

  template <class T>
  static T factor(const Factor& f, const T& t) {
    T s, c1;
    sin_cos(t * f.log_p, s, c1);
    T c2 = ldexp(sqr(c1), 1) - Ball(1);
    T den_h = f.one_plus_x2 - f.two_x * c1;
    T h = Ball(1) - (f.two_x2 * (Ball(1) - c1)) / den_h;
    T e2 = (f.one_plus_x4 - f.two_x2 * c1) * f.inv_one_minus_x2_sq;
    T e3 = ((f.one_plus_x6 - f.two_x3 * c2) * f.one_minus_x3_sq) / sqr(f.one_plus_x6 - f.two_x3 * c1);
    return h * e2 * e3;
  }

  TruncationProfile profile_;
  ZetaSeries zeta2_;
  ZetaSeries zeta3_;
  Ball scale_;  // zeta(3)^2 / zeta(2)^2
  std::vector<Factor> factors_;
};

inline Ball h_accel(const Ball& t, const AcceleratedH& h) { return h(t); }

}  // namespace bvk
