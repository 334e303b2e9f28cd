#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <vector>

#include "ball.hpp"
#include "complex.hpp"
#include "jet.hpp"
#include "taylor.hpp"

namespace bvk {

struct StieltjesTable {
  Ball gamma0, gamma1, gamma2, gamma3;
};

// Standard values to 30 significant digits.
inline StieltjesTable stieltjes_table() {
  constexpr double r = 1e-30;
  return {Ball::from_string("0.577215664901532860606512090082", r),
          Ball::from_string("-0.0728158454836767248605863758749", r),
          Ball::from_string("-0.00969036319287231848453038603521", r),
          Ball::from_string("0.00205383442030334586616004654275", r)};
}

// |zeta(1+it)|^2 = 1/t^2 + alpha1 + alpha2 t^2 + r2(t) with |r2(t)| <= r2_coeff t^4
// for |t| <= 1.
struct LaurentCoeffs {
  Ball alpha1, alpha2, r2_coeff;
};

inline LaurentCoeffs laurent_coeffs() {
  StieltjesTable g = stieltjes_table();
  Ball a1 = sqr(g.gamma0) + ldexp(g.gamma1, 1);
  Ball a2 = sqr(g.gamma1) - g.gamma0 * g.gamma2 - g.gamma3 / Ball(3);
  Ball h2 = abs(g.gamma2) / Ball(2);
  Ball h3 = abs(g.gamma3) / Ball(6);
  Ball r2 = sqr(h2) + ldexp(abs(g.gamma1) * h3, 1) + sqr(h3);
  r2 += ldexp(Ball(1) + abs(g.gamma0) + abs(g.gamma1) + h2 + h3, 1) / Ball(16);
  r2 += Ball(1) / Ball(256);
  return {a1, a2, r2};
}

// B_0, B_1, ..., B_n as exact rationals (B_1 = -1/2).
inline std::vector<mpq_class> bernoulli_numbers(int n) {
  static std::mutex mu;
  static std::vector<mpq_class> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) <= n) {
    // Akiyama–Tanigawa gives B_n with B_1 = +1/2; fix the sign afterwards.
    std::vector<mpq_class> out;
    std::vector<mpq_class> a(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
      a[m] = mpq_class(1, m + 1);
      for (int j = m; j >= 1; --j) {
        a[j - 1] = j * (a[j - 1] - a[j]);
        a[j - 1].canonicalize();
      }
      out.push_back(a[0]);
    }
    if (n >= 1) out[1] = mpq_class(-1, 2);
    cache = std::move(out);
  }
  return {cache.begin(), cache.begin() + n + 1};
}

// Euler–Maclaurin truncation used throughout the library: N terms of the
// Dirichlet series and M Bernoulli corrections.
struct EmParams {
  int n_terms;
  int bernoulli_terms;
};

inline EmParams em_params_for(double t_hi) {
  t_hi = std::fabs(t_hi);
  if (t_hi < 50.0) return {static_cast<int>(std::ceil(t_hi)) + 16, 8};
  return {static_cast<int>(std::ceil(t_hi / 4.0)) + 20, 20};
}

// zeta(sigma + i t) for a fixed real sigma, as a function of real t. T is
// Ball (value enclosure) or Jet (Taylor coefficients in t).
class ZetaSeries {
 public:
  ZetaSeries(const Ball& sigma, int bernoulli_terms, int table_size = 64)
      : sigma_(sigma), m_(bernoulli_terms), sigma_lo_(sigma.lower()) {
    if (m_ < 1) throw DomainError("need at least one Bernoulli term");
    if (!(sigma_lo_ + 2 * m_ - 1 > 0.0)) throw DomainError("Euler-Maclaurin remainder diverges");
    auto b = bernoulli_numbers(2 * m_);
    mpz_class fact = 1;
    for (int k = 1; k <= 2 * m_; ++k) {
      fact *= k;
      if (k % 2 == 0) coef_.emplace_back(mpq_class(b[k] / fact));
    }
    b2m_abs_ = abs(Ball(mpq_class(abs(b[2 * m_]))));
    inv_fact_2m_ = Ball(1) / Ball(mpq_class(fact));
    grow(table_size);
  }

  const Ball& sigma() const { return sigma_; }
  int bernoulli_terms() const { return m_; }

  // Precompute log n and n^{-sigma} for n < size. Not thread-safe; call
  // before sharing the object.
  void grow(int size) {
    for (int n = static_cast<int>(log_n_.size()); n < size; ++n) {
      if (n == 0) {
        log_n_.emplace_back(0);
        pow_n_.emplace_back(0);
        continue;
      }
      Ball l = log(Ball(n));
      pow_n_.push_back(exp(-(sigma_ * l)));
      log_n_.push_back(std::move(l));
    }
  }

  template <class T>
  Complex<T> operator()(const T& t, int n_terms) const {
    if (n_terms < 2) throw DomainError("Euler-Maclaurin needs N >= 2");
    const int n_big = n_terms;
    T re = lift(Ball(1), t);
    T im = lift(Ball(0), t);
    for (int n = 2; n < n_big; ++n) {
      T s, c;
      sin_cos(t * log_of(n), s, c);
      const Ball w = pow_of(n);
      accumulate(re, c, w, false);
      accumulate(im, s, w, true);
    }
    Complex<T> partial{std::move(re), std::move(im)};
    return partial + tail(t, n_big);
  }

  template <class T>
  Complex<T> operator()(const T& t) const {
    return (*this)(t, em_params_for(value_of(t).mag()).n_terms);
  }

  // Everything from N on: N^{1-s}/(s-1) + N^{-s}/2 + Bernoulli terms + remainder.
  template <class T>
  Complex<T> tail(const T& t, int n_big) const {
    Ball big(n_big);
    Ball log_big = log_of(n_big);
    Complex<T> phase = unit_phase(t * log_big);
    Ball pw = pow_of(n_big);
    Complex<T> n_pow_s{phase.re * pw, -(phase.im * pw)};  // N^{-s}

    Complex<T> s{lift(sigma_, t), t};
    Complex<T> s_minus_1{lift(sigma_ - Ball(1), t), t};
    Complex<T> out = (n_pow_s * big) / s_minus_1;
    out += n_pow_s * (Ball(1) / Ball(2));

    Ball inv_big = Ball(1) / big;
    Ball inv_big_sq = sqr(inv_big);
    Ball npow = inv_big;
    Complex<T> poch = s;
    Complex<T> corr = poch * (coef_[0] * npow);
    for (int k = 2; k <= m_; ++k) {
      poch = poch * shifted(s, 2 * k - 3) * shifted(s, 2 * k - 2);
      npow = npow * inv_big_sq;
      corr += poch * (coef_[static_cast<std::size_t>(k - 1)] * npow);
    }
    out += corr * n_pow_s;

    Complex<T> full_poch = poch * shifted(s, 2 * m_ - 1);  // (s)_{2M}
    std::vector<double> radii = remainder_radii(n_big, order_of(t));
    T e = error_like(t, radii);
    Complex<T> err{e, e};
    out += (full_poch * err) * inv_fact_2m_;
    return out;
  }

  // Bound on the k-th Taylor coefficient (in t) of the remainder integral,
  // before multiplication by (s)_{2M}/(2M)!.
  std::vector<double> remainder_radii(int n_big, int order) const {
    Ball a = Ball::exact(sigma_lo_) + Ball(2 * m_);
    Ball am1 = a - Ball(1);
    Ball l = log_of(n_big);
    Ball base = b2m_abs_ * exp(-(am1 * l));
    std::vector<double> out;
    Ball inv_am1 = Ball(1) / am1;
    for (int j = 0; j <= order; ++j) {
      Ball sum;
      Ball lp(1);
      for (int i = 0; i <= j; ++i) {
        if (i > 0) lp = lp * l / Ball(i);
        sum += lp * pow(inv_am1, j - i + 1);
      }
      out.push_back((base * sum).upper());
    }
    return out;
  }

  Ball log_of(int n) const {
    if (n < static_cast<int>(log_n_.size())) return log_n_[static_cast<std::size_t>(n)];
    return log(Ball(n));
  }
  Ball pow_of(int n) const {
    if (n < static_cast<int>(pow_n_.size())) return pow_n_[static_cast<std::size_t>(n)];
    return exp(-(sigma_ * log(Ball(n))));
  }

 private:
  template <class T>
  static Complex<T> shifted(const Complex<T>& s, int k) {
    return {s.re + Ball(k), s.im};
  }
  template <class T>
  static void accumulate(T& acc, const T& x, const Ball& w, bool negate) {
    if (negate) {
      acc.sub_mul(x, w);
    } else {
      acc.add_mul(x, w);
    }
  }

  Ball sigma_;
  int m_;
  double sigma_lo_;
  std::vector<Ball> coef_;  // B_{2k}/(2k)!
  Ball b2m_abs_;
  Ball inv_fact_2m_;
  std::vector<Ball> log_n_;
  std::vector<Ball> pow_n_;
};

// zeta(s) by Euler–Maclaurin with N terms and M Bernoulli corrections (M = 1
// is Backlund's form, remainder |s(s+1)| / (12 (sigma+1) N^(sigma+1))).
inline ComplexBall zeta_em(const ComplexBall& s, int n_terms, int bernoulli_terms = 1,
                           std::optional<double> remainder_cap = std::nullopt) {
  if (s.re.contains(Ball(1)) && s.im.contains_zero()) throw PoleAtOne();
  if (!(s.re.upper() >= 1.0)) throw DomainError("zeta_em requires Re(s) >= 1");
  if (n_terms < 2) throw DomainError("zeta_em requires N >= 2");
  ZetaSeries z(s.re, bernoulli_terms, std::min(n_terms + 1, 4096));
  if (remainder_cap) {
    std::vector<double> r = z.remainder_radii(n_terms, 0);
    // |(s)_{2M}| / (2M)! times the integral bound.
    ComplexBall acc{Ball(1), Ball(0)};
    for (int j = 0; j < 2 * bernoulli_terms; ++j) acc = acc * ComplexBall{s.re + Ball(j), s.im};
    Ball fact(1);
    for (int j = 2; j <= 2 * bernoulli_terms; ++j) fact = fact * Ball(j);
    double bound = (sqrt(norm(acc)) / fact * Ball::exact(r[0])).upper();
    if (bound > *remainder_cap) throw InsufficientN("Euler-Maclaurin remainder exceeds cap");
  }
  return z(s.im, n_terms);
}

inline int default_em_terms(double t) {
  return std::max(static_cast<int>(std::ceil(std::fabs(t) / 3.3983)) + 1, 16);
}

// zeta(sigma) for real sigma > 1.
inline Ball zeta_real(const Ball& sigma) {
  ZetaSeries z(sigma, 12, 40);
  return z(Ball(0), 32).re;
}

// |zeta(1+it)|^2 via Euler–Maclaurin on the line, generic in T.
template <class T>
T zeta_line_norm_sq(const ZetaSeries& line, const T& t) {
  return norm(line(t));
}

// |zeta(1+it)|^2; Laurent expansion for |t| <= 1/2, Euler–Maclaurin otherwise.
inline Ball zeta_one_line_sq(const Ball& t) {
  Ball at = abs(t);
  if (at.contains_zero()) throw DomainError("t ball touches 0");
  if (at.upper() <= 0.5) {
    static thread_local std::optional<LaurentCoeffs> lc;
    static thread_local int lc_prec = 0;
    if (!lc || lc_prec != working_precision()) {
      lc = laurent_coeffs();
      lc_prec = working_precision();
    }
    Ball t2 = sqr(at);
    Ball v = Ball(1) / t2 + lc->alpha1 + lc->alpha2 * t2;
    v.widen((lc->r2_coeff * sqr(t2)).upper());
    return v;
  }
  EmParams p = em_params_for(at.upper());
  ZetaSeries line(Ball(1), p.bernoulli_terms, p.n_terms + 1);
  return norm(line(at, p.n_terms));
}

// |zeta(sigma + it)| < log t - 0.14 for 1 <= sigma <= 2, t >= 500.
inline Ball bound_zeta_strip(double t) {
  if (!(t >= 500.0)) throw DomainError("bound_zeta_strip requires t >= 500");
  return log(Ball::exact(t)) - Ball::from_string("0.14");
}

// |1/zeta(1+it)| < 42.9 log t for t >= 2, and < 2.079 log t for 2 <= t <= 500.
inline Ball inv_zeta_bound(double t, bool sharp = false) {
  if (!(t >= 2.0)) throw DomainError("inv_zeta_bound requires t >= 2");
  if (sharp) {
    if (t > 500.0) throw DomainError("sharp constant only verified for t <= 500");
    return Ball::from_string("2.079") * log(Ball::exact(t));
  }
  return Ball::from_string("42.9") * log(Ball::exact(t));
}

// 2.079 log t - 1/|zeta(1+it)| enclosed over a cell [lo, hi], with
// |zeta(1+it)|^2 taken from a Taylor model in t so that the enclosure
// tightens quadratically as cells shrink.
class InvZetaMargin {
 public:
  explicit InvZetaMargin(int degree = 8) : line_(Ball(1), 20, 160), degree_(degree) {}

  Ball operator()(const mpq_class& lo, const mpq_class& hi) const {
    TaylorModel t = TaylorModel::variable(lo, hi, degree_);
    int n_terms = em_params_for(Ball(hi).upper()).n_terms;
    Ball n2 = norm(line_(t, n_terms)).range();
    if (!n2.is_positive()) throw DivisorContainsZero();
    return Ball::from_string("2.079") * log(Ball::interval(lo, hi)) - Ball(1) / sqrt(n2);
  }

 private:
  ZetaSeries line_;
  int degree_;
};

// Taylor models of zeta(sigma + it) over consecutive blocks of an arithmetic
// progression in t. The phases n^{-it} at the block centre are advanced by
// multiplication instead of recomputed; the head sum contributes
//   sum_j (-i)^j u^j sum_n n^{-sigma} (log n)^j / j! n^{-it}
// with the exponential series cut after degree k, and the tail is a Taylor
// model of the Euler–Maclaurin remainder terms.
class ZetaLineWalker {
 public:
  explicit ZetaLineWalker(const Ball& sigma, int degree = 20, int bernoulli_terms = 20)
      : series_(sigma, bernoulli_terms, 8), degree_(degree) {
    inv_fact_.emplace_back(1);
    for (int j = 1; j <= degree_ + 1; ++j) inv_fact_.push_back(inv_fact_.back() / Ball(j));
  }

  int degree() const { return degree_; }

  Complex<TaylorModel> block(const mpq_class& center_q, const mpq_class& radius_q) {
    Ball center(center_q);
    double t_hi = Ball(mpq_class(center_q + radius_q)).upper();
    int n_big = std::max(static_cast<int>(std::ceil(t_hi / 4.0)) + 20, 24);
    advance(center_q, center, n_big);

    const int k = degree_;
    std::vector<ComplexBall> sums(static_cast<std::size_t>(k) + 1, ComplexBall{Ball(0), Ball(0)});
    for (int n = 2; n < n_big; ++n) {
      const ComplexBall& ph = phase_[static_cast<std::size_t>(n)];
      const std::vector<Ball>& a = coef_[static_cast<std::size_t>(n)];
      for (int j = 0; j <= k; ++j) {
        sums[static_cast<std::size_t>(j)].re.add_mul(a[static_cast<std::size_t>(j)], ph.re);
        sums[static_cast<std::size_t>(j)].im.add_mul(a[static_cast<std::size_t>(j)], ph.im);
      }
    }
    std::vector<Ball> re(static_cast<std::size_t>(k) + 1), im(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
      const ComplexBall& z = sums[static_cast<std::size_t>(j)];
      switch (j % 4) {  // multiply by (-i)^j
        case 0: re[j] = z.re; im[j] = z.im; break;
        case 1: re[j] = z.im; im[j] = -z.re; break;
        case 2: re[j] = -z.re; im[j] = -z.im; break;
        default: re[j] = -z.im; im[j] = z.re; break;
      }
    }
    re[0] += Ball(1);  // n = 1

    TaylorModel var = TaylorModel::variable(center_q - radius_q, center_q + radius_q, k);
    Ball r = Ball::exact(var.radius());
    double cut = (high_[static_cast<std::size_t>(n_big - 1)] * pow(r, k + 1) * inv_fact_[static_cast<std::size_t>(k + 1)]).upper();
    Complex<TaylorModel> head{TaylorModel::from_coefficients(std::move(re), cut, var.radius()),
                              TaylorModel::from_coefficients(std::move(im), cut, var.radius())};
    return head + series_.tail(var, n_big);
  }

 private:
  void advance(const mpq_class& center_q, const Ball& center, int n_big) {
    bool stepped = false;
    if (last_center_) {
      mpq_class delta = center_q - *last_center_;
      if (step_q_ && delta == *step_q_) {
        stepped = true;
      } else if (!step_q_ && delta > 0) {
        step_q_ = delta;
        step_ = Ball(delta);
        step_phase_.assign(1, ComplexBall{Ball(1), Ball(0)});
        stepped = true;
      }
    }
    if (!stepped) {
      step_.reset();
      step_q_.reset();
      step_phase_.clear();
    }
    // Each rectangular complex product can grow radii by up to sqrt(2), so
    // phases are recomputed from scratch every kRefresh steps.
    if (stepped && ++since_fresh_ < kRefresh) {
      for (int n = static_cast<int>(step_phase_.size()); n < static_cast<int>(phase_.size()); ++n)
        step_phase_.push_back(conj(unit_phase(*step_ * series_.log_of(n))));
      for (std::size_t n = 2; n < phase_.size(); ++n) phase_[n] = phase_[n] * step_phase_[n];
    } else {
      since_fresh_ = 0;
      for (std::size_t n = 2; n < phase_.size(); ++n)
        phase_[n] = conj(unit_phase(center * series_.log_of(static_cast<int>(n))));
    }
    while (static_cast<int>(phase_.size()) < n_big) {
      int n = static_cast<int>(phase_.size());
      if (n < 2) {
        phase_.push_back(ComplexBall{Ball(1), Ball(0)});
        coef_.emplace_back();
        high_.emplace_back(0);
        continue;
      }
      Ball l = series_.log_of(n);
      phase_.push_back(conj(unit_phase(center * l)));
      if (step_) step_phase_.push_back(conj(unit_phase(*step_ * l)));
      Ball w = series_.pow_of(n);
      std::vector<Ball> a;
      Ball lp(1);
      for (int j = 0; j <= degree_; ++j) {
        a.push_back(w * lp * inv_fact_[static_cast<std::size_t>(j)]);
        lp = lp * l;
      }
      high_.push_back(high_.back() + w * lp);
      coef_.push_back(std::move(a));
    }
    last_center_ = center_q;
  }

  static constexpr int kRefresh = 32;

  ZetaSeries series_;
  int degree_;
  std::vector<Ball> inv_fact_;
  int since_fresh_ = 0;
  std::optional<mpq_class> last_center_;
  std::optional<mpq_class> step_q_;
  std::optional<Ball> step_;
  std::vector<ComplexBall> phase_;           // n^{-i t} at the current centre
  std::vector<ComplexBall> step_phase_;      // n^{-i step}
  std::vector<std::vector<Ball>> coef_;      // n^{-sigma} (log n)^j / j!
  std::vector<Ball> high_;                   // prefix sums of n^{-sigma} (log n)^{k+1}
};

}  // namespace bvk
