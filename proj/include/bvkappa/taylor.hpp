#pragma once

// Taylor models over a panel [m - h, m + h]: for every u with |u| <= h,
//   f(m + u) = sum_k g_k u^k + e,   g_k in c_k,   |e| <= rem,
// where the g_k may depend on u. Everything is expanded around the panel
// centre, so the range of a model reflects how much f actually varies over
// the panel rather than how often its argument is repeated.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ball.hpp"
#include "errors.hpp"

namespace bvk {

class TaylorModel {
 public:
  TaylorModel() = default;

  // The identity t on [a, b].
  static TaylorModel variable(const mpq_class& a, const mpq_class& b, int degree) {
    if (degree < 1) throw DomainError("Taylor model degree must be at least 1");
    TaylorModel t(degree, Ball(mpq_class((b - a) / 2)).upper());
    t.c_[0] = Ball(mpq_class((a + b) / 2));
    t.c_[1] = Ball(1);
    return t;
  }
  static TaylorModel constant(const Ball& v, const TaylorModel& like) {
    TaylorModel t(like.degree(), like.r_);
    t.c_[0] = v;
    return t;
  }
  static TaylorModel from_coefficients(std::vector<Ball> coeffs, double rem, double radius) {
    if (coeffs.empty()) throw DomainError("Taylor model needs a coefficient");
    TaylorModel t;
    t.c_ = std::move(coeffs);
    t.rem_ = rem;
    t.r_ = radius;
    return t;
  }
  // Zero polynomial with a uniform error bound.
  static TaylorModel error(double bound, const TaylorModel& like) {
    TaylorModel t(like.degree(), like.r_);
    t.rem_ = bound;
    return t;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double radius() const { return r_; }
  double remainder() const { return rem_; }
  const Ball& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }

  // sum_{k >= from} |c_k| r^k, rounded up.
  double poly_bound(int from = 0) const {
    double acc = 0, rk = pow_up(r_, from);
    for (int k = from; k <= degree(); ++k) {
      acc = detail::add_up(acc, detail::mul_up(c_[static_cast<std::size_t>(k)].mag(), rk));
      rk = detail::mul_up(rk, r_);
    }
    return acc;
  }

  // Enclosure of f over the whole panel.
  Ball range() const {
    Ball v = c_[0];
    v.widen(detail::add_up(poly_bound(1), rem_));
    return v;
  }

  // Enclosure of the integral over [m - h, m + h]; h is the exact half width.
  Ball integral(const Ball& h) const {
    Ball total;
    Ball hk = h;
    double odd = 0;
    for (int k = 0; k <= degree(); ++k) {
      Ball hk1 = hk * h;  // h^{k+1}
      if (k % 2 == 0) {
        total += ldexp(c_[static_cast<std::size_t>(k)] * hk, 1) / Ball(k + 1);
      } else {
        // Only the radius survives: g_k may change with u.
        odd = detail::add_up(odd, (ldexp(Ball::exact(c_[static_cast<std::size_t>(k)].rad()) * hk, 1) / Ball(k + 1))
                                      .upper());
      }
      hk = std::move(hk1);
    }
    total.widen(odd);
    total.widen((ldexp(h, 1) * Ball::exact(rem_)).upper());
    return total;
  }

  // The same function on [m + d - r', m + d + r'], re-expanded around m + d.
  TaylorModel restricted(const Ball& d, double new_radius) const {
    if (!(detail::add_up(d.mag(), new_radius) <= r_)) throw DomainError("restriction leaves the panel");
    TaylorModel t = *this;
    int n = degree();
    for (int i = 0; i < n; ++i)
      for (int j = n - 1; j >= i; --j) t.c_[static_cast<std::size_t>(j)].add_mul(d, t.c_[static_cast<std::size_t>(j) + 1]);
    t.r_ = new_radius;
    return t;
  }

  TaylorModel& operator+=(const TaylorModel& o) {
    merge_shape(o);
    for (int k = 0; k <= degree(); ++k) c_[static_cast<std::size_t>(k)] += o.c_[static_cast<std::size_t>(k)];
    rem_ = detail::add_up(rem_, o.rem_);
    return *this;
  }
  TaylorModel& operator-=(const TaylorModel& o) {
    merge_shape(o);
    for (int k = 0; k <= degree(); ++k) c_[static_cast<std::size_t>(k)] -= o.c_[static_cast<std::size_t>(k)];
    rem_ = detail::add_up(rem_, o.rem_);
    return *this;
  }
  TaylorModel& operator+=(const Ball& v) {
    c_[0] += v;
    return *this;
  }
  TaylorModel& operator-=(const Ball& v) {
    c_[0] -= v;
    return *this;
  }
  TaylorModel& operator*=(const Ball& s) {
    for (auto& x : c_) x *= s;
    rem_ = detail::mul_up(rem_, s.mag());
    return *this;
  }

  // this += x w and this -= x w for a scalar w
  void add_mul(const TaylorModel& x, const Ball& w) {
    merge_shape(x);
    for (int k = 0; k <= degree(); ++k) c_[static_cast<std::size_t>(k)].add_mul(x.c_[static_cast<std::size_t>(k)], w);
    rem_ = detail::add_up(rem_, detail::mul_up(x.rem_, w.mag()));
  }
  void sub_mul(const TaylorModel& x, const Ball& w) {
    merge_shape(x);
    for (int k = 0; k <= degree(); ++k) c_[static_cast<std::size_t>(k)].sub_mul(x.c_[static_cast<std::size_t>(k)], w);
    rem_ = detail::add_up(rem_, detail::mul_up(x.rem_, w.mag()));
  }

  friend TaylorModel operator-(const TaylorModel& a) {
    TaylorModel r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend TaylorModel operator+(TaylorModel a, const TaylorModel& b) { return a += b; }
  friend TaylorModel operator-(TaylorModel a, const TaylorModel& b) { return a -= b; }
  friend TaylorModel operator+(TaylorModel a, const Ball& b) { return a += b; }
  friend TaylorModel operator+(const Ball& b, TaylorModel a) { return a += b; }
  friend TaylorModel operator-(TaylorModel a, const Ball& b) { return a -= b; }
  friend TaylorModel operator-(const Ball& b, const TaylorModel& a) {
    TaylorModel r = -a;
    r.c_[0] += b;
    return r;
  }
  friend TaylorModel operator*(TaylorModel a, const Ball& s) { return a *= s; }
  friend TaylorModel operator*(const Ball& s, TaylorModel a) { return a *= s; }
  friend TaylorModel operator/(const TaylorModel& a, const Ball& s) {
    TaylorModel r = a;
    for (auto& x : r.c_) x = x / s;
    double lo = s.lower() > 0 ? s.lower() : (s.upper() < 0 ? -s.upper() : 0.0);
    if (lo == 0.0) throw DivisorContainsZero();
    r.rem_ = detail::div_up(r.rem_, lo);
    return r;
  }

  friend TaylorModel operator*(const TaylorModel& a, const TaylorModel& b) {
    if (a.is_constant()) return b * a.c_[0];
    if (b.is_constant()) return a * b.c_[0];
    int n = std::min(a.degree(), b.degree());
    TaylorModel r(n, std::max(a.r_, b.r_));
    for (int k = 0; k <= n; ++k) {
      Ball acc = a.c_[0] * b.c_[static_cast<std::size_t>(k)];
      for (int i = 1; i <= k; ++i) acc.add_mul(a.c_[static_cast<std::size_t>(i)], b.c_[static_cast<std::size_t>(k - i)]);
      r.c_[static_cast<std::size_t>(k)] = std::move(acc);
    }
    r.rem_ = product_remainder(a, b, n, r.r_);
    return r;
  }

  friend TaylorModel sqr(const TaylorModel& a) { return a * a; }

  friend TaylorModel operator/(const TaylorModel& a, const TaylorModel& b) {
    if (b.is_constant()) return a / b.c_[0];
    return a * reciprocal(b);
  }
  friend TaylorModel operator/(const Ball& v, const TaylorModel& b) { return reciprocal(b) * v; }

  // 1/Q: the truncated series q of 1/P (P the polynomial part) satisfies
  // P q = 1 + (terms of degree > n), so 1/P - q = -(P q - 1)/P and
  // 1/Q - 1/P = -e/(P Q).
  friend TaylorModel reciprocal(const TaylorModel& b) {
    int n = b.degree();
    double r = b.r_;
    double spread = b.poly_bound(1);
    double c0_lo = b.c_[0].lower() > 0 ? b.c_[0].lower() : (b.c_[0].upper() < 0 ? -b.c_[0].upper() : 0.0);
    double p_lo = c0_lo - spread;
    if (!(p_lo > 0)) throw DivisorContainsZero();
    p_lo = detail::next_down(p_lo);
    double q_lo = detail::next_down(p_lo - b.rem_);
    if (!(q_lo > 0)) throw DivisorContainsZero();

    TaylorModel q(n, r);
    Ball inv0 = Ball(1) / b.c_[0];
    q.c_[0] = inv0;
    for (int k = 1; k <= n; ++k) {
      Ball acc;
      for (int j = 1; j <= k; ++j) acc.add_mul(b.c_[static_cast<std::size_t>(j)], q.c_[static_cast<std::size_t>(k - j)]);
      q.c_[static_cast<std::size_t>(k)] = -(acc * inv0);
    }
    double high = high_product_bound(b, q, n, r);
    double rem = detail::div_up(high, p_lo);
    if (b.rem_ > 0) rem = detail::add_up(rem, detail::div_up(b.rem_, detail::next_down(p_lo * q_lo)));
    q.rem_ = rem;
    return q;
  }

  friend TaylorModel ldexp(const TaylorModel& a, long k) {
    TaylorModel r = a;
    for (auto& x : r.c_) x = ldexp(x, k);
    r.rem_ = std::ldexp(r.rem_, static_cast<int>(k));
    if (k < 0 && r.rem_ > 0) r.rem_ = detail::next_up(r.rem_);
    return r;
  }

  friend void sin_cos(const TaylorModel& a, TaylorModel& s, TaylorModel& c) {
    if (a.is_linear()) {
      linear_sin_cos(a, s, c);
    } else {
      composed_sin_cos(a, s, c);
    }
  }
  friend TaylorModel sin(const TaylorModel& a) {
    TaylorModel s, c;
    sin_cos(a, s, c);
    return s;
  }
  friend TaylorModel cos(const TaylorModel& a) {
    TaylorModel s, c;
    sin_cos(a, s, c);
    return c;
  }

 private:
  TaylorModel(int degree, double r) : c_(static_cast<std::size_t>(degree) + 1), r_(r) {}

  static double pow_up(double x, int k) {
    double p = 1;
    for (int i = 0; i < k; ++i) p = detail::mul_up(p, x);
    return p;
  }

  bool is_constant() const {
    if (rem_ != 0.0) return false;
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (!c_[k].is_zero()) return false;
    return true;
  }
  bool is_linear() const {
    if (rem_ != 0.0) return false;
    for (std::size_t k = 2; k < c_.size(); ++k)
      if (!c_[k].is_zero()) return false;
    return true;
  }

  void merge_shape(const TaylorModel& o) {
    if (o.degree() < degree()) {
      // Fold the dropped coefficients into the remainder.
      double extra = 0, rk = pow_up(r_, o.degree() + 1);
      for (int k = o.degree() + 1; k <= degree(); ++k) {
        extra = detail::add_up(extra, detail::mul_up(c_[static_cast<std::size_t>(k)].mag(), rk));
        rk = detail::mul_up(rk, r_);
      }
      c_.resize(static_cast<std::size_t>(o.degree()) + 1);
      rem_ = detail::add_up(rem_, extra);
    }
    r_ = std::max(r_, o.r_);
  }

  // sum over i + j > n of |a_i| |b_j| r^{i+j}
  static double high_product_bound(const TaylorModel& a, const TaylorModel& b, int n, double r) {
    std::vector<double> bs(static_cast<std::size_t>(n) + 2, 0.0);  // suffix sums of |b_j| r^j
    std::vector<double> bj(static_cast<std::size_t>(n) + 1);
    double rk = 1;
    for (int j = 0; j <= n; ++j) {
      bj[static_cast<std::size_t>(j)] = detail::mul_up(b.c_[static_cast<std::size_t>(j)].mag(), rk);
      rk = detail::mul_up(rk, r);
    }
    for (int j = n; j >= 0; --j)
      bs[static_cast<std::size_t>(j)] = detail::add_up(bs[static_cast<std::size_t>(j) + 1], bj[static_cast<std::size_t>(j)]);
    double high = 0;
    rk = r;
    for (int i = 1; i <= n; ++i) {
      double ai = detail::mul_up(a.c_[static_cast<std::size_t>(i)].mag(), rk);
      high = detail::add_up(high, detail::mul_up(ai, bs[static_cast<std::size_t>(n + 1 - i)]));
      rk = detail::mul_up(rk, r);
    }
    return high;
  }

  static double product_remainder(const TaylorModel& a, const TaylorModel& b, int n, double r) {
    double high = high_product_bound(a, b, n, r);
    double pa = a.poly_bound(0), pb = b.poly_bound(0);
    double rem = high;
    rem = detail::add_up(rem, detail::mul_up(pa, b.rem_));
    rem = detail::add_up(rem, detail::mul_up(pb, a.rem_));
    rem = detail::add_up(rem, detail::mul_up(a.rem_, b.rem_));
    return rem;
  }

  // sin/cos of a0 + a1 u: derivatives cycle through sin, cos, -sin, -cos and
  // the Lagrange remainder is at most |a1 r|^{n+1}/(n+1)!.
  static void linear_sin_cos(const TaylorModel& a, TaylorModel& s, TaylorModel& c) {
    int n = a.degree();
    TaylorModel rs(n, a.r_), rc(n, a.r_);
    Ball sv, cv;
    sin_cos(a.c_[0], sv, cv);
    Ball scale(1);
    for (int k = 0; k <= n; ++k) {
      if (k > 0) scale = scale * a.c_[1] / Ball(k);
      switch (k % 4) {
        case 0:
          rs.c_[static_cast<std::size_t>(k)] = sv * scale;
          rc.c_[static_cast<std::size_t>(k)] = cv * scale;
          break;
        case 1:
          rs.c_[static_cast<std::size_t>(k)] = cv * scale;
          rc.c_[static_cast<std::size_t>(k)] = -(sv * scale);
          break;
        case 2:
          rs.c_[static_cast<std::size_t>(k)] = -(sv * scale);
          rc.c_[static_cast<std::size_t>(k)] = -(cv * scale);
          break;
        default:
          rs.c_[static_cast<std::size_t>(k)] = -(cv * scale);
          rc.c_[static_cast<std::size_t>(k)] = sv * scale;
          break;
      }
    }
    Ball tail = pow(Ball::exact(detail::mul_up(a.c_[1].mag(), a.r_)), n + 1);
    for (int k = 2; k <= n + 1; ++k) tail = tail / Ball(k);
    rs.rem_ = rc.rem_ = tail.upper();
    s = std::move(rs);
    c = std::move(rc);
  }

  // sin(a0 + D) = sin a0 cos D + cos a0 sin D with the power series of D
  // cut after degree n; the cut costs at most |D|^{n+1}/(n+1)!.
  static void composed_sin_cos(const TaylorModel& a, TaylorModel& s, TaylorModel& c) {
    int n = a.degree();
    TaylorModel d = a;
    d.c_[0] = Ball(0);
    Ball sv, cv;
    sin_cos(a.c_[0], sv, cv);
    TaylorModel sin_d = d, cos_d = constant(Ball(1), a);
    TaylorModel power = d;
    Ball fact(1);
    for (int j = 2; j <= n; ++j) {
      power = power * d;
      fact = fact * Ball(j);
      TaylorModel term = power / fact;
      switch (j % 4) {
        case 0: cos_d += term; break;
        case 1: sin_d += term; break;
        case 2: cos_d -= term; break;
        default: sin_d -= term; break;
      }
    }
    double dmag = detail::add_up(d.poly_bound(1), d.rem_);
    Ball tail = pow(Ball::exact(dmag), n + 1) / (fact * Ball(n + 1));
    sin_d.rem_ = detail::add_up(sin_d.rem_, tail.upper());
    cos_d.rem_ = detail::add_up(cos_d.rem_, tail.upper());
    s = sin_d * cv + cos_d * sv;
    c = cos_d * cv - sin_d * sv;
  }

  std::vector<Ball> c_;
  double rem_ = 0;
  double r_ = 0;
};

inline int order_of(const TaylorModel& t) { return t.degree(); }
inline TaylorModel lift(const Ball& v, const TaylorModel& like) { return TaylorModel::constant(v, like); }
// A term with coefficient bounds radii[k] at every point is at most radii[0]
// everywhere.
inline TaylorModel error_like(const TaylorModel& like, std::span<const double> radii) {
  return TaylorModel::error(radii[0], like);
}
inline Ball value_of(const TaylorModel& t) { return t.range(); }

}  // namespace bvk
