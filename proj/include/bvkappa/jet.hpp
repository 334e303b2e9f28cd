#pragma once

// Truncated Taylor series with ball coefficients. A jet of order K holds
// f(x0), f'(x0), ..., f^(K)(x0)/K! for whatever x0 the variable jet was
// seeded with. Seeding with a wide ball X gives coefficients enclosing the
// Taylor coefficients at every point of X, which is what the quadrature
// remainder needs.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "ball.hpp"

namespace bvk {

class Jet {
 public:
  Jet() = default;
  explicit Jet(int order) : c_(static_cast<std::size_t>(order) + 1) {}

  static Jet variable(const Ball& x, int order) {
    Jet j(order);
    j.c_[0] = x;
    if (order >= 1) j.c_[1] = Ball(1);
    return j;
  }
  static Jet constant(const Ball& v, int order) {
    Jet j(order);
    j.c_[0] = v;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Ball& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  Ball& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  std::span<const Ball> coeffs() const { return c_; }

  // True when every coefficient beyond the first derivative is exactly zero.
  bool is_linear() const {
    for (std::size_t k = 2; k < c_.size(); ++k)
      if (!c_[k].is_zero()) return false;
    return true;
  }

  Jet& operator+=(const Jet& o) {
    truncate(o.order());
    for (int k = 0; k <= order(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    truncate(o.order());
    for (int k = 0; k <= order(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(const Ball& v) {
    c_[0] += v;
    return *this;
  }
  Jet& operator-=(const Ball& v) {
    c_[0] -= v;
    return *this;
  }
  // this += x w and this -= x w for a scalar w
  void add_mul(const Jet& x, const Ball& w) {
    truncate(x.order());
    for (int k = 0; k <= order(); ++k) c_[k].add_mul(x.c_[k], w);
  }
  void sub_mul(const Jet& x, const Ball& w) {
    truncate(x.order());
    for (int k = 0; k <= order(); ++k) c_[k].sub_mul(x.c_[k], w);
  }

  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator*=(const Ball& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend Jet operator-(const Jet& a) {
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r.c_[k] = -a.c_[k];
    return r;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, const Ball& b) { return a += b; }
  friend Jet operator+(const Ball& b, Jet a) { return a += b; }
  friend Jet operator-(Jet a, const Ball& b) { return a -= b; }
  friend Jet operator-(const Ball& b, const Jet& a) {
    Jet r = -a;
    r.c_[0] += b;
    return r;
  }
  friend Jet operator*(Jet a, const Ball& s) { return a *= s; }
  friend Jet operator*(const Ball& s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.is_constant()) return b * a.c_[0];
    if (b.is_constant()) return a * b.c_[0];
    int n = std::min(a.order(), b.order());
    Jet r(n);
    for (int k = 0; k <= n; ++k) {
      Ball acc = a.c_[0] * b.c_[k];
      for (int i = 1; i <= k; ++i) acc.add_mul(a.c_[i], b.c_[k - i]);
      r.c_[k] = std::move(acc);
    }
    return r;
  }

  friend Jet sqr(const Jet& a) {
    int n = a.order();
    Jet r(n);
    r.c_[0] = sqr(a.c_[0]);
    for (int k = 1; k <= n; ++k) {
      Ball acc;
      for (int i = 0; 2 * i < k; ++i) acc.add_mul(a.c_[i], a.c_[k - i]);
      acc = ldexp(acc, 1);
      if (k % 2 == 0) acc += sqr(a.c_[k / 2]);
      r.c_[k] = std::move(acc);
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Ball& s) {
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r.c_[k] = a.c_[k] / s;
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.is_constant()) return a / b.c_[0];
    int n = std::min(a.order(), b.order());
    Jet q(n);
    for (int k = 0; k <= n; ++k) {
      Ball acc = a.c_[k];
      for (int j = 1; j <= k; ++j) acc.sub_mul(b.c_[j], q.c_[k - j]);
      q.c_[k] = acc / b.c_[0];
    }
    return q;
  }

  friend Jet operator/(const Ball& v, const Jet& b) { return constant(v, b.order()) / b; }

  friend Jet ldexp(const Jet& a, long k) {
    Jet r(a.order());
    for (int i = 0; i <= a.order(); ++i) r.c_[i] = ldexp(a.c_[i], k);
    return r;
  }

  friend Jet exp(const Jet& a) {
    int n = a.order();
    Jet e(n);
    e.c_[0] = exp(a.c_[0]);
    for (int k = 1; k <= n; ++k) {
      Ball acc;
      for (int j = 1; j <= k; ++j) acc.add_mul(a.c_[j] * Ball(j), e.c_[k - j]);
      e.c_[k] = acc / Ball(k);
    }
    return e;
  }

  friend Jet log(const Jet& a) {
    int n = a.order();
    Jet l(n);
    l.c_[0] = log(a.c_[0]);
    for (int k = 1; k <= n; ++k) {
      Ball acc;
      for (int j = 1; j < k; ++j) acc.add_mul(l.c_[j] * Ball(j), a.c_[k - j]);
      l.c_[k] = (a.c_[k] - acc / Ball(k)) / a.c_[0];
    }
    return l;
  }

  friend Jet sqrt(const Jet& a) {
    int n = a.order();
    Jet r(n);
    r.c_[0] = sqrt(a.c_[0]);
    Ball twice = ldexp(r.c_[0], 1);
    for (int k = 1; k <= n; ++k) {
      Ball acc = a.c_[k];
      for (int j = 1; j < k; ++j) acc.sub_mul(r.c_[j], r.c_[k - j]);
      r.c_[k] = acc / twice;
    }
    return r;
  }

  friend void sin_cos(const Jet& a, Jet& s, Jet& c) {
    int n = a.order();
    Jet rs(n), rc(n);
    sin_cos(a.c_[0], rs.c_[0], rc.c_[0]);
    if (a.is_linear()) {
      // Derivatives of sin cycle through sin, cos, -sin, -cos.
      Ball scale(1);
      for (int k = 1; k <= n; ++k) {
        scale = scale * a.c_[1] / Ball(k);
        const Ball& sv = rs.c_[0];
        const Ball& cv = rc.c_[0];
        switch (k % 4) {
          case 0:
            rs.c_[k] = sv * scale;
            rc.c_[k] = cv * scale;
            break;
          case 1:
            rs.c_[k] = cv * scale;
            rc.c_[k] = -(sv * scale);
            break;
          case 2:
            rs.c_[k] = -(sv * scale);
            rc.c_[k] = -(cv * scale);
            break;
          default:
            rs.c_[k] = -(cv * scale);
            rc.c_[k] = sv * scale;
            break;
        }
      }
    } else {
      for (int k = 1; k <= n; ++k) {
        Ball as, ac;
        for (int j = 1; j <= k; ++j) {
          Ball ja = a.c_[j] * Ball(j);
          as.add_mul(ja, rc.c_[k - j]);
          ac.add_mul(ja, rs.c_[k - j]);
        }
        rs.c_[k] = as / Ball(k);
        rc.c_[k] = -(ac / Ball(k));
      }
    }
    s = std::move(rs);
    c = std::move(rc);
  }
  friend Jet sin(const Jet& a) {
    Jet s, c;
    sin_cos(a, s, c);
    return s;
  }
  friend Jet cos(const Jet& a) {
    Jet s, c;
    sin_cos(a, s, c);
    return c;
  }

  friend Jet pow(const Jet& a, long n) {
    if (n < 0) return Ball(1) / pow(a, -n);
    Jet result = constant(Ball(1), a.order());
    Jet base = a;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n) base = sqr(base);
    }
    return result;
  }

 private:
  bool is_constant() const {
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (!c_[k].is_zero()) return false;
    return true;
  }
  void truncate(int n) {
    if (n < order()) c_.resize(static_cast<std::size_t>(n) + 1);
  }

  std::vector<Ball> c_;
};

// Helpers that let generic code treat Ball as an order-0 jet.
inline int order_of(const Ball&) { return 0; }
inline int order_of(const Jet& j) { return j.order(); }

inline Ball lift(const Ball& v, const Ball&) { return v; }
inline Jet lift(const Ball& v, const Jet& like) { return Jet::constant(v, like.order()); }

// A quantity known only through bounds on its Taylor coefficients:
// coefficient k lies in [-radii[k], radii[k]].
inline Ball error_like(const Ball&, std::span<const double> radii) { return Ball::zero_pm(radii[0]); }
inline Jet error_like(const Jet& like, std::span<const double> radii) {
  Jet e(like.order());
  for (int k = 0; k <= like.order(); ++k) e[k] = Ball::zero_pm(radii[static_cast<std::size_t>(k)]);
  return e;
}

inline const Ball& value_of(const Ball& b) { return b; }
inline const Ball& value_of(const Jet& j) { return j[0]; }

}  // namespace bvk
