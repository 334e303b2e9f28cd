#pragma once

// Real ball arithmetic: an MPFR midpoint with a double radius that is always
// rounded outward. Every operation returns a ball containing the exact result
// for all inputs drawn from the argument balls.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"

namespace bvk {

constexpr int kDefaultPrecision = 128;

namespace detail {

inline int& precision_slot() {
  thread_local int bits = kDefaultPrecision;
  return bits;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

// Radii are nonnegative; these keep an exact zero exact.
inline double add_up(double a, double b) {
  if (b == 0.0) return a;
  if (a == 0.0) return b;
  return next_up(a + b);
}
inline double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return next_up(a * b);
}
inline double div_up(double a, double b) {
  if (a == 0.0) return 0.0;
  return next_up(a / b);
}

inline double mag_up(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDA)); }
inline double mag_down(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDZ)); }

// One unit in the last place of x at its own precision (an upper bound on
// the error of a single correctly rounded operation that produced x).
inline double ulp(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return std::numeric_limits<double>::denorm_min();
  long e = static_cast<long>(mpfr_get_exp(x)) - static_cast<long>(mpfr_get_prec(x));
  if (e < -1074) return std::numeric_limits<double>::denorm_min();
  if (e > 1023) return kInf;
  return std::ldexp(1.0, static_cast<int>(e));
}

}  // namespace detail

inline int working_precision() { return detail::precision_slot(); }

inline void set_working_precision(int bits) {
  if (bits < 32 || bits > (1 << 16)) throw DomainError("precision out of range");
  detail::precision_slot() = bits;
}

class PrecisionScope {
 public:
  explicit PrecisionScope(int bits) : saved_(working_precision()) { set_working_precision(bits); }
  ~PrecisionScope() { detail::precision_slot() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

class Ball {
  struct NoInit {};

 public:
  Ball() : Ball(0L) {}
  Ball(int v) : Ball(static_cast<long>(v)) {}
  Ball(long v) : Ball(NoInit{}) {
    if (mpfr_set_si(mid_, v, MPFR_RNDN)) rad_ = detail::ulp(mid_);
  }
  Ball(long long v) : Ball(static_cast<long>(v)) {}
  explicit Ball(const mpz_class& z) : Ball(NoInit{}) {
    if (mpfr_set_z(mid_, z.get_mpz_t(), MPFR_RNDN)) rad_ = detail::ulp(mid_);
  }
  explicit Ball(const mpq_class& q) : Ball(NoInit{}) {
    if (mpfr_set_q(mid_, q.get_mpq_t(), MPFR_RNDN)) rad_ = detail::ulp(mid_);
  }

  // A double is taken at face value (0.1 means the binary double nearest 0.1).
  static Ball exact(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite double");
    Ball r{NoInit{}};
    if (mpfr_set_d(r.mid_, v, MPFR_RNDN)) r.rad_ = detail::ulp(r.mid_);
    return r;
  }

  // Decimal literal such as "0.577215664901532860606512090082".
  static Ball from_string(std::string_view text) {
    std::string s(text);
    Ball r{NoInit{}};
    char* end = nullptr;
    int t = mpfr_strtofr(r.mid_, s.c_str(), &end, 10, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0') throw DomainError("bad decimal literal: " + s);
    if (t) r.rad_ = detail::ulp(r.mid_);
    return r;
  }

  // Decimal midpoint widened by a radius (e.g. a literal known to 30 digits).
  static Ball from_string(std::string_view text, double radius) {
    Ball r = from_string(text);
    r.widen(radius);
    return r;
  }

  static Ball around(double mid, double radius) {
    Ball r = exact(mid);
    r.widen(radius);
    return r;
  }

  static Ball zero_pm(double radius) {
    Ball r{NoInit{}};
    mpfr_set_zero(r.mid_, 1);
    r.rad_ = std::fabs(radius);
    return r;
  }

  // Smallest ball (up to rounding) containing [lo, hi].
  static Ball interval(mpfr_srcptr lo, mpfr_srcptr hi) {
    if (mpfr_cmp(lo, hi) > 0) throw DomainError("empty interval");
    Ball r{NoInit{}};
    mpfr_add(r.mid_, lo, hi, MPFR_RNDN);
    mpfr_div_2ui(r.mid_, r.mid_, 1, MPFR_RNDN);
    mpfr_t d;
    mpfr_init2(d, 64);
    mpfr_sub(d, hi, r.mid_, MPFR_RNDU);
    double a = mpfr_get_d(d, MPFR_RNDU);
    mpfr_sub(d, r.mid_, lo, MPFR_RNDU);
    double b = mpfr_get_d(d, MPFR_RNDU);
    mpfr_clear(d);
    r.rad_ = std::max({a, b, 0.0});
    return r;
  }
  static Ball interval(double lo, double hi) {
    Ball a = exact(lo), b = exact(hi);
    return interval(a.mid_, b.mid_);
  }
  static Ball interval(const mpq_class& lo, const mpq_class& hi) {
    int p = working_precision();
    mpfr_t l, h;
    mpfr_init2(l, p);
    mpfr_init2(h, p);
    mpfr_set_q(l, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(h, hi.get_mpq_t(), MPFR_RNDU);
    Ball r = interval(l, h);
    mpfr_clear(l);
    mpfr_clear(h);
    return r;
  }

  Ball(const Ball& o) : rad_(o.rad_) {
    mpfr_init2(mid_, mpfr_get_prec(o.mid_));
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
  }
  Ball(Ball&& o) noexcept : rad_(o.rad_) {
    mid_[0] = o.mid_[0];
    o.mid_->_mpfr_d = nullptr;
  }
  Ball& operator=(const Ball& o) {
    if (this != &o) {
      if (!mid_->_mpfr_d) {
        mpfr_init2(mid_, mpfr_get_prec(o.mid_));
      } else {
        mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
      }
      mpfr_set(mid_, o.mid_, MPFR_RNDN);
      rad_ = o.rad_;
    }
    return *this;
  }
  Ball& operator=(Ball&& o) noexcept {
    std::swap(mid_[0], o.mid_[0]);
    std::swap(rad_, o.rad_);
    return *this;
  }
  ~Ball() {
    if (mid_->_mpfr_d) mpfr_clear(mid_);
  }

  mpfr_srcptr mid() const { return mid_; }
  double rad() const { return rad_; }
  double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  int precision() const { return static_cast<int>(mpfr_get_prec(mid_)); }
  bool is_exact() const { return rad_ == 0.0; }
  bool is_zero() const { return rad_ == 0.0 && mpfr_zero_p(mid_); }

  double lower() const {
    double m = mpfr_get_d(mid_, MPFR_RNDD);
    return rad_ == 0.0 ? m : detail::next_down(m - rad_);
  }
  double upper() const {
    double m = mpfr_get_d(mid_, MPFR_RNDU);
    return rad_ == 0.0 ? m : detail::next_up(m + rad_);
  }
  // Upper bound of |x| over the ball.
  double mag() const { return detail::add_up(detail::mag_up(mid_), rad_); }
  double width() const { return 2.0 * rad_; }

  bool contains_zero() const { return mpfr_cmp_d(mid_, rad_) <= 0 && mpfr_cmp_d(mid_, -rad_) >= 0; }
  bool is_positive() const { return mpfr_cmp_d(mid_, rad_) > 0; }
  bool is_negative() const { return mpfr_cmp_d(mid_, -rad_) < 0; }
  bool is_nonnegative() const { return mpfr_cmp_d(mid_, rad_) >= 0; }

  bool contains(const Ball& x) const {
    return endpoint_cmp(*this, -1, x, -1) <= 0 && endpoint_cmp(x, 1, *this, 1) <= 0;
  }
  bool contains(double v) const { return contains(exact(v)); }
  bool contains(std::string_view decimal) const { return contains(from_string(decimal)); }
  bool overlaps(const Ball& x) const {
    return endpoint_cmp(*this, -1, x, 1) <= 0 && endpoint_cmp(x, -1, *this, 1) <= 0;
  }
  // Every point of *this is strictly below every point of x.
  bool certainly_less(const Ball& x) const { return endpoint_cmp(*this, 1, x, -1) < 0; }

  void widen(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("bad radius");
    rad_ = detail::add_up(rad_, r);
  }
  Ball widened(double r) const {
    Ball b(*this);
    b.widen(r);
    return b;
  }
  Ball midpoint() const {
    Ball b(*this);
    b.rad_ = 0.0;
    return b;
  }

  // this += a * b with a single rounding of the midpoint.
  void add_mul(const Ball& a, const Ball& b) {
    mpfr_prec_t p = working_precision();
    double old_rad = rad_;
    double prad = product_rad(a, b);
    int t;
    if (mpfr_get_prec(mid_) != p) {
      mpfr_t tmp;
      mpfr_init2(tmp, p);
      t = mpfr_fma(tmp, a.mid_, b.mid_, mid_, MPFR_RNDN);
      mpfr_swap(tmp, mid_);
      mpfr_clear(tmp);
    } else {
      t = mpfr_fma(mid_, a.mid_, b.mid_, mid_, MPFR_RNDN);
    }
    rad_ = detail::add_up(old_rad, prad);
    if (t) rad_ = detail::add_up(rad_, detail::ulp(mid_));
    check();
  }
  // this -= a * b.
  void sub_mul(const Ball& a, const Ball& b) {
    mpfr_prec_t p = working_precision();
    double prad = product_rad(a, b);
    mpfr_t tmp;
    mpfr_init2(tmp, p);
    int t = mpfr_fms(tmp, a.mid_, b.mid_, mid_, MPFR_RNDN);
    mpfr_neg(tmp, tmp, MPFR_RNDN);
    mpfr_swap(tmp, mid_);
    mpfr_clear(tmp);
    rad_ = detail::add_up(rad_, prad);
    if (t) rad_ = detail::add_up(rad_, detail::ulp(mid_));
    check();
  }

  Ball& operator+=(const Ball& b) { return *this = *this + b; }
  Ball& operator-=(const Ball& b) { return *this = *this - b; }
  Ball& operator*=(const Ball& b) { return *this = *this * b; }
  Ball& operator/=(const Ball& b) { return *this = *this / b; }

  friend Ball operator-(const Ball& a) {
    Ball r(a);
    mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
    return r;
  }

  friend Ball operator+(const Ball& a, const Ball& b) {
    Ball r{NoInit{}};
    int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    r.rad_ = detail::add_up(a.rad_, b.rad_);
    r.finish(t);
    return r;
  }
  friend Ball operator-(const Ball& a, const Ball& b) {
    Ball r{NoInit{}};
    int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    r.rad_ = detail::add_up(a.rad_, b.rad_);
    r.finish(t);
    return r;
  }
  friend Ball operator*(const Ball& a, const Ball& b) {
    Ball r{NoInit{}};
    int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    r.rad_ = product_rad(a, b);
    r.finish(t);
    return r;
  }
  friend Ball operator/(const Ball& a, const Ball& b) {
    double mb = detail::mag_down(b.mid_);
    if (!(mb > b.rad_)) throw DivisorContainsZero();
    Ball r{NoInit{}};
    int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    if (a.rad_ != 0.0 || b.rad_ != 0.0) {
      double gap = detail::next_down(mb - b.rad_);
      if (!(gap > 0.0)) throw DivisorContainsZero();
      // |a/b - ma/mb| <= ra/(|mb|-rb) + |ma| rb / (|mb| (|mb|-rb))
      double e1 = detail::div_up(a.rad_, gap);
      double e2 = detail::div_up(detail::mul_up(detail::mag_up(a.mid_), b.rad_),
                                 detail::next_down(mb * gap));
      r.rad_ = detail::add_up(e1, e2);
    }
    r.finish(t);
    return r;
  }

  // x * 2^k, exact apart from the rounding to working precision.
  friend Ball ldexp(const Ball& a, long k) {
    Ball r{NoInit{}};
    int t = mpfr_mul_2si(r.mid_, a.mid_, k, MPFR_RNDN);
    r.rad_ = std::ldexp(a.rad_, static_cast<int>(k));
    if (a.rad_ != 0.0 && r.rad_ == 0.0) r.rad_ = std::numeric_limits<double>::denorm_min();
    r.finish(t);
    return r;
  }

  friend Ball sqr(const Ball& a) {
    if (a.rad_ != 0.0 && a.contains_zero()) return zero_to(a.mag_sq_up());
    // wide balls: the midpoint form overshoots below, square the endpoints instead
    if (a.rad_ > std::ldexp(detail::mag_down(a.mid_), -20)) return abs(a).map_increasing(mpfr_sqr);
    Ball r{NoInit{}};
    int t = mpfr_sqr(r.mid_, a.mid_, MPFR_RNDN);
    if (a.rad_ != 0.0) {
      double m = detail::mag_up(a.mid_);
      r.rad_ = detail::add_up(detail::mul_up(2.0 * m, a.rad_), detail::mul_up(a.rad_, a.rad_));
    }
    r.finish(t);
    return r;
  }

  friend Ball abs(const Ball& a) {
    if (a.rad_ != 0.0 && a.contains_zero()) return zero_to(a.mag());
    Ball r(a);
    mpfr_abs(r.mid_, r.mid_, MPFR_RNDN);
    return r;
  }

  friend Ball exp(const Ball& a) {
    Ball r{NoInit{}};
    int t = mpfr_exp(r.mid_, a.mid_, MPFR_RNDN);
    if (a.rad_ != 0.0) {
      if (a.rad_ > 700.0) throw DomainError("exp radius overflow");
      double em = detail::add_up(detail::mag_up(r.mid_), detail::ulp(r.mid_));
      double e1 = detail::next_up(std::expm1(a.rad_) * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()));
      r.rad_ = detail::mul_up(em, e1);
    }
    r.finish(t);
    return r;
  }

  friend Ball log(const Ball& a) {
    if (!a.is_positive()) throw DomainError("log of a ball not strictly positive");
    Ball r{NoInit{}};
    int t = mpfr_log(r.mid_, a.mid_, MPFR_RNDN);
    if (a.rad_ != 0.0) {
      double gap = detail::next_down(detail::mag_down(a.mid_) - a.rad_);
      if (!(gap > 0.0)) throw DomainError("log of a ball too close to zero");
      r.rad_ = detail::div_up(a.rad_, gap);
    }
    r.finish(t);
    return r;
  }

  friend void sin_cos(const Ball& a, Ball& s, Ball& c) {
    if (a.rad_ >= 2.0) {
      s = zero_pm(1.0);
      c = zero_pm(1.0);
      return;
    }
    Ball rs{NoInit{}}, rc{NoInit{}};
    int t = mpfr_sin_cos(rs.mid_, rc.mid_, a.mid_, MPFR_RNDN);
    rs.rad_ = a.rad_;
    rc.rad_ = a.rad_;
    rs.finish(t);
    rc.finish(t);
    s = std::move(rs);
    c = std::move(rc);
  }
  friend Ball sin(const Ball& a) {
    if (a.rad_ >= 2.0) return zero_pm(1.0);
    Ball r{NoInit{}};
    int t = mpfr_sin(r.mid_, a.mid_, MPFR_RNDN);
    r.rad_ = a.rad_;
    r.finish(t);
    return r;
  }
  friend Ball cos(const Ball& a) {
    if (a.rad_ >= 2.0) return zero_pm(1.0);
    Ball r{NoInit{}};
    int t = mpfr_cos(r.mid_, a.mid_, MPFR_RNDN);
    r.rad_ = a.rad_;
    r.finish(t);
    return r;
  }

  friend Ball sqrt(const Ball& a) {
    if (!a.is_nonnegative()) throw DomainError("sqrt of a ball with negative part");
    return a.map_increasing(mpfr_sqrt);
  }
  friend Ball atan(const Ball& a) { return a.map_increasing(mpfr_atan); }

  static Ball pi() {
    Ball r{NoInit{}};
    int t = mpfr_const_pi(r.mid_, MPFR_RNDN);
    r.finish(t);
    return r;
  }

  // Decimal rendering: midpoint with `digits` significant digits, radius
  // rounded up so that the printed ball contains this one.
  std::pair<std::string, std::string> to_decimal(int digits = 0) const {
    if (digits <= 0) digits = default_digits();
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, mid_);
    std::string mid_text(buf);
    mpfr_free_str(buf);

    mpfr_prec_t p = mpfr_get_prec(mid_) + 64;
    mpfr_t hi, lo, d, r;
    mpfr_inits2(p, hi, lo, d, r, static_cast<mpfr_ptr>(nullptr));
    mpfr_strtofr(hi, mid_text.c_str(), nullptr, 10, MPFR_RNDU);
    mpfr_strtofr(lo, mid_text.c_str(), nullptr, 10, MPFR_RNDD);
    mpfr_sub(hi, hi, mid_, MPFR_RNDU);
    mpfr_sub(lo, mid_, lo, MPFR_RNDU);
    mpfr_abs(hi, hi, MPFR_RNDU);
    mpfr_abs(lo, lo, MPFR_RNDU);
    mpfr_max(d, hi, lo, MPFR_RNDU);
    mpfr_set_d(r, rad_, MPFR_RNDU);
    mpfr_add(r, r, d, MPFR_RNDU);
    mpfr_asprintf(&buf, "%.3RUe", r);
    std::string rad_text(buf);
    mpfr_free_str(buf);
    mpfr_clears(hi, lo, d, r, static_cast<mpfr_ptr>(nullptr));
    return {mid_text, rad_text};
  }

  std::string to_string(int digits = 0) const {
    auto [m, r] = to_decimal(digits);
    return "[" + m + " +/- " + r + "]";
  }

  friend std::ostream& operator<<(std::ostream& os, const Ball& b) { return os << b.to_string(); }

  // Compares endpoint sa of a (−1 lower, +1 upper) with endpoint sb of b,
  // exactly. Returns <0, 0, >0.
  static int endpoint_cmp(const Ball& a, int sa, const Ball& b, int sb) {
    mpfr_t x, y;
    exact_endpoint(x, a, sa);
    exact_endpoint(y, b, sb);
    int c = mpfr_cmp(x, y);
    mpfr_clear(x);
    mpfr_clear(y);
    return c;
  }

  // out is initialized here and must be cleared by the caller.
  static void exact_endpoint(mpfr_t out, const Ball& a, int sign) {
    if (a.rad_ == 0.0 || mpfr_zero_p(a.mid_)) {
      mpfr_init2(out, std::max<mpfr_prec_t>(mpfr_get_prec(a.mid_), 64));
      if (mpfr_zero_p(a.mid_)) {
        mpfr_set_d(out, sign * a.rad_, MPFR_RNDN);
      } else {
        mpfr_set(out, a.mid_, MPFR_RNDN);
      }
      return;
    }
    int er = std::ilogb(a.rad_) + 1;
    long em = mpfr_get_exp(a.mid_);
    long top = std::max<long>(em, er);
    long bottom = std::min<long>(em - static_cast<long>(mpfr_get_prec(a.mid_)), er - 53);
    mpfr_init2(out, static_cast<mpfr_prec_t>(top - bottom + 4));
    mpfr_set(out, a.mid_, MPFR_RNDN);
    if (sign < 0) {
      mpfr_sub_d(out, out, a.rad_, MPFR_RNDN);
    } else {
      mpfr_add_d(out, out, a.rad_, MPFR_RNDN);
    }
  }

 private:
  explicit Ball(NoInit) { mpfr_init2(mid_, working_precision()); }

  static double product_rad(const Ball& a, const Ball& b) {
    if (a.rad_ == 0.0 && b.rad_ == 0.0) return 0.0;
    double ma = detail::mag_up(a.mid_), mb = detail::mag_up(b.mid_);
    return detail::add_up(detail::add_up(detail::mul_up(ma, b.rad_), detail::mul_up(mb, a.rad_)),
                          detail::mul_up(a.rad_, b.rad_));
  }

  // Ball [0, u] with lower endpoint exactly zero.
  static Ball zero_to(double u) {
    Ball r{NoInit{}};
    double h = u / 2.0;
    if (h * 2.0 < u) h = detail::next_up(h);
    mpfr_set_d(r.mid_, h, MPFR_RNDN);
    r.rad_ = h;
    r.check();
    return r;
  }

  double mag_sq_up() const {
    double m = mag();
    return detail::mul_up(m, m);
  }

  template <class Fn>
  Ball map_increasing(Fn fn) const {
    if (rad_ == 0.0) {
      Ball r{NoInit{}};
      int t = fn(r.mid_, mid_, MPFR_RNDN);
      r.finish(t);
      return r;
    }
    mpfr_t lo, hi;
    exact_endpoint(lo, *this, -1);
    exact_endpoint(hi, *this, 1);
    mpfr_t flo, fhi;
    mpfr_init2(flo, working_precision());
    mpfr_init2(fhi, working_precision());
    fn(flo, lo, MPFR_RNDD);
    fn(fhi, hi, MPFR_RNDU);
    Ball r = interval(flo, fhi);
    mpfr_clears(lo, hi, flo, fhi, static_cast<mpfr_ptr>(nullptr));
    r.check();
    return r;
  }

  int default_digits() const {
    double m = std::fabs(mid_d());
    int full = static_cast<int>(std::ceil(static_cast<double>(mpfr_get_prec(mid_)) * 0.30103)) + 2;
    if (rad_ == 0.0 || m == 0.0) return std::min(full, 40);
    int needed = static_cast<int>(std::ceil(std::log10(m / rad_))) + 4;
    return std::clamp(needed, 6, full);
  }

  void finish(int ternary) {
    if (ternary) rad_ = detail::add_up(rad_, detail::ulp(mid_));
    check();
  }
  void check() const {
    if (!mpfr_number_p(mid_) || !std::isfinite(rad_)) throw DomainError("non-finite ball");
  }

  mpfr_t mid_;
  double rad_ = 0.0;
};

// Intersection of two balls known to contain the same quantity.
inline Ball intersect(const Ball& a, const Ball& b) {
  if (!a.overlaps(b)) throw DomainError("disjoint enclosures");
  if (a.contains(b)) return b;
  if (b.contains(a)) return a;
  mpfr_t alo, ahi, blo, bhi;
  Ball::exact_endpoint(alo, a, -1);
  Ball::exact_endpoint(ahi, a, 1);
  Ball::exact_endpoint(blo, b, -1);
  Ball::exact_endpoint(bhi, b, 1);
  mpfr_srcptr lo = mpfr_cmp(alo, blo) >= 0 ? alo : blo;
  mpfr_srcptr hi = mpfr_cmp(ahi, bhi) <= 0 ? ahi : bhi;
  mpfr_t l, h;
  mpfr_init2(l, working_precision());
  mpfr_init2(h, working_precision());
  mpfr_set(l, lo, MPFR_RNDD);
  mpfr_set(h, hi, MPFR_RNDU);
  Ball r = Ball::interval(l, h);
  mpfr_clears(alo, ahi, blo, bhi, l, h, static_cast<mpfr_ptr>(nullptr));
  return r;
}

// Narrower of two enclosures of the same quantity, intersected when possible.
inline Ball tighter(const Ball& a, const Ball& b) {
  if (a.overlaps(b)) return intersect(a, b);
  return a.rad() <= b.rad() ? a : b;
}

inline Ball hull(const Ball& a, const Ball& b) {
  mpfr_t alo, ahi, blo, bhi;
  Ball::exact_endpoint(alo, a, -1);
  Ball::exact_endpoint(ahi, a, 1);
  Ball::exact_endpoint(blo, b, -1);
  Ball::exact_endpoint(bhi, b, 1);
  mpfr_srcptr lo = mpfr_cmp(alo, blo) <= 0 ? alo : blo;
  mpfr_srcptr hi = mpfr_cmp(ahi, bhi) >= 0 ? ahi : bhi;
  mpfr_t l, h;
  mpfr_init2(l, working_precision());
  mpfr_init2(h, working_precision());
  mpfr_set(l, lo, MPFR_RNDD);
  mpfr_set(h, hi, MPFR_RNDU);
  Ball r = Ball::interval(l, h);
  mpfr_clears(alo, ahi, blo, bhi, l, h, static_cast<mpfr_ptr>(nullptr));
  return r;
}

// Ball [0, u] for an upper bound u >= 0.
inline Ball one_sided(double u) {
  if (!(u >= 0.0)) throw DomainError("negative one-sided bound");
  return Ball::interval(0.0, u);
}

inline Ball pow(const Ball& a, long n) {
  if (n < 0) return Ball(1) / pow(a, -n);
  Ball result(1), base(a);
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n) base = sqr(base);
  }
  return result;
}
inline Ball pow(const Ball& a, int n) { return pow(a, static_cast<long>(n)); }
inline Ball pow(const Ball& a, const Ball& b) { return exp(b * log(a)); }

inline Ball max_upper(const Ball& a, const Ball& b) { return a.upper() >= b.upper() ? a : b; }

}  // namespace bvk
