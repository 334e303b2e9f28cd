#pragma once

#include <type_traits>
#include <utility>

#include "ball.hpp"

namespace bvk {

// Complex numbers over a real scalar type T (Ball, or Jet for Taylor
// coefficients of a complex function of one real variable).
template <class T>
struct Complex {
  T re;
  T im;

  Complex() = default;
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
};

using ComplexBall = Complex<Ball>;

template <class T>
Complex<T> operator+(const Complex<T>& a, const Complex<T>& b) {
  return {a.re + b.re, a.im + b.im};
}
template <class T>
Complex<T> operator-(const Complex<T>& a, const Complex<T>& b) {
  return {a.re - b.re, a.im - b.im};
}
template <class T>
Complex<T> operator-(const Complex<T>& a) {
  return {-a.re, -a.im};
}
template <class T>
Complex<T> operator*(const Complex<T>& a, const Complex<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
Complex<T> operator*(const Complex<T>& a, const Ball& s) {
  return {a.re * s, a.im * s};
}
template <class T>
Complex<T> operator*(const Ball& s, const Complex<T>& a) {
  return {s * a.re, s * a.im};
}
// Real scalar of the same type (e.g. a jet times a complex jet).
template <class T>
  requires(!std::is_same_v<T, Ball>)
Complex<T> operator*(const Complex<T>& a, const T& s) {
  return {a.re * s, a.im * s};
}
template <class T>
Complex<T> operator/(const Complex<T>& a, const Ball& s) {
  return {a.re / s, a.im / s};
}

template <class T>
Complex<T> conj(const Complex<T>& a) {
  return {a.re, -a.im};
}

template <class T>
T norm(const Complex<T>& a) {
  return sqr(a.re) + sqr(a.im);
}

template <class T>
Complex<T> operator/(const Complex<T>& a, const Complex<T>& b) {
  T n = norm(b);
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

inline Ball abs(const ComplexBall& a) {
  Ball n = norm(a);
  // a sum of squares; rounding in the radius may still dip below zero
  if (!n.is_nonnegative()) n = one_sided(n.upper());
  return sqrt(n);
}

// cos(theta) + i sin(theta)
template <class T>
Complex<T> unit_phase(const T& theta) {
  Complex<T> z;
  sin_cos(theta, z.im, z.re);
  return z;
}

template <class T>
Complex<T> exp(const Complex<T>& a) {
  T m = exp(a.re);
  Complex<T> z = unit_phase(a.im);
  return {m * z.re, m * z.im};
}

// base^{i t} for a real base given by its logarithm.
template <class T>
Complex<T> pow_imag(const Ball& log_base, const T& t) {
  return unit_phase(t * log_base);
}

inline bool contains(const ComplexBall& z, const ComplexBall& w) {
  return z.re.contains(w.re) && z.im.contains(w.im);
}
inline bool overlaps(const ComplexBall& z, const ComplexBall& w) {
  return z.re.overlaps(w.re) && z.im.overlaps(w.im);
}

}  // namespace bvk
