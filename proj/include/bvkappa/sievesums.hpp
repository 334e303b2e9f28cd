#pragma once

// Direct evaluation of quadratic-sieve quantities for weights
// rho(d) = h(log(D2/d) / log(D2/D1)), and the asymptotic predictions they
// are checked against.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ball.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "primetools.hpp"

namespace bvk {

// Neumaier's compensated sum in extended precision.
class CompensatedSum {
 public:
  void add(long double x) {
    long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0;
  long double comp_ = 0;
};

// Polynomial sum_k c[k] x^k, used on the interval [a, b].
struct PolyPiece {
  double a = 0, b = 1;
  std::vector<double> c;

  double value(double x) const {
    double v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }
  double slope(double x) const {
    double v = 0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + static_cast<double>(k) * c[k];
    return v;
  }
};

// h with h = 0 on (-oo, 0], polynomial pieces covering [0, 1], constant on [1, oo).
class SmoothingFn {
 public:
  static SmoothingFn h0() { return polynomial({0.0, 1.0}); }
  static SmoothingFn polynomial(std::vector<double> c) { return piecewise({PolyPiece{0.0, 1.0, std::move(c)}}); }

  static SmoothingFn piecewise(std::vector<PolyPiece> pieces) {
    SmoothingFn h;
    h.pieces_ = std::move(pieces);
    for (auto& p : h.pieces_) {
      while (!p.c.empty() && p.c.back() == 0.0) p.c.pop_back();
    }
    h.check();
    h.derive();
    return h;
  }

  // a h1 + b h2 on the common refinement of both knot sets.
  static SmoothingFn combination(double a, const SmoothingFn& h1, double b, const SmoothingFn& h2) {
    std::vector<double> knots;
    for (const auto* h : {&h1, &h2})
      for (const auto& p : h->pieces_) knots.push_back(p.a);
    knots.push_back(1.0);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<PolyPiece> out;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double mid = 0.5 * (knots[i] + knots[i + 1]);
      const auto& p1 = h1.piece_at(mid).c;
      const auto& p2 = h2.piece_at(mid).c;
      std::vector<double> c(std::max(p1.size(), p2.size()), 0.0);
      for (std::size_t k = 0; k < p1.size(); ++k) c[k] += a * p1[k];
      for (std::size_t k = 0; k < p2.size(); ++k) c[k] += b * p2[k];
      out.push_back({knots[i], knots[i + 1], std::move(c)});
    }
    return piecewise(std::move(out));
  }

  double operator()(double x) const {
    if (x <= 0) return 0.0;
    if (x >= 1) return value_at_1_;
    return piece_at(x).value(x);
  }
  double derivative(double x) const {
    if (x <= 0 || x >= 1) return 0.0;
    return piece_at(x).slope(x);
  }

  const std::vector<PolyPiece>& pieces() const { return pieces_; }
  double value_at_1() const { return value_at_1_; }
  double l2_deriv_sq() const { return l2_deriv_sq_; }            // int |h'|^2
  double total_variation_deriv() const { return variation_; }    // V(h') over the real line
  bool is_h0() const {
    return pieces_.size() == 1 && pieces_[0].c == std::vector<double>{0.0, 1.0};
  }

 private:
  const PolyPiece& piece_at(double x) const {
    for (const auto& p : pieces_)
      if (x < p.b) return p;
    return pieces_.back();
  }

  void check() const {
    if (pieces_.empty()) throw DomainError("smoothing function needs at least one piece");
    if (pieces_.front().a != 0.0 || pieces_.back().b != 1.0) throw DomainError("pieces must cover [0, 1]");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (!(p.a < p.b)) throw DomainError("piece intervals must be nonempty");
      if (i + 1 < pieces_.size()) {
        const auto& q = pieces_[i + 1];
        if (q.a != p.b) throw DomainError("pieces must be contiguous");
        double l = p.value(p.b), r = q.value(q.a);
        if (std::fabs(l - r) > 1e-9 * std::max(1.0, std::fabs(l))) throw DomainError("h must be continuous");
      }
    }
    if (std::fabs(pieces_.front().value(0.0)) > 1e-12) throw DomainError("h(0) must be 0");
  }

  void derive() {
    value_at_1_ = pieces_.back().value(1.0);
    long double l2 = 0;
    for (const auto& p : pieces_) {
      // int_a^b p'(x)^2 dx from the exact square of p'
      std::size_t n = p.c.size();
      if (n < 2) continue;
      std::vector<long double> d(n - 1), sq(2 * n - 3, 0.0L);
      for (std::size_t k = 1; k < n; ++k) d[k - 1] = static_cast<long double>(k) * p.c[k];
      for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) sq[i + j] += d[i] * d[j];
      auto anti = [&](long double x) {
        long double v = 0;
        for (std::size_t k = sq.size(); k-- > 0;) v = v * x + sq[k] / static_cast<long double>(k + 1);
        return v * x;
      };
      l2 += anti(p.b) - anti(p.a);
    }
    l2_deriv_sq_ = static_cast<double>(l2);

    // V(h') = jumps of h' at the knots (including 0 and 1) plus the variation
    // inside each piece, where h' is monotone between roots of h''.
    long double v = 0;
    double prev = 0.0;  // h' on (-oo, 0)
    for (const auto& p : pieces_) {
      v += std::fabs(p.slope(p.a) - prev);
      std::vector<double> turns{p.a};
      auto curv = [&](double x) {
        double s = 0;
        for (std::size_t k = p.c.size(); k-- > 2;) s = s * x + static_cast<double>(k * (k - 1)) * p.c[k];
        return s;
      };
      constexpr int samples = 1024;
      double x0 = p.a, f0 = curv(x0);
      for (int i = 1; i <= samples; ++i) {
        double x1 = p.a + (p.b - p.a) * i / samples, f1 = curv(x1);
        if (f1 == 0.0 && i < samples) {
          turns.push_back(x1);  // a sample landing on the root itself
        } else if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
          double lo = x0, hi = x1;
          for (int it = 0; it < 60; ++it) {
            double m = 0.5 * (lo + hi);
            if ((curv(m) < 0) == (f0 < 0)) lo = m; else hi = m;
          }
          turns.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
      }
      turns.push_back(p.b);
      for (std::size_t i = 0; i + 1 < turns.size(); ++i) v += std::fabs(p.slope(turns[i + 1]) - p.slope(turns[i]));
      prev = p.slope(p.b);
    }
    v += std::fabs(prev);  // h' = 0 beyond 1
    variation_ = static_cast<double>(v);
  }

  std::vector<PolyPiece> pieces_;
  double value_at_1_ = 0;
  double l2_deriv_sq_ = 0;
  double variation_ = 0;
};

namespace detail {
inline double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    throw DomainError("bad number '" + std::string(s) + "' in h spec");
  return v;
}

inline std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  for (;;) {
    auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma)));
    if (comma == std::string_view::npos) return out;
    s.remove_prefix(comma + 1);
  }
}
}  // namespace detail

// "h0" | "poly:c0,c1,..." | "pieces:[a,b]:c0,c1,...;[a,b]:...", with
// coefficients of powers of x.
inline SmoothingFn parse_smoothing(std::string_view spec) {
  if (spec == "h0") return SmoothingFn::h0();
  if (spec.starts_with("poly:")) return SmoothingFn::polynomial(detail::parse_list(spec.substr(5)));
  if (spec.starts_with("pieces:")) {
    std::string_view rest = spec.substr(7);
    std::vector<PolyPiece> pieces;
    while (!rest.empty()) {
      auto semi = rest.find(';');
      std::string_view item = rest.substr(0, semi);
      auto close = item.find("]:");
      if (item.empty() || item.front() != '[' || close == std::string_view::npos)
        throw DomainError("piece must look like [a,b]:c0,c1,...");
      auto ends = detail::parse_list(item.substr(1, close - 1));
      if (ends.size() != 2) throw DomainError("piece interval needs two endpoints");
      pieces.push_back({ends[0], ends[1], detail::parse_list(item.substr(close + 2))});
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
    return SmoothingFn::piecewise(std::move(pieces));
  }
  throw DomainError("unknown h spec '" + std::string(spec) + "'");
}

struct SievePlan {
  double d1 = 1;
  double d2 = 2;
  SmoothingFn h = SmoothingFn::h0();

  SievePlan() = default;
  SievePlan(double d1_, double d2_, SmoothingFn h_ = SmoothingFn::h0()) : d1(d1_), d2(d2_), h(std::move(h_)) {
    if (!(d1 >= 1)) throw DomainError("D1 must be at least 1");
    if (!(d2 > d1)) throw DomainError("D2 must exceed D1");
  }
  double log_ratio() const { return std::log(d2 / d1); }  // L
  // Largest d with rho(d) possibly nonzero: d < D2.
  std::uint32_t last_divisor() const {
    double c = std::ceil(d2) - 1;
    return static_cast<std::uint32_t>(std::max(1.0, c));
  }
};

inline double rho_weight(double d, const SievePlan& plan) {
  if (!(d > 0)) throw DomainError("rho needs d > 0");
  if (d <= plan.d1) return plan.h.value_at_1();
  if (d >= plan.d2) return 0.0;
  return plan.h(std::log(plan.d2 / d) / plan.log_ratio());
}

// mu, phi and prime factors of the squarefree numbers up to a limit.
class MobiusTable {
 public:
  explicit MobiusTable(std::uint32_t limit) : limit_(limit) {
    if (limit < 1) throw DomainError("Mobius table needs limit >= 1");
    std::vector<std::uint32_t> spf = smallest_prime_factors(std::max<std::uint32_t>(limit, 2));
    mu_.assign(limit + 1, 0);
    phi_.assign(limit + 1, 0);
    mu_[1] = 1;
    phi_[1] = 1;
    for (std::uint32_t n = 2; n <= limit; ++n) {
      std::uint32_t p = spf[n], m = n / p;
      if (m % p == 0) {
        mu_[n] = 0;
        phi_[n] = phi_[m] * p;
      } else {
        mu_[n] = static_cast<std::int8_t>(-mu_[m]);
        phi_[n] = phi_[m] * (p - 1);
      }
    }
    offsets_.push_back(0);
    for (std::uint32_t n = 1; n <= limit; ++n) {
      if (mu_[n] == 0) continue;
      squarefree_.push_back(n);
      for (std::uint32_t m = n; m > 1; m /= spf[m]) factors_.push_back(spf[m]);
      offsets_.push_back(static_cast<std::uint32_t>(factors_.size()));
    }
  }

  std::uint32_t limit() const { return limit_; }
  int mu(std::uint32_t n) const { return mu_.at(n); }
  std::uint32_t phi(std::uint32_t n) const { return phi_.at(n); }
  bool squarefree(std::uint32_t n) const { return mu_.at(n) != 0; }
  // Squarefree numbers in ascending order.
  const std::vector<std::uint32_t>& squarefree_list() const { return squarefree_; }

  // gcd of the i-th and j-th squarefree numbers by merging their (ascending)
  // prime lists.
  std::uint32_t gcd_at(std::size_t i, std::size_t j) const {
    const std::uint32_t* a = factors_.data() + offsets_[i];
    const std::uint32_t* ae = factors_.data() + offsets_[i + 1];
    const std::uint32_t* b = factors_.data() + offsets_[j];
    const std::uint32_t* be = factors_.data() + offsets_[j + 1];
    std::uint32_t g = 1;
    while (a != ae && b != be) {
      if (*a < *b)
        ++a;
      else if (*b < *a)
        ++b;
      else {
        g *= *a;
        ++a;
        ++b;
      }
    }
    return g;
  }

 private:
  std::uint32_t limit_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint32_t> phi_;
  std::vector<std::uint32_t> squarefree_;
  std::vector<std::uint32_t> factors_;  // prime factors of squarefree_[i] at offsets_[i] .. offsets_[i+1]
  std::vector<std::uint32_t> offsets_;
};

constexpr double kSieveDivisorLimit = 1e5;
constexpr std::uint64_t kSieveNLimit = 1'000'000'000;

namespace detail {
inline void check_sieve_limit(const SievePlan& plan) {
  if (plan.d2 > kSieveDivisorLimit) throw LimitTooLarge("D2 above the configured limit 1e5");
}
}  // namespace detail

// sum over d1, d2 of mu(d1) mu(d2) rho1(d1) rho2(d2) / [d1, d2]; both plans
// must share D1 and D2.
inline long double m_sum(const SievePlan& p1, const SievePlan& p2) {
  if (p1.d1 != p2.d1 || p1.d2 != p2.d2) throw DomainError("m_sum needs plans with the same D1, D2");
  detail::check_sieve_limit(p1);
  MobiusTable mt(p1.last_divisor());
  const auto& sf = mt.squarefree_list();
  std::size_t n = sf.size();
  // w(d) = mu(d) rho(d) / d, so that the pair term is w1(d1) w2(d2) gcd(d1, d2).
  std::vector<long double> w1(n), w2(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double d = sf[i];
    w1[i] = mt.mu(sf[i]) * static_cast<long double>(rho_weight(sf[i], p1)) / d;
    w2[i] = mt.mu(sf[i]) * static_cast<long double>(rho_weight(sf[i], p2)) / d;
  }
  constexpr std::size_t rows = 64;
  std::size_t blocks = (n + rows - 1) / rows;
  std::vector<CompensatedSum> parts(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    CompensatedSum acc;
    std::size_t end = std::min(n, (b + 1) * rows);
    for (std::size_t i = b * rows; i < end; ++i) {
      acc.add(w1[i] * w2[i] * sf[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        long double pair = w1[i] * w2[j] + w1[j] * w2[i];
        if (pair != 0) acc.add(pair * mt.gcd_at(i, j));
      }
    }
    parts[b] = acc;
  });
  CompensatedSum total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

inline long double m_sum(const SievePlan& plan) { return m_sum(plan, plan); }

// sum_{n <= N} (sum_{d | n} mu(d) rho(d))^2, by adding mu(d) rho(d) along the
// multiples of each squarefree d < D2, one segment of n at a time.
inline long double s_sum(std::uint64_t n_max, const SievePlan& plan) {
  detail::check_sieve_limit(plan);
  if (n_max > kSieveNLimit) throw LimitTooLarge("N above the configured limit 1e9");
  if (n_max == 0) return 0;
  MobiusTable mt(plan.last_divisor());
  std::vector<std::uint32_t> ds;
  std::vector<double> wt;
  for (std::uint32_t d : mt.squarefree_list()) {
    double r = rho_weight(d, plan);
    if (r == 0) continue;
    ds.push_back(d);
    wt.push_back(mt.mu(d) * r);
  }
  constexpr std::uint64_t seg = std::uint64_t{1} << 16;
  std::size_t blocks = static_cast<std::size_t>((n_max + seg - 1) / seg);
  std::vector<CompensatedSum> parts(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    std::uint64_t lo = 1 + b * seg, hi = std::min<std::uint64_t>(n_max, lo + seg - 1);
    std::vector<double> lam(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::size_t k = 0; k < ds.size(); ++k) {
      std::uint64_t d = ds[k];
      if (d > hi) break;
      for (std::uint64_t m = (lo + d - 1) / d * d; m <= hi; m += d) lam[m - lo] += wt[k];
    }
    CompensatedSum acc;
    for (double x : lam) acc.add(static_cast<long double>(x) * x);
    parts[b] = acc;
  });
  CompensatedSum total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

// Selberg's optimum 1 / sum_{d <= D2} mu^2(d) / phi(d).
inline Ball selberg_main(std::uint64_t d2) {
  if (d2 < 1) throw DomainError("selberg_main needs D2 >= 1");
  if (d2 > 100'000'000) throw LimitTooLarge("D2 above 1e8");
  MobiusTable mt(static_cast<std::uint32_t>(d2));
  Ball s;
  for (std::uint32_t d : mt.squarefree_list()) s += Ball(1) / Ball(static_cast<long>(mt.phi(d)));
  return Ball(1) / s;
}

// F(s) = (D2^s - D1^s) / (L s^2), the Mellin transform of rho for h0.
inline ComplexBall mellin_F(const ComplexBall& s, const SievePlan& plan) {
  if (!plan.h.is_h0()) throw DomainError("mellin_F is implemented for h0 only");
  Ball l1 = log(Ball::exact(plan.d1));
  Ball l2 = log(Ball::exact(plan.d2));
  ComplexBall num = exp(s * l2) - exp(s * l1);
  ComplexBall s2 = s * s;
  return num / s2 / (l2 - l1);
}

enum class PredictionOrder { main, second };

constexpr double kKappaMidpoint = 0.607314;

// Asymptotic M(D1, D2; h): |h'|^2 / L, and for h0 the second-order terms
// 1/log D2 - kappa/log^2 D2 (D1 = 1) or 1/L - 2 kappa/L^2 (D1 > 1).
inline double predict(const SievePlan& plan, PredictionOrder order, double kappa = kKappaMidpoint) {
  double l = plan.log_ratio();
  if (!(l > 0)) throw DomainError("prediction needs L > 0");
  double main = plan.h.l2_deriv_sq() / l;
  if (order == PredictionOrder::main) return main;
  if (!plan.h.is_h0()) throw DomainError("second-order prediction is known for h0 only");
  double k = plan.d1 == 1 ? kappa : 2 * kappa;
  return main - k / (l * l);
}

}  // namespace bvk
