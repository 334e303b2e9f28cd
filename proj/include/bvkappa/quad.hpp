#pragma once

// Rigorous integration and bound certification over rational intervals.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include "ball.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "parallel.hpp"
#include "taylor.hpp"

namespace bvk {

struct Panel {
  mpq_class a, b;
  Ball value;
};

struct QuadResult {
  Ball total;
  long panels = 0;
  long evals = 0;
  bool budget_hit = false;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, QuadResult partial) : Error(what), partial_(std::move(partial)) {}
  const QuadResult& partial() const { return partial_; }

 private:
  QuadResult partial_;
};

// Gauss: Gauss–Legendre on point values plus a remainder from a jet over
// the panel. Taylor: integrate a Taylor model of f over the panel; needs f to
// accept TaylorModel, and tolerates much wider panels.
enum class PanelRule { gauss, taylor };

struct QuadOptions {
  PanelRule rule = PanelRule::gauss;
  int gauss_points = 6;
  int taylor_degree = 12;
  long max_evals = 2'000'000;
  int initial_panels = 1;
  int batch = 4;  // panels split per round; fixed so results do not depend on threads
};

// n-point Gauss–Legendre rule on [-1, 1] with certified nodes and weights.
struct GaussRule {
  int n = 0;
  std::vector<Ball> nodes;
  std::vector<Ball> weights;
  Ball remainder;  // (n!)^4 / ((2n+1) ((2n)!)^2)
};

namespace detail {

inline void legendre(const Ball& x, int n, Ball& pn, Ball& pn1) {
  Ball p0(1), p1 = x;
  if (n == 0) {
    pn = p0;
    pn1 = Ball(0);
    return;
  }
  for (int k = 1; k < n; ++k) {
    Ball p2 = (Ball(2 * k + 1) * x * p1 - Ball(k) * p0) / Ball(k + 1);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  pn = p1;
  pn1 = p0;
}

inline GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.n = n;
  int prec = working_precision();
  for (int i = 1; i <= n; ++i) {
    Ball x;
    {
      PrecisionScope hp(prec + 32);
      x = Ball::exact(std::cos(M_PI * (i - 0.25) / (n + 0.5)));
      for (int it = 0; it < 200; ++it) {
        Ball pn, pn1;
        legendre(x, n, pn, pn1);
        Ball dp = Ball(n) * (x * pn - pn1) / (sqr(x) - Ball(1));
        Ball step = (pn / dp).midpoint();
        x = (x - step).midpoint();
        if (mpfr_zero_p(step.mid()) || std::fabs(step.mid_d()) < std::ldexp(1.0, -(prec + 24))) break;
      }
      // Certify a sign change of P_n across a tiny interval around x.
      double d = std::ldexp(std::max(std::fabs(x.mid_d()), 1e-3), -(prec - 4));
      Ball lo = (x - Ball::exact(d)).midpoint();
      Ball hi = (x + Ball::exact(d)).midpoint();
      Ball plo, phi, tmp;
      legendre(lo, n, plo, tmp);
      legendre(hi, n, phi, tmp);
      bool change = (plo.is_positive() && phi.is_negative()) || (plo.is_negative() && phi.is_positive());
      if (!change) throw DomainError("Gauss-Legendre node not certified");
      x = Ball::interval(lo.mid(), hi.mid());
    }
    Ball pn, pn1;
    legendre(x, n, pn, pn1);
    Ball dp = Ball(n) * (x * pn - pn1) / (sqr(x) - Ball(1));
    rule.weights.push_back(Ball(2) / ((Ball(1) - sqr(x)) * sqr(dp)));
    rule.nodes.push_back(std::move(x));
  }
  mpz_class fn = 1, f2n = 1;
  for (int k = 2; k <= n; ++k) fn *= k;
  for (int k = 2; k <= 2 * n; ++k) f2n *= k;
  rule.remainder = Ball(mpq_class(fn * fn * fn * fn, mpz_class(2 * n + 1) * f2n * f2n));
  return rule;
}

}  // namespace detail

inline const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, working_precision());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, detail::make_gauss_rule(n)).first;
  return it->second;
}

// Enclosure of the integral of f over [a, b]: Gauss–Legendre on point
// evaluations plus the remainder from the 2n-th Taylor coefficient of f over
// the whole panel, intersected with (b - a) f([a, b]). Returns nothing when f
// cannot be enclosed on the panel.
template <class F>
std::optional<Ball> integrate_panel(const F& f, const mpq_class& a, const mpq_class& b, const GaussRule& rule,
                                    long& evals) {
  mpq_class cq = (a + b) / 2, hq = (b - a) / 2, wq = b - a;
  Ball c(cq), h(hq), w(wq);
  std::optional<Ball> gl;
  std::optional<Ball> order0;
  try {
    Jet whole = f(Jet::variable(Ball::interval(a, b), 2 * rule.n));
    ++evals;
    order0 = w * whole[0];
    Ball est;
    for (int i = 0; i < rule.n; ++i) {
      est.add_mul(rule.weights[static_cast<std::size_t>(i)], f(c + h * rule.nodes[static_cast<std::size_t>(i)]));
      ++evals;
    }
    gl = est * h + pow(w, 2 * rule.n + 1) * rule.remainder * whole[2 * rule.n];
  } catch (const RigorError&) {
    if (!order0) return std::nullopt;
  }
  if (gl && order0) return tighter(*gl, *order0);
  return gl ? gl : order0;
}

template <class F>
std::optional<Ball> integrate_panel_taylor(const F& f, const mpq_class& a, const mpq_class& b, int degree,
                                           long& evals) {
  try {
    ++evals;
    TaylorModel m = f(TaylorModel::variable(a, b, degree));
    return m.integral(Ball(mpq_class((b - a) / 2)));
  } catch (const RigorError&) {
    return std::nullopt;
  }
}

namespace detail {
template <class F>
std::optional<Ball> panel_value(const F& f, const mpq_class& a, const mpq_class& b, const QuadOptions& opt,
                                long& evals) {
  if (opt.rule == PanelRule::taylor) {
    if constexpr (std::is_invocable_v<const F&, const TaylorModel&>) {
      return integrate_panel_taylor(f, a, b, opt.taylor_degree, evals);
    } else {
      throw DomainError("integrand does not accept Taylor models");
    }
  }
  if constexpr (std::is_invocable_v<const F&, const Jet&>) {
    return integrate_panel(f, a, b, gauss_rule(opt.gauss_points), evals);
  } else {
    throw DomainError("integrand does not accept jets");
  }
}
}  // namespace detail

// Adaptive enclosure of the integral of f over [a, b]. f must accept Ball
// and Jet arguments (Gauss rule) or TaylorModel (Taylor rule).
template <class F>
QuadResult integrate_rigorous(const F& f, const mpq_class& a, const mpq_class& b, double target_width,
                              const QuadOptions& opt = {}) {
  if (!(a < b)) throw DomainError("integrate_rigorous requires a < b");
  struct Live {
    mpq_class a, b;
    std::optional<Ball> value;
    bool alive = true;
  };
  auto width_of = [](const Live& p) { return p.value ? p.value->width() : detail::kInf; };

  std::vector<Live> panels;
  mpq_class step = (b - a) / std::max(1, opt.initial_panels);
  for (int i = 0; i < std::max(1, opt.initial_panels); ++i)
    panels.push_back({a + step * i, (i + 1 == std::max(1, opt.initial_panels)) ? b : a + step * (i + 1), {}});

  QuadResult res;
  std::vector<long> evals_per(panels.size(), 0);
  parallel_for(panels.size(), [&](std::size_t i) {
    panels[i].value = detail::panel_value(f, panels[i].a, panels[i].b, opt, evals_per[i]);
  });
  for (long e : evals_per) res.evals += e;

  // Widest first; ties go to the leftmost-created panel.
  using Entry = std::pair<double, long>;
  auto cmp = [](const Entry& x, const Entry& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second > y.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  long infinite = 0;
  long double total_width = 0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    double w = width_of(panels[i]);
    heap.push({w, static_cast<long>(i)});
    if (std::isinf(w)) {
      ++infinite;
    } else {
      total_width += w;
    }
  }
  const mpq_class min_len = (b - a) / mpq_class(mpz_class(1) << 60);

  while (!heap.empty()) {
    if (infinite == 0 && total_width <= target_width) break;
    if (res.evals >= opt.max_evals) {
      res.budget_hit = true;
      break;
    }
    std::vector<long> chosen;
    while (!heap.empty() && static_cast<int>(chosen.size()) < opt.batch) {
      long idx = heap.top().second;
      heap.pop();
      if (!panels[static_cast<std::size_t>(idx)].alive) continue;
      if (!chosen.empty() && !std::isinf(width_of(panels[static_cast<std::size_t>(idx)])) &&
          infinite == 0 && width_of(panels[static_cast<std::size_t>(idx)]) * 64 < target_width) {
        heap.push({width_of(panels[static_cast<std::size_t>(idx)]), idx});
        break;
      }
      chosen.push_back(idx);
    }
    if (chosen.empty()) break;
    std::vector<Live> children;
    for (long idx : chosen) {
      Live& p = panels[static_cast<std::size_t>(idx)];
      if (p.b - p.a < min_len) {
        if (!p.value) throw DomainError("integrand cannot be enclosed at maximum depth");
        continue;
      }
      p.alive = false;
      double w = width_of(p);
      if (std::isinf(w)) {
        --infinite;
      } else {
        total_width -= w;
      }
      mpq_class m = (p.a + p.b) / 2;
      children.push_back({p.a, m, {}});
      children.push_back({m, p.b, {}});
    }
    if (children.empty()) break;
    std::vector<long> ce(children.size(), 0);
    parallel_for(children.size(), [&](std::size_t i) {
      children[i].value = detail::panel_value(f, children[i].a, children[i].b, opt, ce[i]);
    });
    for (std::size_t i = 0; i < children.size(); ++i) {
      res.evals += ce[i];
      double w = width_of(children[i]);
      if (std::isinf(w)) {
        ++infinite;
      } else {
        total_width += w;
      }
      panels.push_back(std::move(children[i]));
      heap.push({w, static_cast<long>(panels.size() - 1)});
    }
  }

  std::vector<const Live*> alive;
  for (const auto& p : panels)
    if (p.alive) alive.push_back(&p);
  std::sort(alive.begin(), alive.end(), [](const Live* x, const Live* y) { return x->a < y->a; });
  res.panels = static_cast<long>(alive.size());
  for (const Live* p : alive) {
    if (!p->value) throw BudgetExceeded("integration budget exhausted with unenclosed panels", res);
    res.total += *p->value;
  }
  return res;
}

struct GridBound {
  Ball sup;       // upper bound of f over [a, b]
  Ball integral;  // upper endpoint bounds the integral of f over [a, b]
  long cells = 0;
};

namespace detail {
template <class F>
Ball call_on_cell(F& f, const mpq_class& lo, const mpq_class& hi) {
  if constexpr (std::is_invocable_v<F&, const mpq_class&, const mpq_class&>) {
    return f(lo, hi);
  } else {
    return f(Ball::interval(lo, hi));
  }
}
}  // namespace detail

// Upper bounds of f on the cells [a + k step, a + (k+1) step]. f is called on
// cells in ascending order within fixed chunks; each chunk gets its own copy
// of f, so stateful walkers are allowed.
template <class F>
GridBound sup_bound_grid(const F& f, const mpq_class& a, const mpq_class& b, const mpq_class& step) {
  if (!(step > 0) || !(a < b)) throw DomainError("bad grid");
  mpq_class count_q = (b - a) / step;
  if (count_q.get_den() != 1) throw DomainError("step must divide b - a");
  long cells = count_q.get_num().get_si();
  constexpr long chunk = 2048;
  long chunks = (cells + chunk - 1) / chunk;
  std::vector<double> sup(static_cast<std::size_t>(chunks), -detail::kInf);
  std::vector<Ball> part(static_cast<std::size_t>(chunks));
  Ball step_ball(step);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    F local = f;
    Ball acc;
    double s = -detail::kInf;
    long end = std::min(cells, static_cast<long>(c + 1) * chunk);
    for (long k = static_cast<long>(c) * chunk; k < end; ++k) {
      mpq_class lo = a + step * k, hi = a + step * (k + 1);
      double u = detail::call_on_cell(local, lo, hi).upper();
      s = std::max(s, u);
      acc += Ball::exact(u);
    }
    sup[c] = s;
    part[c] = acc * step_ball;
  });
  GridBound g;
  g.cells = cells;
  double s = -detail::kInf;
  for (double v : sup) s = std::max(s, v);
  g.sup = Ball::exact(s);
  for (const auto& p : part) g.integral += p;
  g.integral = Ball::exact(g.integral.upper());
  return g;
}

// Recursive bisection: true when every leaf cell has f > 0, false as soon as
// a cell has f <= 0 throughout.
template <class F>
bool prove_positive(F f, const mpq_class& a, const mpq_class& b, int max_depth) {
  if (!(a < b)) throw DomainError("prove_positive requires a < b");
  struct Cell {
    mpq_class lo, hi;
    int depth;
  };
  std::vector<Cell> stack{{a, b, 0}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    std::optional<Ball> v;
    try {
      v = detail::call_on_cell(f, c.lo, c.hi);
    } catch (const RigorError&) {
    }
    if (v) {
      if (v->is_positive()) continue;
      if (Ball::endpoint_cmp(*v, 1, Ball(0), 1) <= 0) return false;
    }
    if (c.depth >= max_depth) throw DepthExceeded("bisection depth exceeded near " + c.lo.get_str());
    mpq_class m = (c.lo + c.hi) / 2;
    stack.push_back({m, c.hi, c.depth + 1});
    stack.push_back({c.lo, m, c.depth + 1});
  }
  return true;
}

}  // namespace bvk
