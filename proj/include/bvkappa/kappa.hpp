#pragma once

// Certified enclosure of kappa = (1/pi) int_0^oo (t^2 - H(t)/|zeta(1+it)|^2) dt/t^4,
// split into a Taylor-expanded piece near 0, rigorously integrated middle
// segments, a grid bound on [T0, T] and an analytic tail.

#include <gmpxx.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ball.hpp"
#include "errors.hpp"
#include "hproduct.hpp"
#include "primetools.hpp"
#include "quad.hpp"
#include "zetafn.hpp"

namespace bvk {

struct KappaPlan {
  mpq_class eps{1, 500};
  std::vector<mpq_class> splits{mpq_class(1, 5), mpq_class(1)};
  mpq_class t0{200};
  mpq_class t_end{7500};
  std::vector<std::uint64_t> cutoffs{3000, 750, 250};  // one per segment [eps, s1], ..., [s_k, T0]
  std::vector<double> target_widths{4e-6, 4e-6, 4e-6};
  double kappa_width = 2e-5;  // the run is flagged when the final ball is wider
  std::uint64_t c2_cutoff = 1'000'000;
  mpq_class grid_step{1, 100};
  int precision = kDefaultPrecision;
  QuadOptions quad{PanelRule::taylor};

  std::size_t segment_count() const { return splits.size() + 1; }

  // Per-segment widths that keep the final ball below `width`.
  void set_width(double width) {
    kappa_width = width;
    target_widths.assign(segment_count(), width * 3.0 / (2.0 * static_cast<double>(segment_count())));
  }

  void validate() const {
    if (!(eps > 0) || eps > mpq_class(1, 2)) throw DomainError("eps must lie in (0, 1/2]");
    mpq_class prev = eps;
    for (const auto& s : splits) {
      if (!(s > prev)) throw DomainError("split points must increase from eps");
      prev = s;
    }
    if (!(t0 > prev)) throw DomainError("T0 must exceed the last split point");
    if (!(t_end > t0)) throw DomainError("T must exceed T0");
    if (cutoffs.size() != segment_count()) throw DomainError("need one cutoff per segment");
    for (auto c : cutoffs)
      if (c < 67) throw DomainError("cutoffs must be at least 67");
    if (target_widths.size() != segment_count()) throw DomainError("need one target width per segment");
    for (double w : target_widths)
      if (!(w > 0)) throw DomainError("target widths must be positive");
    if (!(kappa_width > 0)) throw DomainError("kappa width must be positive");
    if (!(grid_step > 0)) throw DomainError("grid step must be positive");
    mpq_class cells = (t_end - t0) / grid_step;
    if (cells.get_den() != 1) throw DomainError("grid step must divide T - T0");
    if (c2_cutoff < static_cast<std::uint64_t>(ThetaConstants::x_minus_threshold))
      throw CutoffTooSmall("c2 cutoff below 758711");
  }
};

// t -> H_C(t) / (|zeta(1+it)|^2 t^4) for Ball or Jet arguments.
class KappaIntegrand {
 public:
  KappaIntegrand(const AcceleratedH& h, const ZetaSeries& line) : h_(&h), line_(&line) {}
  template <class T>
  T operator()(const T& t) const {
    return h_->truncated(t) / (norm((*line_)(t)) * sqr(sqr(t)));
  }

 private:
  const AcceleratedH* h_;
  const ZetaSeries* line_;
};

// t -> 1 / (|zeta(1+it)|^2 t^4), the multiplier of the truncation error.
class InvZetaSqT4 {
 public:
  explicit InvZetaSqT4(const ZetaSeries& line) : line_(&line) {}
  template <class T>
  T operator()(const T& t) const {
    return Ball(1) / (norm((*line_)(t)) * sqr(sqr(t)));
  }

 private:
  const ZetaSeries* line_;
};

inline ZetaSeries make_line_series(int table_size = 256) { return ZetaSeries(Ball(1), 20, table_size); }

// Enclosure of H(t) / (|zeta(1+it)|^2 t^4), including the truncation error of h.
inline Ball integrand(const Ball& t, const AcceleratedH& h) {
  if (!t.is_positive()) throw DomainError("integrand needs t > 0");
  ZetaSeries line = make_line_series(em_params_for(t.upper()).n_terms + 1);
  return h(t) / (norm(line(t)) * sqr(sqr(t)));
}

struct NearZeroReport {
  Ball c;        // c2 + gamma0^2 + 2 gamma1
  Ball value;    // c eps +- eps^3
  Ball radaw;    // proof constant, must be <= 3
  Ball wob;      // must be >= 0
  bool certified = false;
};

// int_0^eps (t^2 - H/|zeta|^2) dt/t^4 = c eps + O*(eps^3).
inline NearZeroReport near_zero_term(const Ball& eps, const Ball& c2) {
  if (!eps.is_positive()) throw DomainError("eps must be positive");
  if (!(eps.upper() <= 0.5)) throw DomainError("eps must be at most 1/2");
  LaurentCoeffs lc = laurent_coeffs();
  NearZeroReport r;
  r.c = c2 + lc.alpha1;
  r.value = r.c * eps;
  r.value.widen((eps * sqr(eps)).upper());
  r.radaw = (Ball::from_string("2.56") - lc.alpha2) + lc.r2_coeff / Ball(4) +
            (c2 + lc.alpha1) * (lc.alpha1 + lc.alpha2 / Ball(4) + lc.r2_coeff / Ball(16));
  r.wob = lc.alpha1 / Ball(4) + lc.alpha2 / Ball(16) - lc.r2_coeff / Ball(256);
  r.certified = r.radaw.certainly_less(Ball(3)) && r.wob.is_nonnegative();
  return r;
}

// 42.9^2/27 rounded up to one decimal.
inline mpq_class tail_constant() {
  mpq_class q = mpq_class(429 * 429, 100 * 27) * 10;
  mpz_class up = q.get_num() / q.get_den();
  if (up * q.get_den() != q.get_num()) up += 1;
  return mpq_class(up, 10);
}

// int_T^oo |H|/|zeta(1+it)|^2 dt/t^4 <= 68.2 (9 log^2 T + 6 log T + 2)/T^3.
inline Ball tail_term(const Ball& t_end) {
  if (!(t_end.lower() >= 2.0)) throw DomainError("tail bound needs T >= 2");
  Ball l = log(t_end);
  Ball v = Ball(tail_constant()) * (Ball(9) * sqr(l) + Ball(6) * l + Ball(2)) / (t_end * sqr(t_end));
  return one_sided(v.upper());
}

// Upper bound of 1/(|zeta(1+it)|^2 t^4) on a cell. |zeta|^2 is held as a
// Taylor model over an aligned block of width `block` that contains the
// cell; each cell re-expands that model around its own centre. Cells where
// the bound does not separate |zeta|^2 from 0 are bisected.
class InvZetaSqCell {
 public:
  explicit InvZetaSqCell(mpq_class block = mpq_class(1, 2), int degree = 12)
      : block_(std::move(block)), degree_(degree), walker_(Ball(1), degree) {}
  InvZetaSqCell(const InvZetaSqCell& o) : InvZetaSqCell(o.block_, o.degree_) {}
  InvZetaSqCell& operator=(const InvZetaSqCell&) = delete;

  Ball operator()(const mpq_class& lo, const mpq_class& hi) {
    load_block(lo, hi);
    return Ball::exact(sup_on(lo, hi, 0));
  }

 private:
  void load_block(const mpq_class& lo, const mpq_class& hi) {
    if (norm_ && lo >= start_ && hi <= end_) return;
    mpq_class q = lo / block_;
    mpz_class idx;
    mpz_fdiv_q(idx.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    start_ = block_ * idx;
    end_ = start_ + block_;
    if (hi > end_) {  // cell straddles the aligned blocks
      start_ = lo;
      end_ = hi;
    }
    center_ = (start_ + end_) / 2;
    // Pad the model's domain so that cells touching the block edge still fit
    // after rounding.
    mpq_class pad = (end_ - start_) / (mpz_class(1) << 20);
    norm_ = norm(walker_.block(center_, (end_ - start_) / 2 + pad));
  }

  double sup_on(const mpq_class& lo, const mpq_class& hi, int depth) {
    mpq_class c = (lo + hi) / 2;
    Ball n = norm_->restricted(Ball(mpq_class(c - center_)), Ball(mpq_class((hi - lo) / 2)).upper()).range();
    if (n.is_positive()) return (Ball(1) / (n * sqr(sqr(Ball(lo))))).upper();
    if (depth >= 8) throw DepthExceeded("|zeta(1+it)| not separated from 0 near t = " + lo.get_str());
    mpq_class mid = (lo + hi) / 2;
    return std::max(sup_on(lo, mid, depth + 1), sup_on(mid, hi, depth + 1));
  }

  mpq_class block_;
  int degree_;
  ZetaLineWalker walker_;
  std::optional<TaylorModel> norm_;
  mpq_class start_, end_, center_;
};

struct SegmentReport {
  mpq_class a, b;
  std::uint64_t cutoff = 0;
  Ball truncated;    // int H_C / (|zeta|^2 t^4)
  Ball multiplier;   // int 1 / (|zeta|^2 t^4)
  Ball trunc_err;    // e^rho(C) - 1
  Ball value;        // enclosure of int H / (|zeta|^2 t^4)
  long panels = 0;
  long evals = 0;
  double target_width = 0;
  bool budget_hit = false;
};

struct GridReport {
  mpq_class a, b, step;
  Ball sup;       // of 1/(|zeta|^2 t^4)
  Ball integral;  // [0, u] with u bounding int H/(|zeta|^2 t^4) over [a, b]
  long cells = 0;
};

struct KappaReport {
  KappaPlan plan;
  Ball c2;
  NearZeroReport near_zero;
  std::vector<SegmentReport> segments;
  GridReport grid;
  Ball tail;
  Ball inv_eps;
  Ball kappa;
  std::vector<std::string> flags;
  bool complete = false;
  double seconds = 0;
};

class KappaBudgetExceeded : public BudgetExceeded {
 public:
  KappaBudgetExceeded(const BudgetExceeded& e, KappaReport partial)
      : BudgetExceeded(e.what(), e.partial()), report_(std::move(partial)) {}
  const KappaReport& report() const { return report_; }

 private:
  KappaReport report_;
};

inline SegmentReport integrate_segment(const mpq_class& a, const mpq_class& b, std::uint64_t cutoff,
                                       double target_width, const QuadOptions& opt) {
  SegmentReport s;
  s.a = a;
  s.b = b;
  s.cutoff = cutoff;
  s.target_width = target_width;
  AcceleratedH h(cutoff);
  s.trunc_err = h.profile().err;
  Ball b_ball(b);
  ZetaSeries line = make_line_series(em_params_for(b_ball.upper()).n_terms + 1);

  QuadResult main = integrate_rigorous(KappaIntegrand(h, line), a, b, target_width, opt);
  s.truncated = main.total;
  s.panels = main.panels;
  s.evals = main.evals;
  s.budget_hit = main.budget_hit;

  // Only an upper bound of the multiplier matters; three digits are plenty.
  double mult_width = std::max(1e-3 * s.truncated.mag(), 1e-12);
  QuadResult mult = integrate_rigorous(InvZetaSqT4(line), a, b, mult_width, opt);
  s.multiplier = mult.total;
  s.evals += mult.evals;

  s.value = s.truncated;
  s.value.widen((s.trunc_err * Ball::exact(s.multiplier.upper())).upper());
  return s;
}

inline GridReport grid_segment(const mpq_class& a, const mpq_class& b, const mpq_class& step) {
  GridBound g = sup_bound_grid(InvZetaSqCell(), a, b, step);
  GridReport r;
  r.a = a;
  r.b = b;
  r.step = step;
  r.sup = g.sup;
  r.cells = g.cells;
  // 0 < H <= 1 on the real line.
  r.integral = one_sided(g.integral.upper());
  return r;
}

inline KappaReport compute_kappa(const KappaPlan& plan) {
  plan.validate();
  PrecisionScope scope(plan.precision);
  auto start = std::chrono::steady_clock::now();
  KappaReport r;
  r.plan = plan;

  Ball eps(plan.eps);
  r.c2 = c2_enclosure(plan.c2_cutoff);
  r.near_zero = near_zero_term(eps, r.c2);
  if (!r.near_zero.certified) r.flags.emplace_back("near-zero remainder constant not certified");
  r.inv_eps = Ball(1) / eps;
  r.tail = tail_term(Ball(plan.t_end));

  std::vector<mpq_class> knots{plan.eps};
  knots.insert(knots.end(), plan.splits.begin(), plan.splits.end());
  knots.push_back(plan.t0);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    try {
      r.segments.push_back(
          integrate_segment(knots[i], knots[i + 1], plan.cutoffs[i], plan.target_widths[i], plan.quad));
    } catch (const BudgetExceeded& e) {
      r.flags.emplace_back("integration budget exhausted on segment " + std::to_string(i));
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      throw KappaBudgetExceeded(e, r);
    }
    const SegmentReport& s = r.segments.back();
    if (s.budget_hit) r.flags.emplace_back("evaluation budget hit on segment " + std::to_string(i));
    if (s.value.width() > s.target_width)
      r.flags.emplace_back("segment " + std::to_string(i) + " wider than its target");
  }

  r.grid = grid_segment(plan.t0, plan.t_end, plan.grid_step);

  Ball acc = r.inv_eps + r.near_zero.value;
  for (const auto& s : r.segments) acc = acc - s.value;
  acc = acc - r.grid.integral - r.tail;
  r.kappa = acc / Ball::pi();
  if (r.kappa.width() > plan.kappa_width) r.flags.emplace_back("kappa wider than requested");
  r.complete = true;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Plain-text ledger of every piece that went into kappa.
inline std::string audit_log(const KappaReport& r, int digits = 12) {
  std::ostringstream out;
  auto ball = [&](const Ball& b) { return b.to_string(digits); };
  out << "eps = " << r.plan.eps.get_str() << ", T0 = " << r.plan.t0.get_str() << ", T = " << r.plan.t_end.get_str()
      << ", precision = " << r.plan.precision << " bits\n";
  out << "c2 (primes <= " << r.plan.c2_cutoff << ") = " << ball(r.c2) << "\n";
  out << "near zero: c = " << ball(r.near_zero.c) << ", c eps + O*(eps^3) = " << ball(r.near_zero.value)
      << "\n  remainder constant " << ball(r.near_zero.radaw) << " <= 3, lower-order check " << ball(r.near_zero.wob)
      << " >= 0: " << (r.near_zero.certified ? "ok" : "FAILED") << "\n";
  for (const auto& s : r.segments) {
    out << "int_" << s.a.get_str() << "^" << s.b.get_str() << " H_" << s.cutoff << "/|zeta|^2 t^-4 = " << ball(s.truncated)
        << "\n  + O*(" << s.trunc_err.to_string(5) << ") * " << s.multiplier.to_string(8) << "\n  = " << ball(s.value)
        << "  [" << s.panels << " panels, " << s.evals << " evaluations]\n";
  }
  out << "int_" << r.grid.a.get_str() << "^" << r.grid.b.get_str() << " 1/|zeta|^2 t^-4 <= " << r.grid.integral.to_string(6)
      << "  [" << r.grid.cells << " cells of width " << r.grid.step.get_str() << ", sup " << r.grid.sup.to_string(6)
      << "]\n";
  out << "tail beyond T <= " << r.tail.to_string(6) << "\n";
  out << "kappa = " << ball(r.kappa) << "\n";
  for (const auto& f : r.flags) out << "flag: " << f << "\n";
  return out.str();
}

}  // namespace bvk
