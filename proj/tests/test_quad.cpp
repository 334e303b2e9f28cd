#include <gtest/gtest.h>

#include "bvkappa/parallel.hpp"
#include "bvkappa/quad.hpp"

using namespace bvk;

namespace {

struct Cubic {
  template <class T>
  T operator()(const T& t) const {
    return t * sqr(t) - ldexp(t, 1) + Ball(1);
  }
};

// 1/(1 + t^2): arctan on the way out
struct Lorentz {
  template <class T>
  T operator()(const T& t) const {
    return Ball(1) / (Ball(1) + sqr(t));
  }
};

struct Oscillating {
  template <class T>
  T operator()(const T& t) const {
    return sin(t * Ball(25)) * cos(t);
  }
};

}  // namespace

TEST(Quad, CubicIsIntegratedExactlyByBothRules) {
  // int_0^2 (t^3 - 2t + 1) dt = 4 - 4 + 2
  for (PanelRule rule : {PanelRule::gauss, PanelRule::taylor}) {
    QuadOptions opt;
    opt.rule = rule;
    QuadResult r = integrate_rigorous(Cubic(), mpq_class(0), mpq_class(2), 1e-20, opt);
    EXPECT_TRUE(r.total.contains(2.0));
    EXPECT_LT(r.total.width(), 1e-20);
  }
}

TEST(Quad, ArctanOfOne) {
  for (PanelRule rule : {PanelRule::gauss, PanelRule::taylor}) {
    QuadOptions opt;
    opt.rule = rule;
    QuadResult r = integrate_rigorous(Lorentz(), mpq_class(0), mpq_class(1), 1e-15, opt);
    EXPECT_TRUE(r.total.contains(Ball::pi() / Ball(4)));
    EXPECT_LE(r.total.width(), 1e-15);
    EXPECT_FALSE(r.budget_hit);
  }
}

TEST(Quad, AdditiveOverSubintervals) {
  QuadOptions opt{PanelRule::taylor};
  mpq_class a(0), m(7, 10), b(3);
  QuadResult left = integrate_rigorous(Oscillating(), a, m, 1e-12, opt);
  QuadResult right = integrate_rigorous(Oscillating(), m, b, 1e-12, opt);
  QuadResult whole = integrate_rigorous(Oscillating(), a, b, 1e-12, opt);
  EXPECT_TRUE((left.total + right.total).overlaps(whole.total));
  // sin 25t cos t = (sin 26t + sin 24t) / 2
  Ball exact = ((Ball(1) - cos(Ball(78))) / Ball(26) + (Ball(1) - cos(Ball(72))) / Ball(24)) / Ball(2);
  EXPECT_TRUE(whole.total.overlaps(exact));
}

TEST(Quad, ResultDoesNotDependOnThreadCount) {
  QuadOptions opt{PanelRule::gauss};
  opt.initial_panels = 3;
  int saved = thread_budget();
  set_thread_budget(1);
  QuadResult one = integrate_rigorous(Oscillating(), mpq_class(0), mpq_class(2), 1e-14, opt);
  set_thread_budget(4);
  QuadResult four = integrate_rigorous(Oscillating(), mpq_class(0), mpq_class(2), 1e-14, opt);
  set_thread_budget(saved);
  EXPECT_EQ(one.total.to_string(40), four.total.to_string(40));
  EXPECT_EQ(one.panels, four.panels);
  EXPECT_EQ(one.evals, four.evals);
}

TEST(Quad, BudgetIsReported) {
  QuadOptions opt;
  opt.max_evals = 20;
  QuadResult r = integrate_rigorous(Oscillating(), mpq_class(0), mpq_class(3), 1e-30, opt);
  EXPECT_TRUE(r.budget_hit);
  EXPECT_GT(r.total.width(), 1e-30);
}

TEST(Quad, BadInterval) {
  EXPECT_THROW(integrate_rigorous(Cubic(), mpq_class(1), mpq_class(1), 1e-3), DomainError);
}

TEST(Quad, TaylorRuleNeedsTaylorModels) {
  auto ball_only = [](const Ball& t) { return t; };
  QuadOptions opt{PanelRule::taylor};
  EXPECT_THROW(integrate_rigorous(ball_only, mpq_class(0), mpq_class(1), 1e-3, opt), DomainError);
}

TEST(Grid, SupAndIntegralOfSquare) {
  auto square = [](const Ball& t) { return sqr(t); };
  GridBound g = sup_bound_grid(square, mpq_class(0), mpq_class(1), mpq_class(1, 10));
  EXPECT_EQ(g.cells, 10);
  EXPECT_GE(g.sup.upper(), 1.0);
  EXPECT_LT(g.sup.upper(), 1.0 + 1e-15);
  // right-endpoint sum 0.385 is an upper bound for 1/3
  EXPECT_NEAR(g.integral.upper(), 0.385, 1e-15);
  EXPECT_THROW(sup_bound_grid(square, mpq_class(0), mpq_class(1), mpq_class(3, 10)), DomainError);
}

TEST(Grid, CellFunctionsReceiveExactEndpoints) {
  long calls = 0;
  auto cell = [&calls](const mpq_class& lo, const mpq_class& hi) {
    ++calls;
    return Ball(mpq_class(hi - lo));
  };
  set_thread_budget(1);
  GridBound g = sup_bound_grid(cell, mpq_class(0), mpq_class(5), mpq_class(1, 4));
  EXPECT_EQ(calls, 20);
  EXPECT_TRUE(g.sup.contains(0.25));
  EXPECT_NEAR(g.integral.upper(), 1.25, 1e-15);
}

TEST(ProvePositive, Cases) {
  auto shifted = [](const Ball& t) { return t - Ball::exact(0.5); };
  EXPECT_TRUE(prove_positive(shifted, mpq_class(1), mpq_class(2), 10));
  auto crossing = [](const Ball& t) { return t - Ball::exact(1.5); };
  EXPECT_FALSE(prove_positive(crossing, mpq_class(1), mpq_class(2), 10));
  auto touching = [](const Ball& t) { return sqr(t - Ball::exact(1.5)); };
  EXPECT_THROW(prove_positive(touching, mpq_class(1), mpq_class(2), 10), DepthExceeded);
}
