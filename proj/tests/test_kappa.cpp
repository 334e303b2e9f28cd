#include <gtest/gtest.h>

#include "bvkappa/kappa.hpp"

using namespace bvk;

namespace {

const AcceleratedH& h250() {
  static const AcceleratedH h(250);
  return h;
}

}  // namespace

TEST(Tail, ConstantIsRoundedUp) {
  EXPECT_EQ(tail_constant(), mpq_class(682, 10));
  EXPECT_GT(mpq_class(tail_constant()), mpq_class(429 * 429, 2700));
}

TEST(Tail, ValueAt7500) {
  // 68.2 (9 log^2 T + 6 log T + 2) / T^3, mpmath
  Ball t = tail_term(Ball(7500));
  EXPECT_TRUE(t.contains("1.24810717211978402034960375885e-7"));
  EXPECT_LE(t.lower(), 0.0);
  EXPECT_NEAR(t.upper(), 1.2481071721197840e-7, 1e-20);
  EXPECT_THROW(tail_term(Ball(1)), DomainError);
}

TEST(NearZero, CertifiedAtDefaultEps) {
  Ball c2 = c2_enclosure();
  NearZeroReport r = near_zero_term(Ball(mpq_class(1, 500)), c2);
  EXPECT_TRUE(r.certified);
  EXPECT_LT(r.radaw.upper(), 3.0);
  EXPECT_GE(r.wob.lower(), 0.0);
  // c2 + gamma0^2 + 2 gamma1 with the reference c2 = 1.3856045
  EXPECT_TRUE(r.c.contains("1.5731507"));
  EXPECT_NEAR(r.value.mid_d(), r.c.mid_d() / 500, 1e-15);
  EXPECT_GE(r.value.rad(), 8e-9);
  EXPECT_THROW(near_zero_term(Ball(0), c2), DomainError);
  EXPECT_THROW(near_zero_term(Ball(mpq_class(3, 4)), c2), DomainError);
}

TEST(Integrand, AtOneMatchesReference) {
  // H(1) / |zeta(1+i)|^2 with both factors from mpmath / numpy
  double expect = 0.5126123235223294 / 1.19795626773629567376602539224;
  Ball v = integrand(Ball(1), h250());
  EXPECT_NEAR(v.mid_d(), expect, 1e-7 + v.rad());
  EXPECT_THROW(integrand(Ball(0), h250()), DomainError);
}

TEST(Integrand, AtTenMatchesReference) {
  double expect = 0.5203890898803534 / 1.94495159318266372451002599388 / 1e4;
  Ball v = integrand(Ball(10), h250());
  EXPECT_NEAR(v.mid_d(), expect, 1e-11 + v.rad());
}

TEST(Segment, FifthToOne) {
  SegmentReport s = integrate_segment(mpq_class(1, 5), mpq_class(1), 750, 1e-5, QuadOptions{PanelRule::taylor});
  EXPECT_TRUE(s.value.contains("3.20641404"));
  EXPECT_LE(s.value.width(), 1e-5);
  EXPECT_FALSE(s.budget_hit);
  EXPECT_NEAR(s.trunc_err.mid_d(), 3.34675103234129e-9, 1e-20);
}

TEST(Segment, GaussAndTaylorRulesAgree) {
  QuadOptions gauss{PanelRule::gauss};
  QuadOptions taylor{PanelRule::taylor};
  SegmentReport a = integrate_segment(mpq_class(2), mpq_class(3), 250, 1e-8, gauss);
  SegmentReport b = integrate_segment(mpq_class(2), mpq_class(3), 250, 1e-8, taylor);
  EXPECT_TRUE(a.value.overlaps(b.value));
  EXPECT_TRUE(a.multiplier.overlaps(b.multiplier));
}

TEST(Grid, CellBoundDominatesPointValues) {
  InvZetaSqCell cell;
  ZetaSeries line = make_line_series(400);
  for (int k = 0; k < 100; k += 7) {
    mpq_class lo = mpq_class(500) + mpq_class(k, 100), hi = lo + mpq_class(1, 100);
    Ball bound = cell(lo, hi);
    Ball mid((lo + hi) / 2);
    Ball point = Ball(1) / (norm(line(mid)) * sqr(sqr(mid)));
    ASSERT_GE(bound.upper(), point.upper()) << k;
    ASSERT_LE(bound.upper(), point.upper() * 1.1) << k;
  }
}

TEST(Grid, IntegralBoundsTheQuadrature) {
  GridReport g = grid_segment(mpq_class(200), mpq_class(204), mpq_class(1, 100));
  ZetaSeries line = make_line_series(400);
  QuadResult q = integrate_rigorous(InvZetaSqT4(line), mpq_class(200), mpq_class(204), 1e-14,
                                    QuadOptions{PanelRule::taylor});
  EXPECT_EQ(g.cells, 400);
  EXPECT_GE(g.integral.upper(), q.total.lower());
  EXPECT_LE(g.integral.upper(), q.total.upper() * 1.1);
  EXPECT_LE(g.integral.lower(), 0.0);
}

TEST(Plan, Validation) {
  KappaPlan ok;
  EXPECT_NO_THROW(ok.validate());
  auto broken = [](auto edit) {
    KappaPlan p;
    edit(p);
    return p;
  };
  EXPECT_THROW(broken([](KappaPlan& p) { p.eps = mpq_class(6, 10); }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.eps = 0; }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.splits = {mpq_class(1), mpq_class(1, 5)}; }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.t0 = mpq_class(1, 2); }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.t_end = 100; }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.cutoffs = {3000, 750}; }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.cutoffs = {3000, 750, 60}; }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.grid_step = mpq_class(3, 7); }).validate(), DomainError);
  EXPECT_THROW(broken([](KappaPlan& p) { p.c2_cutoff = 1000; }).validate(), CutoffTooSmall);
}

TEST(Plan, SetWidthSplitsTheBudget) {
  KappaPlan p;
  p.set_width(1e-3);
  ASSERT_EQ(p.target_widths.size(), 3u);
  for (double w : p.target_widths) EXPECT_DOUBLE_EQ(w, 5e-4);
  EXPECT_DOUBLE_EQ(p.kappa_width, 1e-3);
}

TEST(Kappa, ShortRunContainsTheConstant) {
  KappaPlan p;
  p.eps = mpq_class(1, 50);
  p.t0 = 20;
  p.t_end = 30;
  p.set_width(1.0);
  KappaReport r = compute_kappa(p);
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(r.kappa.contains(0.607314));
  EXPECT_EQ(r.segments.size(), 3u);
  EXPECT_NE(audit_log(r).find("kappa = "), std::string::npos);
}
