#include <gtest/gtest.h>

#include <random>

#include "bvkappa/hproduct.hpp"

using namespace bvk;

namespace {

// Truncation data recomputed with sympy (R4 coefficients) and mpmath.
struct ProfileRef {
  std::uint64_t cutoff;
  const char* d_of_c;
  double err;
};
constexpr ProfileRef kProfiles[] = {
    {200, "20.2431404040134610131288000905", 2.38271872300831e-7},
    {250, "20.1940046451525925851109086359", 1.15214427355377e-7},
    {750, "20.0642212049910529514137644217", 3.34675103234129e-9},
    {3000, "20.0160137896375361021144336741", 4.10100347787812e-11},
};

// H(t) from the Euler product over primes below 10^7, numpy float64.
struct HRef {
  double t, value;
};
constexpr HRef kH[] = {{0.25, 0.9218298850269097},
                       {1.0, 0.5126123235223294},
                       {10.0, 0.5203890898803534},
                       {100.0, 0.6211901719738008}};

const AcceleratedH& h250() {
  static const AcceleratedH h(250);
  return h;
}

}  // namespace

TEST(AccelPolys, SecondStageAtYOneIsOneMinusXSquared) {
  const AccelPolys& a = accel_polys();
  std::vector<mpz_class> s2 = a.s2.at_y_one();
  ASSERT_EQ(s2.size(), 3u);
  EXPECT_EQ(s2[0], 1);
  EXPECT_EQ(s2[1], -2);
  EXPECT_EQ(s2[2], 1);
}

TEST(AccelPolys, QStartsWithTwenty) {
  const AccelPolys& a = accel_polys();
  ASSERT_GE(a.q.size(), 6u);
  std::vector<long> head{20, 8, 8, 24, 16, 48};
  for (std::size_t i = 0; i < head.size(); ++i) EXPECT_EQ(a.q[i], head[i]) << i;
}

TEST(TruncationProfile, MatchesIndependentComputation) {
  for (const auto& r : kProfiles) {
    TruncationProfile p = truncation_profile(r.cutoff);
    EXPECT_TRUE(p.d_of_c.overlaps(Ball::from_string(r.d_of_c, 1e-28))) << r.cutoff;
    EXPECT_NEAR(p.err.mid_d(), r.err, r.err * 1e-12) << r.cutoff;
    EXPECT_GE(p.err.lower(), r.err * (1 - 1e-14)) << r.cutoff;
  }
  EXPECT_THROW(truncation_profile(50), DomainError);
}

TEST(TruncationProfile, DApproachesTwenty) {
  TruncationProfile p = truncation_profile(1'000'000);
  EXPECT_GE(p.d_of_c.lower(), 20.0);
  EXPECT_LE(p.d_of_c.upper(), 20.001);
}

TEST(HFactor, FiveNinthsAtCosMinusOne) {
  Ball t = Ball::pi() / log(Ball(2));
  Ball f = h_factor(2, t);
  EXPECT_TRUE(f.contains(Ball(5) / Ball(9)));
  EXPECT_LT(f.rad(), 1e-30);
  EXPECT_TRUE(h_factor(3, Ball(0)).contains(1.0));
}

TEST(HAccel, MatchesDirectProductReferences) {
  for (const auto& r : kH) {
    Ball v = h250()(Ball::exact(r.t));
    EXPECT_NEAR(v.mid_d(), r.value, 1e-7 + v.rad()) << r.t;
    EXPECT_LE(v.rad(), 1.2e-7) << r.t;
  }
}

TEST(HAccel, Even) {
  for (double t : {0.3, 2.5, 77.0}) {
    Ball a = h250()(Ball::exact(t)), b = h250()(Ball::exact(-t));
    EXPECT_EQ(a.to_string(25), b.to_string(25)) << t;
  }
}

TEST(HAccel, CutoffsAgree) {
  AcceleratedH h3000(3000);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 300.0);
  for (int i = 0; i < 20; ++i) {
    Ball t = Ball::exact(u(rng));
    Ball a = h250()(t), b = h3000(t);
    ASSERT_TRUE(a.overlaps(b)) << t;
    ASSERT_LT(b.rad(), a.rad()) << t;
  }
}

TEST(HAccel, DirectProductIsAnUpperBound) {
  for (double t : {0.5, 3.0, 40.0}) {
    Ball direct = h_direct(Ball::exact(t), 20'000);
    Ball accel = h250()(Ball::exact(t));
    EXPECT_LE(accel.lower(), direct.upper()) << t;
  }
}

TEST(HAccel, ValuesStayInUnitInterval) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int i = 0; i < 40; ++i) {
    Ball v = h250()(Ball::exact(u(rng)));
    ASSERT_GT(v.upper(), 0.0);
    ASSERT_LT(v.lower(), 1.0);
  }
}

TEST(TaylorBounds, SandwichH) {
  Ball c2 = c2_enclosure();
  for (double t : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    Ball bt = Ball::exact(t);
    TaylorBounds tb = h_taylor_bounds(bt, c2);
    Ball h = h250()(bt);
    EXPECT_LE(tb.lo.lower(), h.upper()) << t;
    EXPECT_LE(h.lower(), tb.hi.upper()) << t;
  }
  EXPECT_THROW(h_taylor_bounds(Ball::exact(0.6), c2), DomainError);
}

TEST(HAccel, TaylorModelContainsPointValues) {
  TaylorModel tm = TaylorModel::variable(mpq_class(10), mpq_class(41, 4), 8);
  TaylorModel v = h250().truncated(tm);
  for (int k = 0; k <= 4; ++k) {
    mpq_class t = mpq_class(10) + mpq_class(k, 16);
    Ball p = h250().truncated(Ball(t));
    Ball d(mpq_class(t - mpq_class(81, 8)));
    EXPECT_TRUE(v.restricted(d, 0.0).range().overlaps(p)) << k;
  }
}
