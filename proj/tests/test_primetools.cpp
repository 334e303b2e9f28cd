#include <gtest/gtest.h>

#include <random>

#include "bvkappa/primetools.hpp"

using namespace bvk;

namespace {

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST(Primes, CountsToTenThousandMatchTrialDivision) {
  PrimeTable t = primes_up_to(10'000);
  std::vector<std::uint32_t> expect;
  for (std::uint32_t n = 2; n <= 10'000; ++n)
    if (is_prime_trial(n)) expect.push_back(n);
  EXPECT_EQ(t.primes, expect);
}

TEST(Primes, PiOfAMillion) {
  EXPECT_EQ(primes_up_to(1'000'000).primes.size(), 78498u);
  EXPECT_EQ(primes_up_to(2).primes.size(), 1u);
}

TEST(Primes, SegmentBoundariesAndRandomLimits) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> u(2, 300'000);
  PrimeTable big = primes_up_to(300'000);
  for (int i = 0; i < 20; ++i) {
    std::uint64_t n = i < 3 ? kSieveBlock + 1 - static_cast<std::uint64_t>(i) : u(rng);
    PrimeTable t = primes_up_to(n);
    auto end = std::upper_bound(big.primes.begin(), big.primes.end(), n);
    ASSERT_EQ(t.primes.size(), static_cast<std::size_t>(end - big.primes.begin())) << n;
  }
}

TEST(Primes, SmallestPrimeFactors) {
  PrimeTable t = primes_up_to(1000, true);
  for (std::uint32_t n = 2; n <= 1000; ++n) {
    std::uint32_t d = 2;
    while (n % d) ++d;
    ASSERT_EQ(t.spf[n], d) << n;
  }
}

TEST(Primes, Limits) {
  EXPECT_THROW(primes_up_to(1), DomainError);
  EXPECT_THROW(primes_up_to(kPrimeLimitCap + 1), LimitTooLarge);
}

TEST(C2, EnclosureAtAMillionContainsReference) {
  Ball c2 = c2_enclosure(1'000'000);
  EXPECT_TRUE(c2.contains("1.3856045"));
  EXPECT_LE(c2.width(), 3e-5);
}

TEST(C2, TailBoundShrinksWithCutoff) {
  Ball a = c2_tail_bound(1'000'000), b = c2_tail_bound(2'000'000);
  EXPECT_TRUE(b.certainly_less(a));
  EXPECT_THROW(c2_tail_bound(1000), CutoffTooSmall);
  EXPECT_NEAR(a.mid_d(), 1.48796e-5, 1e-9);
}

TEST(C2, PartialSumsIncrease) {
  Ball prev = c2_partial_sum(1000);
  for (std::uint64_t c : {10'000ull, 100'000ull}) {
    Ball cur = c2_partial_sum(c);
    EXPECT_TRUE(prev.certainly_less(cur));
    prev = cur;
  }
  EXPECT_TRUE(prev.certainly_less(c2_enclosure()));
}

TEST(SumCp, UpperBoundAndFlags) {
  SumCpReport r = sum_cp_upper();
  EXPECT_TRUE(r.below_256);
  EXPECT_TRUE(r.ratio_ok);
  EXPECT_LE(r.partial.upper(), r.upper.upper());
  EXPECT_LT(r.tail.upper(), 0.004);
  // C_2 = log(2)^4 (1/12 + 2)
  EXPECT_TRUE(cp_term(2).overlaps(pow(log(Ball(2)), 4) * (Ball(1) / Ball(12) + Ball(2))));
}

TEST(TailInvP4, DominatesTheComputedTail) {
  // sum over 200 < p <= 10^6 of p^-4 from numpy, float64
  double finite = 6.226549856989777e-09;
  Ball bound = tail_inv_p4_bound(200);
  EXPECT_GT(bound.lower(), finite * (1 + 1e-12));
  EXPECT_LT(bound.upper(), 1.2e-8);
  EXPECT_THROW(tail_inv_p4_bound(66), DomainError);
  EXPECT_TRUE(tail_inv_p4_bound(3000).certainly_less(bound));
}

TEST(Theta, ConstantsBehave) {
  // theta(10^6) = sum of log p, checked against both explicit bounds
  PrimeTable t = primes_up_to(1'000'000);
  Ball theta = prime_sum(t.primes, [](std::uint32_t p) { return log(Ball(static_cast<long>(p))); });
  Ball x(1'000'000);
  Ball upper = x + ThetaConstants::c_plus_ball() * x / log(x);
  Ball lower = x - ThetaConstants::c_minus_ball() * x / log(x);
  EXPECT_TRUE(theta.certainly_less(upper));
  EXPECT_TRUE(lower.certainly_less(theta));
}
