#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ball.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace bvk {

// Explicit bounds on theta(x) = sum_{p <= x} log p:
//   theta(x) < x + c_plus x / log x            for x > 1,
//   theta(x) > x - c_minus x / log x           for x >= x_minus_threshold,
//   theta(x) > x - c0_minus x / log x          for x >= c0_threshold.
struct ThetaConstants {
  static constexpr const char* c_plus = "0.0201384";
  static constexpr const char* c_minus = "0.0239922";
  static constexpr long x_minus_threshold = 758711;
  static constexpr long c0_minus_num = 6;
  static constexpr long c0_minus_den = 7;
  static constexpr long c0_threshold = 67;

  static Ball c_plus_ball() { return Ball::from_string(c_plus); }
  static Ball c_minus_ball() { return Ball::from_string(c_minus); }
  static Ball c0_minus_ball() { return Ball(c0_minus_num) / Ball(c0_minus_den); }
};

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint32_t> primes;
  std::vector<std::uint32_t> spf;  // smallest prime factor, filled on request
};

constexpr std::uint64_t kPrimeLimitCap = 2'000'000'000;
constexpr std::size_t kSieveBlock = std::size_t{1} << 16;

// Plain sieve for small limits.
inline std::vector<std::uint32_t> small_primes(std::uint32_t n) {
  std::vector<char> comp(n + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

inline std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> spf(n + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = i;
      primes.push_back(i);
    }
    for (std::uint32_t p : primes) {
      std::uint64_t m = static_cast<std::uint64_t>(p) * i;
      if (p > spf[i] || m > n) break;
      spf[m] = p;
    }
  }
  return spf;
}

// Segmented sieve of Eratosthenes.
inline PrimeTable primes_up_to(std::uint64_t n, bool with_spf = false) {
  if (n < 2) throw DomainError("primes_up_to requires n >= 2");
  if (n > kPrimeLimitCap) throw LimitTooLarge("prime limit above cap");
  PrimeTable table;
  table.limit = n;
  auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(n)));
  while (static_cast<std::uint64_t>(root + 1) * (root + 1) <= n) ++root;
  std::vector<std::uint32_t> base = small_primes(root);
  std::vector<char> block(kSieveBlock);
  for (std::uint64_t lo = 2; lo <= n; lo += kSieveBlock) {
    std::uint64_t hi = std::min<std::uint64_t>(lo + kSieveBlock - 1, n);
    std::fill(block.begin(), block.end(), 0);
    for (std::uint32_t p : base) {
      std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      std::uint64_t start = std::max<std::uint64_t>(pp, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= hi; m += p) block[m - lo] = 1;
    }
    for (std::uint64_t i = lo; i <= hi; ++i)
      if (!block[i - lo]) table.primes.push_back(static_cast<std::uint32_t>(i));
  }
  if (with_spf) {
    if (n > 200'000'000) throw LimitTooLarge("spf table above cap");
    table.spf = smallest_prime_factors(static_cast<std::uint32_t>(n));
  }
  return table;
}

// Sum of term(p) over the primes in `primes`, in fixed blocks reduced in
// ascending order.
template <class Term>
Ball prime_sum(const std::vector<std::uint32_t>& primes, Term&& term) {
  constexpr std::size_t chunk = 8192;
  std::size_t blocks = (primes.size() + chunk - 1) / chunk;
  return blockwise_sum(blocks, [&](std::size_t b) {
    Ball acc;
    std::size_t end = std::min(primes.size(), (b + 1) * chunk);
    for (std::size_t i = b * chunk; i < end; ++i) acc += term(primes[i]);
    return acc;
  });
}

// sum_{p > C} (log p)^2/(p-1)^2 < (c+ + c-) C/(C-1)^2 + log C/(C-1) + (1+c+)/(C-1).
inline Ball c2_tail_bound(std::uint64_t cutoff) {
  if (cutoff < static_cast<std::uint64_t>(ThetaConstants::x_minus_threshold))
    throw CutoffTooSmall("c2 cutoff below the theta lower-bound threshold");
  Ball c(static_cast<long>(cutoff));
  Ball cm1 = c - Ball(1);
  Ball cp = ThetaConstants::c_plus_ball();
  return (cp + ThetaConstants::c_minus_ball()) * c / sqr(cm1) + log(c) / cm1 + (Ball(1) + cp) / cm1;
}

inline Ball c2_partial_sum(std::uint64_t cutoff) {
  PrimeTable t = primes_up_to(cutoff);
  return prime_sum(t.primes, [](std::uint32_t p) {
    Ball bp(static_cast<long>(p));
    return sqr(log(bp) / (bp - Ball(1)));
  });
}

// c_2 = sum_p (log p)^2/(p-1)^2.
inline Ball c2_enclosure(std::uint64_t cutoff = 1'000'000) {
  Ball tail = c2_tail_bound(cutoff);
  return c2_partial_sum(cutoff) + one_sided(tail.upper());
}

// C_p = (log p)^4/(p-1)^4 ((p-1)^2/12 + p)
inline Ball cp_term(std::uint32_t p) {
  Ball bp(static_cast<long>(p));
  Ball pm1 = bp - Ball(1);
  return sqr(sqr(log(bp) / pm1)) * (sqr(pm1) / Ball(12) + bp);
}

struct SumCpReport {
  Ball partial;  // sum over p <= 10^6
  Ball tail;     // integral bound for the rest
  Ball upper;    // U, a certified upper bound for sum_p C_p
  Ball c2;
  bool below_256;  // U + c2^2/2 < 2.56
  bool ratio_ok;   // c2 / U > 1/4
};

inline Ball sum_cp_tail_bound() {
  // (37/2) int_A^oo u^{-7/2} (u^2/12 + u + 1) du with A = 10^6
  Ball a(1'000'000);
  Ball r = Ball(1) / sqrt(a);
  Ball a1 = r / a;
  Ball a2 = a1 / a;
  Ball v = r / Ball(6) + Ball(2) * a1 / Ball(3) + Ball(2) * a2 / Ball(5);
  return Ball(37) * v / Ball(2);
}

inline SumCpReport sum_cp_upper(const Ball* c2_in = nullptr) {
  SumCpReport r;
  PrimeTable t = primes_up_to(1'000'000);
  r.partial = prime_sum(t.primes, cp_term);
  r.tail = sum_cp_tail_bound();
  r.upper = Ball::exact((r.partial + r.tail).upper());
  r.c2 = c2_in ? *c2_in : c2_enclosure(1'000'000);
  r.below_256 = (r.upper + sqr(r.c2) / Ball(2)).certainly_less(Ball::from_string("2.56"));
  r.ratio_ok = (Ball(1) / Ball(4)).certainly_less(r.c2 / r.upper);
  return r;
}

// sum_{p > C} p^{-4} <= (c+ + 6/7)/(C^3 log^2 C) + 1/(3 C^3 log C)
inline Ball tail_inv_p4_bound(std::uint64_t cutoff) {
  if (cutoff < static_cast<std::uint64_t>(ThetaConstants::c0_threshold))
    throw DomainError("tail_inv_p4_bound requires C >= 67");
  Ball c(static_cast<long>(cutoff));
  Ball l = log(c);
  Ball c3 = c * sqr(c);
  Ball v = (ThetaConstants::c_plus_ball() + ThetaConstants::c0_minus_ball()) / (c3 * sqr(l)) +
           Ball(1) / (Ball(3) * c3 * l);
  return Ball::exact(v.upper());
}

}  // namespace bvk
