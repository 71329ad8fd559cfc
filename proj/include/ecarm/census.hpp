#pragma once

// Random curves modulo n, the probability that n is elliptic Carmichael for
// them (exact and Monte Carlo), structural classifiers of n and the sweeps
// built on them.

#include <optional>
#include <string>
#include <vector>

#include "ecarm/carmichael.hpp"
#include "ecarm/random.hpp"

namespace ecarm::census {

enum class Mode { exact, monte_carlo };
std::string to_string(Mode m);

struct ProbabilityEstimate {
  u64 n = 0;
  Mode mode = Mode::exact;
  // exact
  u64 numerator = 0;
  u64 denominator = 0;
  // Monte Carlo
  u64 successes = 0;
  u64 samples = 0;
  double lower = 0;  // Wilson 95%
  double upper = 0;
  u64 seed = 0;
  unsigned workers = 1;

  double value() const;
};

struct Interval {
  double lower = 0;
  double upper = 0;
};
Interval wilson_interval(u64 successes, u64 samples, double z = 1.959963984540054);

// Uniform over good pairs (A, B) mod n when gcd(n, 6) = 1, by rejection on
// the pair. Otherwise each component is drawn uniformly and independently,
// long form at 2 and 3.
curves::CurveModN sample_curve(const arith::FactoredInteger& n, Rng& rng);

// (a_{p^k}, exp E(Z/p^k)) with the number of good pairs mod p^k realizing it.
struct LocalOutcome {
  i64 trace = 0;
  u64 exponent = 0;
  u64 count = 0;
};
// Distribution over all good pairs mod p^k, p >= 5. Cached.
const std::vector<LocalOutcome>& local_outcomes(u64 p, int k);

inline constexpr u64 kExactBound = 10'000;

// numerator / denominator = fraction of good pairs (A, B) mod n for which n
// is elliptic Carmichael, by the criterion.
ProbabilityEstimate exact_probability(const arith::FactoredInteger& n, u64 bound = kExactBound);

ProbabilityEstimate estimate_probability(const arith::FactoredInteger& n, u64 samples, u64 seed,
                                         unsigned workers = 1);

struct StructuralProfile {
  u64 n = 0;
  double C = 7;
  bool gamma_small = false;                    // gamma(n) <= 2^-omega(n) sqrt(n)
  bool gamma_log4 = false;                     // gamma(n) < n / log^4 n
  bool has_huge_prime = false;                 // P+(n) > n^0.7
  bool two_medium_squarefree_primes = false;   // p1 != p2 | n, p_i > 0.1 log n, p_i^2 does not divide n
  int medium_prime_count_logC = 0;             // #{p | n : p > log^C n}
  bool many_medium_primes = false;             // that count exceeds log log n
  bool prime_above_log4 = false;               // some p | n with p > log^4 n
  int squarefree_prime_count = 0;              // #{p | n : p^2 does not divide n}
  int bracket_shared_primes = 0;               // primes of n sharing [v^2, (v+1)^2) with another prime of n
};

StructuralProfile structural_profile(const arith::FactoredInteger& n, double C = 7);

enum class Case { case1, case2, case3, violation, not_applicable };
std::string to_string(Case c);

struct TrichotomyReport {
  Case outcome = Case::not_applicable;  // first case that holds
  bool case1 = false;
  bool case2 = false;
  bool case3 = false;
  // e2 < 4 sqrt(p1) p2^(1/3): what q = e2 / t < 4 sqrt(p1) and t <= p2^(1/3)
  // actually give. Not one of the three alternatives.
  bool case2_from_q = false;
  i64 a_d = 0;
  i64 a_p1 = 0;
  i64 a_p2 = 0;
  u64 e2 = 0;          // e(p2 - a_p2 + 1)
  u64 t = 0;           // gcd(e2, n + 1)
  u64 candidates = 0;  // a_p1 values in the Hasse range compatible with e2
};

// Checks the three alternatives for a Carmichael pair (n, E) and primes
// p1 < p2 dividing n exactly once.
TrichotomyReport trichotomy_check(const curves::CurveModN& curve, u64 p1, u64 p2);

struct SweepRow {
  u64 n = 0;
  ProbabilityEstimate estimate;
  StructuralProfile profile;
};

struct DecayFilter {
  std::optional<bool> gamma_small;
  std::optional<bool> has_huge_prime;
  std::optional<bool> two_medium_squarefree_primes;
};

struct DecaySweep {
  std::vector<SweepRow> rows;
  double fitted_upper_C = 0;  // max over rows of upper * log n
  double fitted_point_C = 0;  // max over rows of estimate * log n
  u64 argmax_n = 0;           // row attaining fitted_upper_C
};

// Non-prime-power n in [n_min, n_max] with gcd(n, 6) = 1. Row n uses the
// substream derive_seed(seed, n), so results do not depend on `workers`.
DecaySweep decay_sweep(u64 n_min, u64 n_max, u64 samples_per_n, u64 seed, unsigned workers = 1,
                       const DecayFilter& filter = {});

struct JointSweep {
  u64 x = 0;
  u64 samples_n = 0;
  u64 samples_e = 0;
  u64 prime_power_draws = 0;  // counted as failures
  u64 successes = 0;
  u64 trials = 0;
  double estimate = 0;
  double upper = 0;
  double scaled_estimate = 0;  // estimate * x^(1/8)
  double scaled_upper = 0;
};

// n uniform in [x, 2x], then samples_e random curves mod n.
JointSweep joint_sweep(u64 x, u64 samples_n, u64 samples_e, u64 seed, unsigned workers = 1);

}  // namespace ecarm::census
