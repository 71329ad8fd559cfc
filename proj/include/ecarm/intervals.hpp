#pragma once

// Brute-force counts behind the short-interval lemmas, an exact symbolic
// check of Vaughan's identity, and Lucas-sequence solutions of a_{p^k} = 1
// against the linear-forms-in-logarithms cutoff.

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ecarm/arith.hpp"

namespace ecarm::intervals {

using BigInt = boost::multiprecision::cpp_int;

struct IntervalCountReport {
  u64 x = 0;
  u64 window_lo = 0;  // inclusive
  u64 window_hi = 0;  // inclusive
  std::string parameter;
  u64 count = 0;
  double formula = 0;   // bound shape without its constant
  double constant = 1;  // set by fit_constant
  bool pass = true;     // count <= constant * formula (lower bound for the large-prime count)

  double bound() const { return constant * formula; }
  // count / formula, the smallest admissible constant for this row.
  double ratio() const;
};

// n in [x, x + floor(sqrt x)] with e(n) < n / k.
// Formula sqrt(x)/k + x^(1/3) log^3 x.
IntervalCountReport count_e_small(u64 x, u64 k);

// n in [x, x + floor(sqrt x)] with n = d t, d < x^(2/3), t composed of primes
// in `primes`. Formula |P| + sqrt(x) log|P| / log x.
IntervalCountReport count_smooth_factor_interval(u64 x, const std::vector<u64>& primes);

// n in [x, x + floor(0.1 sqrt x)] with P+(n) > x^(1/2 + c); pass iff the
// count is at least c sqrt(x), which is also the reported formula.
IntervalCountReport count_large_prime_factor(u64 x, double c);

struct FittedSweep {
  double constant = 0;  // max ratio over all rows
  double spread = 0;    // max_x C(x) / min_x C(x), C(x) = max ratio at x
  bool all_pass = false;
  bool stable = false;  // spread <= stability_factor
};

// Fits one constant to all rows, then updates each row's constant and pass flag.
FittedSweep fit_constant(std::vector<IntervalCountReport>& rows, double stability_factor);

// |P| < log x / (4 log log x), where the count is at most 24 |P|.
bool strong_regime(u64 x, std::size_t prime_count);

// Linear combination of log p with integer coefficients, keyed by p.
using LogCombination = std::map<u64, i64>;

struct VaughanSides {
  LogCombination lhs;
  LogCombination rhs;
};

// Both sides of Lambda(n) = -sum_{mdr=n, m<=U, d<=V} Lambda(m) mu(d)
//   + sum_{hd=n, d<=V} mu(d) log h
//   - sum_{mk=n, m>U, k>1} Lambda(m) sum_{d|k, d<=V} mu(d).
// Requires 1 <= U < n and V >= 1.
VaughanSides vaughan_sides(u64 n, u64 U, u64 V);
bool vaughan_identity_check(u64 n, u64 U, u64 V);

// ceil(3e20 log p (46 + max(0, log log p))). The clamp only matters for
// p = 2, where log log p < 0.
BigInt baker_cutoff(u64 p);

// k in [1, K] with V_k = 1 for V_0 = 2, V_1 = a, V_k = a V_{k-1} - p V_{k-2}.
std::vector<unsigned> lucas_ones(u64 p, i64 a, unsigned K);

inline constexpr unsigned kLucasOnesMaxK = 10'000;

}  // namespace ecarm::intervals
