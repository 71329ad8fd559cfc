#pragma once

// Hurwitz class numbers, the multiplicative correction psi, a truncated
// L(1, chi) and the point-count census they predict.

#include <map>
#include <vector>

#include <boost/rational.hpp>

#include "ecarm/arith.hpp"

namespace ecarm::classnum {

using Rational = boost::rational<i64>;

struct ClassNumberValue {
  u64 discriminant = 0;  // D, for forms of discriminant -D
  Rational value;
};

// Weighted count of SL2(Z)-classes of positive definite forms of discriminant
// -D, primitive or not; multiples of x^2+y^2 weigh 1/2, of x^2+xy+y^2 1/3.
ClassNumberValue hurwitz_class_number(u64 d);

// n = n' f^2 with n' squarefree.
struct SquarefreeSplit {
  u64 n_prime = 1;
  u64 f = 1;
};
SquarefreeSplit split_squarefree(u64 n);

// prod psi(p^k) over p^k || f, keyed on the symbol (p / n').
Rational psi_factor(const arith::FactoredInteger& f, u64 n_prime);

// sum_{m <= terms} (m / n') / m. Truncated, no error bound.
double L_estimate(u64 n_prime, u64 terms = 1'000'000);

// normalization * sqrt(n) / (2 pi) * L(1, (. / n')) * psi(f). With
// normalization 1 this is half the Hurwitz value on the census convention
// (e.g. 1/2 at n = 19 where H(19) = 1).
double analytic_class_number(u64 n, u64 terms = 1'000'000, double normalization = 1.0);

inline constexpr u64 kCensusPrimeBound = 2000;

// trace a -> number of pairs (A, B) mod p with 4A^3 + 27B^2 != 0 and a_p = a.
std::map<i64, u64> deuring_census(u64 p, unsigned workers = 1, u64 prime_bound = kCensusPrimeBound);

struct DeuringRow {
  i64 a = 0;
  Rational predicted;  // (p - 1)/2 * H(4p - a^2)
  u64 actual = 0;
  bool match = false;
};

struct DeuringReport {
  u64 p = 0;
  std::vector<DeuringRow> rows;  // every a with a^2 < 4p, ascending
  u64 good_pairs = 0;
  Rational predicted_total;
  bool mass_identity = false;
  bool all_match = false;
};

DeuringReport deuring_check(u64 p, unsigned workers = 1, u64 prime_bound = kCensusPrimeBound);

}  // namespace ecarm::classnum
