#include "ecarm/classnum.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include "ecarm/curves.hpp"
#include "ecarm/parallel.hpp"

namespace ecarm::classnum {

ClassNumberValue hurwitz_class_number(u64 d) {
  if (d < 3) throw InvalidInput("class numbers need D >= 3");
  if (d % 4 != 0 && d % 4 != 3) throw InvalidInput("-D must be 0 or 1 mod 4, got D = " + std::to_string(d));
  // Reduced forms: |b| <= a <= c, b >= 0 when |b| = a or a = c.
  Rational total = 0;
  const i64 D = static_cast<i64>(d);
  for (i64 a = 1; 3 * a * a <= D; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if ((b * b + D) % (4 * a) != 0) continue;
      const i64 c = (b * b + D) / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (a == c && b == 0) {
        total += Rational(1, 2);
      } else if (a == b && b == c) {
        total += Rational(1, 3);
      } else {
        total += 1;
      }
    }
  }
  return {d, total};
}

SquarefreeSplit split_squarefree(u64 n) {
  if (n == 0) throw InvalidInput("cannot split 0");
  SquarefreeSplit s;
  const auto factored = arith::factorize(n);
  for (const auto& f : factored.factors()) {
    if (f.exponent % 2) s.n_prime *= f.prime;
    s.f *= arith::ipow(f.prime, static_cast<unsigned>(f.exponent / 2));
  }
  return s;
}

Rational psi_factor(const arith::FactoredInteger& f, u64 n_prime) {
  if (std::gcd(f.value(), n_prime) != 1) {
    throw InvalidInput("psi needs gcd(n', f) = 1, got n' = " + std::to_string(n_prime) + ", f = " +
                       std::to_string(f.value()));
  }
  Rational total = 1;
  for (const auto& pk : f.factors()) {
    const i64 p = static_cast<i64>(pk.prime);
    const Rational p_neg_k(1, static_cast<i64>(pk.value()));
    const int symbol = arith::kronecker_symbol(p, static_cast<i64>(n_prime));
    if (symbol == 0) {
      total *= (Rational(p) - p_neg_k) / (p - 1);
    } else if (symbol == -1) {
      total *= (Rational(p + 1) - 2 * p_neg_k) / (p - 1);
    }
  }
  return total;
}

double L_estimate(u64 n_prime, u64 terms) {
  if (terms == 0) throw InvalidInput("L_estimate needs at least one term");
  double sum = 0;
  if (n_prime % 2 == 1 && n_prime <= terms) {
    // (m / n') is periodic mod n' for odd n'.
    std::vector<int8_t> table(n_prime);
    for (u64 m = 0; m < n_prime; ++m) table[m] = static_cast<int8_t>(arith::jacobi_symbol(static_cast<i64>(m), static_cast<i64>(n_prime)));
    for (u64 m = terms; m >= 1; --m) sum += table[m % n_prime] / static_cast<double>(m);
    return sum;
  }
  for (u64 m = terms; m >= 1; --m) {
    sum += arith::kronecker_symbol(static_cast<i64>(m), static_cast<i64>(n_prime)) / static_cast<double>(m);
  }
  return sum;
}

double analytic_class_number(u64 n, u64 terms, double normalization) {
  const auto split = split_squarefree(n);
  const Rational psi = psi_factor(arith::factorize(split.f), split.n_prime);
  const double psi_value = static_cast<double>(psi.numerator()) / static_cast<double>(psi.denominator());
  return normalization * std::sqrt(static_cast<double>(n)) / (2 * std::numbers::pi) * L_estimate(split.n_prime, terms) *
         psi_value;
}

std::map<i64, u64> deuring_census(u64 p, unsigned workers, u64 prime_bound) {
  if (!arith::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  if (p < 5) throw InvalidInput("the short-form census needs p >= 5");
  if (p > prime_bound) {
    throw InvalidInput("prime " + std::to_string(p) + " exceeds the census bound " + std::to_string(prime_bound));
  }
  const auto classes = curves::isomorphism_classes(p);
  std::map<i64, u64> total;
  std::mutex merge;
  parallel::for_chunks(classes.size(), workers, [&](unsigned, u64 begin, u64 end) {
    std::map<i64, u64> local;
    for (u64 i = begin; i < end; ++i) {
      const auto& w = classes[i];
      const auto c = curves::WeierstrassCurve::short_form(p, static_cast<i64>(w.a), static_cast<i64>(w.b));
      local[curves::trace(c, prime_bound)] += w.weight;
    }
    std::lock_guard lock(merge);
    for (const auto& [a, count] : local) total[a] += count;
  });
  return total;
}

DeuringReport deuring_check(u64 p, unsigned workers, u64 prime_bound) {
  const auto census = deuring_census(p, workers, prime_bound);
  DeuringReport report;
  report.p = p;
  report.all_match = true;
  const i64 bound = static_cast<i64>(arith::isqrt(4 * p));
  const Rational half_p(static_cast<i64>(p - 1), 2);
  for (i64 a = -bound; a <= bound; ++a) {
    const u64 d = 4 * p - static_cast<u64>(a * a);
    if (d == 0) continue;
    DeuringRow row;
    row.a = a;
    row.predicted = half_p * hurwitz_class_number(d).value;
    const auto it = census.find(a);
    row.actual = it == census.end() ? 0 : it->second;
    row.match = row.predicted == Rational(static_cast<i64>(row.actual));
    report.all_match = report.all_match && row.match;
    report.predicted_total += row.predicted;
    report.rows.push_back(row);
  }
  for (const auto& [a, count] : census) report.good_pairs += count;
  report.mass_identity = report.predicted_total == Rational(static_cast<i64>(report.good_pairs));
  return report;
}

}  // namespace ecarm::classnum
