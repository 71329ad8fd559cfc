#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ecarm/census.hpp"
#include "ecarm/classnum.hpp"
#include "oracles.hpp"

using namespace ecarm;
using namespace ecarm::census;
using curves::CurveModN;
using curves::WeierstrassCurve;

namespace {

// Criterion from brute-force counts and orders, both components prime.
bool oracle_carmichael(u64 p, u64 q, i64 a, i64 b) {
  const i64 ap = static_cast<i64>(p + 1 - oracle::count_short(p, a, b));
  const i64 aq = static_cast<i64>(q + 1 - oracle::count_short(q, a, b));
  const i64 value = static_cast<i64>(p * q) + 1 - ap * aq;
  return value % static_cast<i64>(oracle::exponent_short(p, a, b)) == 0 &&
         value % static_cast<i64>(oracle::exponent_short(q, a, b)) == 0;
}

bool good_pair(u64 n, i64 a, i64 b) {
  const i64 d = 4 * a * a * a + 27 * b * b;
  return std::gcd(static_cast<u64>(d % static_cast<i64>(n)), n) == 1;
}

}  // namespace

TEST_CASE("sampler") {
  const auto n35 = arith::factorize(35);
  Rng r1(11), r2(11);
  for (int i = 0; i < 200; ++i) {
    const auto c = sample_curve(n35, r1);
    CHECK(*c.combined() == *sample_curve(n35, r2).combined());
    CHECK(good_pair(35, static_cast<i64>(c.combined()->a()), static_cast<i64>(c.combined()->b())));
  }
  // Uniformity: pair frequencies over the 840 good pairs mod 35.
  std::map<std::pair<u64, u64>, int> freq;
  Rng rng(5);
  const int draws = 84000;
  for (int i = 0; i < draws; ++i) {
    const auto c = *sample_curve(n35, rng).combined();
    ++freq[{c.a(), c.b()}];
  }
  CHECK(freq.size() == 840);
  double chi2 = 0;
  for (const auto& [k, v] : freq) chi2 += (v - 100.0) * (v - 100.0) / 100.0;
  CHECK(chi2 < 839 + 6 * std::sqrt(2 * 839.0));

  Rng mixed(3);
  const auto c12 = sample_curve(arith::factorize(12 * 5), mixed);
  CHECK(c12.components().size() == 3);
  CHECK_FALSE(c12.component(2).curve.is_short());
  CHECK(c12.component(5).curve.is_short());
}

TEST_CASE("local outcome tables") {
  for (auto [p, k] : {std::pair<u64, int>{5, 1}, {5, 2}, {7, 2}, {5, 3}, {11, 1}}) {
    u64 total = 0;
    for (const auto& o : local_outcomes(p, k)) {
      total += o.count;
      CHECK(o.exponent > 0);
    }
    const u64 lift = arith::ipow(p, static_cast<unsigned>(k - 1));
    CHECK(total == lift * lift * (p * p - p));
  }
  // Direct tally mod 25 from the curves themselves.
  std::map<std::pair<i64, u64>, u64> direct;
  for (i64 a = 0; a < 25; ++a)
    for (i64 b = 0; b < 25; ++b) {
      const auto c = WeierstrassCurve::short_form(25, a, b);
      if (!curves::good_reduction(c)) continue;
      const i64 a5 = static_cast<i64>(6 - oracle::count_short(5, a, b));
      ++direct[{curves::trace_prime_power(a5, 5, 2), curves::exponent_mod_prime_power(c, 5, 2)}];
    }
  std::map<std::pair<i64, u64>, u64> table;
  for (const auto& o : local_outcomes(5, 2)) table[{o.trace, o.exponent}] = o.count;
  CHECK(direct == table);
  CHECK_THROWS_AS(local_outcomes(3, 1), InvalidInput);
}

TEST_CASE("exact probability against the pair sweep") {
  for (auto [p, q] : {std::pair<u64, u64>{5, 7}, {5, 11}, {7, 11}}) {
    const u64 n = p * q;
    u64 good = 0, hits = 0;
    for (i64 a = 0; a < static_cast<i64>(n); ++a)
      for (i64 b = 0; b < static_cast<i64>(n); ++b) {
        if (!good_pair(n, a, b)) continue;
        ++good;
        if (oracle_carmichael(p, q, a, b)) ++hits;
      }
    const auto ex = exact_probability(arith::factorize(n));
    CHECK(ex.denominator == good);
    CHECK(ex.numerator == hits);
    if (n == 35) {
      CHECK(good == 840);
      CHECK(ex.numerator >= 1);
      CHECK(oracle_carmichael(5, 7, 10, 21));
      CHECK_FALSE(oracle_carmichael(5, 7, 8, 7));
    }
  }
  // Prime-square components go through the lift tables.
  for (u64 n : {175u, 245u}) {
    u64 good = 0, hits = 0;
    for (i64 a = 0; a < static_cast<i64>(n); ++a)
      for (i64 b = 0; b < static_cast<i64>(n); ++b) {
        const auto c = WeierstrassCurve::short_form(n, a, b);
        if (!curves::good_reduction(c)) continue;
        ++good;
        if (carmichael::is_carmichael_criterion(CurveModN::from_curve(c)).verdict) ++hits;
      }
    const auto ex = exact_probability(arith::factorize(n));
    CHECK(ex.denominator == good);
    CHECK(ex.numerator == hits);
  }
  CHECK_THROWS_AS(exact_probability(arith::factorize(49)), InvalidInput);
  CHECK_THROWS_AS(exact_probability(arith::factorize(70)), InvalidInput);
  CHECK_THROWS_AS(exact_probability(arith::factorize(10'003 * 5)), InvalidInput);
}

TEST_CASE("Monte Carlo estimates") {
  const auto n35 = arith::factorize(35);
  const auto ex = exact_probability(n35);
  const auto mc = estimate_probability(n35, 10'000, 1);
  CHECK(mc.lower <= ex.value());
  CHECK(ex.value() <= mc.upper);
  CHECK(estimate_probability(n35, 10'000, 1).successes == mc.successes);
  const auto w3 = estimate_probability(n35, 999, 4, 3);
  CHECK(w3.workers == 3);
  CHECK(w3.samples == 999);
  CHECK(estimate_probability(n35, 999, 4, 3).successes == w3.successes);
  CHECK_THROWS_AS(estimate_probability(n35, 0, 1), InvalidInput);
  CHECK_THROWS_AS(estimate_probability(arith::factorize(25), 10, 1), InvalidInput);
  const auto ci = wilson_interval(0, 100);
  CHECK(ci.lower == doctest::Approx(0.0));
  CHECK(ci.upper == doctest::Approx(0.0370).epsilon(0.01));
}

TEST_CASE("interval coverage over seeds") {
  int total = 0, covered = 0;
  for (u64 n = 35; n <= 500; n += 2) {
    if (n % 3 == 0) continue;
    const auto f = arith::factorize(n);
    if (f.omega() < 2) continue;
    const double exact = exact_probability(f).value();
    int local = 0;
    for (u64 seed = 0; seed < 200; ++seed) {
      const auto mc = estimate_probability(f, 100, derive_seed(n, seed));
      if (mc.lower <= exact && exact <= mc.upper) ++local;
    }
    CHECK_MESSAGE(local >= 180, "n = " << n << " covered " << local << "/200");
    total += 200;
    covered += local;
  }
  CHECK(covered >= 0.9 * total);
}

TEST_CASE("structural profile") {
  const auto big = structural_profile(arith::factorize(arith::ipow(6, 20)));
  CHECK(big.gamma_small);
  const auto p720 = structural_profile(arith::factorize(720));
  CHECK_FALSE(p720.gamma_small);
  CHECK_FALSE(structural_profile(arith::factorize(101 * 103)).has_huge_prime);
  CHECK(structural_profile(arith::factorize(5 * 10007)).has_huge_prime);
  for (u64 n = 6; n <= 3000; ++n) {
    const auto s = structural_profile(arith::factorize(n));
    const auto fac = oracle::factor(n);
    u64 gamma = 1;
    int small_medium = 0, logc = 0, sqf = 0;
    bool above4 = false;
    const double lg = std::log(static_cast<double>(n));
    for (const auto& [p, k] : fac) {
      gamma *= p;
      if (k == 1) ++sqf;
      if (k == 1 && p > 0.1 * lg) ++small_medium;
      if (p > std::pow(lg, 7)) ++logc;
      if (p > std::pow(lg, 4)) above4 = true;
    }
    const double bound = std::sqrt(static_cast<double>(n)) / std::pow(2.0, static_cast<double>(fac.size()));
    if (std::fabs(static_cast<double>(gamma) - bound) > 1e-9) CHECK(s.gamma_small == (gamma <= bound));
    CHECK(s.gamma_log4 == (gamma < n / std::pow(lg, 4)));
    CHECK(s.has_huge_prime == (oracle::largest_prime_factor(n) > std::pow(static_cast<double>(n), 0.7)));
    CHECK(s.two_medium_squarefree_primes == (small_medium >= 2));
    CHECK(s.medium_prime_count_logC == logc);
    CHECK(s.prime_above_log4 == above4);
    CHECK(s.squarefree_prime_count == sqf);
  }
  CHECK(structural_profile(arith::factorize(5 * 7)).bracket_shared_primes == 2);
  CHECK(structural_profile(arith::factorize(5 * 11)).bracket_shared_primes == 0);
  CHECK_THROWS_AS(structural_profile(arith::factorize(5)), InvalidInput);
}

TEST_CASE("trichotomy") {
  const auto e = CurveModN::from_curve(WeierstrassCurve::short_form(35, 10, 21));
  const auto r = trichotomy_check(e, 5, 7);
  CHECK(r.a_p2 == 0);
  CHECK(r.e2 == 4);
  CHECK(r.t == 4);
  CHECK(r.case2);
  CHECK(r.case3);
  CHECK(r.outcome != Case::violation);
  const auto neg = CurveModN::from_curve(WeierstrassCurve::short_form(35, 8, 7));
  CHECK(trichotomy_check(neg, 5, 7).outcome == Case::not_applicable);
  CHECK_THROWS_AS(trichotomy_check(e, 7, 5), InvalidInput);
  const auto sq = CurveModN::from_curve(WeierstrassCurve::short_form(175, 1, 1));
  CHECK_THROWS_AS(trichotomy_check(sq, 5, 7), InvalidInput);

  // None of the three alternatives holds here: a_5 = a_17 = 4, e2 = 14,
  // a_5 has two candidates, 14^6 >= 4096 5^2 17 and t = 2 has t^3 <= 17.
  const auto v = trichotomy_check(CurveModN::from_curve(WeierstrassCurve::short_form(85, 12, 5)), 5, 17);
  CHECK(v.outcome == Case::violation);
  CHECK(v.a_p1 == 4);
  CHECK(v.a_p2 == 4);
  CHECK(v.e2 == 14);
  CHECK(v.t == 2);
  CHECK(v.candidates == 2);
  CHECK(v.case2_from_q);

  int pairs = 0;
  for (u64 n : {35u, 55u, 77u, 385u}) {
    const auto f = arith::factorize(n);
    for (i64 a = 0; a < static_cast<i64>(n); ++a)
      for (i64 b = 0; b < static_cast<i64>(n); ++b) {
        if (n == 385 && (a + b) % 5 != 0) continue;
        const auto c = WeierstrassCurve::short_form(n, a, b);
        if (!curves::good_reduction(c)) continue;
        const auto curve = CurveModN::from_curve(c);
        if (!carmichael::is_carmichael_criterion(curve).verdict) continue;
        for (std::size_t i = 0; i < f.factors().size(); ++i)
          for (std::size_t j = i + 1; j < f.factors().size(); ++j) {
            const auto t = trichotomy_check(curve, f.factors()[i].prime, f.factors()[j].prime);
            CHECK(t.outcome != Case::not_applicable);
            CHECK_MESSAGE(t.outcome != Case::violation, c.to_string());
            ++pairs;
          }
      }
  }
  CHECK(pairs > 0);
}

TEST_CASE("sweeps") {
  CHECK(decay_sweep(100, 50, 10, 1).rows.empty());
  const auto a = decay_sweep(30, 130, 50, 9, 1);
  const auto b = decay_sweep(30, 130, 50, 9, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].estimate.successes == b.rows[i].estimate.successes);
    CHECK(a.rows[i].n % 2 != 0);
    CHECK(a.rows[i].n % 3 != 0);
  }
  CHECK(std::isfinite(a.fitted_upper_C));
  CHECK(a.fitted_upper_C > 0);
  DecayFilter only_small;
  only_small.gamma_small = true;
  for (const auto& row : decay_sweep(30, 3000, 20, 2, 1, only_small).rows) CHECK(row.profile.gamma_small);

  const auto j1 = joint_sweep(1000, 60, 20, 4, 1);
  const auto j2 = joint_sweep(1000, 60, 20, 4, 2);
  CHECK(j1.successes == j2.successes);
  CHECK(j1.prime_power_draws == j2.prime_power_draws);
  CHECK(j1.prime_power_draws > 0);
  CHECK(j1.trials == 1200);
  CHECK(j1.upper >= j1.estimate);
  CHECK(j1.scaled_upper == doctest::Approx(j1.upper * std::pow(1000.0, 0.125)));
}

TEST_CASE("Hasse intervals of primes in one square bracket overlap") {
  int checked = 0;
  for (u64 v = 2; v <= 500; ++v) {
    std::vector<u64> ps;
    for (u64 p = v * v; p < (v + 1) * (v + 1); ++p)
      if (oracle::is_prime(p)) ps.push_back(p);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        // Integer N lies in the Hasse interval of p iff (N - p - 1)^2 <= 4p.
        const u64 hi = ps[i] + 1 + arith::isqrt(4 * ps[i]);
        const u64 lo = ps[j] + 1 - arith::isqrt(4 * ps[j]);
        CHECK(lo <= hi);
        ++checked;
      }
  }
  CHECK(checked > 1000);
}

TEST_CASE("Lenstra singleton bound shape") {
  // r(p) = max_N P(#E = N) sqrt(p) / (log p (log log p)^2); the fitted
  // constant over primes up to X must settle as X grows.
  std::vector<std::pair<u64, double>> ratios;
  for (u64 p : arith::primes_up_to(2000)) {
    if (p < 5) continue;
    u64 best = 0, total = 0;
    for (const auto& [a, c] : classnum::deuring_census(p)) {
      best = std::max(best, c);
      total += c;
    }
    const double lp = std::log(static_cast<double>(p));
    ratios.emplace_back(p, static_cast<double>(best) / total * std::sqrt(static_cast<double>(p)) /
                               (lp * std::log(lp) * std::log(lp)));
  }
  std::vector<double> fitted;
  for (u64 x : {100u, 250u, 500u, 1000u, 2000u}) {
    double c = 0;
    for (const auto& [p, r] : ratios)
      if (p <= x) c = std::max(c, r);
    fitted.push_back(c);
  }
  for (double c : fitted) CHECK(c <= 2 * fitted.front());
}
