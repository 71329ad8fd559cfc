#include "ecarm/census.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "ecarm/parallel.hpp"

namespace ecarm::census {

using curves::CurveModN;
using curves::WeierstrassCurve;

std::string to_string(Mode m) { return m == Mode::exact ? "exact" : "monte-carlo"; }

std::string to_string(Case c) {
  switch (c) {
    case Case::case1:
      return "case1";
    case Case::case2:
      return "case2";
    case Case::case3:
      return "case3";
    case Case::violation:
      return "violation";
    case Case::not_applicable:
      return "not-applicable";
  }
  return "unknown";
}

double ProbabilityEstimate::value() const {
  if (mode == Mode::exact) return denominator ? static_cast<double>(numerator) / static_cast<double>(denominator) : 0.0;
  return samples ? static_cast<double>(successes) / static_cast<double>(samples) : 0.0;
}

Interval wilson_interval(u64 successes, u64 samples, double z) {
  if (samples == 0) throw InvalidInput("Wilson interval needs at least one sample");
  if (successes > samples) throw InvalidInput("more successes than samples");
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = p + z2 / (2 * n);
  const double spread = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  const double denom = 1 + z2 / n;
  return {std::max(0.0, (centre - spread) / denom), std::min(1.0, (centre + spread) / denom)};
}

namespace {

bool coprime_to_six(const arith::FactoredInteger& n) { return !n.divisible_by(2) && !n.divisible_by(3); }

WeierstrassCurve sample_local(u64 p, int k, Rng& rng) {
  const u64 m = arith::ipow(p, static_cast<unsigned>(k));
  for (;;) {
    if (p >= 5) {
      const auto c = WeierstrassCurve::short_form(m, static_cast<i64>(rng.below(m)), static_cast<i64>(rng.below(m)));
      if (curves::good_reduction(c)) return c;
    } else {
      std::array<i64, 5> a{};
      for (auto& v : a) v = static_cast<i64>(rng.below(m));
      const auto c = WeierstrassCurve::long_form(m, a);
      if (curves::good_reduction(c)) return c;
    }
  }
}

}  // namespace

CurveModN sample_curve(const arith::FactoredInteger& n, Rng& rng) {
  if (n.value() < 2) throw InvalidInput("cannot sample curves modulo 1");
  if (coprime_to_six(n)) {
    const u64 m = n.value();
    for (;;) {
      const auto c = WeierstrassCurve::short_form(m, static_cast<i64>(rng.below(m)), static_cast<i64>(rng.below(m)));
      if (curves::good_reduction(c)) return CurveModN::from_curve(c);
    }
  }
  std::vector<curves::LocalComponent> comps;
  for (const auto& f : n.factors()) comps.push_back({f.prime, f.exponent, sample_local(f.prime, f.exponent, rng)});
  return CurveModN::assemble(std::move(comps));
}

namespace {

std::vector<LocalOutcome> build_outcomes(u64 p, int k) {
  std::map<std::pair<i64, u64>, u64> tally;
  const u64 lift = arith::ipow(p, static_cast<unsigned>(k - 1));
  const u64 m = lift * p;
  for (const auto& cls : curves::isomorphism_classes(p)) {
    const auto base = WeierstrassCurve::short_form(p, static_cast<i64>(cls.a), static_cast<i64>(cls.b));
    const i64 ap = curves::trace(base);
    const i64 apk = curves::trace_prime_power(ap, p, k);
    const u64 order = static_cast<u64>(static_cast<i64>(p) + 1 - ap);
    if (k == 1 || order % p != 0) {
      tally[{apk, curves::lifted_exponent_formula(base, p, k)}] += cls.weight * lift * lift;
      continue;
    }
    // Lifts of isomorphic pairs correspond under a fixed lift of u, so the
    // representative's lifts carry the whole class.
    for (u64 s = 0; s < lift; ++s) {
      for (u64 t = 0; t < lift; ++t) {
        const auto c = WeierstrassCurve::short_form(m, static_cast<i64>(cls.a + p * s), static_cast<i64>(cls.b + p * t));
        tally[{apk, curves::exponent_mod_prime_power(c, p, k)}] += cls.weight;
      }
    }
  }
  std::vector<LocalOutcome> out;
  for (const auto& [key, count] : tally) out.push_back({key.first, key.second, count});
  return out;
}

}  // namespace

const std::vector<LocalOutcome>& local_outcomes(u64 p, int k) {
  if (p < 5 || !arith::is_prime(p)) throw InvalidInput("local outcome tables need a prime p >= 5");
  if (k < 1) throw InvalidInput("exponent must be positive");
  static std::mutex mu;
  static std::map<std::pair<u64, int>, std::shared_ptr<const std::vector<LocalOutcome>>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({p, k}); it != cache.end()) return *it->second;
  }
  auto table = std::make_shared<const std::vector<LocalOutcome>>(build_outcomes(p, k));
  std::lock_guard lock(mu);
  return *cache.emplace(std::pair{p, k}, std::move(table)).first->second;
}

namespace {

void require_not_prime_power(const arith::FactoredInteger& n) {
  if (n.omega() < 2) {
    throw InvalidInput("n = " + std::to_string(n.value()) + " is a prime power; elliptic Carmichael needs two primes");
  }
}

i64 mod_signed(i128 v, u64 m) {
  const i128 r = v % static_cast<i128>(m);
  return static_cast<i64>(r < 0 ? r + m : r);
}

}  // namespace

ProbabilityEstimate exact_probability(const arith::FactoredInteger& n, u64 bound) {
  require_not_prime_power(n);
  if (!coprime_to_six(n)) throw InvalidInput("exact probability needs gcd(n, 6) = 1");
  if (n.value() > bound) {
    throw InvalidInput("n = " + std::to_string(n.value()) + " exceeds the exact bound " + std::to_string(bound) +
                       "; use Monte Carlo estimation");
  }
  std::vector<const std::vector<LocalOutcome>*> tables;
  ProbabilityEstimate r;
  r.n = n.value();
  r.mode = Mode::exact;
  r.denominator = 1;
  for (const auto& f : n.factors()) {
    tables.push_back(&local_outcomes(f.prime, f.exponent));
    u64 good = 0;
    for (const auto& o : *tables.back()) good += o.count;
    r.denominator *= good;
  }
  std::vector<u64> exps(tables.size());
  const i128 n1 = static_cast<i128>(n.value()) + 1;
  auto walk = [&](auto&& self, std::size_t i, i128 trace, u64 weight) -> void {
    if (i == tables.size()) {
      const i128 value = n1 - trace;
      for (u64 e : exps)
        if (mod_signed(value, e) != 0) return;
      r.numerator += weight;
      return;
    }
    for (const auto& o : *tables[i]) {
      exps[i] = o.exponent;
      self(self, i + 1, trace * o.trace, weight * o.count);
    }
  };
  walk(walk, 0, 1, 1);
  return r;
}

ProbabilityEstimate estimate_probability(const arith::FactoredInteger& n, u64 samples, u64 seed, unsigned workers) {
  require_not_prime_power(n);
  if (samples == 0) throw InvalidInput("Monte Carlo estimation needs at least one sample");
  if (workers == 0) workers = 1;
  std::vector<u64> hits(workers, 0);
  parallel::for_chunks(workers, workers, [&](unsigned, u64 begin, u64 end) {
    for (u64 w = begin; w < end; ++w) {
      const u64 share = samples / workers + (w < samples % workers ? 1 : 0);
      Rng rng(derive_seed(seed, w));
      for (u64 s = 0; s < share; ++s) {
        if (carmichael::is_carmichael_criterion(sample_curve(n, rng)).verdict) ++hits[w];
      }
    }
  });
  ProbabilityEstimate r;
  r.n = n.value();
  r.mode = Mode::monte_carlo;
  r.successes = std::accumulate(hits.begin(), hits.end(), u64{0});
  r.samples = samples;
  const auto ci = wilson_interval(r.successes, samples);
  r.lower = ci.lower;
  r.upper = ci.upper;
  r.seed = seed;
  r.workers = workers;
  return r;
}

StructuralProfile structural_profile(const arith::FactoredInteger& n, double C) {
  if (n.value() < 6) throw InvalidInput("structural profile needs n >= 6");
  StructuralProfile s;
  s.n = n.value();
  s.C = C;
  const auto prof = arith::multiplicative_profile(n);
  const long double x = static_cast<long double>(n.value());
  const long double lg = std::log(x);
  const u128 scaled = static_cast<u128>(prof.gamma) << prof.omega;
  s.gamma_small = scaled * scaled <= static_cast<u128>(n.value());
  s.gamma_log4 = static_cast<long double>(prof.gamma) < x / std::pow(lg, 4.0L);
  s.has_huge_prime = static_cast<long double>(prof.p_plus) > std::pow(x, 0.7L);
  const long double medium = std::pow(lg, static_cast<long double>(C));
  const long double log4 = std::pow(lg, 4.0L);
  int small_medium = 0;
  std::map<u64, int> brackets;
  for (const auto& f : n.factors()) {
    const long double p = static_cast<long double>(f.prime);
    if (f.exponent == 1) {
      ++s.squarefree_prime_count;
      if (p > 0.1L * lg) ++small_medium;
    }
    if (p > medium) ++s.medium_prime_count_logC;
    if (p > log4) s.prime_above_log4 = true;
    ++brackets[arith::isqrt(f.prime)];
  }
  s.two_medium_squarefree_primes = small_medium >= 2;
  s.many_medium_primes = s.medium_prime_count_logC > std::log(lg);
  for (const auto& [v, c] : brackets)
    if (c >= 2) s.bracket_shared_primes += c;
  return s;
}

TrichotomyReport trichotomy_check(const CurveModN& curve, u64 p1, u64 p2) {
  const auto& n = curve.n();
  if (!(p1 < p2) || !arith::is_prime(p1) || !arith::is_prime(p2)) throw InvalidInput("need primes p1 < p2");
  if (n.valuation(p1) != 1 || n.valuation(p2) != 1) {
    throw InvalidInput("p1 and p2 must divide n exactly once");
  }
  for (const auto& c : curve.components())
    if (!curves::good_reduction(c.curve)) throw InvalidInput("curve has bad reduction at " + std::to_string(c.prime));
  TrichotomyReport r;
  const auto verdict = carmichael::is_carmichael_criterion(curve);
  if (!verdict.verdict) return r;
  const auto traces = curves::compute_traces(curve);
  i128 a_d = 1;
  for (const auto& c : curve.components())
    if (c.prime != p1 && c.prime != p2) a_d *= traces.prime_power_traces.at({c.prime, c.exponent});
  r.a_d = static_cast<i64>(a_d);
  r.a_p1 = traces.prime_traces.at(p1);
  r.a_p2 = traces.prime_traces.at(p2);
  r.e2 = arith::e_function(static_cast<u64>(static_cast<i64>(p2) + 1 - r.a_p2));
  r.t = std::gcd(r.e2, n.value() + 1);

  const i128 n1 = static_cast<i128>(n.value()) + 1;
  const i64 bound = static_cast<i64>(arith::isqrt(4 * p1));
  for (i64 x = -bound; x <= bound; ++x) {
    if (mod_signed(n1 - a_d * x * r.a_p2, r.e2) == 0) ++r.candidates;
  }
  r.case1 = r.candidates == 1;
  const i128 e = r.e2;
  r.case2 = e * e * e * e * e * e < static_cast<i128>(4096) * p1 * p1 * p2;
  r.case2_from_q = e * e * e * e * e * e < static_cast<i128>(4096) * p1 * p1 * p1 * p2 * p2;
  r.case3 = mod_signed(a_d * r.a_p2, r.t) == 0 && static_cast<i128>(r.t) * r.t * r.t > p2;
  r.outcome = r.case1 ? Case::case1 : r.case2 ? Case::case2 : r.case3 ? Case::case3 : Case::violation;
  return r;
}

DecaySweep decay_sweep(u64 n_min, u64 n_max, u64 samples_per_n, u64 seed, unsigned workers,
                       const DecayFilter& filter) {
  if (samples_per_n == 0) throw InvalidInput("decay sweep needs at least one sample per n");
  DecaySweep out;
  for (u64 n = std::max<u64>(n_min, 6); n <= n_max; ++n) {
    if (n % 2 == 0 || n % 3 == 0) continue;
    const auto f = arith::factorize(n);
    if (f.omega() < 2) continue;
    SweepRow row;
    row.n = n;
    row.profile = structural_profile(f);
    if (filter.gamma_small && *filter.gamma_small != row.profile.gamma_small) continue;
    if (filter.has_huge_prime && *filter.has_huge_prime != row.profile.has_huge_prime) continue;
    if (filter.two_medium_squarefree_primes &&
        *filter.two_medium_squarefree_primes != row.profile.two_medium_squarefree_primes) {
      continue;
    }
    out.rows.push_back(row);
  }
  parallel::for_chunks(out.rows.size(), workers, [&](unsigned, u64 begin, u64 end) {
    for (u64 i = begin; i < end; ++i) {
      auto& row = out.rows[i];
      row.estimate = estimate_probability(arith::factorize(row.n), samples_per_n, derive_seed(seed, row.n), 1);
    }
  });
  for (const auto& row : out.rows) {
    const double lg = std::log(static_cast<double>(row.n));
    if (row.estimate.upper * lg > out.fitted_upper_C) {
      out.fitted_upper_C = row.estimate.upper * lg;
      out.argmax_n = row.n;
    }
    out.fitted_point_C = std::max(out.fitted_point_C, row.estimate.value() * lg);
  }
  return out;
}

JointSweep joint_sweep(u64 x, u64 samples_n, u64 samples_e, u64 seed, unsigned workers) {
  if (x < 2) throw InvalidInput("joint sweep needs x >= 2");
  if (samples_n == 0 || samples_e == 0) throw InvalidInput("joint sweep needs positive sample counts");
  if (x > UINT64_MAX / 2) throw InvalidInput("x too large");
  std::vector<u64> hits(samples_n, 0);
  std::vector<char> prime_power(samples_n, 0);
  parallel::for_chunks(samples_n, workers, [&](unsigned, u64 begin, u64 end) {
    for (u64 i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      const auto n = arith::factorize(x + rng.below(x + 1));
      if (n.omega() < 2) {
        prime_power[i] = 1;
        continue;
      }
      for (u64 s = 0; s < samples_e; ++s) {
        if (carmichael::is_carmichael_criterion(sample_curve(n, rng)).verdict) ++hits[i];
      }
    }
  });
  JointSweep j;
  j.x = x;
  j.samples_n = samples_n;
  j.samples_e = samples_e;
  j.prime_power_draws = static_cast<u64>(std::count(prime_power.begin(), prime_power.end(), 1));
  j.successes = std::accumulate(hits.begin(), hits.end(), u64{0});
  j.trials = samples_n * samples_e;
  j.estimate = static_cast<double>(j.successes) / static_cast<double>(j.trials);
  j.upper = wilson_interval(j.successes, j.trials).upper;
  const double scale = std::pow(static_cast<double>(x), 0.125);
  j.scaled_estimate = j.estimate * scale;
  j.scaled_upper = j.upper * scale;
  return j;
}

}  // namespace ecarm::census
