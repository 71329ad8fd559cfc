#include "ecarm/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ecarm::intervals {

double IntervalCountReport::ratio() const {
  if (formula > 0) return static_cast<double>(count) / formula;
  return count == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

namespace {

void require_x(u64 x) {
  if (x < 2) throw InvalidInput("x must be at least 2");
  if (x > 1'000'000'000'000ULL) throw InvalidInput("x exceeds the enumeration budget of 10^12");
}

std::string format_double(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

IntervalCountReport count_e_small(u64 x, u64 k) {
  require_x(x);
  if (k == 0) throw InvalidInput("k must be positive");
  IntervalCountReport r;
  r.x = x;
  r.window_lo = x;
  r.window_hi = x + arith::isqrt(x);
  r.parameter = "k=" + std::to_string(k);
  for (u64 n = r.window_lo; n <= r.window_hi; ++n) {
    if (static_cast<u128>(arith::e_function(n)) * k < n) ++r.count;
  }
  const double lx = std::log(static_cast<double>(x));
  r.formula = std::sqrt(static_cast<double>(x)) / static_cast<double>(k) + std::cbrt(static_cast<double>(x)) * lx * lx * lx;
  return r;
}

IntervalCountReport count_smooth_factor_interval(u64 x, const std::vector<u64>& primes) {
  require_x(x);
  std::vector<u64> ps = primes;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (u64 p : ps)
    if (!arith::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  IntervalCountReport r;
  r.x = x;
  r.window_lo = x;
  r.window_hi = x + arith::isqrt(x);
  r.parameter = "|P|=" + std::to_string(ps.size());
  // The largest admissible t is the full P-part, so n qualifies iff
  // d = n / P-part satisfies d^3 < x^2.
  const u128 x2 = static_cast<u128>(x) * x;
  for (u64 n = r.window_lo; n <= r.window_hi; ++n) {
    u64 d = n;
    const auto fac = arith::factorize(n);
    for (const auto& f : fac.factors()) {
      if (std::binary_search(ps.begin(), ps.end(), f.prime)) d /= f.value();
    }
    if (static_cast<u128>(d) * d * d < x2) ++r.count;
  }
  const double size = static_cast<double>(ps.size());
  r.formula = size + (ps.size() > 1 ? std::sqrt(static_cast<double>(x)) * std::log(size) / std::log(static_cast<double>(x)) : 0.0);
  return r;
}

IntervalCountReport count_large_prime_factor(u64 x, double c) {
  require_x(x);
  if (!(c > 0 && c < 0.5)) throw InvalidInput("c must lie in (0, 1/2)");
  IntervalCountReport r;
  r.x = x;
  r.window_lo = x;
  r.window_hi = x + static_cast<u64>(std::floor(0.1 * std::sqrt(static_cast<long double>(x))));
  r.parameter = "c=" + format_double(c);
  const long double threshold = std::pow(static_cast<long double>(x), 0.5L + static_cast<long double>(c));
  for (u64 n = r.window_lo; n <= r.window_hi; ++n) {
    if (static_cast<long double>(arith::largest_prime_factor(n)) > threshold) ++r.count;
  }
  r.formula = c * std::sqrt(static_cast<double>(x));
  r.pass = static_cast<double>(r.count) >= r.formula;
  return r;
}

FittedSweep fit_constant(std::vector<IntervalCountReport>& rows, double stability_factor) {
  FittedSweep f;
  std::map<u64, double> per_x;
  for (const auto& r : rows) {
    f.constant = std::max(f.constant, r.ratio());
    auto& c = per_x[r.x];
    c = std::max(c, r.ratio());
  }
  f.all_pass = true;
  for (auto& r : rows) {
    r.constant = f.constant;
    r.pass = static_cast<double>(r.count) <= r.bound();
    f.all_pass = f.all_pass && r.pass;
  }
  if (!per_x.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& [x, c] : per_x) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    f.spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    f.stable = f.spread <= stability_factor;
  }
  return f;
}

bool strong_regime(u64 x, std::size_t prime_count) {
  require_x(x);
  const double lx = std::log(static_cast<double>(x));
  const double llx = std::log(lx);
  return llx > 0 && static_cast<double>(prime_count) < lx / (4 * llx);
}

namespace {

int mobius(u64 n) {
  const auto f = arith::factorize(n);
  if (!f.is_squarefree()) return 0;
  return f.omega() % 2 ? -1 : 1;
}

// Lambda(m) as a log combination: {p: 1} for m = p^k, empty otherwise.
LogCombination von_mangoldt(u64 m) {
  if (m < 2) return {};
  const auto f = arith::factorize(m);
  if (f.omega() != 1) return {};
  return {{f.factors()[0].prime, 1}};
}

LogCombination log_of(u64 h) {
  LogCombination out;
  const auto fac = arith::factorize(h);
  for (const auto& f : fac.factors()) out[f.prime] = f.exponent;
  return out;
}

void accumulate(LogCombination& into, const LogCombination& term, i64 scale) {
  if (scale == 0) return;
  for (const auto& [p, c] : term) into[p] += scale * c;
}

void drop_zeros(LogCombination& c) { std::erase_if(c, [](const auto& kv) { return kv.second == 0; }); }

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

VaughanSides vaughan_sides(u64 n, u64 U, u64 V) {
  if (U < 1 || V < 1) throw InvalidInput("U and V must be at least 1");
  if (U >= n) throw InvalidInput("Vaughan's identity needs U < n");
  VaughanSides s;
  s.lhs = von_mangoldt(n);
  const auto divs = divisors(n);
  for (u64 m : divs) {
    if (m > U) continue;
    for (u64 d : divisors(n / m)) {
      if (d <= V) accumulate(s.rhs, von_mangoldt(m), -mobius(d));
    }
  }
  for (u64 d : divs) {
    if (d <= V) accumulate(s.rhs, log_of(n / d), mobius(d));
  }
  for (u64 m : divs) {
    const u64 k = n / m;
    if (m <= U || k <= 1) continue;
    i64 inner = 0;
    for (u64 d : divisors(k))
      if (d <= V) inner += mobius(d);
    accumulate(s.rhs, von_mangoldt(m), -inner);
  }
  drop_zeros(s.lhs);
  drop_zeros(s.rhs);
  return s;
}

bool vaughan_identity_check(u64 n, u64 U, u64 V) {
  const auto s = vaughan_sides(n, U, V);
  return s.lhs == s.rhs;
}

BigInt baker_cutoff(u64 p) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  if (p < 2) throw InvalidInput("baker_cutoff needs p >= 2");
  const Float lp = log(Float(p));
  const Float ll = log(lp);
  const Float inner = Float(46) + (ll > 0 ? ll : Float(0));
  const Float value = Float("3e20") * lp * inner;
  return static_cast<BigInt>(ceil(value));
}

std::vector<unsigned> lucas_ones(u64 p, i64 a, unsigned K) {
  if (!arith::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  if (static_cast<i128>(a) * a > static_cast<i128>(4) * p) throw InvalidInput("a lies outside the Hasse range");
  if (K > kLucasOnesMaxK) throw InvalidInput("K exceeds " + std::to_string(kLucasOnesMaxK));
  std::vector<unsigned> out;
  BigInt prev = 2, cur = a;
  for (unsigned k = 1; k <= K; ++k) {
    if (cur == 1) out.push_back(k);
    BigInt next = a * cur - BigInt(p) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

}  // namespace ecarm::intervals
