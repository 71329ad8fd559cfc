#include "ecarm/arith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ecarm::arith {

u64 PrimePower::value() const { return ipow(prime, static_cast<unsigned>(exponent)); }

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors) {
  FactoredInteger out;
  u64 value = 1;
  u64 previous = 0;
  for (const auto& f : factors) {
    if (f.exponent < 1) throw InvalidInput("factor exponent must be >= 1");
    if (f.prime <= previous) throw InvalidInput("factor primes must be strictly increasing");
    if (!arith::is_prime(f.prime)) throw InvalidInput("factor " + std::to_string(f.prime) + " is not prime");
    const u64 pk = f.value();
    if (value > UINT64_MAX / pk) throw InvalidInput("factored value overflows 64 bits");
    value *= pk;
    previous = f.prime;
  }
  out.value_ = value;
  out.factors_ = std::move(factors);
  return out;
}

int FactoredInteger::big_omega() const {
  int total = 0;
  for (const auto& f : factors_) total += f.exponent;
  return total;
}

int FactoredInteger::valuation(u64 p) const {
  for (const auto& f : factors_) {
    if (f.prime == p) return f.exponent;
  }
  return 0;
}

bool FactoredInteger::is_prime() const {
  return factors_.size() == 1 && factors_[0].exponent == 1;
}

bool FactoredInteger::is_squarefree() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& f) { return f.exponent == 1; });
}

FactoredInteger factorize(u64 n) {
  if (n == 0) throw InvalidInput("cannot factor 0");
  std::vector<PrimePower> factors;
  bool rest_prime = false;
  auto strip = [&](u64 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) {
      factors.push_back({p, e});
      rest_prime = is_prime(n);
    }
  };
  strip(2);
  strip(3);
  rest_prime = rest_prime || is_prime(n);
  for (u64 d = 5; !rest_prime && d <= n / d; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (n > 1) factors.push_back({n, 1});
  return FactoredInteger::from_factors(std::move(factors));
}

MultiplicativeProfile multiplicative_profile(const FactoredInteger& n) {
  MultiplicativeProfile prof;
  prof.omega = n.omega();
  prof.big_omega = n.big_omega();
  for (const auto& f : n.factors()) {
    prof.gamma *= f.prime;
    prof.e_value *= ipow(f.prime, static_cast<unsigned>((f.exponent + 1) / 2));
    prof.p_plus = std::max(prof.p_plus, f.prime);
    if (f.exponent >= 2) prof.powerful_part *= f.value();
  }
  return prof;
}

u64 squarefree_kernel(const FactoredInteger& n) { return multiplicative_profile(n).gamma; }

u64 e_function(const FactoredInteger& n) { return multiplicative_profile(n).e_value; }

u64 e_function(u64 n) { return e_function(factorize(n)); }

u64 largest_prime_factor(u64 n) { return multiplicative_profile(factorize(n)).p_plus; }

u64 crt_combine(std::span<const Congruence> congruences) {
  for (std::size_t i = 0; i < congruences.size(); ++i) {
    if (congruences[i].modulus == 0) throw InvalidInput("CRT modulus must be positive");
    for (std::size_t j = i + 1; j < congruences.size(); ++j) {
      if (std::gcd(congruences[i].modulus, congruences[j].modulus) != 1) {
        throw InvalidInput("CRT moduli " + std::to_string(congruences[i].modulus) + " and " +
                           std::to_string(congruences[j].modulus) + " are not coprime");
      }
    }
  }
  u64 x = 0;
  u64 m = 1;
  for (const auto& c : congruences) {
    const u64 r = c.residue % c.modulus;
    // x + m*t = r mod c.modulus
    const u64 inv = *inverse_mod(m % c.modulus, c.modulus);
    const u64 t = mul_mod(sub_mod(r, x % c.modulus, c.modulus), inv, c.modulus);
    if (m > UINT64_MAX / c.modulus) throw InvalidInput("CRT modulus product overflows 64 bits");
    x = static_cast<u64>(x + static_cast<u128>(m) * t);
    m *= c.modulus;
  }
  return x;
}

int jacobi_symbol(i64 a, i64 m) {
  if (m <= 0 || m % 2 == 0) throw InvalidInput("Jacobi symbol needs an odd positive modulus");
  u64 n = static_cast<u64>(m);
  u64 x = reduce(a, n);
  int result = 1;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      const u64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(x, n);
    if (x % 4 == 3 && n % 4 == 3) result = -result;
    x %= n;
  }
  return n == 1 ? result : 0;
}

int kronecker_symbol(i64 a, i64 m) {
  if (m == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (m < 0) {
    m = -m;
    if (a < 0) result = -result;
  }
  int twos = 0;
  while (m % 2 == 0) {
    m /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (a % 2 == 0) return 0;
    const i64 r = ((a % 8) + 8) % 8;
    if ((r == 3 || r == 5) && (twos % 2 == 1)) result = -result;
  }
  if (m == 1) return result;
  return result * jacobi_symbol(a, m);
}

namespace {

u64 smooth_count_rec(u64 x, std::span<const u64> primes, std::size_t count) {
  // Numbers <= x built from primes[0..count).
  if (count == 0 || x < 2) return 1;
  if (primes[count - 1] >= x) return x;
  u64 total = 1;  // m = 1
  for (std::size_t i = 0; i < count; ++i) {
    const u64 p = primes[i];
    if (p > x) break;
    total += smooth_count_rec(x / p, primes, i + 1);
  }
  return total;
}

}  // namespace

u64 smooth_count(u64 x, u64 y) {
  if (x == 0) return 0;
  if (y >= x) return x;
  if (y < 2) return 1;
  if (y >= isqrt(x) && x <= 200'000'000) {
    // At most one prime factor exceeds sqrt(x).
    const auto primes = primes_up_to(x);
    u64 rough = 0;
    for (auto it = std::upper_bound(primes.begin(), primes.end(), y); it != primes.end(); ++it) {
      rough += x / *it;
    }
    return x - rough;
  }
  const auto primes = primes_up_to(y);
  return smooth_count_rec(x, primes, primes.size());
}

u64 tau3(const FactoredInteger& n) {
  u64 total = 1;
  for (const auto& f : n.factors()) {
    const u64 e = static_cast<u64>(f.exponent);
    total *= (e + 1) * (e + 2) / 2;
  }
  return total;
}

u64 mul_mod(u64 a, u64 b, u64 m) {
  if (m <= UINT32_MAX) return (a * b) % m;
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 add_mod(u64 a, u64 b, u64 m) {
  const u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 reduce(i64 a, u64 m) {
  if (a >= 0) return static_cast<u64>(a) % m;
  const u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
  return m - 1 - r;
}

std::optional<u64> inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) return std::nullopt;
  i128 inv = old_s % static_cast<i128>(m);
  if (inv < 0) inv += m;
  return static_cast<u64>(inv);
}

std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  u64 q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  u64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 c = pow_mod(z, q, p);
  u64 x = pow_mod(a, (q + 1) / 2, p);
  u64 t = pow_mod(a, q, p);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    u64 t2 = t;
    while (t2 != 1) {
      t2 = mul_mod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
    x = mul_mod(x, b, p);
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    m = i;
  }
  return x;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // Deterministic for all 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 ipow(u64 base, unsigned exp) {
  u64 result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) throw InvalidInput("integer power overflows 64 bits");
    result *= base;
  }
  return result;
}

u64 gcd_signed(i64 a, u64 b) {
  const u64 abs_a = a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a);
  return std::gcd(abs_a, b);
}

std::string to_string(const FactoredInteger& n) {
  if (n.is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& f : n.factors()) {
    if (!first) os << " * ";
    os << f.prime;
    if (f.exponent > 1) os << '^' << f.exponent;
    first = false;
  }
  return os.str();
}

}  // namespace ecarm::arith
