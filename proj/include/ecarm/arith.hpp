#pragma once

// Exact integer arithmetic and multiplicative functions.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecarm {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Raised when caller-supplied data violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a result that theory guarantees fails to materialize.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace arith {

struct PrimePower {
  u64 prime = 0;
  int exponent = 0;

  u64 value() const;
  auto operator<=>(const PrimePower&) const = default;
};

class FactoredInteger {
 public:
  FactoredInteger() = default;

  // Validates the factor list: strictly increasing primes, exponents >= 1,
  // product fits in 64 bits.
  static FactoredInteger from_factors(std::vector<PrimePower> factors);

  u64 value() const { return value_; }
  std::span<const PrimePower> factors() const& { return factors_; }
  // A span into a temporary would dangle.
  std::span<const PrimePower> factors() const&& = delete;

  int omega() const { return static_cast<int>(factors_.size()); }
  int big_omega() const;
  int valuation(u64 p) const;
  bool divisible_by(u64 p) const { return valuation(p) > 0; }

  bool is_one() const { return factors_.empty(); }
  bool is_prime() const;
  bool is_prime_power() const { return factors_.size() == 1; }
  bool is_squarefree() const;

  bool operator==(const FactoredInteger& o) const {
    return value_ == o.value_;
  }

 private:
  u64 value_ = 1;
  std::vector<PrimePower> factors_;
};

FactoredInteger factorize(u64 n);

struct MultiplicativeProfile {
  u64 gamma = 1;          // squarefree kernel
  u64 e_value = 1;        // e(n), e(p^k) = p^ceil(k/2)
  int omega = 0;
  int big_omega = 0;
  u64 p_plus = 1;         // largest prime factor, 1 for n = 1
  u64 powerful_part = 1;  // product of p^k with k >= 2
};

MultiplicativeProfile multiplicative_profile(const FactoredInteger& n);

u64 squarefree_kernel(const FactoredInteger& n);
u64 e_function(const FactoredInteger& n);
u64 e_function(u64 n);
u64 largest_prime_factor(u64 n);

struct Congruence {
  u64 residue = 0;
  u64 modulus = 1;
};

// Unique x in [0, prod moduli) with x = r_i mod m_i. Throws InvalidInput
// naming the first pair of moduli that share a factor.
u64 crt_combine(std::span<const Congruence> congruences);

int jacobi_symbol(i64 a, i64 m);
// Kronecker extension of the Jacobi symbol to even and negative moduli.
int kronecker_symbol(i64 a, i64 m);

// Psi(x, y): count of n <= x with P+(n) <= y.
u64 smooth_count(u64 x, u64 y);

// Ordered triples (d1, d2, d3) with d1 d2 d3 = n.
u64 tau3(const FactoredInteger& n);

// Modular helpers. All residues are in [0, m).
u64 mul_mod(u64 a, u64 b, u64 m);
u64 add_mod(u64 a, u64 b, u64 m);
u64 sub_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
u64 reduce(i64 a, u64 m);
std::optional<u64> inverse_mod(u64 a, u64 m);
// Square root modulo an odd prime; nullopt for non-residues.
std::optional<u64> sqrt_mod_prime(u64 a, u64 p);

bool is_prime(u64 n);
std::vector<u64> primes_up_to(u64 limit);
u64 isqrt(u64 n);
// Overflow-checked integer power.
u64 ipow(u64 base, unsigned exp);
u64 gcd_signed(i64 a, u64 b);

std::string to_string(const FactoredInteger& n);

}  // namespace arith
}  // namespace ecarm
