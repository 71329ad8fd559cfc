#pragma once

// Weierstrass curves over Z/p^kZ and Z/nZ: group law, point counting,
// Frobenius traces and their prime-power recurrence, group structure and
// trace-targeted curve search.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ecarm/arith.hpp"

namespace ecarm::curves {

using BigInt = boost::multiprecision::cpp_int;

// Point counts and searches refuse primes above this unless told otherwise.
inline constexpr u64 kDeskScalePrimeBound = 1'000'000;

enum class Form { short_weierstrass, long_weierstrass };

class WeierstrassCurve {
 public:
  // y^2 = x^3 + A x + B; requires gcd(modulus, 6) = 1.
  static WeierstrassCurve short_form(u64 modulus, i64 a, i64 b);
  // y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, coefficients in that order:
  // {a1, a2, a3, a4, a6}.
  static WeierstrassCurve long_form(u64 modulus, const std::array<i64, 5>& coeffs);

  u64 modulus() const { return modulus_; }
  Form form() const { return form_; }
  bool is_short() const { return form_ == Form::short_weierstrass; }

  // Short-form coefficients; throws for long-form curves.
  u64 a() const;
  u64 b() const;
  // a-invariants {a1, a2, a3, a4, a6}; a short curve reports {0, 0, 0, A, B}.
  const std::array<u64, 5>& a_invariants() const { return coeffs_; }
  u64 discriminant() const { return discriminant_; }

  // Set when the modulus is a prime power p^k; prime() is 0 otherwise.
  u64 prime() const { return prime_; }
  int exponent() const { return exponent_; }
  bool is_local() const { return prime_ != 0; }

  // Same integer coefficients read modulo another modulus.
  WeierstrassCurve with_modulus(u64 modulus) const;

  // Canonical text: "p^k: [A,B]" or "p^k: [a1,a2,a3,a4,a6]"; a modulus that
  // is not a prime power is written as a bare integer.
  std::string to_string() const;

  bool operator==(const WeierstrassCurve& o) const {
    return modulus_ == o.modulus_ && form_ == o.form_ && coeffs_ == o.coeffs_;
  }

 private:
  WeierstrassCurve(u64 modulus, Form form, const std::array<u64, 5>& coeffs);

  u64 modulus_ = 1;
  Form form_ = Form::short_weierstrass;
  std::array<u64, 5> coeffs_{};
  u64 discriminant_ = 0;
  u64 prime_ = 0;
  int exponent_ = 0;
};

WeierstrassCurve parse_curve(std::string_view text);

bool good_reduction(const WeierstrassCurve& curve);

// Isomorphic short model y^2 = x^3 - 27 c4 x - 54 c6 over a ring where 6 is
// a unit. Short curves map to themselves.
WeierstrassCurve short_model(const WeierstrassCurve& curve);

// ---------------------------------------------------------------------------
// Points. Projective triples (x : y : z) with not all coordinates divisible by
// the curve's prime; the identity is (0 : 1 : 0).

struct Point {
  u64 x = 0;
  u64 y = 1;
  u64 z = 0;

  bool operator==(const Point&) const = default;
};

inline Point identity() { return Point{}; }
inline Point affine(u64 x, u64 y) { return Point{x, y, 1}; }

bool on_curve(const WeierstrassCurve& curve, const Point& p);
bool is_identity(const WeierstrassCurve& curve, const Point& p);
bool same_point(const WeierstrassCurve& curve, const Point& p, const Point& q);
// Unique representative: z = 1 when z is a unit, otherwise y = 1.
Point normalize(const WeierstrassCurve& curve, const Point& p);

Point negate(const WeierstrassCurve& curve, const Point& p);
Point point_add(const WeierstrassCurve& curve, const Point& p, const Point& q);
Point scalar_mul(const WeierstrassCurve& curve, u64 m, const Point& p);

// Calls visit(point) for every point of E(Z/p^kZ), identity included, until
// visit returns false. Returns false iff stopped early.
bool for_each_point(const WeierstrassCurve& curve, const std::function<bool(const Point&)>& visit);
std::vector<Point> enumerate_points(const WeierstrassCurve& curve);

// ---------------------------------------------------------------------------
// Counting and traces over F_p.

u64 count_points(const WeierstrassCurve& curve, u64 prime_bound = kDeskScalePrimeBound);
i64 trace(const WeierstrassCurve& curve, u64 prime_bound = kDeskScalePrimeBound);

// a_{p^k} from a_p through V_0 = 2, V_1 = a_p, V_k = a_p V_{k-1} - p V_{k-2}.
i64 trace_prime_power(i64 a_p, u64 p, int k);
BigInt lucas_value(i64 a_p, u64 p, unsigned k);

struct GroupStructure {
  u64 n1 = 1;
  u64 n2 = 1;

  u64 order() const { return n1 * n2; }
  u64 exponent() const { return n2; }
  bool operator==(const GroupStructure&) const = default;
};

// E(F_p) = Z/n1 x Z/n2 with n1 | n2.
GroupStructure group_structure(const WeierstrassCurve& curve, u64 prime_bound = kDeskScalePrimeBound);

// p^(k-1) exp E(F_p).
u64 lifted_exponent_formula(const WeierstrassCurve& curve, u64 p, int k);
// exp E(Z/p^kZ), the curve's coefficients read modulo p^k. Equals the lifted
// formula except when p | #E(F_p) and the p-Sylow subgroup splits, where it is
// smaller by a factor p. For p in {2, 3} and k >= 2 the formula is returned.
u64 exponent_mod_prime_power(const WeierstrassCurve& curve, u64 p, int k);

// Every t with t^2 <= 4p and V_k(t, p) = a, ascending.
std::vector<i64> invert_trace(u64 p, int k, i64 a);

WeierstrassCurve find_trace_one(u64 p, u64 prime_bound = kDeskScalePrimeBound);
WeierstrassCurve find_supersingular(u64 p, u64 prime_bound = kDeskScalePrimeBound);
// Lexicographically first curve with good reduction at p.
WeierstrassCurve find_good_curve(u64 p);

// A short curve over F_p standing for `weight` good pairs (A', B') that are
// isomorphic to it via (u^4 A, u^6 B).
struct WeightedCurve {
  u64 a = 0;
  u64 b = 0;
  u64 weight = 0;
};

// Representatives covering every good pair mod p >= 5 exactly once: (s, s)
// and its quadratic twist for s != 0, and the pairs with A = 0 or B = 0
// individually. About 4p entries.
std::vector<WeightedCurve> isomorphism_classes(u64 p);

// ---------------------------------------------------------------------------
// Curves modulo composite n as a bundle of local components.

struct LocalComponent {
  u64 prime = 0;
  int exponent = 0;
  WeierstrassCurve curve;  // modulus prime^exponent

  u64 modulus() const { return curve.modulus(); }
};

class CurveModN {
 public:
  static CurveModN assemble(std::vector<LocalComponent> components);
  // Splits a curve with modulus n into its reductions modulo each p^k || n.
  static CurveModN from_curve(const WeierstrassCurve& curve);

  const arith::FactoredInteger& n() const { return n_; }
  std::span<const LocalComponent> components() const { return components_; }
  const LocalComponent& component(u64 prime) const;
  // The single CRT-combined curve mod n when every component is short form.
  const std::optional<WeierstrassCurve>& combined() const { return combined_; }

 private:
  arith::FactoredInteger n_;
  std::vector<LocalComponent> components_;
  std::optional<WeierstrassCurve> combined_;
};

CurveModN assemble_mod_n(std::vector<LocalComponent> components);

struct TraceData {
  std::map<u64, i64> prime_traces;                        // p -> a_p
  std::map<std::pair<u64, int>, i64> prime_power_traces;  // (p, k) -> a_{p^k}
  i64 composite = 0;                                      // a_n
};

TraceData compute_traces(const CurveModN& curve);
i64 trace_composite(const TraceData& traces, const arith::FactoredInteger& n);

}  // namespace ecarm::curves
