#pragma once

// The two elliptic Carmichael tests, witness curves and certificates.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecarm/curves.hpp"

namespace ecarm::carmichael {

inline constexpr u64 kExhaustiveBound = 10'000;

// One prime of n in the criterion transcript.
struct PrimeCheck {
  u64 prime = 0;
  int exponent = 0;
  i64 trace_p = 0;           // a_p
  i64 trace_pk = 0;          // a_{p^k}
  u64 group_exponent = 0;    // exp E(Z/p^k)
  bool divides = false;      // group_exponent | n - a_n + 1
};

// exp E(Z/p^k) does not divide the value.
struct DivisibilityFailure {
  u64 prime = 0;
  u64 group_exponent = 0;
  i64 value = 0;
  i64 remainder = 0;  // value mod group_exponent, in [0, group_exponent)
};

// A point of E(Z/n) with value * P != O; the failure shows at `prime`.
struct WitnessPoint {
  curves::Point point;
  u64 prime = 0;
};

// Every exponent divides the value; the transcript carries the details.
struct Positive {};

using Certificate = std::variant<DivisibilityFailure, WitnessPoint, Positive>;

enum class Method { criterion, definition_exhaustive, definition_sampled };

std::string to_string(Method m);

struct CarmichaelVerdict {
  arith::FactoredInteger n;
  curves::CurveModN curve;
  bool verdict = false;
  Method method = Method::criterion;
  // False only for a sampled TRUE verdict.
  bool certain = true;
  i64 a_n = 0;
  i64 value = 0;  // n - a_n + 1
  std::vector<PrimeCheck> transcript;  // criterion only
  Certificate certificate = Positive{};
  u64 points_checked = 0;  // definition only
};

// exp E(Z/p^{v_p(n)}) | n - a_n + 1 for every p | n.
CarmichaelVerdict is_carmichael_criterion(const curves::CurveModN& curve);

struct DefinitionOptions {
  u64 exhaustive_bound = kExhaustiveBound;
  // With n above the bound, test this many random points instead (0: refuse).
  u64 samples = 0;
  u64 seed = 0;
  unsigned workers = 1;
};

// (n - a_n + 1) P = O for the points of E(Z/n). A point of E(Z/n) is a CRT
// tuple of component points, so the check runs per component: P_c is
// annihilated iff gcd(|value|, #E(Z/p^k)) P_c = O.
CarmichaelVerdict is_carmichael_definition(const curves::CurveModN& curve, const DefinitionOptions& options = {});

// A curve mod n for which n is not elliptic Carmichael, with its verdict.
struct Witness {
  curves::CurveModN curve;
  CarmichaelVerdict verdict;
};

Witness witness(const arith::FactoredInteger& n);

struct VerifyResult {
  bool ok = false;
  std::string reason;
};

// Recomputes traces, exponents, the value and any witness multiple.
VerifyResult verify_certificate(const CarmichaelVerdict& verdict);

// Point of E(Z/n) from one point per component, by CRT on coordinates.
curves::Point combine_points(const curves::CurveModN& curve, const std::vector<curves::Point>& components);
curves::Point reduce_point(const curves::Point& p, u64 modulus);

}  // namespace ecarm::carmichael
