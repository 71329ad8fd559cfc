#pragma once

#include "ecarm/arith.hpp"

namespace ecarm {

// Residue arithmetic modulo a fixed m; every value is kept in [0, m).
struct ModRing {
  u64 m;

  u64 of(i64 v) const { return arith::reduce(v, m); }
  u64 add(u64 a, u64 b) const { return arith::add_mod(a, b, m); }
  u64 sub(u64 a, u64 b) const { return arith::sub_mod(a, b, m); }
  u64 neg(u64 a) const { return a == 0 ? 0 : m - a; }
  u64 mul(u64 a, u64 b) const { return arith::mul_mod(a, b, m); }
  u64 sq(u64 a) const { return mul(a, a); }
};

}  // namespace ecarm
