#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "ecarm/curves.hpp"
#include "modring.hpp"

namespace ecarm::curves {

namespace {

void require_prime_field(const WeierstrassCurve& curve, u64 prime_bound) {
  if (!curve.is_local() || curve.exponent() != 1) {
    throw InvalidInput("expected a curve over a prime field, got modulus " + std::to_string(curve.modulus()));
  }
  if (curve.prime() > prime_bound) {
    throw InvalidInput("prime " + std::to_string(curve.prime()) + " exceeds the point-counting bound " +
                       std::to_string(prime_bound));
  }
  if (!good_reduction(curve)) throw InvalidInput("curve " + curve.to_string() + " is singular");
}

void require_prime(u64 p, u64 prime_bound) {
  if (!arith::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  if (p > prime_bound) {
    throw InvalidInput("prime " + std::to_string(p) + " exceeds the search bound " + std::to_string(prime_bound));
  }
}

// Quadratic character table chi[v] for v in F_p, cached per thread.
const std::vector<int8_t>& character_table(u64 p) {
  thread_local std::unordered_map<u64, std::vector<int8_t>> cache;
  if (auto it = cache.find(p); it != cache.end()) return it->second;
  if (cache.size() > 16) cache.clear();
  std::vector<int8_t> chi(p, -1);
  chi[0] = 0;
  for (u64 y = 1; y <= p / 2; ++y) chi[y * y % p] = 1;
  return cache.emplace(p, std::move(chi)).first->second;
}

// sum_x chi(x^3 + A x + B) by forward differences of the cubic.
i64 character_sum(u64 p, u64 a, u64 b, const std::vector<int8_t>& chi) {
  u64 f = b % p;
  u64 d1 = (1 + a) % p;  // f(1) - f(0)
  u64 d2 = 6 % p;        // second difference at 0
  const u64 d3 = 6 % p;
  i64 sum = 0;
  for (u64 x = 0; x < p; ++x) {
    sum += chi[f];
    f += d1;
    if (f >= p) f -= p;
    d1 += d2;
    if (d1 >= p) d1 -= p;
    d2 += d3;
    if (d2 >= p) d2 -= p;
  }
  return sum;
}

u64 brute_count(const WeierstrassCurve& curve) {
  u64 count = 0;
  for_each_point(curve, [&](const Point&) {
    ++count;
    return true;
  });
  return count;
}

u64 short_discriminant_mod(u64 p, u64 a, u64 b) {
  const ModRing r{p};
  return r.add(r.mul(4, r.mul(r.sq(a), a)), r.mul(27, r.sq(b)));
}

std::pair<u64, u64> short_coefficients(const WeierstrassCurve& curve) {
  if (curve.is_short()) return {curve.a(), curve.b()};
  const auto model = short_model(curve);
  return {model.a(), model.b()};
}

u64 point_order(const WeierstrassCurve& curve, const Point& p) {
  u64 order = 1;
  Point q = p;
  while (!is_identity(curve, q)) {
    q = point_add(curve, q, p);
    ++order;
  }
  return order;
}

// Key of a normalized point over F_p: 0 for the identity.
u64 point_key(const Point& p, u64 prime) { return p.z == 0 ? 0 : 1 + p.x * prime + p.y; }

// Exponent of the l-Sylow subgroup of order l^v, grown from cofactor multiples
// of points until it is complete or contains an element of order l^v.
u64 sylow_exponent(const WeierstrassCurve& curve, u64 ell, int v, u64 order) {
  const u64 prime = curve.prime();
  const u64 full = arith::ipow(ell, static_cast<unsigned>(v));
  const u64 cofactor = order / full;
  std::vector<Point> subgroup{identity()};
  std::unordered_set<u64> keys{0};
  int best = 0;
  bool done = false;
  for_each_point(curve, [&](const Point& p) {
    const Point q = scalar_mul(curve, cofactor, p);
    if (keys.count(point_key(q, prime))) return true;
    int j = 0;
    for (Point r = q; !is_identity(curve, r); r = scalar_mul(curve, ell, r)) ++j;
    best = std::max(best, j);
    if (best == v) {
      done = true;
      return false;
    }
    std::vector<Point> multiples{q};
    while (true) {
      const Point next = normalize(curve, point_add(curve, multiples.back(), q));
      if (keys.count(point_key(next, prime))) break;
      multiples.push_back(next);
    }
    const std::size_t old_size = subgroup.size();
    for (std::size_t h = 0; h < old_size; ++h) {
      for (const auto& m : multiples) {
        const Point s = normalize(curve, point_add(curve, subgroup[h], m));
        if (keys.insert(point_key(s, prime)).second) subgroup.push_back(s);
      }
    }
    return subgroup.size() < full;
  });
  if (!done && subgroup.size() != full) {
    throw InvariantViolation("Sylow subgroup construction did not reach the expected order");
  }
  return arith::ipow(ell, static_cast<unsigned>(best));
}

}  // namespace

u64 count_points(const WeierstrassCurve& curve, u64 prime_bound) {
  require_prime_field(curve, prime_bound);
  const u64 p = curve.prime();
  if (p == 2 || p == 3) return brute_count(curve);
  const auto [a, b] = short_coefficients(curve);
  return static_cast<u64>(static_cast<i64>(p + 1) + character_sum(p, a, b, character_table(p)));
}

i64 trace(const WeierstrassCurve& curve, u64 prime_bound) {
  return static_cast<i64>(curve.prime() + 1) - static_cast<i64>(count_points(curve, prime_bound));
}

BigInt lucas_value(i64 a_p, u64 p, unsigned k) {
  BigInt prev = 2, cur = a_p;
  if (k == 0) return prev;
  for (unsigned i = 1; i < k; ++i) {
    BigInt next = a_p * cur - BigInt(p) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

i64 trace_prime_power(i64 a_p, u64 p, int k) {
  if (k < 1) throw InvalidInput("prime-power exponent must be >= 1");
  i128 prev = 2, cur = a_p;
  const i128 limit = static_cast<i128>(1) << 100;
  for (int i = 1; i < k; ++i) {
    const i128 next = static_cast<i128>(a_p) * cur - static_cast<i128>(p) * prev;
    if (next > limit || next < -limit) throw InvalidInput("a_{p^k} overflows");
    prev = cur;
    cur = next;
  }
  if (cur > INT64_MAX || cur < INT64_MIN) throw InvalidInput("a_{p^k} does not fit in 64 bits");
  return static_cast<i64>(cur);
}

GroupStructure group_structure(const WeierstrassCurve& curve, u64 prime_bound) {
  require_prime_field(curve, prime_bound);
  const u64 p = curve.prime();
  const u64 order = count_points(curve, prime_bound);
  u64 exponent = 1;
  if (p == 2 || p == 3) {
    for_each_point(curve, [&](const Point& pt) {
      exponent = std::lcm(exponent, point_order(curve, pt));
      return true;
    });
  } else {
    // E(F_p)[l] can be non-cyclic only when l | p - 1.
    const auto factored = arith::factorize(order);
    for (const auto& f : factored.factors()) {
      if (f.exponent == 1 || (p - 1) % f.prime != 0) {
        exponent *= f.value();
      } else {
        exponent *= sylow_exponent(curve, f.prime, f.exponent, order);
      }
    }
  }
  const GroupStructure g{order / exponent, exponent};
  if (g.n1 * g.n2 != order || g.n2 % g.n1 != 0) {
    throw InvariantViolation("inconsistent group structure for " + curve.to_string());
  }
  return g;
}

u64 lifted_exponent_formula(const WeierstrassCurve& curve, u64 p, int k) {
  if (k < 1) throw InvalidInput("prime-power exponent must be >= 1");
  const u64 base = group_structure(curve.with_modulus(p)).exponent();
  return arith::ipow(p, static_cast<unsigned>(k - 1)) * base;
}

u64 exponent_mod_prime_power(const WeierstrassCurve& curve, u64 p, int k) {
  const u64 formula = lifted_exponent_formula(curve, p, k);
  const WeierstrassCurve reduced = curve.with_modulus(p);
  const u64 order = count_points(reduced);
  if (k == 1 || p < 5 || order % p != 0) return formula;
  // The p-Sylow subgroup mod p^k extends Z/p by the cyclic kernel Z/p^(k-1);
  // it is either Z/p^k or Z/p^(k-1) x Z/p. One point decides which.
  const WeierstrassCurve lift = curve.with_modulus(arith::ipow(p, static_cast<unsigned>(k)));
  if (!good_reduction(lift)) throw InvalidInput("curve " + lift.to_string() + " is singular");
  const u64 cofactor = order / p;
  std::optional<Point> chosen;
  for_each_point(lift, [&](const Point& pt) {
    if (pt.z == 0) return true;
    const Point bar = affine(pt.x % p, pt.y % p);
    if (is_identity(reduced, scalar_mul(reduced, cofactor, bar))) return true;
    chosen = pt;
    return false;
  });
  if (!chosen) throw InvariantViolation("no point of order p found on " + reduced.to_string());
  const Point r = scalar_mul(lift, cofactor, *chosen);
  const bool cyclic = !is_identity(lift, scalar_mul(lift, arith::ipow(p, static_cast<unsigned>(k - 1)), r));
  return cyclic ? formula : formula / p;
}

std::vector<i64> invert_trace(u64 p, int k, i64 a) {
  if (k < 1) throw InvalidInput("prime-power exponent must be >= 1");
  const i64 bound = static_cast<i64>(arith::isqrt(4 * p));
  std::vector<i64> out;
  const BigInt target = a;
  for (i64 t = -bound; t <= bound; ++t) {
    if (lucas_value(t, p, static_cast<unsigned>(k)) == target) out.push_back(t);
  }
  return out;
}

namespace {

template <typename Accept>
WeierstrassCurve search_short(u64 p, Accept accept) {
  const auto& chi = character_table(p);
  for (u64 a = 0; a < p; ++a) {
    for (u64 b = 0; b < p; ++b) {
      if (short_discriminant_mod(p, a, b) == 0) continue;
      if (accept(a, b, chi)) return WeierstrassCurve::short_form(p, static_cast<i64>(a), static_cast<i64>(b));
    }
  }
  throw InvariantViolation("no curve found over F_" + std::to_string(p));
}

template <typename Accept>
WeierstrassCurve search_long(u64 p, Accept accept) {
  const i64 q = static_cast<i64>(p);
  for (i64 a1 = 0; a1 < q; ++a1)
    for (i64 a2 = 0; a2 < q; ++a2)
      for (i64 a3 = 0; a3 < q; ++a3)
        for (i64 a4 = 0; a4 < q; ++a4)
          for (i64 a6 = 0; a6 < q; ++a6) {
            const auto c = WeierstrassCurve::long_form(p, {a1, a2, a3, a4, a6});
            if (good_reduction(c) && accept(c)) return c;
          }
  throw InvariantViolation("no curve found over F_" + std::to_string(p));
}

}  // namespace

WeierstrassCurve find_trace_one(u64 p, u64 prime_bound) {
  require_prime(p, prime_bound);
  if (p < 5) return search_long(p, [](const WeierstrassCurve& c) { return trace(c) == 1; });
  // #E = p  <=>  sum chi = -1
  return search_short(p, [p](u64 a, u64 b, const std::vector<int8_t>& chi) {
    return character_sum(p, a, b, chi) == -1;
  });
}

WeierstrassCurve find_supersingular(u64 p, u64 prime_bound) {
  require_prime(p, prime_bound);
  if (p < 5) return search_long(p, [](const WeierstrassCurve& c) { return trace(c) == 0; });
  if (p % 3 == 2) return WeierstrassCurve::short_form(p, 0, 1);
  if (p % 4 == 3) return WeierstrassCurve::short_form(p, 1, 0);
  return search_short(p, [p](u64 a, u64 b, const std::vector<int8_t>& chi) {
    return character_sum(p, a, b, chi) == 0;
  });
}

std::vector<WeightedCurve> isomorphism_classes(u64 p) {
  if (!arith::is_prime(p) || p < 5) throw InvalidInput("isomorphism classes need a prime p >= 5");
  const ModRing r{p};
  u64 g = 2;
  while (arith::pow_mod(g, (p - 1) / 2, p) == 1) ++g;
  std::vector<WeightedCurve> out;
  const u64 half = (p - 1) / 2;
  for (u64 s = 1; s < p; ++s) {
    if (short_discriminant_mod(p, s, s) == 0) continue;
    out.push_back({s, s, half});
    out.push_back({r.mul(r.sq(g), s), r.mul(r.mul(r.sq(g), g), s), half});
  }
  for (u64 b = 1; b < p; ++b) out.push_back({0, b, 1});
  for (u64 a = 1; a < p; ++a) out.push_back({a, 0, 1});
  return out;
}

WeierstrassCurve find_good_curve(u64 p) {
  if (!arith::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  if (p < 5) return search_long(p, [](const WeierstrassCurve&) { return true; });
  return WeierstrassCurve::short_form(p, 0, 1);
}

}  // namespace ecarm::curves
