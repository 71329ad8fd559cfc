#include <numeric>

#include "ecarm/curves.hpp"
#include "modring.hpp"

namespace ecarm::curves {

namespace {

// The prime whose residue field decides primitivity of a triple.
u64 local_prime(const WeierstrassCurve& curve) {
  if (!curve.is_local()) {
    throw InvalidInput("point arithmetic needs a prime-power modulus, got " + std::to_string(curve.modulus()));
  }
  return curve.prime();
}

bool primitive(const Point& p, u64 prime) {
  return p.x % prime != 0 || p.y % prime != 0 || p.z % prime != 0;
}

u64 unit_inverse(u64 a, u64 m) {
  const auto inv = arith::inverse_mod(a, m);
  if (!inv) throw InvariantViolation("expected a unit modulo " + std::to_string(m));
  return *inv;
}

// Short form: laws of bidegree (2, 2). The first fails only on the diagonal
// P = Q; the second only when P - Q is a nontrivial 2-torsion point.
Point law_off_diagonal(const ModRing& r, u64 a, u64 b, const Point& p, const Point& q) {
  const auto [x1, y1, z1] = p;
  const auto [x2, y2, z2] = q;
  const u64 b3 = r.mul(3, b);
  const u64 z1z2 = r.mul(z1, z2);
  const u64 x1x2 = r.mul(x1, x2);
  const u64 y1y2 = r.mul(y1, y2);
  const u64 x1z2 = r.mul(x1, z2);
  const u64 z1x2 = r.mul(z1, x2);
  const u64 y1z2 = r.mul(y1, z2);
  const u64 z1y2 = r.mul(z1, y2);
  const u64 y1x2 = r.mul(y1, x2);
  const u64 x1y2 = r.mul(x1, y2);
  const u64 dxz = r.sub(x1z2, z1x2);
  const u64 dyz = r.sub(y1z2, z1y2);
  const u64 dyx = r.sub(y1x2, x1y2);

  u64 x3 = r.mul(r.mul(b3, z1z2), r.neg(dxz));
  x3 = r.add(x3, r.mul(a, r.sub(r.sq(z1x2), r.sq(x1z2))));
  x3 = r.add(x3, r.mul(r.mul(2, y1y2), dxz));
  x3 = r.add(x3, r.sub(r.mul(r.mul(x1, z1), r.sq(y2)), r.mul(r.sq(y1), r.mul(x2, z2))));

  u64 y3 = r.mul(r.mul(b3, z1z2), dyz);
  y3 = r.add(y3, r.mul(a, r.sub(r.mul(r.mul(x1, y1), r.sq(z2)), r.mul(r.sq(z1), r.mul(x2, y2)))));
  y3 = r.add(y3, r.mul(r.mul(r.mul(2, a), z1z2), dyx));
  y3 = r.add(y3, r.mul(y1y2, r.neg(dyz)));
  y3 = r.add(y3, r.mul(r.mul(3, x1x2), dyx));

  u64 z3 = r.sub(r.sq(z1y2), r.sq(y1z2));
  z3 = r.add(z3, r.mul(r.mul(a, z1z2), dxz));
  z3 = r.add(z3, r.mul(r.mul(3, x1x2), dxz));
  return {x3, y3, z3};
}

Point law_off_two_torsion(const ModRing& r, u64 a, u64 b, const Point& p, const Point& q) {
  const auto [x1, y1, z1] = p;
  const auto [x2, y2, z2] = q;
  const u64 b3 = r.mul(3, b);
  const u64 z1z2 = r.mul(z1, z2);
  const u64 x1x2 = r.mul(x1, x2);
  const u64 y1y2 = r.mul(y1, y2);
  const u64 xz = r.add(r.mul(x1, z2), r.mul(x2, z1));
  const u64 xy = r.add(r.mul(x1, y2), r.mul(x2, y1));
  const u64 yz = r.add(r.mul(y1, z2), r.mul(y2, z1));
  const u64 t = r.sub(r.sub(y1y2, r.mul(a, xz)), r.mul(b3, z1z2));
  const u64 s = r.sub(r.add(r.mul(a, x1x2), r.mul(b3, xz)), r.mul(r.sq(a), z1z2));
  const u64 w = r.add(r.add(y1y2, r.mul(a, xz)), r.mul(b3, z1z2));
  const u64 u = r.add(r.mul(3, x1x2), r.mul(a, z1z2));
  return {r.sub(r.mul(xy, t), r.mul(yz, s)), r.add(r.mul(w, t), r.mul(u, s)),
          r.add(r.mul(yz, w), r.mul(xy, u))};
}

Point short_add(const ModRing& r, u64 prime, u64 a, u64 b, const Point& p, const Point& q, bool doubling) {
  if (!doubling) {
    const Point s = law_off_diagonal(r, a, b, p, q);
    if (primitive(s, prime)) return s;
  }
  const Point s = law_off_two_torsion(r, a, b, p, q);
  if (primitive(s, prime)) return s;
  throw InvariantViolation("no addition law applies to this pair of points");
}

// Linear change of variables to the short model; invertible because 6 is a unit.
struct ShortChart {
  ModRing r;
  u64 a1, a3, b2;
  u64 inv36, inv216;

  explicit ShortChart(const WeierstrassCurve& c) : r{c.modulus()} {
    const auto& ai = c.a_invariants();
    a1 = ai[0];
    a3 = ai[2];
    b2 = r.add(r.sq(a1), r.mul(4, ai[1]));
    inv36 = unit_inverse(r.of(36), r.m);
    inv216 = unit_inverse(r.of(216), r.m);
  }
  Point to_short(const Point& p) const {
    const u64 x = r.add(r.mul(36, p.x), r.mul(r.mul(3, b2), p.z));
    const u64 y = r.mul(108, r.add(r.add(r.mul(2, p.y), r.mul(a1, p.x)), r.mul(a3, p.z)));
    return {x, y, p.z};
  }
  Point from_short(const Point& p) const {
    const u64 x = r.mul(inv36, r.sub(p.x, r.mul(r.mul(3, b2), p.z)));
    // 2y = y'/108 - a1 x - a3 z
    const u64 two_y = r.sub(r.sub(r.mul(r.mul(2, inv216), p.y), r.mul(a1, x)), r.mul(a3, p.z));
    const u64 y = r.mul(two_y, unit_inverse(2, r.m));
    return {x, y, p.z};
  }
};

// Affine chord-tangent law for long-form curves over F_2 and F_3.
Point small_field_add(const WeierstrassCurve& c, const Point& p, const Point& q) {
  const ModRing r{c.modulus()};
  const auto [a1, a2, a3, a4, a6] = c.a_invariants();
  (void)a6;
  const Point pn = normalize(c, p);
  const Point qn = normalize(c, q);
  if (pn.z == 0) return qn;
  if (qn.z == 0) return pn;
  const u64 m = r.m;
  u64 lambda = 0, nu = 0;
  if (pn.x == qn.x) {
    const u64 ysum = r.add(r.add(pn.y, qn.y), r.add(r.mul(a1, qn.x), a3));
    if (ysum == 0) return identity();
    // tangent
    const u64 num = r.sub(r.add(r.add(r.mul(3, r.sq(pn.x)), r.mul(r.mul(2, a2), pn.x)), a4), r.mul(a1, pn.y));
    const u64 den = r.add(r.add(r.mul(2, pn.y), r.mul(a1, pn.x)), a3);
    lambda = r.mul(num, unit_inverse(den, m));
  } else {
    lambda = r.mul(r.sub(qn.y, pn.y), unit_inverse(r.sub(qn.x, pn.x), m));
  }
  nu = r.sub(pn.y, r.mul(lambda, pn.x));
  const u64 x3 = r.sub(r.sub(r.add(r.add(r.sq(lambda), r.mul(a1, lambda)), r.neg(a2)), pn.x), qn.x);
  const u64 y3 = r.sub(r.sub(r.neg(r.mul(r.add(lambda, a1), x3)), nu), a3);
  return affine(x3, y3);
}

bool small_field(const WeierstrassCurve& c) { return c.prime() == 2 || c.prime() == 3; }

void require_field_if_small(const WeierstrassCurve& c) {
  if (small_field(c) && c.exponent() != 1) {
    throw InvalidInput("point arithmetic at p = 2, 3 is only supported over F_p");
  }
}

}  // namespace

bool on_curve(const WeierstrassCurve& curve, const Point& p) {
  const u64 prime = local_prime(curve);
  const ModRing r{curve.modulus()};
  if (p.x >= r.m || p.y >= r.m || p.z >= r.m || !primitive(p, prime)) return false;
  const auto [a1, a2, a3, a4, a6] = curve.a_invariants();
  const auto [x, y, z] = p;
  u64 lhs = r.mul(r.sq(y), z);
  lhs = r.add(lhs, r.mul(a1, r.mul(r.mul(x, y), z)));
  lhs = r.add(lhs, r.mul(a3, r.mul(y, r.sq(z))));
  u64 rhs = r.mul(r.sq(x), x);
  rhs = r.add(rhs, r.mul(a2, r.mul(r.sq(x), z)));
  rhs = r.add(rhs, r.mul(a4, r.mul(x, r.sq(z))));
  rhs = r.add(rhs, r.mul(a6, r.mul(r.sq(z), z)));
  return lhs == rhs;
}

bool is_identity(const WeierstrassCurve& curve, const Point& p) {
  return p.x % curve.modulus() == 0 && p.z % curve.modulus() == 0;
}

bool same_point(const WeierstrassCurve& curve, const Point& p, const Point& q) {
  const ModRing r{curve.modulus()};
  return r.mul(p.x, q.y) == r.mul(q.x, p.y) && r.mul(p.x, q.z) == r.mul(q.x, p.z) &&
         r.mul(p.y, q.z) == r.mul(q.y, p.z);
}

Point normalize(const WeierstrassCurve& curve, const Point& p) {
  const u64 m = curve.modulus();
  const ModRing r{m};
  if (auto inv = arith::inverse_mod(p.z % m, m)) return {r.mul(p.x, *inv), r.mul(p.y, *inv), 1 % m};
  if (auto inv = arith::inverse_mod(p.y % m, m)) return {r.mul(p.x, *inv), 1 % m, r.mul(p.z, *inv)};
  if (auto inv = arith::inverse_mod(p.x % m, m)) return {1 % m, r.mul(p.y, *inv), r.mul(p.z, *inv)};
  throw InvalidInput("point has no unit coordinate");
}

Point negate(const WeierstrassCurve& curve, const Point& p) {
  const ModRing r{curve.modulus()};
  const auto& ai = curve.a_invariants();
  const u64 y = r.sub(r.neg(p.y), r.add(r.mul(ai[0], p.x), r.mul(ai[2], p.z)));
  return {p.x, y, p.z};
}

namespace {

Point add_impl(const WeierstrassCurve& curve, const Point& p, const Point& q, bool doubling) {
  const u64 prime = local_prime(curve);
  require_field_if_small(curve);
  if (small_field(curve)) return small_field_add(curve, p, q);
  const ModRing r{curve.modulus()};
  if (curve.is_short()) return short_add(r, prime, curve.a(), curve.b(), p, q, doubling);
  const ShortChart chart(curve);
  const WeierstrassCurve model = short_model(curve);
  const Point s = short_add(r, prime, model.a(), model.b(), chart.to_short(p), chart.to_short(q), doubling);
  return chart.from_short(s);
}

}  // namespace

Point point_add(const WeierstrassCurve& curve, const Point& p, const Point& q) {
  return add_impl(curve, p, q, false);
}

Point scalar_mul(const WeierstrassCurve& curve, u64 m, const Point& p) {
  const u64 prime = local_prime(curve);
  require_field_if_small(curve);
  if (m == 0) return identity();
  if (small_field(curve)) {
    Point acc = identity();
    Point base = p;
    for (u64 k = m; k; k >>= 1) {
      if (k & 1) acc = small_field_add(curve, acc, base);
      base = small_field_add(curve, base, base);
    }
    return normalize(curve, acc);
  }
  const ModRing r{curve.modulus()};
  const bool is_long = !curve.is_short();
  std::optional<ShortChart> chart;
  u64 a = 0, b = 0;
  Point base = p;
  if (is_long) {
    chart.emplace(curve);
    const WeierstrassCurve model = short_model(curve);
    a = model.a();
    b = model.b();
    base = chart->to_short(p);
  } else {
    a = curve.a();
    b = curve.b();
  }
  Point acc = base;
  const int top = 63 - __builtin_clzll(m);
  for (int bit = top - 1; bit >= 0; --bit) {
    acc = short_add(r, prime, a, b, acc, acc, true);
    if ((m >> bit) & 1) acc = short_add(r, prime, a, b, acc, base, false);
  }
  return normalize(curve, is_long ? chart->from_short(acc) : acc);
}

namespace {

u64 cubic(const ModRing& r, u64 a, u64 b, u64 x) { return r.add(r.mul(r.add(r.sq(x), a), x), b); }

// Points of y^2 = x^3 + A x + B over Z/p^k in a fixed order: affine lifts of
// each point of E(F_p) sorted by x then y, then the kernel of reduction.
bool for_each_short_point(u64 p, int k, u64 modulus, u64 a, u64 b,
                          const std::function<bool(const Point&)>& visit) {
  const ModRing r{modulus};
  const ModRing rp{p};
  const u64 lifts = modulus / p;
  // A point of order two mod p gets its x by Newton; others get y.
  for (u64 x0 = 0; x0 < p; ++x0) {
    const u64 f0 = cubic(rp, a % p, b % p, x0);
    u64 ys[2];
    int ny = 0;
    if (f0 == 0) {
      ys[ny++] = 0;
    } else if (auto s = arith::sqrt_mod_prime(f0, p)) {
      ys[ny++] = std::min(*s, p - *s);
      ys[ny++] = std::max(*s, p - *s);
    }
    for (int i = 0; i < ny; ++i) {
      const u64 y0 = ys[i];
      for (u64 j = 0; j < lifts; ++j) {
        Point pt;
        if (y0 != 0) {
          const u64 x = x0 + j * p;
          const u64 f = cubic(r, a, b, x);
          u64 y = y0;
          for (int it = 0; it < k + 1; ++it) {
            const u64 err = r.sub(r.sq(y), f);
            if (err == 0) break;
            y = r.sub(y, r.mul(err, unit_inverse(r.mul(2, y), modulus)));
          }
          pt = affine(x, y);
        } else {
          const u64 y = j * p;
          const u64 y2 = r.sq(y);
          u64 x = x0;
          for (int it = 0; it < k + 1; ++it) {
            const u64 g = r.sub(cubic(r, a, b, x), y2);
            if (g == 0) break;
            const u64 dg = r.add(r.mul(3, r.sq(x)), a);
            x = r.sub(x, r.mul(g, unit_inverse(dg, modulus)));
          }
          pt = affine(x, y);
        }
        if (!visit(pt)) return false;
      }
    }
  }
  // Kernel of reduction: (t : 1 : z) with t in pZ/p^k and z = t^3 + A t z^2 + B z^3.
  for (u64 j = 0; j < lifts; ++j) {
    const u64 t = j * p;
    u64 z = 0;
    for (int it = 0; it < 3 * k + 1; ++it) {
      const u64 next = r.add(r.add(r.mul(r.sq(t), t), r.mul(r.mul(a, t), r.sq(z))), r.mul(b, r.mul(r.sq(z), z)));
      if (next == z) break;
      z = next;
    }
    if (!visit(Point{t, 1 % modulus, z})) return false;
  }
  return true;
}

}  // namespace

bool for_each_point(const WeierstrassCurve& curve, const std::function<bool(const Point&)>& visit) {
  const u64 prime = local_prime(curve);
  require_field_if_small(curve);
  if (small_field(curve)) {
    if (!visit(identity())) return false;
    for (u64 x = 0; x < prime; ++x) {
      for (u64 y = 0; y < prime; ++y) {
        const Point pt = affine(x, y);
        if (on_curve(curve, pt) && !visit(pt)) return false;
      }
    }
    return true;
  }
  const int k = curve.exponent();
  if (curve.is_short()) {
    return for_each_short_point(prime, k, curve.modulus(), curve.a(), curve.b(), visit);
  }
  const ShortChart chart(curve);
  const WeierstrassCurve model = short_model(curve);
  return for_each_short_point(prime, k, curve.modulus(), model.a(), model.b(), [&](const Point& s) {
    return visit(normalize(curve, chart.from_short(s)));
  });
}

std::vector<Point> enumerate_points(const WeierstrassCurve& curve) {
  std::vector<Point> out;
  for_each_point(curve, [&](const Point& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

}  // namespace ecarm::curves
