#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numeric>
#include <set>

#include "ecarm/curves.hpp"
#include "oracles.hpp"

using namespace ecarm;
using namespace ecarm::curves;

namespace {

u64 order_of(const WeierstrassCurve& c, const Point& p) {
  u64 k = 1;
  for (Point q = p; !is_identity(c, q); q = point_add(c, q, p)) ++k;
  return k;
}

u64 exhaustive_exponent(const WeierstrassCurve& c) {
  u64 e = 1;
  for (const auto& p : enumerate_points(c)) e = std::lcm(e, order_of(c, p));
  return e;
}

}  // namespace

TEST_CASE("construction and parsing") {
  const auto c = parse_curve("5^1: [3, 2]");
  CHECK(c.is_short());
  CHECK(c.modulus() == 5);
  CHECK(c.a() == 3);
  CHECK(c.b() == 2);
  CHECK(c.to_string() == "5^1: [3,2]");
  CHECK(parse_curve(c.to_string()) == c);
  const auto l = parse_curve("2^1: [1,0,1,0,1]");
  CHECK_FALSE(l.is_short());
  CHECK(parse_curve(l.to_string()) == l);
  CHECK(parse_curve("35: [8,-28]").b() == 7);
  CHECK_THROWS_AS(parse_curve("12: [1,1]"), InvalidInput);
  CHECK_THROWS_AS(parse_curve("7 [1,1]"), InvalidInput);
  CHECK_THROWS_AS(parse_curve("7: [1,1,1]"), InvalidInput);
  CHECK_THROWS_AS(parse_curve("7: [x,1]"), InvalidInput);
  CHECK_THROWS_AS(WeierstrassCurve::short_form(9, 1, 1), InvalidInput);
  CHECK_FALSE(good_reduction(WeierstrassCurve::short_form(5, 0, 0)));
  CHECK(good_reduction(WeierstrassCurve::short_form(25, 3, 2)));
}

TEST_CASE("long-form discriminant matches the short model") {
  for (u64 p : {5u, 7u, 11u}) {
    for (i64 a1 = 0; a1 < 3; ++a1)
      for (i64 a3 = 0; a3 < 2; ++a3)
        for (i64 a6 = 0; a6 < 4; ++a6) {
          const auto l = WeierstrassCurve::long_form(p, {a1, 2, a3, 1, a6});
          const auto s = short_model(l);
          CHECK(good_reduction(l) == good_reduction(s));
          if (good_reduction(l)) {
            const i64 c[5] = {a1, 2, a3, 1, a6};
            CHECK(count_points(l) == oracle::count_long(p, c));
            CHECK(count_points(s) == count_points(l));
          }
        }
  }
}

TEST_CASE("point counts agree with exhaustive counting") {
  for (u64 p : {5u, 7u, 11u, 13u, 31u, 101u}) {
    for (i64 a = 0; a < static_cast<i64>(p); a += (p > 20 ? 7 : 1))
      for (i64 b = 0; b < static_cast<i64>(p); b += (p > 20 ? 5 : 1)) {
        const auto c = WeierstrassCurve::short_form(p, a, b);
        if (!good_reduction(c)) {
          CHECK_THROWS_AS(count_points(c), InvalidInput);
          continue;
        }
        CHECK(count_points(c) == oracle::count_short(p, a, b));
      }
  }
  for (u64 p : {2u, 3u}) {
    const auto c = WeierstrassCurve::long_form(p, {1, 0, 1, 0, 1});
    const i64 co[5] = {1, 0, 1, 0, 1};
    if (good_reduction(c)) CHECK(count_points(c) == oracle::count_long(p, co));
  }
  CHECK_THROWS_AS(count_points(WeierstrassCurve::short_form(1000003, 1, 1)), InvalidInput);
  CHECK_THROWS_AS(count_points(WeierstrassCurve::short_form(25, 1, 1)), InvalidInput);
}

TEST_CASE("group law axioms on F_p and Z/p^k") {
  for (auto [p, k] : {std::pair<u64, int>{5, 1}, {7, 1}, {5, 2}, {7, 2}, {5, 3}, {11, 2}}) {
    const u64 m = arith::ipow(p, static_cast<unsigned>(k));
    const auto c = WeierstrassCurve::short_form(m, 1, 3);
    if (!good_reduction(c)) continue;
    const auto pts = enumerate_points(c);
    CHECK(pts.size() == arith::ipow(p, static_cast<unsigned>(k - 1)) * count_points(c.with_modulus(p)));
    for (const auto& pt : pts) REQUIRE(on_curve(c, pt));
    std::set<std::tuple<u64, u64, u64>> distinct;
    for (const auto& pt : pts) {
      const auto n = normalize(c, pt);
      distinct.insert({n.x, n.y, n.z});
    }
    CHECK(distinct.size() == pts.size());
    const std::size_t step = std::max<std::size_t>(1, pts.size() / 12);
    for (std::size_t i = 0; i < pts.size(); i += step) {
      const auto& P = pts[i];
      CHECK(same_point(c, point_add(c, P, identity()), P));
      CHECK(is_identity(c, point_add(c, P, negate(c, P))));
      for (std::size_t j = 0; j < pts.size(); j += step) {
        const auto& Q = pts[j];
        const auto s = point_add(c, P, Q);
        CHECK(on_curve(c, s));
        CHECK(same_point(c, s, point_add(c, Q, P)));
        for (std::size_t l = 0; l < pts.size(); l += 3 * step) {
          const auto& R = pts[l];
          CHECK(same_point(c, point_add(c, s, R), point_add(c, P, point_add(c, Q, R))));
        }
      }
      const auto sm = scalar_mul(c, 13, P);
      Point acc = identity();
      for (int t = 0; t < 13; ++t) acc = point_add(c, acc, P);
      CHECK(same_point(c, sm, acc));
    }
  }
}

TEST_CASE("enumeration mod p^k matches a direct scan") {
  for (auto [p, k] : {std::pair<u64, int>{5, 2}, {7, 2}, {5, 3}}) {
    const u64 m = arith::ipow(p, static_cast<unsigned>(k));
    for (i64 a : {1, 2}) {
      const auto c = WeierstrassCurve::short_form(m, a, 4);
      if (!good_reduction(c)) continue;
      std::set<std::tuple<u64, u64, u64>> got, want;
      for (const auto& pt : enumerate_points(c)) {
        const auto n = normalize(c, pt);
        got.insert({n.x, n.y, n.z});
      }
      for (const auto& r : oracle::points_mod_pk(p, k, a, 4)) want.insert({r.x, r.y, r.z});
      CHECK(got == want);
    }
  }
}

TEST_CASE("long-form arithmetic") {
  const auto c = WeierstrassCurve::long_form(49, {1, 2, 3, 1, 5});
  REQUIRE(good_reduction(c));
  const auto pts = enumerate_points(c);
  CHECK(pts.size() == 7 * count_points(c.with_modulus(7)));
  for (const auto& pt : pts) REQUIRE(on_curve(c, pt));
  const u64 e = exhaustive_exponent(c);
  CHECK(e == exponent_mod_prime_power(c.with_modulus(7), 7, 2));
  for (u64 p : {2u, 3u}) {
    const auto s = WeierstrassCurve::long_form(p, {1, 1, 1, 0, 1});
    if (!good_reduction(s)) continue;
    const auto sp = enumerate_points(s);
    for (const auto& P : sp)
      for (const auto& Q : sp) CHECK(on_curve(s, point_add(s, P, Q)));
    CHECK(exhaustive_exponent(s) == group_structure(s).exponent());
    CHECK_THROWS_AS(enumerate_points(WeierstrassCurve::long_form(p * p, {1, 1, 1, 0, 1})), InvalidInput);
  }
}

TEST_CASE("group structure and exponent") {
  for (u64 p : {5u, 7u, 13u, 17u, 37u}) {
    for (i64 a = 0; a < static_cast<i64>(p); ++a)
      for (i64 b = 0; b < static_cast<i64>(p); b += (p > 20 ? 3 : 1)) {
        const auto c = WeierstrassCurve::short_form(p, a, b);
        if (!good_reduction(c)) continue;
        const auto g = group_structure(c);
        CHECK(g.order() == count_points(c));
        CHECK(g.n2 % g.n1 == 0);
        CHECK(g.exponent() == exhaustive_exponent(c));
      }
  }
  // E[2] fully rational: y^2 = x(x-1)(x+1) over F_13.
  const auto full2 = WeierstrassCurve::short_form(13, -1, 0);
  CHECK(group_structure(full2).n1 % 2 == 0);
  for (auto [p, k] : {std::pair<u64, int>{5, 2}, {7, 2}, {5, 3}}) {
    const u64 m = arith::ipow(p, static_cast<unsigned>(k));
    for (i64 a : {1, 2, 3}) {
      const auto c = WeierstrassCurve::short_form(m, a, 1);
      if (!good_reduction(c)) continue;
      CHECK(exhaustive_exponent(c) == exponent_mod_prime_power(c.with_modulus(p), p, k));
    }
  }
}

TEST_CASE("exponent mod p^k when p divides the group order") {
  const auto split = WeierstrassCurve::short_form(25, 3, 0);
  CHECK(count_points(split.with_modulus(5)) == 10);
  CHECK(exhaustive_exponent(split) == 10);
  CHECK(lifted_exponent_formula(split, 5, 2) == 50);
  CHECK(exponent_mod_prime_power(split, 5, 2) == 10);
  const auto split25 = WeierstrassCurve::short_form(25, 23, 22);
  CHECK(exhaustive_exponent(split25) == 5);
  CHECK(exponent_mod_prime_power(split25, 5, 2) == 5);
  CHECK(lifted_exponent_formula(split25, 5, 2) == 25);
  const auto split2197 = WeierstrassCurve::short_form(2197, 926, 1332);
  CHECK(exhaustive_exponent(split2197) == 169);
  CHECK(exponent_mod_prime_power(split2197, 13, 3) == 169);
  CHECK(lifted_exponent_formula(split2197, 13, 3) == 2197);
  for (auto [p, k] : {std::pair<u64, int>{5, 2}, {7, 2}, {5, 3}}) {
    const u64 m = arith::ipow(p, static_cast<unsigned>(k));
    int checked = 0;
    for (i64 a = 0; a < static_cast<i64>(p); ++a)
      for (i64 b = 0; b < static_cast<i64>(p); ++b) {
        const auto base = WeierstrassCurve::short_form(p, a, b);
        if (!good_reduction(base) || count_points(base) % p != 0) continue;
        for (i64 s = 0; s < static_cast<i64>(p); s += (k == 3 ? 2 : 1)) {
          const auto lift = WeierstrassCurve::short_form(m, a + s * static_cast<i64>(p), b + static_cast<i64>(p) * (s % 3));
          CHECK(exponent_mod_prime_power(lift, p, k) == exhaustive_exponent(lift));
          ++checked;
        }
      }
    CHECK(checked > 0);
  }
}

TEST_CASE("Lucas traces match counts over extension fields") {
  for (u64 p : {5u, 7u}) {
    for (int k : {2, 3}) {
      const oracle::ExtensionField field(p, k);
      for (i64 a = 0; a < static_cast<i64>(p); a += 2)
        for (i64 b = 1; b < static_cast<i64>(p); b += 2) {
          const auto c = WeierstrassCurve::short_form(p, a, b);
          if (!good_reduction(c)) continue;
          const i64 ap = trace(c);
          const i64 apk = trace_prime_power(ap, p, k);
          CHECK(static_cast<i64>(field.size()) + 1 - apk == static_cast<i64>(field.count_short(a, b)));
        }
    }
  }
  CHECK(trace_prime_power(-1, 2, 4) == 1);
  CHECK(lucas_value(-1, 2, 4) == 1);
  CHECK(lucas_value(3, 5, 0) == 2);
  CHECK(lucas_value(3, 5, 1) == 3);
  const BigInt big = lucas_value(20, 101, 60);
  CHECK(big > BigInt(INT64_MAX));
  CHECK_THROWS_AS(trace_prime_power(20, 101, 60), InvalidInput);
}

TEST_CASE("trace inversion") {
  for (u64 p : {5u, 7u, 11u}) {
    for (int k : {1, 2, 3}) {
      const i64 bound = static_cast<i64>(arith::isqrt(4 * p));
      for (i64 t = -bound; t <= bound; ++t) {
        const auto pre = invert_trace(p, k, trace_prime_power(t, p, k));
        CHECK(std::find(pre.begin(), pre.end(), t) != pre.end());
        CHECK(std::is_sorted(pre.begin(), pre.end()));
      }
    }
  }
  CHECK(invert_trace(5, 1, 100).empty());
}

TEST_CASE("curve searches") {
  const auto t1 = find_trace_one(5);
  CHECK(t1.a() == 3);
  CHECK(t1.b() == 2);
  for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 101u, 1009u}) {
    CHECK(trace(find_trace_one(p)) == 1);
    CHECK(trace(find_supersingular(p)) == 0);
    CHECK(good_reduction(find_good_curve(p)));
  }
  CHECK(find_supersingular(7) == WeierstrassCurve::short_form(7, 1, 0));
  CHECK(find_supersingular(11) == WeierstrassCurve::short_form(11, 0, 1));
  CHECK_THROWS_AS(find_trace_one(9), InvalidInput);
  CHECK_THROWS_AS(find_trace_one(1000003), InvalidInput);
}

TEST_CASE("curves modulo n") {
  const auto e = CurveModN::from_curve(parse_curve("35: [8,7]"));
  CHECK(e.n().value() == 35);
  CHECK(e.component(5).curve == WeierstrassCurve::short_form(5, 3, 2));
  CHECK(e.component(7).curve == WeierstrassCurve::short_form(7, 1, 0));
  REQUIRE(e.combined().has_value());
  CHECK(*e.combined() == WeierstrassCurve::short_form(35, 8, 7));
  const auto tr = compute_traces(e);
  CHECK(tr.prime_traces.at(5) == 1);
  CHECK(tr.prime_traces.at(7) == 0);
  CHECK(tr.composite == 0);
  CHECK(trace_composite(tr, e.n()) == 0);

  const auto mixed = assemble_mod_n({{3, 1, WeierstrassCurve::long_form(3, {0, 0, 0, 2, 0})},
                                     {5, 2, WeierstrassCurve::short_form(25, 1, 1)}});
  CHECK(mixed.n().value() == 75);
  CHECK_FALSE(mixed.combined().has_value());
  CHECK_THROWS_AS(assemble_mod_n({{5, 1, WeierstrassCurve::short_form(25, 1, 1)}}), InvalidInput);
  CHECK_THROWS_AS(assemble_mod_n({{5, 1, WeierstrassCurve::short_form(5, 0, 0)}}), InvalidInput);
  CHECK_THROWS_AS(assemble_mod_n({{5, 1, WeierstrassCurve::short_form(5, 1, 1)},
                                  {5, 1, WeierstrassCurve::short_form(5, 1, 2)}}),
                  InvalidInput);
  CHECK_THROWS_AS(trace_composite(tr, arith::factorize(77)), InvalidInput);
}

TEST_CASE("isomorphism classes cover the good pairs") {
  for (u64 p : {5u, 7u, 11u, 13u, 29u}) {
    std::map<i64, u64> by_class, direct;
    u64 total = 0;
    for (const auto& w : isomorphism_classes(p)) {
      const auto c = WeierstrassCurve::short_form(p, static_cast<i64>(w.a), static_cast<i64>(w.b));
      REQUIRE(good_reduction(c));
      by_class[trace(c)] += w.weight;
      total += w.weight;
    }
    u64 good = 0;
    for (i64 a = 0; a < static_cast<i64>(p); ++a)
      for (i64 b = 0; b < static_cast<i64>(p); ++b) {
        const auto c = WeierstrassCurve::short_form(p, a, b);
        if (!good_reduction(c)) continue;
        ++good;
        ++direct[trace(c)];
      }
    CHECK(total == good);
    CHECK(by_class == direct);
  }
  CHECK_THROWS_AS(isomorphism_classes(3), InvalidInput);
}
