#include "ecarm/carmichael.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

#include "ecarm/parallel.hpp"
#include "ecarm/random.hpp"

namespace ecarm::carmichael {

using curves::CurveModN;
using curves::Point;
using curves::WeierstrassCurve;

std::string to_string(Method m) {
  switch (m) {
    case Method::criterion:
      return "criterion";
    case Method::definition_exhaustive:
      return "definition-exhaustive";
    case Method::definition_sampled:
      return "definition-sampled";
  }
  return "unknown";
}

namespace {

u64 magnitude(i64 v) { return v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v); }

i64 non_negative_mod(i64 v, u64 m) {
  const i128 r = static_cast<i128>(v) % static_cast<i128>(m);
  return static_cast<i64>(r < 0 ? r + m : r);
}

void require_composite(const arith::FactoredInteger& n) {
  if (n.omega() < 2) {
    throw InvalidInput("n = " + std::to_string(n.value()) +
                       " is a prime power; elliptic Carmichael numbers have two distinct prime factors");
  }
}

struct Base {
  curves::TraceData traces;
  i64 a_n = 0;
  i64 value = 0;
};

Base base_quantities(const CurveModN& curve) {
  require_composite(curve.n());
  Base b;
  b.traces = curves::compute_traces(curve);
  b.a_n = curves::trace_composite(b.traces, curve.n());
  const i128 value = static_cast<i128>(curve.n().value()) - b.a_n + 1;
  if (value > INT64_MAX || value < INT64_MIN) throw InvalidInput("n - a_n + 1 does not fit in 64 bits");
  b.value = static_cast<i64>(value);
  return b;
}

std::vector<PrimeCheck> transcript_for(const CurveModN& curve, const Base& b) {
  std::vector<PrimeCheck> out;
  for (const auto& c : curve.components()) {
    PrimeCheck pc;
    pc.prime = c.prime;
    pc.exponent = c.exponent;
    pc.trace_p = b.traces.prime_traces.at(c.prime);
    pc.trace_pk = b.traces.prime_power_traces.at({c.prime, c.exponent});
    pc.group_exponent = curves::exponent_mod_prime_power(c.curve, c.prime, c.exponent);
    pc.divides = non_negative_mod(b.value, pc.group_exponent) == 0;
    out.push_back(pc);
  }
  return out;
}

}  // namespace

Point reduce_point(const Point& p, u64 modulus) { return {p.x % modulus, p.y % modulus, p.z % modulus}; }

Point combine_points(const CurveModN& curve, const std::vector<Point>& components) {
  const auto parts = curve.components();
  if (components.size() != parts.size()) throw InvalidInput("one point per component expected");
  std::vector<arith::Congruence> xs, ys, zs;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const u64 m = parts[i].modulus();
    xs.push_back({components[i].x % m, m});
    ys.push_back({components[i].y % m, m});
    zs.push_back({components[i].z % m, m});
  }
  return {arith::crt_combine(xs), arith::crt_combine(ys), arith::crt_combine(zs)};
}

CarmichaelVerdict is_carmichael_criterion(const CurveModN& curve) {
  const Base b = base_quantities(curve);
  CarmichaelVerdict v;
  v.n = curve.n();
  v.curve = curve;
  v.method = Method::criterion;
  v.a_n = b.a_n;
  v.value = b.value;
  v.transcript = transcript_for(curve, b);
  v.verdict = true;
  for (const auto& pc : v.transcript) {
    if (!pc.divides) {
      v.verdict = false;
      v.certificate = DivisibilityFailure{pc.prime, pc.group_exponent, b.value, non_negative_mod(b.value, pc.group_exponent)};
      break;
    }
  }
  return v;
}

CarmichaelVerdict is_carmichael_definition(const CurveModN& curve, const DefinitionOptions& options) {
  const Base b = base_quantities(curve);
  for (const auto& c : curve.components()) {
    if (c.prime < 5 && c.exponent > 1) {
      throw InvalidInput("the definition test has no point arithmetic modulo " + std::to_string(c.prime) + "^" +
                         std::to_string(c.exponent));
    }
  }
  const bool exhaustive = curve.n().value() <= options.exhaustive_bound;
  if (!exhaustive && options.samples == 0) {
    throw InvalidInput("n = " + std::to_string(curve.n().value()) +
                       " exceeds the exhaustive bound; enable sampling for the definition test");
  }
  CarmichaelVerdict v;
  v.n = curve.n();
  v.curve = curve;
  v.a_n = b.a_n;
  v.value = b.value;
  v.verdict = true;
  v.method = exhaustive ? Method::definition_exhaustive : Method::definition_sampled;
  v.certain = true;

  const auto parts = curve.components();
  std::vector<std::vector<Point>> points;
  std::vector<u64> multiplier;
  for (const auto& c : parts) {
    points.push_back(curves::enumerate_points(c.curve));
    multiplier.push_back(std::gcd(magnitude(b.value), static_cast<u64>(points.back().size())));
  }
  auto annihilated = [&](std::size_t comp, const Point& p) {
    return curves::is_identity(parts[comp].curve, curves::scalar_mul(parts[comp].curve, multiplier[comp], p));
  };

  if (exhaustive) {
    for (std::size_t comp = 0; comp < parts.size() && v.verdict; ++comp) {
      const auto& pts = points[comp];
      std::atomic<u64> first_bad{pts.size()};
      parallel::for_chunks(pts.size(), options.workers, [&](unsigned, u64 begin, u64 end) {
        for (u64 i = begin; i < end && i < first_bad.load(); ++i) {
          if (!annihilated(comp, pts[i])) {
            u64 cur = first_bad.load();
            while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
            }
            return;
          }
        }
      });
      v.points_checked += std::min<u64>(first_bad.load() + 1, pts.size());
      if (first_bad.load() < pts.size()) {
        std::vector<Point> tuple(parts.size(), curves::identity());
        tuple[comp] = pts[first_bad.load()];
        v.verdict = false;
        v.certificate = WitnessPoint{combine_points(curve, tuple), parts[comp].prime};
      }
    }
    return v;
  }

  Rng rng(options.seed);
  for (u64 s = 0; s < options.samples && v.verdict; ++s) {
    std::vector<Point> tuple;
    std::optional<u64> failing;
    for (std::size_t comp = 0; comp < parts.size(); ++comp) {
      tuple.push_back(points[comp][rng.below(points[comp].size())]);
      if (!failing && !annihilated(comp, tuple.back())) failing = parts[comp].prime;
    }
    ++v.points_checked;
    if (failing) {
      v.verdict = false;
      v.certificate = WitnessPoint{combine_points(curve, tuple), *failing};
    }
  }
  v.certain = !v.verdict;
  return v;
}

Witness witness(const arith::FactoredInteger& n) {
  require_composite(n);
  const auto factors = n.factors();
  std::vector<curves::LocalComponent> components;
  std::optional<u64> supersingular_prime, trace_one_prime;
  for (const auto& f : factors) {
    if (f.exponent >= 2) {
      supersingular_prime = f.prime;
      break;
    }
  }
  if (!supersingular_prime) {
    trace_one_prime = factors[0].prime;
    supersingular_prime = factors[1].prime;
  }
  for (const auto& f : factors) {
    WeierstrassCurve local = f.prime == *supersingular_prime ? curves::find_supersingular(f.prime)
                             : (trace_one_prime && f.prime == *trace_one_prime) ? curves::find_trace_one(f.prime)
                                                                                : curves::find_good_curve(f.prime);
    components.push_back({f.prime, f.exponent, local.with_modulus(f.value())});
  }
  auto curve = CurveModN::assemble(std::move(components));
  auto verdict = is_carmichael_criterion(curve);
  if (verdict.verdict) {
    throw InvariantViolation("witness construction for n = " + std::to_string(n.value()) + " produced a Carmichael pair");
  }
  return {std::move(curve), std::move(verdict)};
}

namespace {

VerifyResult fail(std::string reason) { return {false, std::move(reason)}; }

const curves::LocalComponent* find_component(const CurveModN& curve, u64 prime) {
  for (const auto& c : curve.components()) {
    if (c.prime == prime) return &c;
  }
  return nullptr;
}

}  // namespace

VerifyResult verify_certificate(const CarmichaelVerdict& v) {
  try {
    const CurveModN& curve = v.curve;
    if (curve.n().value() != v.n.value()) return fail("curve modulus differs from n");
    for (const auto& c : curve.components()) {
      if (!curves::good_reduction(c.curve)) return fail("bad reduction at " + std::to_string(c.prime));
    }
    const Base b = base_quantities(curve);
    if (b.a_n != v.a_n) return fail("a_n is " + std::to_string(b.a_n) + ", claimed " + std::to_string(v.a_n));
    if (b.value != v.value) {
      return fail("n - a_n + 1 is " + std::to_string(b.value) + ", claimed " + std::to_string(v.value));
    }
    if (!v.transcript.empty()) {
      const auto fresh = transcript_for(curve, b);
      if (fresh.size() != v.transcript.size()) return fail("transcript length mismatch");
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        const auto& x = fresh[i];
        const auto& y = v.transcript[i];
        if (x.prime != y.prime || x.exponent != y.exponent || x.trace_p != y.trace_p || x.trace_pk != y.trace_pk ||
            x.group_exponent != y.group_exponent || x.divides != y.divides) {
          return fail("transcript entry for p = " + std::to_string(y.prime) + " does not recompute");
        }
      }
    }
    if (const auto* d = std::get_if<DivisibilityFailure>(&v.certificate)) {
      if (v.verdict) return fail("divisibility failure attached to a positive verdict");
      const auto* c = find_component(curve, d->prime);
      if (!c) return fail("certificate prime " + std::to_string(d->prime) + " does not divide n");
      const u64 e = curves::exponent_mod_prime_power(c->curve, c->prime, c->exponent);
      if (e != d->group_exponent) {
        return fail("group exponent at " + std::to_string(d->prime) + " is " + std::to_string(e) + ", claimed " +
                    std::to_string(d->group_exponent));
      }
      if (d->value != b.value) return fail("certificate value does not match n - a_n + 1");
      const i64 r = non_negative_mod(b.value, e);
      if (r != d->remainder) return fail("remainder does not recompute");
      if (r == 0) return fail("claimed exponent divides the value");
      return {true, "exponent " + std::to_string(e) + " does not divide " + std::to_string(b.value)};
    }
    if (const auto* w = std::get_if<WitnessPoint>(&v.certificate)) {
      if (v.verdict) return fail("witness point attached to a positive verdict");
      bool shows = false;
      for (const auto& c : curve.components()) {
        const Point local = reduce_point(w->point, c.modulus());
        if (!curves::on_curve(c.curve, local)) return fail("witness point is not on the curve mod " + std::to_string(c.modulus()));
        const bool killed =
            curves::is_identity(c.curve, curves::scalar_mul(c.curve, magnitude(b.value), local));
        if (c.prime == w->prime) shows = !killed;
      }
      if (!shows) return fail("value * P is the identity at the claimed prime");
      return {true, "value * P != O modulo " + std::to_string(w->prime)};
    }
    if (!v.verdict) return fail("negative verdict without a certificate");
    for (const auto& pc : transcript_for(curve, b)) {
      if (!pc.divides) {
        return fail("exponent " + std::to_string(pc.group_exponent) + " at " + std::to_string(pc.prime) +
                    " does not divide the value");
      }
    }
    return {true, "every exponent divides " + std::to_string(b.value)};
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace ecarm::carmichael
