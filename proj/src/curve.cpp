#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "ecarm/curves.hpp"
#include "modring.hpp"

namespace ecarm::curves {

using arith::FactoredInteger;

namespace {

u64 long_discriminant(const ModRing& r, const std::array<u64, 5>& c) {
  const auto [a1, a2, a3, a4, a6] = c;
  const u64 b2 = r.add(r.mul(a1, a1), r.mul(r.of(4), a2));
  const u64 b4 = r.add(r.mul(r.of(2), a4), r.mul(a1, a3));
  const u64 b6 = r.add(r.mul(a3, a3), r.mul(r.of(4), a6));
  u64 b8 = r.mul(r.mul(a1, a1), a6);
  b8 = r.add(b8, r.mul(r.of(4), r.mul(a2, a6)));
  b8 = r.sub(b8, r.mul(a1, r.mul(a3, a4)));
  b8 = r.add(b8, r.mul(a2, r.mul(a3, a3)));
  b8 = r.sub(b8, r.mul(a4, a4));
  u64 d = r.neg(r.mul(r.mul(b2, b2), b8));
  d = r.sub(d, r.mul(r.of(8), r.mul(b4, r.mul(b4, b4))));
  d = r.sub(d, r.mul(r.of(27), r.mul(b6, b6)));
  d = r.add(d, r.mul(r.of(9), r.mul(b2, r.mul(b4, b6))));
  return d;
}

u64 short_discriminant(const ModRing& r, u64 a, u64 b) {
  const u64 inner = r.add(r.mul(r.of(4), r.mul(a, r.mul(a, a))), r.mul(r.of(27), r.mul(b, b)));
  return r.neg(r.mul(r.of(16), inner));
}

}  // namespace

WeierstrassCurve::WeierstrassCurve(u64 modulus, Form form, const std::array<u64, 5>& coeffs)
    : modulus_(modulus), form_(form), coeffs_(coeffs) {
  const ModRing r{modulus};
  discriminant_ = form == Form::short_weierstrass ? short_discriminant(r, coeffs[3], coeffs[4])
                                                  : long_discriminant(r, coeffs);
  if (modulus > 1) {
    const auto f = arith::factorize(modulus);
    if (f.is_prime_power()) {
      prime_ = f.factors()[0].prime;
      exponent_ = f.factors()[0].exponent;
    }
  }
}

WeierstrassCurve WeierstrassCurve::short_form(u64 modulus, i64 a, i64 b) {
  if (modulus == 0) throw InvalidInput("curve modulus must be positive");
  if (std::gcd(modulus, u64{6}) != 1) {
    throw InvalidInput("short Weierstrass form needs a modulus coprime to 6, got " + std::to_string(modulus));
  }
  return WeierstrassCurve(modulus, Form::short_weierstrass,
                          {0, 0, 0, arith::reduce(a, modulus), arith::reduce(b, modulus)});
}

WeierstrassCurve WeierstrassCurve::long_form(u64 modulus, const std::array<i64, 5>& coeffs) {
  if (modulus == 0) throw InvalidInput("curve modulus must be positive");
  std::array<u64, 5> c{};
  for (std::size_t i = 0; i < 5; ++i) c[i] = arith::reduce(coeffs[i], modulus);
  return WeierstrassCurve(modulus, Form::long_weierstrass, c);
}

u64 WeierstrassCurve::a() const {
  if (!is_short()) throw InvalidInput("curve is not in short Weierstrass form");
  return coeffs_[3];
}

u64 WeierstrassCurve::b() const {
  if (!is_short()) throw InvalidInput("curve is not in short Weierstrass form");
  return coeffs_[4];
}

WeierstrassCurve WeierstrassCurve::with_modulus(u64 modulus) const {
  if (is_short()) {
    return short_form(modulus, static_cast<i64>(coeffs_[3] % modulus), static_cast<i64>(coeffs_[4] % modulus));
  }
  std::array<i64, 5> c{};
  for (std::size_t i = 0; i < 5; ++i) c[i] = static_cast<i64>(coeffs_[i] % modulus);
  return long_form(modulus, c);
}

std::string WeierstrassCurve::to_string() const {
  std::ostringstream os;
  if (is_local()) {
    os << prime_ << '^' << exponent_;
  } else {
    os << modulus_;
  }
  os << ": [";
  if (is_short()) {
    os << coeffs_[3] << ',' << coeffs_[4];
  } else {
    for (std::size_t i = 0; i < 5; ++i) os << (i ? "," : "") << coeffs_[i];
  }
  os << ']';
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidInput("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

WeierstrassCurve parse_curve(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidInput("curve text needs 'modulus: [coefficients]'");
  const auto mod_text = trim(text.substr(0, colon));
  u64 modulus = 0;
  if (const auto caret = mod_text.find('^'); caret != std::string_view::npos) {
    const u64 p = parse_number<u64>(mod_text.substr(0, caret), "prime");
    const unsigned k = parse_number<unsigned>(mod_text.substr(caret + 1), "exponent");
    modulus = arith::ipow(p, k);
  } else {
    modulus = parse_number<u64>(mod_text, "modulus");
  }
  auto body = trim(text.substr(colon + 1));
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
    throw InvalidInput("curve coefficients must be bracketed");
  }
  body = body.substr(1, body.size() - 2);
  std::vector<i64> coeffs;
  while (!body.empty()) {
    const auto comma = body.find(',');
    coeffs.push_back(parse_number<i64>(body.substr(0, comma), "coefficient"));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (coeffs.size() == 2) return WeierstrassCurve::short_form(modulus, coeffs[0], coeffs[1]);
  if (coeffs.size() == 5) {
    return WeierstrassCurve::long_form(modulus, {coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]});
  }
  throw InvalidInput("a curve has 2 (short) or 5 (long) coefficients");
}

bool good_reduction(const WeierstrassCurve& curve) {
  return std::gcd(curve.discriminant(), curve.modulus()) == 1;
}

WeierstrassCurve short_model(const WeierstrassCurve& curve) {
  if (curve.is_short()) return curve;
  const u64 m = curve.modulus();
  if (std::gcd(m, u64{6}) != 1) throw InvalidInput("short model needs 6 to be a unit");
  const ModRing r{m};
  const auto [a1, a2, a3, a4, a6] = curve.a_invariants();
  const u64 b2 = r.add(r.mul(a1, a1), r.mul(r.of(4), a2));
  const u64 b4 = r.add(r.mul(r.of(2), a4), r.mul(a1, a3));
  const u64 b6 = r.add(r.mul(a3, a3), r.mul(r.of(4), a6));
  const u64 c4 = r.sub(r.mul(b2, b2), r.mul(r.of(24), b4));
  u64 c6 = r.neg(r.mul(b2, r.mul(b2, b2)));
  c6 = r.add(c6, r.mul(r.of(36), r.mul(b2, b4)));
  c6 = r.sub(c6, r.mul(r.of(216), b6));
  const u64 a = r.neg(r.mul(r.of(27), c4));
  const u64 b = r.neg(r.mul(r.of(54), c6));
  return WeierstrassCurve::short_form(m, static_cast<i64>(a), static_cast<i64>(b));
}

// ---------------------------------------------------------------------------

CurveModN CurveModN::assemble(std::vector<LocalComponent> components) {
  if (components.empty()) throw InvalidInput("a curve mod n needs at least one component");
  std::sort(components.begin(), components.end(),
            [](const LocalComponent& x, const LocalComponent& y) { return x.prime < y.prime; });
  std::vector<arith::PrimePower> factors;
  for (const auto& c : components) {
    if (!arith::is_prime(c.prime)) throw InvalidInput("component prime " + std::to_string(c.prime) + " is not prime");
    if (c.exponent < 1) throw InvalidInput("component exponent must be >= 1");
    if (!factors.empty() && factors.back().prime == c.prime) {
      throw InvalidInput("duplicate component at prime " + std::to_string(c.prime));
    }
    const u64 pk = arith::ipow(c.prime, static_cast<unsigned>(c.exponent));
    if (c.curve.modulus() != pk) {
      throw InvalidInput("component at " + std::to_string(c.prime) + " has modulus " +
                         std::to_string(c.curve.modulus()) + ", expected " + std::to_string(pk));
    }
    if (!good_reduction(c.curve)) {
      throw InvalidInput("component " + c.curve.to_string() + " has bad reduction");
    }
    factors.push_back({c.prime, c.exponent});
  }
  CurveModN out;
  out.n_ = FactoredInteger::from_factors(std::move(factors));
  const bool all_short = std::all_of(components.begin(), components.end(),
                                     [](const LocalComponent& c) { return c.curve.is_short(); });
  if (all_short) {
    std::vector<arith::Congruence> as, bs;
    for (const auto& c : components) {
      as.push_back({c.curve.a(), c.modulus()});
      bs.push_back({c.curve.b(), c.modulus()});
    }
    const u64 a = arith::crt_combine(as);
    const u64 b = arith::crt_combine(bs);
    out.combined_ = WeierstrassCurve::short_form(out.n_.value(), static_cast<i64>(a), static_cast<i64>(b));
  }
  out.components_ = std::move(components);
  return out;
}

CurveModN CurveModN::from_curve(const WeierstrassCurve& curve) {
  const auto n = arith::factorize(curve.modulus());
  if (n.is_one()) throw InvalidInput("curve modulus must exceed 1");
  std::vector<LocalComponent> components;
  for (const auto& f : n.factors()) {
    components.push_back({f.prime, f.exponent, curve.with_modulus(f.value())});
  }
  return assemble(std::move(components));
}

const LocalComponent& CurveModN::component(u64 prime) const {
  for (const auto& c : components_) {
    if (c.prime == prime) return c;
  }
  throw InvalidInput("no component at prime " + std::to_string(prime));
}

CurveModN assemble_mod_n(std::vector<LocalComponent> components) {
  return CurveModN::assemble(std::move(components));
}

TraceData compute_traces(const CurveModN& curve) {
  TraceData data;
  data.composite = 1;
  for (const auto& c : curve.components()) {
    const i64 ap = trace(c.curve.with_modulus(c.prime));
    const i64 apk = trace_prime_power(ap, c.prime, c.exponent);
    data.prime_traces[c.prime] = ap;
    data.prime_power_traces[{c.prime, c.exponent}] = apk;
    data.composite *= apk;
  }
  return data;
}

i64 trace_composite(const TraceData& traces, const FactoredInteger& n) {
  i64 result = 1;
  for (const auto& f : n.factors()) {
    if (const auto it = traces.prime_power_traces.find({f.prime, f.exponent});
        it != traces.prime_power_traces.end()) {
      result *= it->second;
    } else if (const auto jt = traces.prime_traces.find(f.prime); jt != traces.prime_traces.end()) {
      result *= trace_prime_power(jt->second, f.prime, f.exponent);
    } else {
      throw InvalidInput("missing trace at prime " + std::to_string(f.prime));
    }
  }
  return result;
}

}  // namespace ecarm::curves
