#include "ecarm/serialize.hpp"

#include <charconv>

namespace ecarm::io {

using carmichael::CarmichaelVerdict;
using curves::CurveModN;
using curves::WeierstrassCurve;

namespace {

std::string str(u64 v) { return std::to_string(v); }
std::string str(i64 v) { return std::to_string(v); }

template <class T>
T decimal(const json& v, const std::string& what) {
  if (!v.is_string()) throw InvalidInput(what + " must be a decimal string");
  const auto& s = v.get_ref<const std::string&>();
  T out{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidInput(what + " is not a valid integer: " + s);
  return out;
}

template <class T>
T number(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InvalidInput(std::string("missing field '") + name + "'");
  return decimal<T>(j.at(name), std::string("field '") + name + "'");
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InvalidInput(std::string("missing field '") + name + "'");
  return j.at(name);
}

json point_json(const curves::Point& p) { return {{"x", str(p.x)}, {"y", str(p.y)}, {"z", str(p.z)}}; }

curves::Point point_from_json(const json& j) { return {number<u64>(j, "x"), number<u64>(j, "y"), number<u64>(j, "z")}; }

carmichael::Method method_from(const std::string& s) {
  for (auto m : {carmichael::Method::criterion, carmichael::Method::definition_exhaustive,
                 carmichael::Method::definition_sampled}) {
    if (carmichael::to_string(m) == s) return m;
  }
  throw InvalidInput("unknown method '" + s + "'");
}

}  // namespace

std::string rational_text(const classnum::Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

json curve_json(const WeierstrassCurve& curve) {
  json coeffs = json::array();
  if (curve.is_short()) {
    coeffs.push_back(str(curve.a()));
    coeffs.push_back(str(curve.b()));
  } else {
    for (u64 c : curve.a_invariants()) coeffs.push_back(str(c));
  }
  return {{"modulus", str(curve.modulus())},
          {"form", curve.is_short() ? "short" : "long"},
          {"coefficients", coeffs},
          {"text", curve.to_string()}};
}

WeierstrassCurve curve_from_json(const json& j) {
  const u64 modulus = number<u64>(j, "modulus");
  const auto& form = field(j, "form");
  const auto& coeffs = field(j, "coefficients");
  if (!coeffs.is_array()) throw InvalidInput("coefficients must be an array");
  std::vector<i64> c;
  for (const auto& v : coeffs) {
    const u64 raw = decimal<u64>(v, "coefficient");
    if (raw >= modulus) throw InvalidInput("coefficient not reduced modulo the modulus");
    c.push_back(static_cast<i64>(raw));
  }
  WeierstrassCurve curve = [&] {
    if (form == "short" && c.size() == 2) return WeierstrassCurve::short_form(modulus, c[0], c[1]);
    if (form == "long" && c.size() == 5) return WeierstrassCurve::long_form(modulus, {c[0], c[1], c[2], c[3], c[4]});
    throw InvalidInput("curve form and coefficient count disagree");
  }();
  if (j.contains("text") && j.at("text") != curve.to_string()) throw InvalidInput("curve text does not match its coefficients");
  return curve;
}

json curve_mod_n_json(const CurveModN& curve) {
  json comps = json::array();
  for (const auto& c : curve.components()) {
    comps.push_back({{"prime", str(c.prime)}, {"exponent", c.exponent}, {"curve", curve_json(c.curve)}});
  }
  json j = {{"n", str(curve.n().value())}, {"components", comps}};
  if (curve.combined()) j["combined"] = curve_json(*curve.combined());
  return j;
}

CurveModN curve_mod_n_from_json(const json& j) {
  const auto& comps = field(j, "components");
  if (!comps.is_array()) throw InvalidInput("components must be an array");
  std::vector<curves::LocalComponent> parts;
  for (const auto& c : comps) {
    const auto& e = field(c, "exponent");
    if (!e.is_number_unsigned()) throw InvalidInput("component exponent must be a positive integer");
    parts.push_back({number<u64>(c, "prime"), e.get<int>(), curve_from_json(field(c, "curve"))});
  }
  auto curve = CurveModN::assemble(std::move(parts));
  if (curve.n().value() != number<u64>(j, "n")) throw InvalidInput("component moduli do not multiply to n");
  return curve;
}

json verdict_json(const CarmichaelVerdict& v) {
  json transcript = json::array();
  for (const auto& pc : v.transcript) {
    transcript.push_back({{"prime", str(pc.prime)},
                          {"exponent", pc.exponent},
                          {"trace_p", str(pc.trace_p)},
                          {"trace_pk", str(pc.trace_pk)},
                          {"group_exponent", str(pc.group_exponent)},
                          {"divides", pc.divides}});
  }
  json cert;
  if (const auto* d = std::get_if<carmichael::DivisibilityFailure>(&v.certificate)) {
    cert = {{"kind", "divisibility-failure"},
            {"prime", str(d->prime)},
            {"group_exponent", str(d->group_exponent)},
            {"value", str(d->value)},
            {"remainder", str(d->remainder)}};
  } else if (const auto* w = std::get_if<carmichael::WitnessPoint>(&v.certificate)) {
    cert = {{"kind", "witness-point"}, {"prime", str(w->prime)}, {"point", point_json(w->point)}};
  } else {
    cert = {{"kind", "positive"}};
  }
  return {{"n", str(v.n.value())},
          {"curve", curve_mod_n_json(v.curve)},
          {"verdict", v.verdict},
          {"method", carmichael::to_string(v.method)},
          {"certain", v.certain},
          {"a_n", str(v.a_n)},
          {"value", str(v.value)},
          {"transcript", transcript},
          {"certificate", cert},
          {"points_checked", str(v.points_checked)}};
}

CarmichaelVerdict verdict_from_json(const json& j) {
  CarmichaelVerdict v;
  v.curve = curve_mod_n_from_json(field(j, "curve"));
  const u64 n = number<u64>(j, "n");
  if (n != v.curve.n().value()) throw InvalidInput("n does not match the curve modulus");
  v.n = v.curve.n();
  const auto& verdict = field(j, "verdict");
  if (!verdict.is_boolean()) throw InvalidInput("verdict must be a boolean");
  v.verdict = verdict.get<bool>();
  v.method = method_from(field(j, "method").get<std::string>());
  v.certain = j.value("certain", true);
  v.a_n = number<i64>(j, "a_n");
  v.value = number<i64>(j, "value");
  if (j.contains("transcript")) {
    for (const auto& t : j.at("transcript")) {
      carmichael::PrimeCheck pc;
      pc.prime = number<u64>(t, "prime");
      pc.exponent = field(t, "exponent").get<int>();
      pc.trace_p = number<i64>(t, "trace_p");
      pc.trace_pk = number<i64>(t, "trace_pk");
      pc.group_exponent = number<u64>(t, "group_exponent");
      pc.divides = field(t, "divides").get<bool>();
      v.transcript.push_back(pc);
    }
  }
  const auto& cert = field(j, "certificate");
  const std::string kind = field(cert, "kind").get<std::string>();
  if (kind == "divisibility-failure") {
    v.certificate = carmichael::DivisibilityFailure{number<u64>(cert, "prime"), number<u64>(cert, "group_exponent"),
                                                    number<i64>(cert, "value"), number<i64>(cert, "remainder")};
  } else if (kind == "witness-point") {
    v.certificate = carmichael::WitnessPoint{point_from_json(field(cert, "point")), number<u64>(cert, "prime")};
  } else if (kind == "positive") {
    v.certificate = carmichael::Positive{};
  } else {
    throw InvalidInput("unknown certificate kind '" + kind + "'");
  }
  if (j.contains("points_checked")) v.points_checked = number<u64>(j, "points_checked");
  return v;
}

json estimate_json(const census::ProbabilityEstimate& e) {
  json j = {{"n", str(e.n)}, {"mode", census::to_string(e.mode)}};
  if (e.mode == census::Mode::exact) {
    j["numerator"] = str(e.numerator);
    j["denominator"] = str(e.denominator);
  } else {
    j["successes"] = str(e.successes);
    j["samples"] = str(e.samples);
    j["lower"] = e.lower;
    j["upper"] = e.upper;
    j["seed"] = str(e.seed);
    j["workers"] = e.workers;
  }
  j["value"] = e.value();
  return j;
}

json profile_json(const census::StructuralProfile& s) {
  return {{"n", str(s.n)},
          {"C", s.C},
          {"gamma_small", s.gamma_small},
          {"gamma_log4", s.gamma_log4},
          {"has_huge_prime", s.has_huge_prime},
          {"two_medium_squarefree_primes", s.two_medium_squarefree_primes},
          {"medium_prime_count_logC", s.medium_prime_count_logC},
          {"many_medium_primes", s.many_medium_primes},
          {"prime_above_log4", s.prime_above_log4},
          {"squarefree_prime_count", s.squarefree_prime_count},
          {"bracket_shared_primes", s.bracket_shared_primes}};
}

json trichotomy_json(const census::TrichotomyReport& r) {
  json j = {{"outcome", census::to_string(r.outcome)}};
  if (r.outcome == census::Case::not_applicable) return j;
  j["case1"] = r.case1;
  j["case2"] = r.case2;
  j["case3"] = r.case3;
  j["case2_from_q"] = r.case2_from_q;
  j["a_d"] = str(r.a_d);
  j["a_p1"] = str(r.a_p1);
  j["a_p2"] = str(r.a_p2);
  j["e2"] = str(r.e2);
  j["t"] = str(r.t);
  j["candidates"] = str(r.candidates);
  return j;
}

json decay_json(const census::DecaySweep& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"n", str(r.n)},
                    {"samples", str(r.estimate.samples)},
                    {"successes", str(r.estimate.successes)},
                    {"lower", r.estimate.lower},
                    {"upper", r.estimate.upper},
                    {"gamma_small", r.profile.gamma_small},
                    {"has_huge_prime", r.profile.has_huge_prime},
                    {"two_medium_squarefree_primes", r.profile.two_medium_squarefree_primes}});
  }
  return {{"rows", rows},
          {"fitted_upper_C", s.fitted_upper_C},
          {"fitted_point_C", s.fitted_point_C},
          {"argmax_n", str(s.argmax_n)}};
}

json joint_json(const census::JointSweep& s) {
  return {{"x", str(s.x)},
          {"samples_n", str(s.samples_n)},
          {"samples_e", str(s.samples_e)},
          {"prime_power_draws", str(s.prime_power_draws)},
          {"successes", str(s.successes)},
          {"trials", str(s.trials)},
          {"estimate", s.estimate},
          {"upper", s.upper},
          {"scaled_estimate", s.scaled_estimate},
          {"scaled_upper", s.scaled_upper}};
}

json deuring_json(const classnum::DeuringReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"a", str(row.a)},
                    {"predicted", rational_text(row.predicted)},
                    {"actual", str(row.actual)},
                    {"match", row.match}});
  }
  return {{"p", str(r.p)},
          {"rows", rows},
          {"good_pairs", str(r.good_pairs)},
          {"predicted_total", rational_text(r.predicted_total)},
          {"mass_identity", r.mass_identity},
          {"all_match", r.all_match}};
}

json interval_json(const intervals::IntervalCountReport& r) {
  return {{"x", str(r.x)},
          {"window_lo", str(r.window_lo)},
          {"window_hi", str(r.window_hi)},
          {"parameter", r.parameter},
          {"count", str(r.count)},
          {"formula", r.formula},
          {"constant", r.constant},
          {"bound", r.bound()},
          {"pass", r.pass}};
}

}  // namespace ecarm::io
