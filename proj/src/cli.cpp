#include "ecarm/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ecarm/parallel.hpp"
#include "ecarm/serialize.hpp"

namespace ecarm::cli {

using io::json;

namespace {

struct Config {
  u64 seed = 0;
  unsigned workers = 1;
  std::string format = "json";
  u64 census_bound = classnum::kCensusPrimeBound;
  u64 exact_bound = census::kExactBound;
  u64 exhaustive_bound = carmichael::kExhaustiveBound;

  u64 n = 0;
  std::string curve;
  std::string file;
  u64 samples = 0;
  u64 samples_n = 0;
  u64 samples_e = 0;
  u64 min = 0;
  u64 max = 0;
  u64 x = 0;
  u64 p = 0;
  u64 p1 = 0;
  u64 p2 = 0;
  u64 d = 0;
  u64 k = 1;
  u64 U = 1;
  u64 V = 1;
  i64 a = 0;
  unsigned K = 200;
  double c = 0.05;
  double C = 7;
  u64 terms = 1'000'000;
  std::vector<u64> primes;
  std::vector<std::string> filters;
};

// "A,B" is a short curve mod n; otherwise ';'-separated "m: [...]" curves,
// either one curve mod n or one per prime power of n.
curves::CurveModN parse_curve_spec(const arith::FactoredInteger& n, const std::string& spec) {
  if (spec.find(':') == std::string::npos) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) throw InvalidInput("curve spec must be 'A,B' or 'p^k: [...]' components");
    auto as_int = [](const std::string& s) {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (s.find_first_not_of(" \t", used) != std::string::npos) throw InvalidInput("bad coefficient '" + s + "'");
      return static_cast<i64>(v);
    };
    i64 A = 0, B = 0;
    try {
      A = as_int(spec.substr(0, comma));
      B = as_int(spec.substr(comma + 1));
    } catch (const std::logic_error&) {
      throw InvalidInput("bad coefficients in '" + spec + "'");
    }
    return curves::CurveModN::from_curve(curves::WeierstrassCurve::short_form(n.value(), A, B));
  }
  std::vector<curves::WeierstrassCurve> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ';');) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    parts.push_back(curves::parse_curve(item));
  }
  if (parts.size() == 1 && parts[0].modulus() == n.value()) return curves::CurveModN::from_curve(parts[0]);
  std::vector<curves::LocalComponent> comps;
  for (auto& c : parts) {
    if (!c.is_local()) throw InvalidInput("component " + c.to_string() + " is not modulo a prime power");
    comps.push_back({c.prime(), c.exponent(), c});
  }
  auto curve = curves::CurveModN::assemble(std::move(comps));
  if (curve.n().value() != n.value()) {
    throw InvalidInput("curve components multiply to " + std::to_string(curve.n().value()) + ", not " +
                       std::to_string(n.value()));
  }
  return curve;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, scalar_text(j));
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void write_csv(const json& result, std::ostream& out) {
  std::vector<json> rows;
  if (result.contains("rows") && result.at("rows").is_array()) {
    for (const auto& r : result.at("rows")) rows.push_back(r);
  } else {
    rows.push_back(result);
  }
  std::vector<std::string> header;
  std::vector<std::vector<std::pair<std::string, std::string>>> cells;
  for (const auto& r : rows) {
    cells.emplace_back();
    flatten(r, "", cells.back());
  }
  if (!cells.empty())
    for (const auto& [k, v] : cells.front()) header.push_back(k);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_cell(header[i]);
  out << "\n";
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i].second);
    out << "\n";
  }
}

void emit(const json& report, const std::string& format, std::ostream& out) {
  if (format == "json" || report.contains("error")) {
    out << report.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    write_csv(report.at("result"), out);
    return;
  }
  std::vector<std::pair<std::string, std::string>> lines;
  flatten(report, "", lines);
  for (const auto& [k, v] : lines) out << k << ": " << v << "\n";
}

census::DecayFilter parse_filters(const std::vector<std::string>& filters) {
  census::DecayFilter f;
  for (const auto& raw : filters) {
    const bool negated = raw.rfind("not-", 0) == 0;
    const std::string name = negated ? raw.substr(4) : raw;
    if (name == "gamma-small") {
      f.gamma_small = !negated;
    } else if (name == "huge-prime") {
      f.has_huge_prime = !negated;
    } else if (name == "two-medium") {
      f.two_medium_squarefree_primes = !negated;
    } else {
      throw InvalidInput("unknown filter '" + raw + "' (gamma-small, huge-prime, two-medium, each with optional not-)");
    }
  }
  return f;
}

json run_command(const std::string& name, const Config& cfg, int& exit_code) {
  using arith::factorize;
  if (name == "witness") return io::verdict_json(carmichael::witness(factorize(cfg.n)).verdict);
  if (name == "test") {
    return io::verdict_json(carmichael::is_carmichael_criterion(parse_curve_spec(factorize(cfg.n), cfg.curve)));
  }
  if (name == "test-def") {
    carmichael::DefinitionOptions opt;
    opt.exhaustive_bound = cfg.exhaustive_bound;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    return io::verdict_json(carmichael::is_carmichael_definition(parse_curve_spec(factorize(cfg.n), cfg.curve), opt));
  }
  if (name == "verify") {
    std::ifstream in(cfg.file);
    if (!in) throw InvalidInput("cannot read " + cfg.file);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
    const json& body = doc.is_object() && doc.contains("result") ? doc.at("result") : doc;
    const auto verdict = io::verdict_from_json(body);
    const auto r = carmichael::verify_certificate(verdict);
    if (!r.ok) exit_code = 1;
    return {{"ok", r.ok}, {"reason", r.reason}, {"n", std::to_string(verdict.n.value())}, {"verdict", verdict.verdict}};
  }
  if (name == "exact") return io::estimate_json(census::exact_probability(factorize(cfg.n), cfg.exact_bound));
  if (name == "estimate") {
    return io::estimate_json(census::estimate_probability(factorize(cfg.n), cfg.samples, cfg.seed, cfg.workers));
  }
  if (name == "sweep") {
    return io::decay_json(census::decay_sweep(cfg.min, cfg.max, cfg.samples, cfg.seed, cfg.workers, parse_filters(cfg.filters)));
  }
  if (name == "joint") return io::joint_json(census::joint_sweep(cfg.x, cfg.samples_n, cfg.samples_e, cfg.seed, cfg.workers));
  if (name == "deuring") return io::deuring_json(classnum::deuring_check(cfg.p, cfg.workers, cfg.census_bound));
  if (name == "classnum") {
    const auto h = classnum::hurwitz_class_number(cfg.d);
    return {{"D", std::to_string(cfg.d)},
            {"hurwitz", io::rational_text(h.value)},
            {"hurwitz_value", boost::rational_cast<double>(h.value)},
            {"analytic", classnum::analytic_class_number(cfg.d, cfg.terms)},
            {"terms", std::to_string(cfg.terms)}};
  }
  if (name == "profile") {
    const auto f = factorize(cfg.n);
    const auto m = arith::multiplicative_profile(f);
    json j = io::profile_json(census::structural_profile(f, cfg.C));
    j["factorization"] = arith::to_string(f);
    j["gamma"] = std::to_string(m.gamma);
    j["e"] = std::to_string(m.e_value);
    j["omega"] = m.omega;
    j["p_plus"] = std::to_string(m.p_plus);
    return j;
  }
  if (name == "trichotomy") {
    return io::trichotomy_json(census::trichotomy_check(parse_curve_spec(factorize(cfg.n), cfg.curve), cfg.p1, cfg.p2));
  }
  if (name == "abc") return io::interval_json(intervals::count_e_small(cfg.x, cfg.k));
  if (name == "shortint") {
    auto r = intervals::count_smooth_factor_interval(cfg.x, cfg.primes);
    auto j = io::interval_json(r);
    std::vector<u64> ps = cfg.primes;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    j["strong_regime"] = intervals::strong_regime(cfg.x, ps.size());
    j["explicit_bound"] = std::to_string(24 * ps.size());
    return j;
  }
  if (name == "nonsmooth") return io::interval_json(intervals::count_large_prime_factor(cfg.x, cfg.c));
  if (name == "vaughan") {
    const auto s = intervals::vaughan_sides(cfg.n, cfg.U, cfg.V);
    auto side = [](const intervals::LogCombination& c) {
      json j = json::object();
      for (const auto& [p, v] : c) j[std::to_string(p)] = std::to_string(v);
      return j;
    };
    return {{"n", std::to_string(cfg.n)}, {"U", std::to_string(cfg.U)}, {"V", std::to_string(cfg.V)},
            {"holds", s.lhs == s.rhs}, {"lhs_log_coefficients", side(s.lhs)}, {"rhs_log_coefficients", side(s.rhs)}};
  }
  if (name == "baker") return {{"p", std::to_string(cfg.p)}, {"cutoff", intervals::baker_cutoff(cfg.p).str()}};
  if (name == "lucas-ones") {
    json ks = json::array();
    for (unsigned k : intervals::lucas_ones(cfg.p, cfg.a, cfg.K)) ks.push_back(k);
    return {{"p", std::to_string(cfg.p)}, {"a", std::to_string(cfg.a)}, {"K", cfg.K}, {"solutions", ks},
            {"baker_cutoff", intervals::baker_cutoff(cfg.p).str()}};
  }
  throw InvalidInput("unknown subcommand " + name);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  cfg.workers = parallel::default_workers();
  CLI::App app{"Elliptic Carmichael numbers: tests, certificates and experiments", "ecarm"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  app.add_option("--seed", cfg.seed, "64-bit seed");
  app.add_option("--workers", cfg.workers, "worker threads (default: ECARM_WORKERS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--census-bound", cfg.census_bound, "largest prime for census runs")->check(CLI::PositiveNumber);
  app.add_option("--exact-bound", cfg.exact_bound, "largest n for exact probabilities")->check(CLI::PositiveNumber);
  app.add_option("--exhaustive-bound", cfg.exhaustive_bound, "largest n for exhaustive point scans")
      ->check(CLI::PositiveNumber);

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  sub("witness", "curve mod n for which n is not elliptic Carmichael")->add_option("n", cfg.n)->required();
  for (const char* name : {"test", "test-def"}) {
    auto* s = sub(name, std::string(name) == "test" ? "criterion test" : "definition test");
    s->add_option("n", cfg.n)->required();
    s->add_option("--curve", cfg.curve, "'A,B' or 'p^k: [...]' components separated by ';'")->required();
    if (std::string(name) == "test-def") s->add_option("--samples", cfg.samples, "random points when n is over the bound");
  }
  sub("verify", "recheck a verdict or certificate")->add_option("file", cfg.file)->required();
  sub("exact", "exact Carmichael probability over curves mod n")->add_option("n", cfg.n)->required();
  {
    auto* s = sub("estimate", "Monte Carlo Carmichael probability");
    s->add_option("n", cfg.n)->required();
    s->add_option("--samples", cfg.samples)->required();
  }
  {
    auto* s = sub("sweep", "decay experiment over a range of n");
    s->add_option("--min", cfg.min)->required();
    s->add_option("--max", cfg.max)->required();
    s->add_option("--samples", cfg.samples)->required();
    s->add_option("--filter", cfg.filters, "gamma-small, huge-prime, two-medium, or not-<flag>");
  }
  {
    auto* s = sub("joint", "random n in [x, 2x] and random curves");
    s->add_option("--x", cfg.x)->required();
    s->add_option("--samples-n", cfg.samples_n)->required();
    s->add_option("--samples-e", cfg.samples_e)->required();
  }
  sub("deuring", "point-count census against class numbers")->add_option("p", cfg.p)->required();
  {
    auto* s = sub("classnum", "Hurwitz class number H(D)");
    s->add_option("D", cfg.d)->required();
    s->add_option("--terms", cfg.terms, "terms of the truncated L-series");
  }
  {
    auto* s = sub("profile", "structural flags of n");
    s->add_option("n", cfg.n)->required();
    s->add_option("--C", cfg.C, "exponent in the log^C n threshold");
  }
  {
    auto* s = sub("trichotomy", "three-case check for a Carmichael pair and primes p1 < p2");
    s->add_option("n", cfg.n)->required();
    s->add_option("--curve", cfg.curve)->required();
    s->add_option("--p1", cfg.p1)->required();
    s->add_option("--p2", cfg.p2)->required();
  }
  auto* lemma = sub("lemma", "short-interval counts, Vaughan's identity, Lucas ones");
  lemma->require_subcommand(1, 1);
  auto lsub = [&](const char* name, const char* help) {
    auto* s = lemma->add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  {
    auto* s = lsub("abc", "n in [x, x + sqrt x] with e(n) < n/k");
    s->add_option("--x", cfg.x)->required();
    s->add_option("--k", cfg.k)->required();
  }
  {
    auto* s = lsub("shortint", "n in [x, x + sqrt x] with a large P-smooth part");
    s->add_option("--x", cfg.x)->required();
    s->add_option("--primes", cfg.primes, "comma-separated primes")->delimiter(',');
  }
  {
    auto* s = lsub("nonsmooth", "n in [x, x + 0.1 sqrt x] with P+(n) > x^(1/2 + c)");
    s->add_option("--x", cfg.x)->required();
    s->add_option("--c", cfg.c)->required();
  }
  {
    auto* s = lsub("vaughan", "exact check of Vaughan's identity at n");
    s->add_option("n", cfg.n)->required();
    s->add_option("-U,--u-bound", cfg.U)->required();
    s->add_option("-V,--v-bound", cfg.V)->required();
  }
  lsub("baker", "cutoff beyond which a_{p^k} != 1")->add_option("p", cfg.p)->required();
  {
    auto* s = lsub("lucas-ones", "k <= K with a_{p^k} = 1");
    s->add_option("--p", cfg.p)->required();
    s->add_option("--a", cfg.a)->required()->allow_extra_args(false);
    s->add_option("--K", cfg.K)->required();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return 2;
  }

  std::string name;
  CLI::App* chosen = app.get_subcommands().front();
  name = chosen->get_name();
  std::string path = name;
  if (name == "lemma") {
    name = lemma->get_subcommands().front()->get_name();
    path += " " + name;
  }
  json report = {{"tool", "ecarm"},
                 {"version", kVersion},
                 {"config",
                  {{"subcommand", path},
                   {"argv", args},
                   {"seed", std::to_string(cfg.seed)},
                   {"workers", cfg.workers},
                   {"format", cfg.format},
                   {"census_bound", std::to_string(cfg.census_bound)},
                   {"exact_bound", std::to_string(cfg.exact_bound)},
                   {"exhaustive_bound", std::to_string(cfg.exhaustive_bound)}}}};
  int code = 0;
  try {
    report["result"] = run_command(name, cfg, code);
  } catch (const InvalidInput& e) {
    report["error"] = {{"kind", "domain"}, {"message", e.what()}};
    code = 1;
  } catch (const InvariantViolation& e) {
    report["error"] = {{"kind", "invariant"}, {"message", e.what()}};
    code = 1;
  }
  emit(report, cfg.format, out);
  return code;
}

}  // namespace ecarm::cli
