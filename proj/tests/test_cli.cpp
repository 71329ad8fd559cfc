#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecarm/cli.hpp"
#include "ecarm/serialize.hpp"

using ecarm::io::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = ecarm::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("witness and criterion anchors") {
  const auto w = run({"witness", "35"});
  REQUIRE(w.code == 0);
  const auto d = w.doc();
  CHECK(d["tool"] == "ecarm");
  CHECK(d["config"]["seed"] == "0");
  CHECK(d["result"]["verdict"] == false);
  CHECK(d["result"]["curve"]["combined"]["text"] == "35: [8,7]");
  CHECK(d["result"]["certificate"]["kind"] == "divisibility-failure");
  CHECK(d["result"]["certificate"]["prime"] == "5");

  const auto t = run({"test", "35", "--curve", "10,21"});
  REQUIRE(t.code == 0);
  CHECK(t.doc()["result"]["verdict"] == true);
  CHECK(t.doc()["result"]["value"] == "36");
  const auto comp = run({"test", "35", "--curve", "5: [10,21]; 7^1: [3,0]"});
  REQUIRE(comp.code == 0);
  CHECK(comp.doc()["result"]["verdict"] == true);

  const auto bad = run({"witness", "49"});
  CHECK(bad.code == 1);
  CHECK(bad.doc()["error"]["message"].get<std::string>().find("prime power") != std::string::npos);
  CHECK(run({"test", "35", "--curve", "5: [1,1]"}).code == 1);
  CHECK(run({"test", "35", "--curve", "0,0"}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"witness"}).code == 2);
  CHECK(run({"witness", "abc"}).code == 2);
  CHECK(run({"estimate", "35"}).code == 2);
  CHECK(run({"witness", "35", "--format", "xml"}).code == 2);
  CHECK(run({"witness", "35", "--workers", "0"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify accepts emitted certificates and rejects tampering") {
  for (const auto& args : std::vector<std::vector<std::string>>{{"witness", "35"},
                                                                {"witness", "1001"},
                                                                {"test", "35", "--curve", "10,21"},
                                                                {"test", "35", "--curve", "8,7"},
                                                                {"test-def", "35", "--curve", "8,7"},
                                                                {"test-def", "35", "--curve", "10,21"},
                                                                {"test-def", "77", "--curve", "1,1", "--exhaustive-bound",
                                                                 "10", "--samples", "30", "--seed", "5"}}) {
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const auto path = write_temp("ecarm_cert.json", r.out);
    const auto v = run({"verify", path});
    CHECK_MESSAGE(v.code == 0, args[0] << " " << args[1]);
    CHECK(v.doc()["result"]["ok"] == true);
    // The bare verdict object is accepted too.
    const auto bare = write_temp("ecarm_bare.json", r.doc()["result"].dump());
    CHECK(run({"verify", bare}).code == 0);
  }
  auto doc = run({"witness", "35"}).doc();
  doc["result"]["value"] = "35";
  CHECK(run({"verify", write_temp("ecarm_bad.json", doc.dump())}).code == 1);
  doc = run({"witness", "35"}).doc();
  doc["result"]["certificate"]["group_exponent"] = "7";
  const auto tampered = run({"verify", write_temp("ecarm_bad.json", doc.dump())});
  CHECK(tampered.code == 1);
  CHECK(tampered.doc()["result"]["ok"] == false);
  doc = run({"witness", "35"}).doc();
  doc["result"]["curve"]["components"][0]["curve"]["coefficients"][0] = "4";
  CHECK(run({"verify", write_temp("ecarm_bad.json", doc.dump())}).code == 1);
  CHECK(run({"verify", write_temp("ecarm_bad.json", "{not json")}).code == 1);
  CHECK(run({"verify", "/nonexistent/file.json"}).code == 1);
}

TEST_CASE("experiments reproduce from their config") {
  const auto a = run({"estimate", "35", "--samples", "2000", "--seed", "17", "--workers", "2"});
  const auto b = run({"estimate", "35", "--samples", "2000", "--seed", "17", "--workers", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.doc()["config"]["workers"] == 2);
  CHECK(a.doc()["result"]["seed"] == "17");
  std::vector<std::string> replay = a.doc()["config"]["argv"].get<std::vector<std::string>>();
  CHECK(run(replay).out == a.out);

  const auto ex = run({"exact", "35"});
  REQUIRE(ex.code == 0);
  CHECK(ex.doc()["result"]["denominator"] == "840");
  CHECK(run({"exact", "25"}).code == 1);
  CHECK(run({"exact", "10013", "--exact-bound", "10000"}).code == 1);

  const auto sweep = run({"sweep", "--min", "30", "--max", "80", "--samples", "20", "--seed", "3", "--format", "csv"});
  REQUIRE(sweep.code == 0);
  CHECK(sweep.out.rfind("n,samples,successes,lower,upper", 0) == 0);
  const auto filtered = run({"sweep", "--min", "30", "--max", "400", "--samples", "5", "--filter", "not-gamma-small"});
  REQUIRE(filtered.code == 0);
  for (const auto& row : filtered.doc()["result"]["rows"]) CHECK(row["gamma_small"] == false);
  CHECK(run({"sweep", "--min", "30", "--max", "80", "--samples", "5", "--filter", "bogus"}).code == 1);

  const auto j = run({"joint", "--x", "200", "--samples-n", "20", "--samples-e", "5", "--seed", "2"});
  REQUIRE(j.code == 0);
  CHECK(j.doc()["result"]["trials"] == "100");
}

TEST_CASE("worker default comes from the environment") {
  setenv("ECARM_WORKERS", "3", 1);
  CHECK(run({"exact", "35"}).doc()["config"]["workers"] == 3);
  unsetenv("ECARM_WORKERS");
  CHECK(run({"exact", "35"}).doc()["config"]["workers"] == 1);
}

TEST_CASE("census, class numbers, profile and interval counts") {
  const auto d = run({"deuring", "5"}).doc()["result"];
  CHECK(d["good_pairs"] == "20");
  CHECK(d["all_match"] == true);
  CHECK(run({"classnum", "19", "--terms", "1000"}).doc()["result"]["hurwitz"] == "1");
  CHECK(run({"classnum", "3"}).doc()["result"]["hurwitz"] == "1/3");
  CHECK(run({"profile", "720"}).doc()["result"]["gamma_small"] == false);
  const auto tri = run({"trichotomy", "35", "--curve", "10,21", "--p1", "5", "--p2", "7"}).doc()["result"];
  CHECK(tri["case2"] == true);
  CHECK(tri["case3"] == true);
  CHECK(run({"lemma", "abc", "--x", "100", "--k", "1"}).doc()["result"]["count"] == "3");
  const auto si = run({"lemma", "shortint", "--x", "100000", "--primes", "2"}).doc()["result"];
  CHECK(si["strong_regime"] == true);
  CHECK(si["explicit_bound"] == "24");
  CHECK(run({"lemma", "nonsmooth", "--x", "10000", "--c", "0.05"}).code == 0);
  CHECK(run({"lemma", "vaughan", "12", "-U", "3", "-V", "2"}).doc()["result"]["holds"] == true);
  CHECK(run({"lemma", "vaughan", "12", "-U", "12", "-V", "2"}).code == 1);
  const auto lo = run({"lemma", "lucas-ones", "--p", "2", "--a=-1", "--K", "50"}).doc()["result"];
  CHECK(lo["solutions"] == json::array({4}));
  CHECK(run({"lemma", "baker", "2"}).code == 0);
  CHECK(run({"lemma"}).code == 2);
  const auto text = run({"lemma", "abc", "--x", "100", "--k", "1", "--format", "text"});
  CHECK(text.out.find("result.count: 3") != std::string::npos);
}
