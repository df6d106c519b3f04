#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "doctest.h"
#include "json.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

struct CliOut {
  int code = -1;
  std::string out;
};

CliOut run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + std::string(GENFORM_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t k = 0;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  int st = pclose(p);
  CliOut r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = out;
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(GENFORM_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("verify runs every suite and repeats byte for byte") {
  CliOut r = run_cli("verify");
  REQUIRE(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["command"] == "verify");
  REQUIRE(j["suites"].size() == 5);
  for (const auto& s : j["suites"]) {
    CHECK(s["pass"] == true);
    CHECK(s["residual"].get<double>() < 1e-9);
    CHECK(s["cases"].get<int>() > 0);
  }
  CHECK(j["pass"] == true);

  CliOut again = run_cli("verify");
  CHECK(again.code == 0);
  CHECK(again.out == r.out);
}

TEST_CASE("verify filters suites and surfaces injected sign errors") {
  CliOut one = run_cli("verify --suite clifford");
  REQUIRE(one.code == 0);
  ordered_json j = ordered_json::parse(one.out);
  REQUIRE(j["suites"].size() == 1);
  CHECK(j["suites"][0]["name"] == "clifford");

  CliOut flipped = run_cli("verify --flip-suite spinrep");
  CHECK(flipped.code == 4);
  ordered_json jf = ordered_json::parse(flipped.out);
  CHECK(jf["pass"] == false);
  CHECK(jf["first_failure"] == "spinrep");

  CHECK(run_cli("verify --suite bogus").code == 1);
}

TEST_CASE("analyze emits the fiber tables of the volume structure") {
  CliOut r = run_cli("analyze '{\"kind\":\"sl\",\"n\":2}'");
  REQUIRE(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["isotropy"]["dim"] == 15);
  CHECK(j["fiber"]["complex_dims"] == ordered_json::array({1, 4, 7, 8, 8}));
  CHECK(j["symbol"]["all_exact"] == true);
  CHECK(j["topological"]["pass"] == true);
  CHECK(j["topological"]["frequencies"] == 312);
  CHECK(j["pass"] == true);
}

TEST_CASE("analyze reports the dimension eight splittings") {
  CliOut r = run_cli("analyze '{\"kind\":\"spin7\"}' --trunc 0");
  REQUIRE(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["isotropy"]["dim"] == 42);
  CHECK(j["fiber"]["complex_dims"][2] == 79);
  CHECK(j["antiselfdual"]["dim_even_minus"] == 64);
  CHECK(j["antiselfdual"]["containment_residual"].get<double>() < 1e-8);
  CHECK(j["pass"] == true);
}

TEST_CASE("deform runs the shipped job deterministically") {
  CliOut r = run_cli("deform " + fixture("sl2_t4_deform.json"));
  REQUIRE(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["status"] == "ok");
  REQUIRE(j["coefficients"].size() == 6);
  for (const auto& o : j["orders"]) {
    double ob = o["ob_norm"].get<double>();
    CHECK(o["ob_harmonic"].get<double>() <= 1e-9 * ob + 1e-12);
  }
  for (const auto& res : j["residuals"]) CHECK(res.get<double>() <= 1e-8);
  CHECK(j["pass"] == true);

  CliOut again = run_cli("deform " + fixture("sl2_t4_deform.json"));
  CHECK(again.out == r.out);
}

TEST_CASE("deform maps statuses onto exit codes") {
  CliOut trunc = run_cli("deform " + fixture("sl2_t4_deform.json") + " --trunc 3");
  CHECK(trunc.code == 3);
  CHECK(ordered_json::parse(trunc.out)["status"] == "truncation_too_small");

  CliOut zero = run_cli("deform '{\"structure\":{\"kind\":\"sl\",\"n\":2},\"order\":3,\"trunc\":4}'");
  CHECK(zero.code == 0);
  ordered_json jz = ordered_json::parse(zero.out);
  for (const auto& res : jz["residuals"]) CHECK(res.get<double>() == 0.0);

  CHECK(run_cli("deform '{\"structure\":{\"kind\":\"nope\",\"n\":2}}'").code == 1);
  CHECK(run_cli("deform " + fixture("sl2_t4_deform.json") + " --order 0").code == 1);
  CHECK(run_cli("analyze no_such_file.json").code == 1);
}

TEST_CASE("decompose and ddj cover the type decomposition") {
  CliOut d = run_cli("decompose '{\"kind\":\"sl\",\"n\":2}'");
  REQUIRE(d.code == 0);
  ordered_json jd = ordered_json::parse(d.out);
  CHECK(jd["pure"] == true);
  CHECK(jd["tower_dims"] == ordered_json::array({1, 4, 6, 4, 1}));
  CHECK(jd["j_square_residual"].get<double>() < 1e-9);

  // no annihilator tower in dimension eight, rejected as a config error
  CHECK(run_cli("decompose '{\"kind\":\"spin7\"}'").code == 1);

  CliOut hk = run_cli("decompose '{\"kind\":\"hk\",\"n\":1}'");
  REQUIRE(hk.code == 0);
  CHECK(ordered_json::parse(hk.out)["pure"] == true);

  CliOut dj = run_cli("ddj");
  REQUIRE(dj.code == 0);
  ordered_json jj = ordered_json::parse(dj.out);
  CHECK(jj["pass"] == true);
  CHECK(jj["sequence"]["h1"] == 7);
  CHECK(jj["sequence"]["hm1"] == 1);
  CHECK(jj["sequence"]["h2bar"] == 6);

  CHECK(run_cli("ddj '{\"kind\":\"spin7\"}'").code == 1);
}

TEST_CASE("text format and the thread cap env var") {
  CliOut t = run_cli("verify --suite pairing --format text");
  CHECK(t.code == 0);
  CHECK(t.out.find("pass: true") != std::string::npos);
  CHECK(t.out.find('{') == std::string::npos);

  // env assignments ride through the shell in front of the binary path
  CliOut plain = run_cli("verify --suite pairing");
  CliOut capped = run_cli("verify --suite pairing", "GENFORM_THREADS=2 ");
  CHECK(capped.code == 0);
  CHECK(capped.out == plain.out);

  CliOut bad = run_cli("verify", "GENFORM_THREADS=abc ");
  CHECK(bad.code == 1);
}
