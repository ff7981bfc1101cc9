#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lindyn/config.hpp"
#include "lindyn/csv.hpp"
#include "lindyn/errors.hpp"
#include "lindyn/runner.hpp"

using namespace lindyn;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "lindyn_runner_tests";
  fs::create_directories(d);
  return d;
}

std::string write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& command, const std::string& config, const std::string& out,
              std::optional<std::uint64_t> seed = std::nullopt) {
  RunOptions o;
  o.command = command;
  o.config_path = config;
  o.out_dir = (scratch_dir() / out).string();
  o.seed = seed;
  return run_experiment(o);
}

}  // namespace

TEST_CASE("operator configs round trip through their serialization") {
  const std::vector<Operator> ops = {
      Operator::identity(),
      Operator::identity(IndexDomain::Integers),
      Operator::weighted_backward_shift({Rational(4)}, Rational(2)),
      Operator::weighted_forward_shift({}, Rational(1, 2)),
      Operator::doubling_shift_fixed_line(),
      Operator::bilateral_shift(Rational(1, 2)),
      Operator::bilateral_forward_shift(Rational(3)),
      Operator::diagonal({Rational(3), Rational(0)}, Rational(1, 2)),
      Operator::rotation(Rational(3, 5), Rational(4, 5)),
      Operator::scalar_multiple(Rational(3), Operator::doubling_shift_fixed_line()),
      Operator::direct_sum(Operator::diagonal({}, Rational(1, 2)), Operator::identity(), 2),
      Operator::product({Operator::rotation(Rational(3, 5), Rational(4, 5)),
                         Operator::diagonal({}, Rational(2))},
                        {2, 3}),
  };
  for (const Operator& op : ops) {
    CHECK(operator_from_config_text(operator_to_config_text(op)) == op);
  }

  CHECK(operator_from_config_text(R"({"op":"rotation","a":"3/5","b":"4/5"})") ==
        Operator::rotation(Rational(3, 5), Rational(4, 5)));
  CHECK(operator_from_config_text(R"({"op":"diagonal","prefix":["3/1"],"default":"1/2"})") ==
        Operator::diagonal({Rational(3)}, Rational(1, 2)));
}

TEST_CASE("operator config errors are typed by failure kind") {
  CHECK_THROWS_AS(operator_from_config_text("not json at all"), ParseError);
  CHECK_THROWS_AS(operator_from_config_text(R"("just a string")"), ConfigError);
  CHECK_THROWS_AS(operator_from_config_text(R"({"op":"frobnicate"})"), ConfigError);
  CHECK_THROWS_AS(operator_from_config_text(R"({"op":"diagonal"})"), ConfigError);
  // Rationals must be strings, never JSON numbers.
  CHECK_THROWS_AS(operator_from_config_text(R"({"op":"diagonal","default":0.5})"), ConfigError);
  CHECK_THROWS_AS(operator_from_config_text(R"({"op":"diagonal","default":"0.5"})"), ParseError);
  CHECK_THROWS_AS(operator_from_config_text(R"({"op":"identity","domain":"reals"})"),
                  ConfigError);
  CHECK_THROWS_AS(
      operator_from_config_text(R"({"op":"rotation","a":"1/2","b":"1/2"})"), DomainError);
  CHECK_THROWS_AS(
      operator_from_config_text(R"({"op":"direct_sum","left":{"op":"identity"}})"), ConfigError);
  CHECK_THROWS_AS(operator_from_config_text(
                      R"({"op":"product","factors":[{"op":"identity"}],"widths":["3"]})"),
                  ConfigError);
}

TEST_CASE("successful experiments emit certificates and a clean report") {
  const std::string cfg = write_config("chains_ok.json", R"({
    "operator": {"op": "identity"},
    "command": "chains",
    "params": {"construction": "span_connect", "x": "{0:1/1}", "lambda": "-1/1",
               "eps": "1/1"}
  })");
  const RunResult r = run("chains", cfg, "chains_ok");
  CHECK(r.exit_code == 0);
  CHECK(r.message.empty());

  const auto rows = read_csv((scratch_dir() / "chains_ok/certificates.csv").string());
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"step", "point", "defect", "tolerance"});
  CHECK(rows[1] == std::vector<std::string>{"0", "{0:1/1}", "1/2", "1/1"});
  CHECK(rows[3][1] == "{}");
  CHECK(rows[5] == std::vector<std::string>{"4", "{0:-1/1}", "", "1/1"});

  const std::string report = slurp(scratch_dir() / "chains_ok/report.md");
  CHECK(report.find("# lindyn report") == 0);
  CHECK(report.find("command: chains") != std::string::npos);
  CHECK(report.find("norm: 1") != std::string::npos);
  CHECK(report.find("All certificates verified.") != std::string::npos);
  CHECK(report.find("FAILED") == std::string::npos);
}

TEST_CASE("certificate failures exit 1 and record the reason") {
  // Over a 3-step window the separation bound cannot reach 1/4.
  const std::string cfg = write_config("l1_short.json", R"({
    "operator": {"op": "identity"},
    "params": {"delta": "1/10", "n_max": 3}
  })");
  const RunResult r = run("l1demo", cfg, "l1_short");
  CHECK(r.exit_code == 1);
  CHECK(r.message.find("never exceeded 1/4") != std::string::npos);
  const std::string report = slurp(scratch_dir() / "l1_short/report.md");
  CHECK(report.find("FAILED: ") != std::string::npos);

  // The same window passes once the crossing requirement is waived.
  const std::string relaxed = write_config("l1_relaxed.json", R"({
    "operator": {"op": "identity"},
    "params": {"delta": "1/10", "n_max": 3, "require_crossing": false}
  })");
  CHECK(run("l1demo", relaxed, "l1_relaxed").exit_code == 0);
}

TEST_CASE("missing capabilities exit 3") {
  const std::string cfg = write_config("mixing_diag.json", R"({
    "operator": {"op": "diagonal", "default": "1/2"},
    "params": {"x": "{0:1/1}", "y": "{1:1/1}", "lambda": "1/10", "k_max": 2}
  })");
  const RunResult r = run("mixing", cfg, "mixing_diag");
  CHECK(r.exit_code == 3);
  CHECK(r.message.find("connecting-chain factory") != std::string::npos);
}

TEST_CASE("configuration problems exit 2") {
  const std::string unknown_key = write_config("bad_key.json", R"({
    "operator": {"op": "identity"}, "bogus": 1,
    "params": {"construction": "span_connect", "x": "{0:1/1}", "lambda": "1/1", "eps": "1/1"}
  })");
  CHECK(run("chains", unknown_key, "bad_key").exit_code == 2);

  const std::string mismatched = write_config("mismatch.json", R"({
    "operator": {"op": "identity"}, "command": "shadow", "params": {}
  })");
  CHECK(run("chains", mismatched, "mismatch").exit_code == 2);

  const std::string plain = write_config("plain.json", R"({
    "operator": {"op": "identity"}, "params": {}
  })");
  CHECK(run("frobnicate", plain, "unknown_cmd").exit_code == 2);

  CHECK(run("chains", (scratch_dir() / "no_such.json").string(), "no_cfg").exit_code == 2);

  const std::string malformed = write_config("broken.json", "{");
  CHECK(run("chains", malformed, "broken").exit_code == 2);

  const std::string bad_norm = write_config("bad_norm.json", R"({
    "operator": {"op": "identity"}, "norm": "3", "params": {}
  })");
  CHECK(run("chains", bad_norm, "bad_norm").exit_code == 2);

  const std::string missing_param = write_config("no_param.json", R"({
    "operator": {"op": "identity"}, "params": {"construction": "span_connect"}
  })");
  CHECK(run("chains", missing_param, "no_param").exit_code == 2);
}

TEST_CASE("certify runs are reproducible byte for byte") {
  const std::string cfg = write_config("certify.json", R"({
    "operator": {"op": "doubling_shift_fixed_line"},
    "command": "certify",
    "seed": 11,
    "params": {"delta": "1/4", "count": 5, "length": 10}
  })");
  CHECK(run("certify", cfg, "cert_a").exit_code == 0);
  CHECK(run("certify", cfg, "cert_b").exit_code == 0);
  const std::string a = slurp(scratch_dir() / "cert_a/certificates.csv");
  const std::string b = slurp(scratch_dir() / "cert_b/certificates.csv");
  CHECK(a == b);
  CHECK(slurp(scratch_dir() / "cert_a/report.md") == slurp(scratch_dir() / "cert_b/report.md"));

  const auto rows = read_csv((scratch_dir() / "cert_a/certificates.csv").string());
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"trial", "delta", "horizon", "max_error",
                                            "analytic_bound", "shadow"});
  CHECK(rows[1][1] == "1/4");
  CHECK(rows[1][2] == "10");

  // A different seed changes the artifacts; a CLI seed override wins over the
  // config seed and reproduces them.
  CHECK(run("certify", cfg, "cert_c", 12).exit_code == 0);
  const std::string c = slurp(scratch_dir() / "cert_c/certificates.csv");
  CHECK(c != a);
  const std::string reseeded = write_config("certify12.json", R"({
    "operator": {"op": "doubling_shift_fixed_line"},
    "command": "certify",
    "seed": 12,
    "params": {"delta": "1/4", "count": 5, "length": 10}
  })");
  CHECK(run("certify", reseeded, "cert_d").exit_code == 0);
  CHECK(slurp(scratch_dir() / "cert_d/certificates.csv") == c);
}

TEST_CASE("csv escaping and splitting are inverse") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_split("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
  CHECK(csv_split("") == std::vector<std::string>{""});
  CHECK(csv_split(",x,") == std::vector<std::string>{"", "x", ""});
  CHECK_THROWS_AS(csv_split("\"open"), ParseError);

  const std::vector<std::string> fields = {"{0:1/2, 3:-1/3}", "say \"hi\"", "", "plain"};
  const fs::path p = scratch_dir() / "roundtrip.csv";
  {
    CsvWriter w(p.string());
    w.row(fields);
    w.row({"second", "row"});
  }
  const auto rows = read_csv(p.string());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == fields);
  CHECK(rows[1] == std::vector<std::string>{"second", "row"});
}
