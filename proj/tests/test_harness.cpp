#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsmin/errors.hpp"
#include "qsmin/harness.hpp"

using namespace qsmin;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const json kThirds = json::parse(R"({"branching": [2], "ratio": ["1/3"], "gaps": {"rule": "uniform"}, "tail": "periodic"})");
const json kDimOne = json::parse(
    R"({"branching": [2], "ratio": {"rule": "dim_one", "params": {"exponent": 2}}, "gaps": {"rule": "uniform"}, "tail": "periodic"})");

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qsmin_tests" / name;
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig config_for(const json& params, const std::string& name, json extra = json::object()) {
  json doc = {{"params", params}, {"output", scratch(name).string()}};
  doc.update(extra);
  return load_config(doc);
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& command, const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(command, cfg, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json report(const ExperimentConfig& cfg) { return json::parse(slurp(cfg.output / "report.json")); }

int cli(const std::string& args) {
  const std::string cmd = std::string(QSMIN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("configuration loading") {
  const ExperimentConfig cfg = config_for(kThirds, "load", {{"depth", 7}, {"d_fraction", "3/4"}, {"map", {{"kind", "power"}, {"alpha", "2"}}}});
  CHECK(cfg.depth == 7);
  CHECK(cfg.d_fraction == Rational(3, 4));
  CHECK(cfg.map.kind() == QsMap::Kind::power);
  CHECK(cfg.seed == 1);

  CHECK_THROWS_AS(load_config(json::parse(R"({"depth": 3})")), ConfigError);
  CHECK_THROWS_AS(load_config(json{{"params", kThirds}, {"depth", 0}}), ConfigError);
  CHECK_THROWS_AS(load_config(json{{"params", kThirds}, {"d_fraction", "1"}}), ConfigError);
  CHECK_THROWS_AS(load_config(json{{"params", kThirds}, {"precision", 8}}), ConfigError);
  CHECK_THROWS_AS(load_config(json{{"params", kThirds}, {"depth", "deep"}}), ConfigError);
  CHECK_THROWS_AS(load_config(json::array()), ConfigError);

  const ExperimentConfig from_file = load_config_file(fs::path(QSMIN_CONFIGS) / "dim_one.json");
  CHECK(from_file.map.kind() == QsMap::Kind::power);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("validate") {
  const Run thirds = run("validate", config_for(kThirds, "v1"));
  CHECK(thirds.code == 0);
  CHECK(thirds.out == "valid, uniform Cantor, n·c = 2/3\n");

  const json full = json::parse(R"({"branching": [2], "ratio": {"rule": "full"}, "gaps": {"rule": "uniform"}, "tail": "periodic"})");
  const Run whole = run("validate", config_for(full, "v2"));
  CHECK(whole.code == 0);
  CHECK(whole.out == "valid, degenerate (E = [0,1])\n");

  const json bad = json::parse(R"({"branching": [2, 2], "ratio": ["1/3", "1/3"], "gaps": [["0", "1/3", "0"], ["0", "1/4", "0"]]})");
  const ExperimentConfig cfg = config_for(bad, "v3");
  const Run broken = run("validate", cfg);
  CHECK(broken.code == 2);
  CHECK(broken.err.find("level 2") != std::string::npos);
  CHECK(broken.err.find("-1/12") != std::string::npos);
  const json rep = report(cfg);
  CHECK(rep["valid"] == false);
  CHECK(rep["level"] == 2);
  CHECK(rep["residual"] == "-1/12");

  const Run general = run("validate", config_for(kDimOne, "v4"));
  CHECK(general.code == 0);
  CHECK(general.out.find("valid, uniform Cantor") == 0);
}

TEST_CASE("build writes exact intervals") {
  const ExperimentConfig cfg = config_for(kThirds, "build", {{"depth", 3}});
  CHECK(run("build", cfg).code == 0);
  const std::string csv = slurp(cfg.output / "intervals.csv");
  CHECK(lines(csv) == 9);
  CHECK(csv.find("1,1.1.2,2/27,1/9\n") != std::string::npos);
  CHECK(report(cfg)["total_length"] == "8/27");
}

TEST_CASE("dim writes both denominator variants") {
  const ExperimentConfig cfg = config_for(kThirds, "dim", {{"K", 12}, {"window", 4}});
  CHECK(run("dim", cfg).code == 0);
  const std::string csv = slurp(cfg.output / "partials.csv");
  CHECK(csv.rfind("k,numerator,denominator_argument,partial_value,", 0) == 0);
  CHECK(lines(csv) == 13);
  const json rep = report(cfg);
  CHECK(rep["estimate"].get<double>() == doctest::Approx(std::log(2.0) / std::log(3.0)));
  CHECK(rep["window"] == json::array({9, 12}));
  CHECK(run("dim", config_for(kThirds, "dim_bad", {{"K", 3}, {"window", 5}})).code == 2);
}

TEST_CASE("boxdim and exit codes for degenerate and precision failures") {
  const ExperimentConfig cfg = config_for(kThirds, "box", {{"depth", 8}});
  CHECK(run("boxdim", cfg).code == 0);
  CHECK(fs::exists(cfg.output / "plot.svg"));
  CHECK(lines(slurp(cfg.output / "loglog.csv")) == 9);
  CHECK(report(cfg)["box"]["slope"].get<double>() == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(0.02));

  const ExperimentConfig flat = config_for(kThirds, "box_flat", {{"depth", 4}, {"scales", {"1/9", "1/9", "1/9"}}});
  CHECK(run("boxdim", flat).code == 3);

  const json thin = json::parse(R"({"branching": [2], "ratio": ["1/1000000000"], "gaps": {"rule": "uniform"}, "tail": "periodic"})");
  CHECK(run("boxdim", config_for(thin, "box_thin", {{"depth", 3}, {"precision", 15}})).code == 4);

  const ExperimentConfig nosvg = config_for(kThirds, "box_nosvg", {{"depth", 5}, {"svg", false}});
  CHECK(run("boxdim", nosvg).code == 0);
  CHECK_FALSE(fs::exists(nosvg.output / "plot.svg"));
}

TEST_CASE("qs-estimate and distortion") {
  const ExperimentConfig cfg = config_for(kThirds, "qs", {{"map", {{"kind", "power"}, {"alpha", "2"}}}, {"M_depth", 10}});
  CHECK(run("qs-estimate", cfg).code == 0);
  CHECK(report(cfg)["M_hat"].get<double>() == doctest::Approx(3.0));
  CHECK(report(cfg)["exponents"]["q"].get<double>() == doctest::Approx(2.0));

  const ExperimentConfig dist = config_for(kThirds, "dist", {{"map", {{"kind", "power"}, {"alpha", "4/5"}}}});
  CHECK(run("distortion", dist).code == 0);
  CHECK(report(dist)["all_pass"] == true);
  CHECK(lines(slurp(dist.output / "pairs.csv")) == 466);
}

TEST_CASE("measure is deterministic") {
  const json extra = {{"depth", 8}, {"samples", 200}, {"map", {{"kind", "power"}, {"alpha", "4/5"}}}};
  const ExperimentConfig a = config_for(kDimOne, "measure_a", extra);
  const ExperimentConfig b = config_for(kDimOne, "measure_b", extra);
  CHECK(run("measure", a).code == 0);
  CHECK(run("measure", b).code == 0);
  CHECK(slurp(a.output / "report.json") == slurp(b.output / "report.json"));
  CHECK(slurp(a.output / "rchains.csv") == slurp(b.output / "rchains.csv"));
  const json rep = report(a);
  CHECK(rep["pass"] == true);
  CHECK(rep["seed"] == 1);
  CHECK(rep["identity_residual_max"].get<double>() < 1e-20);

  json other = extra;
  other["seed"] = 2;
  const ExperimentConfig c = config_for(kDimOne, "measure_c", other);
  CHECK(run("measure", c).code == 0);
  CHECK(slurp(a.output / "rchains.csv") != slurp(c.output / "rchains.csv"));
}

TEST_CASE("mlema") {
  const ExperimentConfig cfg = config_for(kDimOne, "mlema", {{"K", 30}});
  CHECK(run("mlema", cfg).code == 0);
  CHECK(lines(slurp(cfg.output / "mlema.csv")) == 31);
  const json rep = report(cfg);
  CHECK(rep["total_length_root"].get<double>() >= 0.9);
  CHECK(rep["mean_gap_power"].get<double>() <= 0.15);
}

TEST_CASE("minimality flags an unmet hypothesis") {
  const ExperimentConfig cfg = config_for(kThirds, "minimality", {{"depth", 8}, {"samples", 100}, {"d_grid", {0.5}}});
  const Run r = run("minimality", cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("hypothesis dim_H E = 1 not met") != std::string::npos);
  const json rep = report(cfg);
  CHECK(rep["hypothesis_met"] == false);
  CHECK(rep.contains("warning"));
  CHECK(fs::exists(cfg.output / "plot.svg"));
  CHECK(fs::exists(cfg.output / "loglog.csv"));
}

TEST_CASE("unknown commands") {
  CHECK(run("frobnicate", config_for(kThirds, "unknown")).code == 2);
  CHECK(command_names().size() == 9);
}

TEST_CASE("command line front end") {
  const std::string configs = QSMIN_CONFIGS;
  const std::string out = (fs::temp_directory_path() / "qsmin_tests" / "cli").string();
  CHECK(cli("validate --config " + configs + "/middle_thirds.json --out " + out) == 0);
  CHECK(cli("validate --config " + configs + "/inconsistent.json --out " + out) == 2);
  CHECK(cli("validate --config " + configs + "/full_set.json --out " + out) == 0);
  CHECK(cli("build --config " + configs + "/middle_thirds.json --depth 4 --out " + out) == 0);
  CHECK(lines(slurp(fs::path(out) / "intervals.csv")) == 17);
  CHECK(cli("build --config " + configs + "/middle_thirds.json --depth 0 --out " + out) == 2);
  CHECK(cli("dim --config " + configs + "/middle_thirds.json --precision 30 --out " + out) == 0);
  CHECK(cli("validate --out " + out) == 2);
  CHECK(cli("validate --config /nonexistent.json") == 2);
  CHECK(cli("") == 2);
}
