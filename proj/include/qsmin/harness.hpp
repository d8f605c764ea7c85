#pragma once

// Experiment orchestration behind the `qsmin` command line tool. Every
// command reads one JSON configuration, writes its artifacts into the output
// directory and returns a process exit status:
//   0 success, 2 configuration or consistency error, 3 degenerate math,
//   4 precision failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsmin/construction.hpp"
#include "qsmin/qsmaps.hpp"

namespace qsmin {

struct ExperimentConfig {
  nlohmann::json params;                   // parameter document (see params_io.hpp)
  QsMap map = QsMap::identity();
  int depth = 12;
  int precision = kDefaultDigits;
  Rational d_fraction = Rational(1, 2);
  std::optional<std::vector<Rational>> scales;  // nullopt: construction scales
  std::uint64_t seed = 1;
  std::filesystem::path output = "out";

  int K = 30;
  int window = 10;
  int M_depth = 14;
  Rational M_margin = Rational(1, 20);
  std::size_t samples = 1000;
  Rational p = Rational(1, 2);
  Rational eps = Rational(1, 10);
  std::vector<double> d_grid = {0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
  bool svg = true;
};

// Relative "params" paths are resolved against base_dir.
ExperimentConfig load_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config_file(const std::filesystem::path& path);

const std::vector<std::string>& command_names();

int run_command(const std::string& command, const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qsmin
