#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qsmin/errors.hpp"
#include "qsmin/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cantor-type sets, their dimension and their quasisymmetric images"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> depth;
  std::optional<int> precision;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  for (const auto& name : qsmin::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--depth", depth, "construction depth");
    sub->add_option("--precision", precision, "working precision in decimal digits");
    sub->add_option("--seed", seed, "sampling seed");
    sub->add_option("--out", out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  qsmin::ExperimentConfig config;
  try {
    config = qsmin::load_config_file(config_path);
    if (depth) config.depth = *depth;
    if (precision) config.precision = *precision;
    if (seed) config.seed = *seed;
    if (out) config.output = *out;
    if (config.depth < 1) throw qsmin::ConfigError("depth must be at least 1");
    if (config.precision < 15) throw qsmin::ConfigError("precision must be at least 15 digits");
  } catch (const qsmin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qsmin::exit_code_for(e.kind());
  }
  return qsmin::run_command(command, config, std::cout, std::cerr);
}
