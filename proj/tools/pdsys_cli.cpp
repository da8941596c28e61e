#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pdsys/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Analysis toolkit for partially diffusive hyperbolic systems"};
  app.require_subcommand(1);

  pdsys::CommandOptions options;
  std::string out = "out";
  std::uint64_t seed = 0;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config, "Configuration file")->required();
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--threads", options.threads, "Worker threads (0: hardware)");
    sub->add_option("--seed", seed, "Seed for random initial data");
  };
  CLI::App* check = app.add_subcommand("check-sk", "Kalman test of the SK condition over the sphere");
  CLI::App* rate = app.add_subcommand("decay-rate", "Decay-rate envelope along one direction");
  CLI::App* sim = app.add_subcommand("simulate", "Spectral run with hybrid norms and the functional");
  for (CLI::App* sub : {check, rate, sim}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pdsys::kExitConfig;
  }
  options.out_dir = out;
  for (CLI::App* sub : {check, rate, sim}) {
    if (sub->count("--seed") > 0) options.seed = seed;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  const pdsys::CommandResult result = pdsys::run_command(name, options);
  std::fputs(result.summary.c_str(), result.exit_code == pdsys::kExitPass ||
                                             result.exit_code == pdsys::kExitNegative
                                         ? stdout
                                         : stderr);
  return result.exit_code;
}
