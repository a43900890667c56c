// Command-line driver: simulate / verify / convergence / list-identities.
//
// Exit status contract (scripted CI depends on it):
//   0  every requested check passed
//   1  at least one check failed
//   2  configuration or input error
//   3  blow-up detected (partial outputs were written)

#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "nlsconserve/experiment.hpp"

namespace {

int dispatch(const std::string& mode, const std::string& config_path, int levels_override) {
  nls::ExperimentConfig config;
  try {
    config = nls::parse_config_file(config_path);
  } catch (const nls::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return nls::kExitConfigError;
  }

  try {
    if (mode == "simulate") {
      const nls::ExperimentResult result = nls::run_simulate(config);
      for (const std::string& line : result.messages) std::cout << line << "\n";
      return result.status;
    }
    if (mode == "verify") {
      const nls::ExperimentResult result = nls::run_verify(config);
      for (const std::string& line : result.messages) std::cout << line << "\n";
      return result.status;
    }
    const int levels = levels_override > 0 ? levels_override : config.refinement_levels;
    const nls::ConvergenceResult result = nls::run_convergence(config, levels);
    for (const std::string& line : result.messages) std::cout << line << "\n";
    return result.status;
  } catch (const nls::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return nls::kExitConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return nls::kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral simulator and identity verifier for the nonlinear "
               "Schroedinger equation on a periodic box"};
  app.require_subcommand(1);

  std::string config_path;
  int levels = 0;  // 0 = fall back to the config's refinement_levels

  CLI::App* simulate = app.add_subcommand("simulate", "evolve initial data, write the CSV series");
  simulate->add_option("--config", config_path, "configuration file")->required();

  CLI::App* verify = app.add_subcommand("verify", "simulate and evaluate the requested checks");
  verify->add_option("--config", config_path, "configuration file")->required();

  CLI::App* convergence =
      app.add_subcommand("convergence", "rerun with dt halved per level, fit residual orders");
  convergence->add_option("--config", config_path, "configuration file")->required();
  convergence->add_option("--levels", levels,
                          "number of refinement levels (>= 2); defaults to the config value");

  CLI::App* list = app.add_subcommand("list-identities", "print the registered checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : nls::kExitConfigError;
  }

  if (list->parsed()) {
    const std::vector<std::string> lines = nls::list_identities_lines();
    for (const std::string& line : lines) std::cout << line << "\n";
    std::cout << lines.size() << " identities registered\n";
    return nls::kExitOk;
  }
  if (simulate->parsed()) return dispatch("simulate", config_path, levels);
  if (verify->parsed()) return dispatch("verify", config_path, levels);
  return dispatch("convergence", config_path, levels);
}
