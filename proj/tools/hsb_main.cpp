// hsb - Hilbert-space bundle geometry toolkit, command-line front end.
//
// Usage: hsb <subcommand> --config <path> [--out <path>]
// Subcommands: sweep-chi, berry-map, chern, transport, residuals.
// Exit codes: 0 ok, 2 config schema violation, 3 exceptional point where
// forbidden (partial results with flags), 4 numerical failure.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hsb/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hilbert-space bundle geometry toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> names = {"sweep-chi", "berry-map", "chern", "transport",
                                          "residuals"};
  const std::vector<std::string> descriptions = {
      "fidelity susceptibility over a 1-D parameter grid, with EP flags",
      "Berry curvature over a 2-D parameter grid",
      "integrated Chern numbers per band",
      "path transport with a generalized-norm log",
      "curvature and metric-compatibility residual report over a grid"};

  std::string config_path;
  std::string out_path;
  for (size_t k = 0; k < names.size(); ++k) {
    CLI::App* sub = app.add_subcommand(names[k], descriptions[k]);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_path, "output file (overrides config output.path)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return hsb::kExitConfig;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    const hsb::RunConfig config = hsb::load_run_config(config_path);
    return hsb::run_and_write(subcommand, config, out_path);
  } catch (const hsb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hsb::kExitConfig;
  } catch (const hsb::NonDiagonalizable& e) {
    std::cerr << "exceptional point: " << e.what() << "\n";
    return hsb::kExitEp;
  } catch (const hsb::EPOnPath& e) {
    std::cerr << "exceptional point on path: " << e.what() << "\n";
    return hsb::kExitEp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hsb::kExitNumerical;
  }
}
