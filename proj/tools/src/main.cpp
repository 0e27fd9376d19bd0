#include <CLI11.hpp>
#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Regime-switching Asian option pricer"};
  app.require_subcommand(1);
  std::string config;
  for (const char* name : {"price", "compare", "convergence", "symmetry-check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pricer::kValidationFailure;
  }
  return pricer::run(app.get_subcommands().front()->get_name(), config, std::cout, std::cerr);
}
