#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "inceprop/errors.hpp"
#include "run_config.hpp"

using namespace inceprop;

int main(int argc, char** argv) {
  CLI::App app{"Propagators and exact states for quadratic Hamiltonians"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  int jobs = 1;

  const char* names[][2] = {
      {"solve-mu", "standard characteristic solutions mu0, mu1 on a time mesh"},
      {"classify-ince", "periodicity verdicts and Fourier-trial convergence"},
      {"green", "propagator coefficients and a kernel slice"},
      {"propagate", "propagate an initial Hermite-Gaussian state"},
      {"eigenstates", "invariant eigenstates, Gram matrix and <E>"},
      {"validate", "run the acceptance battery"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--set", overrides, "override a config value, dotted.key=value (repeatable)");
    sub->add_option("--jobs", jobs, "parallel sweep entries")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsageError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto command = cli::command_from_string(name);

  nlohmann::json doc;
  try {
    doc = cli::load_config_file(config_path);
    for (const auto& o : overrides) cli::apply_override(doc, o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsageError;
  }
  return cli::execute(*command, doc, out_dir, jobs, std::cout, std::cerr);
}
