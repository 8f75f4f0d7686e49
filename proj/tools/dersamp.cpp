// dersamp: command-line front end for the derivative-sampling experiments.

#include "dersamp/cli/commands.hpp"
#include "dersamp/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Relative --out paths land in $DERSAMP_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& out) {
  std::filesystem::path p(out);
  const char* dir = std::getenv("DERSAMP_OUTPUT_DIR");
  if (p.is_relative() && dir && *dir)
    p = std::filesystem::path(dir) / p;
  return p;
}

} // namespace

int main(int argc, char** argv) {
  using namespace dersamp;
  CLI::App app{cli::kAppDescription, "dersamp"};
  cli::ExperimentConfig cfg;
  cli::register_options(app, cfg);
  try {
    app.parse(argc, argv);
    cli::apply_defaults(cfg);
    cli::validate(cfg);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (cfg.output.empty()) {
      cli::run_and_write(cfg, std::cout);
    } else {
      const auto path = resolve_output(cfg.output);
      if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
      std::ofstream os(path);
      if (!os) {
        std::cerr << "error: cannot open " << path << " for writing\n";
        return 1;
      }
      cli::run_and_write(cfg, os);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
