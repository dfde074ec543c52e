#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "fpattern/commands.hpp"
#include "fpattern/config.hpp"
#include "fpattern/errors.hpp"
#include "fpattern/parallel.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, numerical_error = 2, io_error = 3 };

int run(const std::string& command, const std::string& config_path, const std::string& out,
        int threads) {
  try {
    fpattern::RunConfig cfg = fpattern::load_config(config_path);
    if (!out.empty()) cfg.output.directory = out;
    if (threads >= 0) cfg.output.threads = static_cast<unsigned>(threads);
    fpattern::set_thread_count(cfg.output.threads);
    const auto files = fpattern::find_command(command)(cfg);
    for (const auto& f : files) std::cout << (cfg.output.directory / f).string() << '\n';
    return ok;
  } catch (const fpattern::ConfigError& e) {
    std::cerr << "fpattern " << command << ": configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const fpattern::NumericalError& e) {
    std::cerr << "fpattern " << command << ": numerical error: " << e.what() << '\n';
    return numerical_error;
  } catch (const fpattern::IoError& e) {
    std::cerr << "fpattern " << command << ": I/O error: " << e.what() << '\n';
    return io_error;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frozen-pattern builder, verifier and solver"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int threads = -1;
  std::string chosen;
  for (const char* name : {"build", "verify", "transport", "trajectory", "evolve"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "INI config file")->required();
    sub->add_option("--out", out, "output directory (overrides [output] directory)");
    sub->add_option("--threads", threads, "worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber);
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : config_error;
  }
  return run(chosen, config, out, threads);
}
