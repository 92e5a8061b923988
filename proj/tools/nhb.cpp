// nhb: spectra, steady states, stability, dynamics and phase diagrams of the
// two-mode gain/loss polariton model.
//
//   nhb <spectrum|steady|stability|evolve|sweep|locate|thresholds>
//       [--config PATH] [--out PATH] [--jobs N] [--seed N] [--set sec.key=value]...
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure (partial
// outputs are kept and marked).

#include "nhb/commands.hpp"
#include "nhb/config.hpp"
#include "nhb/errors.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Two-mode non-Hermitian polariton model: solver and simulator"};
  std::string command;
  std::string config_path;
  std::string out;
  int jobs = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;

  app.add_option("command", command, "Operation to run")
      ->required()
      ->check(CLI::IsMember(nhb::command_names()));
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output path stem (default: the command name)");
  app.add_option("--jobs", jobs, "Worker threads for sweep (0: OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Seed for sampled initial conditions");
  app.add_option("--set", overrides, "Override a config key, e.g. --set model.p=0.81");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nhb::kExitConfig;
  }

  try {
    nhb::RunConfig cfg = config_path.empty() ? nhb::RunConfig{} : nhb::load_config(config_path);
    for (const std::string& o : overrides) {
      nhb::apply_override(cfg, o);
    }
    if (seed) {
      cfg.seed = *seed;
    }
    const nhb::CommandResult r = nhb::run_command(command, cfg, out.empty() ? command : out, jobs);
    for (const std::string& f : r.files) {
      std::cout << f << '\n';
    }
    if (r.exit_code != nhb::kExitOk) {
      std::cerr << "nhb " << command << ": " << r.message << '\n';
    }
    return r.exit_code;
  } catch (const nhb::ConfigError& e) {
    std::cerr << "nhb " << command << ": configuration error: " << e.what() << '\n';
    return nhb::kExitConfig;
  } catch (const nhb::Error& e) {
    std::cerr << "nhb " << command << ": " << e.what() << '\n';
    return nhb::kExitNumerical;
  }
}
