#pragma once

#include "rpcoh/compass.hpp"
#include "rpcoh/config.hpp"
#include "rpcoh/dynamics.hpp"
#include "rpcoh/errors.hpp"
#include "rpcoh/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rpcoh {

enum class Mode { Simulate, Sweep, Ensemble, Analyze, Oracle };

Mode parse_mode(const std::string& text);
std::string mode_name(Mode mode);

/// Everything one command needs. Frequencies and rates are in units of the
/// reaction rate k, times in units of 1/k, angles in radians.
struct RunConfig {
  Mode mode = Mode::Simulate;
  std::string name = "run";             // stem of every output file
  std::filesystem::path out = ".";      // output directory
  std::optional<std::filesystem::path> input;  // ensemble CSV for analyze

  HamiltonianSpec spec;                 // simulate and sweep
  Engine engine = Engine::Dephasing;
  std::vector<double> dephasing{0.0};   // one value for simulate/sweep, a list for ensemble
  std::optional<double> dt;
  std::optional<double> t_max;

  SweepParams sweep;
  EnsembleConfig ensemble;

  std::size_t bins = 20;
  double exchange_dephasing = 1.0;
  ExchangeParams exchange;

  /// Throws ConfigError when a field needed by `mode` is missing or invalid.
  void validate() const;
};

/// Builds a RunConfig from config-file keys; unknown keys are rejected.
/// The mode itself is not read here.
RunConfig run_config_from(const ConfigFile& file, Mode mode);

/// 0 on success; 2 for configuration errors, 3 for numerical failures,
/// 4 for failed self-checks.
int exit_code_for(ErrorKind kind) noexcept;

/// Full command-line entry point: `<mode> [--config PATH] [flags]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rpcoh
