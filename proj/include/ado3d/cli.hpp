#pragma once

#include "ado3d/hankel.hpp"
#include "ado3d/monte_carlo.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ado3d {

enum class Command { Ado, Mc, Compare, Converge };

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitCompareFail = 3,
  kExitIo = 4,
};

struct RunConfig {
  Command command = Command::Ado;
  double mu_a = 0.01;
  double mu_s = 10.0;
  double g = 0.9;
  int l_max = 3;
  int half_order = 3;
  InversionParams inversion;
  std::vector<double> rho{5.0};
  double z_min = -50.0;
  double z_max = 50.0;
  int z_count = 101;
  std::uint64_t photons = 1000000;
  std::uint64_t seed = 20240531;
  WeightMode mc_mode = WeightMode::Analog;
  int threads = 0;
  double tol = 0.10;
  std::vector<std::pair<int, int>> pairs{{3, 3}, {9, 5}, {9, 9}, {9, 11}};
  std::filesystem::path out = "out";

  /// Throws ConfigError on nonpositive parameters, albedo >= 1 or a bad grid.
  void validate() const;
  MediumParams medium() const;
  MediumParams medium(int l_max_override) const;
  std::vector<double> z_grid() const;
};

/// Parses argv (flags override a key=value --config file). Returns the exit
/// code when parsing ends the program (help, usage error), else -1.
int parse_command_line(int argc, const char* const* argv, RunConfig& config);

/// Executes the command; writes CSVs under config.out and a summary to log.
int run(const RunConfig& config, std::ostream& log);

/// Shortest decimal for file names ("5", "2.5").
std::string format_rho(double rho);
/// 9 significant digits, locale independent.
std::string format_number(double value);

/// "3:3,9:11" -> {(3,3),(9,11)}. Throws ConfigError.
std::vector<std::pair<int, int>> parse_pairs(const std::string& text);

}  // namespace ado3d
