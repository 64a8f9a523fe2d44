#include "ado3d/cli.hpp"

#include "ado3d/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace ado3d {

namespace {

constexpr double kShellFraction = 0.05;

std::ofstream open_csv(const std::filesystem::path& path, const std::string& header) {
  std::error_code ec;
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << header << '\n';
  return out;
}

void close_csv(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string join(std::initializer_list<std::string> fields) {
  std::string line;
  for (const auto& f : fields) {
    if (!line.empty()) line += ',';
    line += f;
  }
  return line;
}

std::vector<DensityField> ado_fields(const RunConfig& config, const MediumParams& medium,
                                     int half_order) {
  const SpectralModel model = build_spectral_model(medium, half_order, 0);
  const auto z = config.z_grid();
  std::vector<DensityField> fields;
  for (double rho : config.rho) fields.push_back(density_curve(model, rho, z, config.inversion));
  return fields;
}

McResult mc_fields(const RunConfig& config) {
  McConfig mc;
  mc.photons = config.photons;
  mc.seed = config.seed;
  mc.mode = config.mc_mode;
  mc.threads = config.threads;
  mc.shells = shells_around(config.rho, kShellFraction);
  mc.z_edges = edges_around(config.z_grid());
  McResult result = run_mc(config.medium(), mc);
  for (std::size_t k = 0; k < result.fields.size(); ++k) result.fields[k].rho = config.rho[k];
  return result;
}

void write_ado(const RunConfig& config, const DensityField& f) {
  const auto path = config.out / ("ado_rho" + format_rho(f.rho) + ".csv");
  auto out = open_csv(path, "rho_mm,z_mm,U");
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << join({format_number(f.rho), format_number(f.z[i]), format_number(f.u[i])}) << '\n';
  }
  close_csv(out, path);
}

void write_mc(const RunConfig& config, const DensityField& f) {
  const auto path = config.out / ("mc_rho" + format_rho(f.rho) + ".csv");
  auto out = open_csv(path, "rho_mm,z_mm,U,stderr");
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << join({format_number(f.rho), format_number(f.z[i]), format_number(f.u[i]),
                 format_number((*f.stderr_u)[i])})
        << '\n';
  }
  close_csv(out, path);
}

void write_compare(const RunConfig& config, const Comparison& cmp) {
  const auto path = config.out / ("compare_rho" + format_rho(cmp.rho) + ".csv");
  auto out = open_csv(path, "rho_mm,z_mm,U_ado,U_mc,stderr,rel_diff,pass");
  for (const auto& r : cmp.rows) {
    const std::string verdict = !r.checked ? "skip" : (r.pass ? "1" : "0");
    out << join({format_number(cmp.rho), format_number(r.z), format_number(r.u_ado),
                 format_number(r.u_mc), format_number(r.stderr_mc), format_number(r.rel_diff),
                 verdict})
        << '\n';
  }
  close_csv(out, path);
}

double max_rel_diff(const DensityField& a, const DensityField& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.u[i] - ref.u[i]) / std::abs(ref.u[i]));
  }
  return worst;
}

int run_converge(const RunConfig& config, std::ostream& log) {
  // Reference is the largest (l_max, N) pair.
  const auto ref_pair = *std::max_element(config.pairs.begin(), config.pairs.end());
  const auto z = config.z_grid();
  std::map<std::pair<int, int>, std::vector<DensityField>> curves;
  for (const auto& pair : config.pairs) {
    try {
      curves[pair] = ado_fields(config, config.medium(pair.first), pair.second);
    } catch (const NumericalError& e) {
      if (pair == ref_pair) throw;
      log << "warning: pair (" << pair.first << "," << pair.second << ") failed: " << e.what()
          << '\n';
    }
  }

  const auto table_path = config.out / "converge.csv";
  auto table = open_csv(table_path, "rho_mm,lmax,N,max_rel_diff");
  for (std::size_t k = 0; k < config.rho.size(); ++k) {
    const DensityField& ref = curves.at(ref_pair)[k];
    for (const auto& pair : config.pairs) {
      const double diff = curves.count(pair) ? max_rel_diff(curves[pair][k], ref)
                                             : std::numeric_limits<double>::quiet_NaN();
      table << join({format_number(config.rho[k]), std::to_string(pair.first),
                     std::to_string(pair.second), format_number(diff)})
            << '\n';
      log << "rho=" << format_rho(config.rho[k]) << " l_max=" << pair.first
          << " N=" << pair.second << " max_rel_diff=" << format_number(diff) << '\n';
    }

    const auto curve_path = config.out / ("converge_rho" + format_rho(config.rho[k]) + ".csv");
    std::string header = "z_mm";
    for (const auto& pair : config.pairs) {
      header += ",U_l" + std::to_string(pair.first) + "_N" + std::to_string(pair.second);
    }
    auto out = open_csv(curve_path, header);
    for (std::size_t i = 0; i < z.size(); ++i) {
      out << format_number(z[i]);
      for (const auto& pair : config.pairs) {
        const double u = curves.count(pair) ? curves[pair][k].u[i]
                                            : std::numeric_limits<double>::quiet_NaN();
        out << ',' << format_number(u);
      }
      out << '\n';
    }
    close_csv(out, curve_path);
  }
  close_csv(table, table_path);
  return kExitOk;
}

int dispatch(const RunConfig& config, std::ostream& log) {
  switch (config.command) {
    case Command::Ado: {
      for (const auto& f : ado_fields(config, config.medium(), config.half_order)) {
        write_ado(config, f);
      }
      return kExitOk;
    }
    case Command::Mc: {
      const McResult mc = mc_fields(config);
      for (const auto& f : mc.fields) write_mc(config, f);
      log << "photons=" << mc.tallies.photons << " collisions=" << mc.tallies.collisions << '\n';
      return kExitOk;
    }
    case Command::Compare: {
      const auto ado = ado_fields(config, config.medium(), config.half_order);
      const McResult mc = mc_fields(config);
      bool all = true;
      for (std::size_t k = 0; k < ado.size(); ++k) {
        const Comparison cmp = compare_fields(ado[k], mc.fields[k], config.tol);
        write_compare(config, cmp);
        write_ado(config, ado[k]);
        write_mc(config, mc.fields[k]);
        const auto failed = std::count_if(cmp.rows.begin(), cmp.rows.end(),
                                          [](const ComparisonRow& r) { return !r.pass; });
        log << "rho=" << format_rho(cmp.rho) << ": " << (cmp.pass ? "PASS" : "FAIL") << " ("
            << cmp.checked << " points checked, " << failed << " failed, tol "
            << format_number(config.tol) << ")\n";
        all = all && cmp.pass;
      }
      return all ? kExitOk : kExitCompareFail;
    }
    case Command::Converge:
      return run_converge(config, log);
  }
  return kExitUsage;
}

}  // namespace

void RunConfig::validate() const {
  if (!(mu_a > 0.0)) throw ConfigError("mu-a must be positive (albedo must stay below 1)");
  if (!(mu_s > 0.0)) throw ConfigError("mu-s must be positive");
  if (!(g >= 0.0 && g < 1.0)) throw ConfigError("g must lie in [0, 1)");
  if (l_max < 0) throw ConfigError("lmax must be >= 0");
  if (half_order < 1) throw ConfigError("N must be >= 1");
  if (rho.empty()) throw ConfigError("rho list is empty");
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (!(rho[k] > 0.0)) throw ConfigError("rho values must be positive");
    if (k > 0 && !(rho[k] > rho[k - 1])) throw ConfigError("rho values must be increasing");
  }
  if (z_count < 1) throw ConfigError("z-count must be >= 1");
  if (z_count > 1 && !(z_max > z_min)) throw ConfigError("z-max must exceed z-min");
  if (photons < 1) throw ConfigError("photons must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (command == Command::Converge && pairs.empty()) throw ConfigError("pairs list is empty");
  for (const auto& [l, n] : pairs) {
    if (l < 0 || n < 1) throw ConfigError("pairs need lmax >= 0 and N >= 1");
  }
  try {
    inversion.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

MediumParams RunConfig::medium() const { return medium(l_max); }

MediumParams RunConfig::medium(int l_max_override) const {
  return MediumParams::make(mu_a, mu_s, g, l_max_override);
}

std::vector<double> RunConfig::z_grid() const {
  std::vector<double> z;
  if (z_count == 1) return {z_min};
  const double step = (z_max - z_min) / (z_count - 1);
  for (int i = 0; i < z_count; ++i) z.push_back(i + 1 == z_count ? z_max : z_min + step * i);
  return z;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string format_rho(double rho) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, rho);
  return std::string(buf, res.ptr);
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    const auto colon = item.find(':');
    int l = -1;
    int n = -1;
    if (colon == std::string::npos ||
        std::from_chars(item.data(), item.data() + colon, l).ptr != item.data() + colon ||
        std::from_chars(item.data() + colon + 1, item.data() + item.size(), n).ptr !=
            item.data() + item.size()) {
      throw ConfigError("bad pair '" + item + "', expected LMAX:N");
    }
    if (l < 0 || n < 1) throw ConfigError("pair '" + item + "' needs lmax >= 0 and N >= 1");
    pairs.emplace_back(l, n);
  }
  if (pairs.empty()) throw ConfigError("pairs list is empty");
  return pairs;
}

int parse_command_line(int argc, const char* const* argv, RunConfig& config) {
  CLI::App app{"3D ADO pencil-beam transport solver with Monte Carlo validation", "ado3d"};
  app.set_config("--config", "", "key=value configuration file; flags take precedence");

  const std::map<std::string, Command> commands{{"ado", Command::Ado},
                                                {"mc", Command::Mc},
                                                {"compare", Command::Compare},
                                                {"converge", Command::Converge}};
  const std::map<std::string, WeightMode> modes{{"analog", WeightMode::Analog},
                                                {"implicit", WeightMode::ImplicitCapture}};
  std::string pairs_text = "3:3,9:5,9:9,9:11";

  app.add_option("command", config.command, "ado | mc | compare | converge")
      ->required()
      ->transform(CLI::CheckedTransformer(commands, CLI::ignore_case).description(""))
      ->type_name("COMMAND");
  app.add_option("--mu-a", config.mu_a, "absorption coefficient [1/mm]");
  app.add_option("--mu-s", config.mu_s, "scattering coefficient [1/mm]");
  app.add_option("--g", config.g, "Henyey-Greenstein anisotropy");
  app.add_option("--lmax", config.l_max, "phase-function truncation degree");
  app.add_option("--N", config.half_order, "discrete ordinates per hemisphere");
  app.add_option("--rho", config.rho, "radial distances [mm]")->delimiter(',');
  app.add_option("--z-min", config.z_min, "[mm]");
  app.add_option("--z-max", config.z_max, "[mm]");
  app.add_option("--z-count", config.z_count, "number of z samples");
  app.add_option("--photons", config.photons, "Monte Carlo photon count");
  app.add_option("--seed", config.seed, "Monte Carlo seed");
  app.add_option("--mc-mode", config.mc_mode, "analog | implicit")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case).description(""))
      ->type_name("MODE");
  app.add_option("--threads", config.threads, "0 = all cores");
  app.add_option("--out", config.out, "output directory");
  app.add_option("--tol", config.tol, "relative tolerance for compare");
  app.add_option("--pairs", pairs_text, "l_max:N list for converge");
  app.add_option("--de-step", config.inversion.de_step, "double-exponential step h");
  app.add_option("--de-halfwidth", config.inversion.de_halfwidth, "double-exponential N_k");
  app.add_option("--trapezoids", config.inversion.trapezoids, "trapezoids per segment");

  try {
    app.parse(argc, argv);
    config.pairs = parse_pairs(pairs_text);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return -1;
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    config.validate();
    return dispatch(config, log);
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace ado3d
