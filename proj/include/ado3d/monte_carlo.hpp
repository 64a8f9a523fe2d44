#pragma once

#include "ado3d/hankel.hpp"
#include "ado3d/spectral.hpp"

#include <cstdint>
#include <vector>

namespace ado3d {

/// Henyey-Greenstein inverse CDF: cos(theta) from a uniform deviate u in [0,1).
double sample_hg(double g, double u);

/// Turns the unit vector u by polar angle acos(cos_t) and azimuth (cos_p, sin_p).
void scatter_direction(double& ux, double& uy, double& uz, double cos_t, double cos_p,
                       double sin_p);

enum class WeightMode {
  ImplicitCapture,  // weight *= varpi per collision, Russian roulette below the cutoff
  Analog,           // photon absorbed with probability 1 - varpi at each collision
};

/// Cylindrical shell rho in [lo, hi) mm.
struct Shell {
  double lo = 0.0;
  double hi = 0.0;
  double center() const { return 0.5 * (lo + hi); }
};

struct McConfig {
  std::uint64_t photons = 1000000;
  std::uint64_t seed = 20240531;
  std::vector<Shell> shells;       // sorted, non-overlapping
  std::vector<double> z_edges;     // mm, strictly increasing
  double weight_cutoff = 1e-4;
  double roulette_survival = 0.1;
  WeightMode mode = WeightMode::ImplicitCapture;
  int batches = 64;                // statistical batches; fixes the RNG streams
  int threads = 0;                 // 0 = hardware concurrency

  /// Throws ConfigError on bad edges, zero-volume bins or invalid counts.
  void validate() const;
};

/// Shells of half-width frac * rho around each rho, and z bins of width dz
/// centered on the grid points.
std::vector<Shell> shells_around(const std::vector<double>& rho, double frac);
std::vector<double> edges_around(const std::vector<double>& centers);

struct McTallies {
  std::uint64_t photons = 0;
  std::uint64_t collisions = 0;
  double absorbed = 0.0;        // weight removed by absorption
  double roulette_killed = 0.0; // weight removed by losing roulette
  double roulette_gain = 0.0;   // weight added to roulette survivors
};

struct McResult {
  std::vector<DensityField> fields;  // one per shell; z = bin centers
  McTallies tallies;
};

/// Pencil beam from the origin along +z in the infinite medium. The collision
/// estimator scores the expected absorbed weight w mu_a / mu_t at every
/// collision; U = absorbed / (mu_a V photons).
McResult run_mc(const MediumParams& medium, const McConfig& config);

struct ComparisonRow {
  double z = 0.0;
  double u_ado = 0.0;
  double u_mc = 0.0;
  double stderr_mc = 0.0;
  double rel_diff = 0.0;
  bool checked = false;  // MC relative standard error below the gate
  bool pass = true;
};

struct Comparison {
  double rho = 0.0;
  std::vector<ComparisonRow> rows;
  bool pass = true;
  int checked = 0;
};

/// |U_ado - U_mc| <= max(tol U_mc, 3 sigma) at bins whose MC relative error
/// is below max_rel_se. Grids must match. Fails when no bin passes the gate.
Comparison compare_fields(const DensityField& ado, const DensityField& mc, double tol,
                          double max_rel_se = 0.05);

}  // namespace ado3d
