#pragma once

#include "ado3d/spectral.hpp"
#include "ado3d/transport.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ado3d {

struct InversionParams {
  double de_step = 0.01;         // h
  int de_halfwidth = 400;        // N_k
  int trapezoids = 10000;        // per trapezoid segment
  double segment2_upper = 1.0;   // truncation of the d(q, rho*) segment, scaled q

  void validate() const;
};

enum class Provenance { Ado, MonteCarlo };

std::string to_string(Provenance p);

/// U(rho, z) along one line of constant rho. Lengths in mm, U in 1/mm^2 per
/// unit source strength.
struct DensityField {
  double rho = 0.0;
  std::vector<double> z;
  std::vector<double> u;
  std::optional<std::vector<double>> stderr_u;
  Provenance provenance = Provenance::Ado;

  std::size_t size() const { return z.size(); }
  /// Throws std::invalid_argument on a non-increasing grid or size mismatch.
  void validate() const;
};

/// (phi(t), phi'(t)) of the double-exponential map phi(t) = t / (1 - e^{-6 sinh t}).
std::pair<double, double> de_phi(double t);

/// Quadrature nodes in scaled q and the matching weights such that
/// U(rho, z) = sum_j weight_j F(q_j, mu_t z). Weights include all prefactors.
struct HankelRule {
  double rho_scaled = 0.0;
  std::vector<double> q;
  std::vector<double> weight;
};

HankelRule hankel_rule(const MediumParams& medium, double rho, const InversionParams& params);

/// U(rho, z) from the split Fourier-Bessel integral; rho, z in mm.
double energy_density(const SpectralModel& model, double rho, double z,
                      const InversionParams& params = {});

/// U over a z grid with one kernel table shared by all points.
DensityField density_curve(const SpectralModel& model, double rho, const std::vector<double>& z,
                           const InversionParams& params = {});

}  // namespace ado3d
