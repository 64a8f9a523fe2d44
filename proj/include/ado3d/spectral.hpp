#pragma once

#include "ado3d/quadrature.hpp"
#include "ado3d/special_functions.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <memory>
#include <utility>
#include <vector>

namespace ado3d {

/// Homogeneous medium with a pencil beam along +z. Coefficients in 1/mm.
struct MediumParams {
  double mu_a = 0.01;
  double mu_s = 10.0;
  PhaseFunction phase;

  static MediumParams make(double mu_a, double mu_s, double anisotropy, int l_max);

  double mu_t() const { return mu_a + mu_s; }
  double albedo() const { return mu_s / mu_t(); }
  /// Throws std::invalid_argument on nonpositive coefficients or an albedo
  /// inconsistent with the phase function.
  void validate() const;
};

/// ADO eigen-data for one azimuthal order |m|. The system for -m is the
/// same object; signed-m evaluation goes through the mode functions below.
struct EigenSystem {
  int order = 0;
  PhaseFunction phase;
  std::shared_ptr<const QuadratureSet> quad;
  std::vector<double> eigenvalues;               // nu_n > 0, descending
  std::vector<std::vector<double>> vectors;      // vectors[n][i] = phi^m(nu_n, mu_i), i < 2N
  std::vector<ChandrasekharTable> tables;        // g_l^m(nu_n), m = +order

  int size() const { return static_cast<int>(eigenvalues.size()); }
  double nu(int n) const { return eigenvalues.at(static_cast<std::size_t>(n)); }
  /// g_l^m(sign * nu_n) for signed m with |m| == order.
  double chandrasekhar(int n, int l, int m, double nu_sign) const;
};

/// Eigen-systems for m = 0..l_max sharing one quadrature set.
struct SpectralModel {
  MediumParams medium;
  std::shared_ptr<const QuadratureSet> quad;
  std::vector<EigenSystem> systems;

  const EigenSystem& order(int m) const;
  int l_max() const { return medium.phase.degree; }
  /// Highest order actually solved.
  int max_order() const { return static_cast<int>(systems.size()) - 1; }
};

/// k(nu, q) = (-i nu q_vec, sqrt(1 + (nu q)^2)), a complex unit vector.
struct WaveVector {
  double nu = 1.0;
  double q = 0.0;
  double phi_q = 0.0;

  double kz() const;
  std::complex<double> cos_theta() const { return {kz(), 0.0}; }
  std::complex<double> sin_theta() const;
  double phi_k() const;
  /// Cartesian components of k.
  std::array<std::complex<double>, 3> components() const;
  /// s . k for s = (sqrt(1-mu^2) cos phi, sqrt(1-mu^2) sin phi, mu).
  std::complex<double> dot(double mu, double phi) const;
  /// Real-space angle tau = |nu q| of the continued rotation.
  double tau() const;
};

/// Discrete direction: node index into the quadrature set plus azimuth.
struct Direction {
  int node = 0;
  double phi = 0.0;
};

struct WMatrices {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
};

/// {W_+-}_{ij} = w_j sum_{l=|m|}^{l_max} (2l+1) g^l p_l^m(+-mu_i) p_l^m(mu_j) (1-mu_j^2)^{|m|}.
/// Orders above l_max give zero matrices.
WMatrices build_w_matrices(int m, const QuadratureSet& quad, const PhaseFunction& phase);

/// Solve E_- E_+ Xi U = nu^{-2} Xi U for the N positive eigenvalues of order m.
EigenSystem solve_eigensystem(int m, std::shared_ptr<const QuadratureSet> quad,
                              const MediumParams& medium);

/// Orders 0..max_order (default l_max), solved concurrently. The energy
/// density needs only m = 0.
SpectralModel build_spectral_model(const MediumParams& medium, int half_order,
                                   int max_order = -1);

/// Closed form phi^m(nu_n, mu_i) = (varpi nu / 2) g^m(nu, mu_i) / (nu - mu_i).
double eigenmode_phi(const EigenSystem& system, int n, int node);

/// Phi^m_nu(s_i) = phi^m(nu, mu_i) (1-mu_i^2)^{|m|/2} e^{i m phi} from the
/// stored eigenvector; nu_sign = -1 selects the mode of eigenvalue -nu_n.
std::complex<double> unrotated_mode(const EigenSystem& system, int m, int n, double nu_sign,
                                    Direction dir);

/// R_k Phi^m_nu(s_i) through the Wigner expansion of each spherical harmonic.
/// wave.nu must equal +-nu_n.
std::complex<double> rotated_mode(const EigenSystem& system, int m, int n,
                                  const WaveVector& wave, Direction dir);

/// Wave vector attached to mode n with the given sign of nu.
WaveVector mode_wave(const EigenSystem& system, int n, double nu_sign, double q, double phi_q);

/// N(nu, q) = 2 pi k_z sum_i w_i mu_i |Phi|^2; odd in nu_sign.
double normalization_factor(const EigenSystem& system, int n, double q, double nu_sign = 1.0);

}  // namespace ado3d
