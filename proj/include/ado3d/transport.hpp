#pragma once

#include "ado3d/spectral.hpp"

#include <complex>
#include <vector>

namespace ado3d {

/// C(tau; zeta, eta) = (e^{-tau/zeta} - e^{-tau/eta}) / (zeta - eta), with the
/// limit (tau/c^2) e^{-tau/c}, c = (zeta + eta)/2, once
/// |zeta - eta| <= rel_eps * max(|zeta|,|eta|).
double exp_diff_C(double tau, double zeta, double eta, double rel_eps = 1e-7);

/// Unit step with Theta(0) = 1.
inline double heaviside(double z) { return z >= 0.0 ? 1.0 : 0.0; }

/// Jump coefficients of the fundamental solution for mode (m, n). Both are
/// already divided by N(nu, q); B uses N(-nu, q) = -N(nu, q).
struct GreenCoefficients {
  std::complex<double> a;
  std::complex<double> b;
};

GreenCoefficients green_coefficients(const EigenSystem& system, int m, int n, double q,
                                     double phi_q, Direction source);

/// G_q(z, s_i; z', s_i0) in scaled units. Throws std::invalid_argument when z == z'.
std::complex<double> greens_function(const SpectralModel& model, double q, double phi_q,
                                     double z, Direction dir, double z_source,
                                     Direction source);

/// Scattered intensity in Fourier space for the pencil beam along +z, summed
/// over m = -l_max..l_max. z is scaled (z* = mu_t z); the result carries the
/// varpi mu_t^2 / 2 prefactor.
std::complex<double> scattered_intensity_hat(const SpectralModel& model, double q,
                                             double phi_q, double z, Direction dir);

/// Per-(q, n) data of the m = 0 kernel; independent of z.
struct KernelTerm {
  double nu = 0.0;
  double kz = 1.0;
  double weight = 0.0;  // nu / N(nu, q)
  double s_plus = 0.0;  // sum_l (2l+1) g^l g_l^0(nu) P_l(kz)
  double s_minus = 0.0; // same with (-1)^l
};

std::vector<KernelTerm> kernel_terms(const EigenSystem& system_m0, double q);

/// F(q, z*) from precomputed terms.
double f_kernel(const std::vector<KernelTerm>& terms, double z);
double f_kernel(const EigenSystem& system_m0, double q, double z);

/// F sampled on a (q, z) grid; values[iq * z.size() + iz].
struct SpectralField {
  std::vector<double> q;
  std::vector<double> z;
  std::vector<double> values;

  double at(std::size_t iq, std::size_t iz) const { return values.at(iq * z.size() + iz); }
};

SpectralField spectral_field(const EigenSystem& system_m0, const std::vector<double>& q,
                             const std::vector<double>& z);

}  // namespace ado3d
