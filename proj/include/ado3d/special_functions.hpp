#pragma once

#include <complex>
#include <vector>

namespace ado3d {

/// Truncated Henyey-Greenstein-moment phase function together with the
/// single-scattering albedo. Moments are g^l for l <= degree and zero beyond.
struct PhaseFunction {
  double anisotropy = 0.0;  // g in [0, 1]
  int degree = 0;           // l_max
  double albedo = 0.5;      // varpi in (0, 1)

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  double moment(int l) const;
  /// h_l = (2l+1)(1 - varpi g^l) for l <= l_max, 2l+1 beyond.
  double h(int l) const;
};

/// Normalized associated Legendre function
///   p_l^m(mu) = (-1)^m sqrt((l-m)!/(l+m)!) P_l^m(mu) (1-mu^2)^{-|m|/2},
/// a polynomial of degree l-|m|, evaluated by its three-term recurrence.
double normalized_plm(int l, int m, double mu);

/// p_l^m(mu) for l = |m| .. l_max; entry k holds l = |m| + k.
/// Works for complex arguments as well (used when mu = s.k is complex).
template <typename T>
std::vector<T> normalized_plm_column(int l_max, int m, T mu);

/// p_{|m|}^m = sqrt((2|m|)!) / (2^|m| |m|!) times (-1)^m for negative m.
double normalized_plm_seed(int m);

/// Legendre polynomial P_l(x) by the Bonnet recurrence.
double legendre_p(int l, double x);

/// Normalized Chandrasekhar polynomials g_l^m(nu) for |m| <= l <= l_cut.
struct ChandrasekharTable {
  int order = 0;  // m (signed)
  double nu = 0.0;
  std::vector<double> values;  // values[l], zero for l < |m|

  double operator()(int l) const { return values.at(static_cast<std::size_t>(l)); }
  int l_cut() const { return static_cast<int>(values.size()) - 1; }
};

/// Default truncation point for the backward-ratio seed.
int default_l_cut(int l_max);

/// Forward recurrence for |nu| <= 1 and the backward ratio method otherwise.
/// Throws std::invalid_argument for nu == 0 or l_cut < l_max, and
/// NumericalSingularity when a ratio denominator vanishes.
ChandrasekharTable chandrasekhar_g(int m, double nu, const PhaseFunction& phase, int l_cut);
ChandrasekharTable chandrasekhar_g(int m, double nu, const PhaseFunction& phase);

/// Unconditional forward recurrence from the g_{|m|}^m seed.
ChandrasekharTable chandrasekhar_g_forward(int m, double nu, const PhaseFunction& phase,
                                           int l_cut);
/// Unconditional backward ratio recurrence seeded with gbar_{l_cut} = 0.
ChandrasekharTable chandrasekhar_g_backward(int m, double nu, const PhaseFunction& phase,
                                            int l_cut);

/// Wigner d^l_{m1 m2}(theta) given cos(theta) and sin(theta) as complex
/// numbers; entry k of the result holds l = max(|m1|,|m2|) + k up to l_max.
std::vector<std::complex<double>> wigner_d_column(int l_max, int m1, int m2,
                                                  std::complex<double> cos_theta,
                                                  std::complex<double> sin_theta);

/// d^l_{m1 m2} at the continued angle cos(theta) = sqrt(1+tau^2),
/// sin(theta) = i tau.
std::complex<double> wigner_d_continued(int l, int m1, int m2, double tau);

/// Bessel function J0 for x >= 0, absolute error below 1e-12.
double bessel_j0(double x);

/// Four-term large-argument form of q J0(q rho) used to split the Hankel
/// integral: sqrt(2q/(pi rho)) [(1 - 9/128x^2) cos(x-pi/4)
///   + (1/8x - 75/1024x^3) sin(x-pi/4)],  x = q rho.
double bessel_asymptotic_qj0(double q, double rho);

/// d(q, rho) = q J0(q rho) - bessel_asymptotic_qj0(q, rho).
double bessel_remainder_d(double q, double rho);

}  // namespace ado3d
