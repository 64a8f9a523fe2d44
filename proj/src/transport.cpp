#include "ado3d/transport.hpp"

#include "ado3d/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ado3d {

namespace {

using cplx = std::complex<double>;

constexpr double kImagTolerance = 1e-8;

double sign_power(int k) { return (std::abs(k) % 2 == 0) ? 1.0 : -1.0; }

// sum_l (2l+1) g^l g_l^m(sign nu_n) d^l_{0m}[i tau]
cplx beam_projection(const EigenSystem& system, int m, int n, double nu_sign,
                     const WaveVector& wave) {
  const int l_max = system.phase.degree;
  const auto d = wigner_d_column(l_max, 0, m, wave.cos_theta(), wave.sin_theta());
  cplx sum(0.0);
  for (int l = system.order; l <= l_max; ++l) {
    sum += (2.0 * l + 1.0) * system.phase.moment(l) * system.chandrasekhar(n, l, m, nu_sign) *
           d[static_cast<std::size_t>(l - system.order)];
  }
  return sum;
}

}  // namespace

double exp_diff_C(double tau, double zeta, double eta, double rel_eps) {
  if (zeta == 0.0 || eta == 0.0) {
    throw std::invalid_argument("exp_diff_C: zeta and eta must be nonzero");
  }
  const double scale = std::max(std::abs(zeta), std::abs(eta));
  if (std::abs(zeta - eta) <= rel_eps * scale) {
    // Derivative at the midpoint; the error is second order in zeta - eta.
    const double mid = 0.5 * (zeta + eta);
    return tau / (mid * mid) * std::exp(-tau / mid);
  }
  // Factor out the larger exponential so expm1 sees a non-positive argument.
  const double a = -tau / zeta;
  const double b = -tau / eta;
  const double gap = tau * (eta - zeta) / (zeta * eta);  // b - a
  const double diff = a >= b ? -std::exp(a) * std::expm1(gap) : std::exp(b) * std::expm1(-gap);
  return diff / (zeta - eta);
}

GreenCoefficients green_coefficients(const EigenSystem& system, int m, int n, double q,
                                     double phi_q, Direction source) {
  const double w0 = system.quad->weights.at(static_cast<std::size_t>(source.node));
  const double norm = normalization_factor(system, n, q);
  const WaveVector up = mode_wave(system, n, 1.0, q, phi_q);
  const WaveVector down = mode_wave(system, n, -1.0, q, phi_q);
  // R Phi^{m*} is the rotated mode of order -m.
  GreenCoefficients coeff;
  coeff.a = w0 / norm * rotated_mode(system, -m, n, up, source);
  coeff.b = w0 / norm * rotated_mode(system, -m, n, down, source);
  return coeff;
}

std::complex<double> greens_function(const SpectralModel& model, double q, double phi_q,
                                     double z, Direction dir, double z_source,
                                     Direction source) {
  if (z == z_source) {
    throw std::invalid_argument("greens_function: z coincides with the source plane");
  }
  const bool above = z > z_source;
  const double dz = z - z_source;
  cplx total(0.0);
  for (int m = -model.l_max(); m <= model.l_max(); ++m) {
    const EigenSystem& system = model.order(m);
    for (int n = 0; n < system.size(); ++n) {
      const GreenCoefficients coeff = green_coefficients(system, m, n, q, phi_q, source);
      const double nu = system.nu(n);
      const WaveVector wave = mode_wave(system, n, above ? 1.0 : -1.0, q, phi_q);
      const double decay = std::exp(-wave.kz() * std::abs(dz) / nu);
      total += (above ? coeff.a : coeff.b) * rotated_mode(system, m, n, wave, dir) * decay;
    }
  }
  return total;
}

std::complex<double> scattered_intensity_hat(const SpectralModel& model, double q,
                                             double phi_q, double z, Direction dir) {
  const double varpi = model.medium.albedo();
  const double mu_t = model.medium.mu_t();
  const double step = heaviside(z);
  cplx total(0.0);
  for (int m = -model.l_max(); m <= model.l_max(); ++m) {
    const EigenSystem& system = model.order(m);
    for (int n = 0; n < system.size(); ++n) {
      const double nu = system.nu(n);
      const WaveVector up = mode_wave(system, n, 1.0, q, phi_q);
      const WaveVector down = mode_wave(system, n, -1.0, q, phi_q);
      const double kz = up.kz();
      const double norm = normalization_factor(system, n, q);
      const cplx s_plus = beam_projection(system, m, n, 1.0, up);
      const cplx s_minus = beam_projection(system, m, n, -1.0, down);
      const cplx mode_down = rotated_mode(system, m, n, down, dir);
      cplx bracket(0.0);
      if (step > 0.0) {
        const cplx psi1 =
            exp_diff_C(z, 1.0, nu / kz) * rotated_mode(system, m, n, up, dir) * s_plus;
        const cplx psi2 = std::exp(-z) * kz / (nu + kz) * mode_down * s_minus;
        bracket = psi1 + psi2;
      } else {
        bracket = std::exp(kz * z / nu) * kz / (nu + kz) * mode_down * s_minus;
      }
      total += sign_power(m) * nu / (norm * kz) * bracket;
    }
  }
  return 0.5 * varpi * mu_t * mu_t * total;
}

std::vector<KernelTerm> kernel_terms(const EigenSystem& system_m0, double q) {
  if (system_m0.order != 0) throw std::invalid_argument("kernel_terms: needs the m = 0 system");
  const int l_max = system_m0.phase.degree;
  std::vector<KernelTerm> terms;
  terms.reserve(static_cast<std::size_t>(system_m0.size()));
  for (int n = 0; n < system_m0.size(); ++n) {
    const WaveVector wave = mode_wave(system_m0, n, 1.0, q, 0.0);
    const auto d = wigner_d_column(l_max, 0, 0, wave.cos_theta(), wave.sin_theta());
    cplx plus(0.0);
    cplx minus(0.0);
    for (int l = 0; l <= l_max; ++l) {
      const cplx term = (2.0 * l + 1.0) * system_m0.phase.moment(l) *
                        system_m0.tables[n](l) * d[static_cast<std::size_t>(l)];
      plus += term;
      minus += sign_power(l) * term;
    }
    for (const cplx& value : {plus, minus}) {
      if (std::abs(value.imag()) > kImagTolerance * std::abs(value.real()) + 1e-300) {
        std::ostringstream msg;
        msg << "kernel_terms: complex beam projection " << value << " at q=" << q;
        throw AssemblyError(msg.str());
      }
    }
    KernelTerm term;
    term.nu = system_m0.nu(n);
    term.kz = wave.kz();
    term.weight = term.nu / normalization_factor(system_m0, n, q);
    term.s_plus = plus.real();
    term.s_minus = minus.real();
    terms.push_back(term);
  }
  return terms;
}

double f_kernel(const std::vector<KernelTerm>& terms, double z) {
  double total = 0.0;
  if (z >= 0.0) {
    const double beam = std::exp(-z);
    for (const KernelTerm& t : terms) {
      const double forward = exp_diff_C(z, 1.0, t.nu / t.kz) / t.kz;
      total += t.weight * (forward * t.s_plus + beam / (t.kz + t.nu) * t.s_minus);
    }
  } else {
    for (const KernelTerm& t : terms) {
      total += t.weight * std::exp(t.kz * z / t.nu) / (t.kz + t.nu) * t.s_minus;
    }
  }
  return total;
}

double f_kernel(const EigenSystem& system_m0, double q, double z) {
  return f_kernel(kernel_terms(system_m0, q), z);
}

SpectralField spectral_field(const EigenSystem& system_m0, const std::vector<double>& q,
                             const std::vector<double>& z) {
  SpectralField field;
  field.q = q;
  field.z = z;
  field.values.reserve(q.size() * z.size());
  for (double qq : q) {
    const auto terms = kernel_terms(system_m0, qq);
    for (double zz : z) {
      const double value = f_kernel(terms, zz);
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "spectral_field: non-finite F at q=" << qq << " z=" << zz;
        throw AssemblyError(msg.str());
      }
      field.values.push_back(value);
    }
  }
  return field;
}

}  // namespace ado3d
