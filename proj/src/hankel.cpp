#include "ado3d/hankel.hpp"

#include "ado3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ado3d {

namespace {

constexpr double kPi = std::numbers::pi;

// Runs body(begin, end) over [0, count) split into contiguous chunks.
template <typename Body>
void parallel_chunks(std::size_t count, Body body) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  if (workers == 1 || count < 64) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t begin = 0; begin < count; begin += chunk) {
    pool.emplace_back(body, begin, std::min(count, begin + chunk));
  }
  for (auto& t : pool) t.join();
}

void append_trapezoid(HankelRule& rule, double lo, double hi, int pieces, double scale,
                      double (*kernel)(double, double)) {
  const double step = (hi - lo) / pieces;
  for (int k = 0; k <= pieces; ++k) {
    const double q = lo + step * k;
    const double end = (k == 0 || k == pieces) ? 0.5 : 1.0;
    rule.q.push_back(q);
    rule.weight.push_back(scale * step * end * kernel(q, rule.rho_scaled));
  }
}

double direct_qj0(double q, double rho) { return q * bessel_j0(q * rho); }

}  // namespace

void InversionParams::validate() const {
  if (!(de_step > 0.0)) throw std::invalid_argument("inversion: h must be positive");
  if (de_halfwidth < 1) throw std::invalid_argument("inversion: N_k must be >= 1");
  if (trapezoids < 2) throw std::invalid_argument("inversion: need at least 2 trapezoids");
  if (!(segment2_upper > 0.0)) {
    throw std::invalid_argument("inversion: segment upper limit must be positive");
  }
}

std::string to_string(Provenance p) { return p == Provenance::Ado ? "ADO" : "MC"; }

void DensityField::validate() const {
  if (z.size() != u.size()) throw std::invalid_argument("DensityField: z/U size mismatch");
  if (stderr_u && stderr_u->size() != u.size()) {
    throw std::invalid_argument("DensityField: stderr size mismatch");
  }
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (!(z[i] > z[i - 1])) throw std::invalid_argument("DensityField: z not increasing");
  }
}

std::pair<double, double> de_phi(double t) {
  if (t == 0.0) return {1.0 / 6.0, 0.5};
  const double u = 6.0 * std::sinh(t);
  if (t > 0.0) {
    const double denom = -std::expm1(-u);  // 1 - e^{-u}
    const double decay = std::exp(-u);
    const double phi = t / denom;
    const double dphi = (denom - 6.0 * t * std::cosh(t) * decay) / (denom * denom);
    return {phi, dphi};
  }
  // t < 0: e^{-u} is large. Multiply through by e^{2u}.
  const double eu = std::exp(u);
  if (eu == 0.0) return {0.0, 0.0};
  const double em1 = std::expm1(u);  // e^u - 1, negative
  const double phi = t * eu / em1;
  const double dphi = eu * (em1 - 6.0 * t * std::cosh(t)) / (em1 * em1);
  if (!std::isfinite(phi) || !std::isfinite(dphi)) return {0.0, 0.0};
  return {phi, dphi};
}

HankelRule hankel_rule(const MediumParams& medium, double rho, const InversionParams& params) {
  if (!(rho > 0.0)) throw std::invalid_argument("hankel_rule: rho must be positive");
  params.validate();
  const double mu_t = medium.mu_t();
  const double varpi = medium.albedo();
  HankelRule rule;
  rule.rho_scaled = mu_t * rho;
  const double r = rule.rho_scaled;
  const double a = kPi / (4.0 * r);
  const double trap_scale = 0.5 * varpi * mu_t * mu_t;

  append_trapezoid(rule, 0.0, a, params.trapezoids, trap_scale, direct_qj0);
  if (a < params.segment2_upper) {
    append_trapezoid(rule, a, params.segment2_upper, params.trapezoids, trap_scale,
                     bessel_remainder_d);
  }

  const double de_scale = varpi * mu_t * mu_t / std::sqrt(2.0 * kPi * r) * (kPi / r);
  const double h = params.de_step;
  for (int branch = 0; branch < 2; ++branch) {
    const double offset = branch == 0 ? 0.5 * h : 0.0;
    for (int k = -params.de_halfwidth; k <= params.de_halfwidth; ++k) {
      const auto [phi, dphi] = de_phi(k * h + offset);
      if (!(phi >= 0.0)) {
        std::ostringstream msg;
        msg << "hankel_rule: negative DE abscissa at t=" << k * h + offset;
        throw InversionFailure(msg.str());
      }
      if (dphi == 0.0) continue;
      const double s = kPi * phi / (h * r);
      const double q = s + a;
      const double x = q * r;
      double factor = 0.0;
      if (branch == 0) {
        factor = (1.0 - 9.0 / (128.0 * x * x)) * std::cos(s * r);
      } else {
        factor = (1.0 / (8.0 * x) - 75.0 / (1024.0 * x * x * x)) * std::sin(s * r);
      }
      rule.q.push_back(q);
      rule.weight.push_back(de_scale * dphi * std::sqrt(q) * factor);
    }
  }
  return rule;
}

double energy_density(const SpectralModel& model, double rho, double z,
                      const InversionParams& params) {
  return density_curve(model, rho, {z}, params).u.front();
}

DensityField density_curve(const SpectralModel& model, double rho, const std::vector<double>& z,
                           const InversionParams& params) {
  if (z.empty()) throw std::invalid_argument("density_curve: empty z grid");
  if (!(rho > 0.0)) throw std::invalid_argument("density_curve: rho must be positive");
  const HankelRule rule = hankel_rule(model.medium, rho, params);
  const EigenSystem& system = model.order(0);
  const double mu_t = model.medium.mu_t();

  std::vector<std::vector<KernelTerm>> table(rule.q.size());
  parallel_chunks(rule.q.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) table[j] = kernel_terms(system, rule.q[j]);
  });

  DensityField field;
  field.rho = rho;
  field.z = z;
  field.u.assign(z.size(), 0.0);
  field.provenance = Provenance::Ado;
  field.validate();

  std::vector<double> bad_q(z.size(), -1.0);
  parallel_chunks(z.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double zs = mu_t * z[i];
      double sum = 0.0;
      for (std::size_t j = 0; j < rule.q.size(); ++j) {
        const double term = rule.weight[j] * f_kernel(table[j], zs);
        if (!std::isfinite(term)) {
          bad_q[i] = rule.q[j];
          break;
        }
        sum += term;
      }
      field.u[i] = sum;
    }
  });
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (bad_q[i] >= 0.0) {
      std::ostringstream msg;
      msg << "density_curve: non-finite integrand at q=" << bad_q[i] << " (rho=" << rho
          << " mm, z=" << z[i] << " mm)";
      throw InversionFailure(msg.str());
    }
  }

  const double peak = *std::max_element(field.u.begin(), field.u.end());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (field.u[i] < 0.0 && -field.u[i] <= 1e-12 * std::abs(peak)) {
      std::clog << "warning: clamped U=" << field.u[i] << " to 0 at rho=" << rho
                << " z=" << z[i] << '\n';
      field.u[i] = 0.0;
    }
  }
  return field;
}

}  // namespace ado3d
