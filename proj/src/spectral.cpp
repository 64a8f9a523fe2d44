#include "ado3d/spectral.hpp"

#include "ado3d/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ado3d {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kImagTolerance = 1e-8;
constexpr double kNodeSeparation = 1e-10;
constexpr double kPoleTolerance = 1e-12;

double sign_power(int k) { return (std::abs(k) % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

MediumParams MediumParams::make(double mu_a, double mu_s, double anisotropy, int l_max) {
  MediumParams medium;
  medium.mu_a = mu_a;
  medium.mu_s = mu_s;
  medium.phase.anisotropy = anisotropy;
  medium.phase.degree = l_max;
  medium.phase.albedo = mu_s / (mu_a + mu_s);
  medium.validate();
  return medium;
}

void MediumParams::validate() const {
  if (!(mu_a > 0.0)) throw std::invalid_argument("medium: mu_a must be positive");
  if (!(mu_s > 0.0)) throw std::invalid_argument("medium: mu_s must be positive");
  phase.validate();
  if (std::abs(phase.albedo - albedo()) > 1e-15) {
    throw std::invalid_argument("medium: phase albedo differs from mu_s / mu_t");
  }
}

double EigenSystem::chandrasekhar(int n, int l, int m, double nu_sign) const {
  double value = tables.at(static_cast<std::size_t>(n))(l);
  if (m < 0) value *= sign_power(order);
  if (nu_sign < 0.0) value *= sign_power(l - order);
  return value;
}

const EigenSystem& SpectralModel::order(int m) const {
  const auto am = static_cast<std::size_t>(std::abs(m));
  if (am >= systems.size()) {
    throw std::out_of_range("SpectralModel: azimuthal order " + std::to_string(m) +
                            " was not solved");
  }
  return systems[am];
}

double WaveVector::kz() const { return std::sqrt(1.0 + nu * nu * q * q); }

std::complex<double> WaveVector::sin_theta() const { return {0.0, tau()}; }

double WaveVector::tau() const { return std::abs(nu * q); }

double WaveVector::phi_k() const { return nu > 0.0 ? phi_q + kPi : phi_q; }

std::array<std::complex<double>, 3> WaveVector::components() const {
  return {cplx(0.0, -nu * q * std::cos(phi_q)), cplx(0.0, -nu * q * std::sin(phi_q)),
          cplx(kz(), 0.0)};
}

std::complex<double> WaveVector::dot(double mu, double phi) const {
  const double transverse = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  return {kz() * mu, -nu * q * transverse * std::cos(phi - phi_q)};
}

WMatrices build_w_matrices(int m, const QuadratureSet& quad, const PhaseFunction& phase) {
  const int n = quad.half_order;
  const int am = std::abs(m);
  WMatrices w{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  if (am > phase.degree) return w;

  // p_l^m at +mu_i; p_l^m(-mu) = (-1)^{l+m} p_l^m(mu).
  std::vector<std::vector<double>> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = normalized_plm_column(phase.degree, m, quad.nodes[i]);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double mu_j = quad.nodes[j];
      const double taper = std::pow(1.0 - mu_j * mu_j, am);
      double plus = 0.0;
      double minus = 0.0;
      for (int l = am; l <= phase.degree; ++l) {
        const std::size_t k = static_cast<std::size_t>(l - am);
        const double term = (2.0 * l + 1.0) * phase.moment(l) * p[i][k] * p[j][k];
        plus += term;
        minus += sign_power(l + m) * term;
      }
      w.plus(i, j) = quad.weights[j] * plus * taper;
      w.minus(i, j) = quad.weights[j] * minus * taper;
    }
  }
  return w;
}

EigenSystem solve_eigensystem(int m, std::shared_ptr<const QuadratureSet> quad,
                              const MediumParams& medium) {
  if (!quad) throw std::invalid_argument("solve_eigensystem: missing quadrature set");
  medium.validate();
  const PhaseFunction& phase = medium.phase;
  const int am = std::abs(m);
  if (am > phase.degree) {
    throw std::invalid_argument("solve_eigensystem: |m| exceeds l_max");
  }
  const int n = quad->half_order;
  const double varpi = phase.albedo;

  const WMatrices w = build_w_matrices(am, *quad, phase);
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) mu(i) = quad->nodes[i];
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd sum_block = identity - 0.5 * varpi * (w.plus + w.minus);
  const Eigen::MatrixXd diff_block = identity - 0.5 * varpi * (w.plus - w.minus);
  const Eigen::MatrixXd xi_inv = mu.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd e_plus = sum_block * xi_inv;
  const Eigen::MatrixXd e_minus = diff_block * xi_inv;
  const Eigen::MatrixXd product = e_minus * e_plus;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(product, true);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "solve_eigensystem: eigen-decomposition failed (m=" << m << ", N=" << n << ")";
    throw SpectralFailure(msg.str());
  }

  Eigen::FullPivLU<Eigen::MatrixXd> diff_lu(diff_block);
  if (!diff_lu.isInvertible()) {
    std::ostringstream msg;
    msg << "solve_eigensystem: singular V system (m=" << m << ", N=" << n << ")";
    throw DegenerateMode(msg.str());
  }

  struct Pair {
    double nu;
    std::vector<double> phi;
  };
  std::vector<Pair> pairs;
  for (int k = 0; k < n; ++k) {
    const cplx lambda = solver.eigenvalues()(k);
    if (std::abs(lambda.imag()) > kImagTolerance * std::abs(lambda.real())) {
      std::ostringstream msg;
      msg << "solve_eigensystem: complex eigenvalue " << lambda << " (m=" << m << ", N=" << n
          << ")";
      throw SpectralFailure(msg.str());
    }
    if (!(lambda.real() > 0.0)) continue;
    const double nu = 1.0 / std::sqrt(lambda.real());

    Eigen::VectorXcd xc = solver.eigenvectors().col(k);
    Eigen::Index pivot = 0;
    xc.cwiseAbs().maxCoeff(&pivot);
    xc /= xc(pivot);
    const Eigen::VectorXd x = xc.real();

    const Eigen::VectorXd u = x.cwiseQuotient(mu);
    const Eigen::VectorXd rhs = x / nu;
    const Eigen::VectorXd v = diff_lu.solve(rhs);
    if (!v.allFinite()) {
      std::ostringstream msg;
      msg << "solve_eigensystem: degenerate mode nu=" << nu << " (m=" << m << ")";
      throw DegenerateMode(msg.str());
    }

    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      norm += quad->weights[i] * std::pow(1.0 - mu(i) * mu(i), am) * u(i);
    }
    if (!(std::abs(norm) > 1e-300) || !std::isfinite(norm)) {
      std::ostringstream msg;
      msg << "solve_eigensystem: zero normalization sum nu=" << nu << " (m=" << m << ")";
      throw NormalizationFailure(msg.str());
    }
    std::vector<double> phi(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
      phi[i] = 0.5 * (u(i) + v(i)) / norm;
      phi[n + i] = 0.5 * (u(i) - v(i)) / norm;
    }
    pairs.push_back({nu, std::move(phi)});
  }
  if (static_cast<int>(pairs.size()) != n) {
    std::ostringstream msg;
    msg << "solve_eigensystem: found " << pairs.size() << " positive eigenvalues, expected "
        << n << " (m=" << m << ", N=" << n << ")";
    throw SpectralFailure(msg.str());
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.nu > b.nu; });

  EigenSystem system;
  system.order = am;
  system.phase = phase;
  system.quad = std::move(quad);
  for (auto& pair : pairs) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(pair.nu - mu(i)) <= kNodeSeparation) {
        std::ostringstream msg;
        msg << "solve_eigensystem: eigenvalue " << pair.nu << " coincides with node " << mu(i);
        throw PoleProximity(msg.str());
      }
    }
    system.eigenvalues.push_back(pair.nu);
    system.tables.push_back(chandrasekhar_g(am, pair.nu, phase));
    system.vectors.push_back(std::move(pair.phi));
  }
  return system;
}

SpectralModel build_spectral_model(const MediumParams& medium, int half_order,
                                   int max_order) {
  medium.validate();
  if (max_order < 0 || max_order > medium.phase.degree) max_order = medium.phase.degree;
  SpectralModel model;
  model.medium = medium;
  model.quad = std::make_shared<const QuadratureSet>(gauss_legendre(half_order));
  std::vector<std::future<EigenSystem>> jobs;
  for (int m = 0; m <= max_order; ++m) {
    jobs.push_back(std::async(std::launch::async, [m, &model, &medium] {
      return solve_eigensystem(m, model.quad, medium);
    }));
  }
  for (auto& job : jobs) model.systems.push_back(job.get());
  return model;
}

namespace {

// g^m(nu, mu) = sum_l (2l+1) g^l p_l^m(mu) g_l^m(nu)
template <typename T>
T angular_sum(const EigenSystem& system, int m, int n, double nu_sign, T mu) {
  const int l_max = system.phase.degree;
  const auto p = normalized_plm_column(l_max, m, mu);
  T sum(0.0);
  for (int l = system.order; l <= l_max; ++l) {
    sum += T((2.0 * l + 1.0) * system.phase.moment(l) * system.chandrasekhar(n, l, m, nu_sign)) *
           p[static_cast<std::size_t>(l - system.order)];
  }
  return sum;
}

void check_mode(const EigenSystem& system, int m, int n) {
  if (std::abs(m) != system.order) {
    throw std::invalid_argument("mode evaluation: |m| does not match the eigen-system order");
  }
  if (n < 0 || n >= system.size()) throw std::out_of_range("mode evaluation: bad mode index");
}

}  // namespace

double eigenmode_phi(const EigenSystem& system, int n, int node) {
  check_mode(system, system.order, n);
  const double nu = system.nu(n);
  const double mu = system.quad->nodes.at(static_cast<std::size_t>(node));
  if (std::abs(nu - mu) < kNodeSeparation) {
    throw PoleProximity("eigenmode_phi: eigenvalue coincides with the node");
  }
  return 0.5 * system.phase.albedo * nu * angular_sum(system, system.order, n, 1.0, mu) /
         (nu - mu);
}

std::complex<double> unrotated_mode(const EigenSystem& system, int m, int n, double nu_sign,
                                    Direction dir) {
  check_mode(system, m, n);
  const int half = system.quad->half_order;
  // phi(-nu, mu_i) = phi(nu, -mu_i): swap hemispheres.
  int idx = dir.node;
  if (nu_sign < 0.0) idx = dir.node < half ? dir.node + half : dir.node - half;
  const double value = system.vectors[n].at(static_cast<std::size_t>(idx));
  const double mu = system.quad->nodes.at(static_cast<std::size_t>(dir.node));
  const double taper = std::pow(1.0 - mu * mu, 0.5 * system.order);
  return value * taper * std::polar(1.0, m * dir.phi);
}

WaveVector mode_wave(const EigenSystem& system, int n, double nu_sign, double q, double phi_q) {
  return WaveVector{nu_sign < 0.0 ? -system.nu(n) : system.nu(n), q, phi_q};
}

std::complex<double> rotated_mode(const EigenSystem& system, int m, int n,
                                  const WaveVector& wave, Direction dir) {
  check_mode(system, m, n);
  if (std::abs(std::abs(wave.nu) - system.nu(n)) > 1e-12 * system.nu(n)) {
    throw std::invalid_argument("rotated_mode: wave vector does not belong to this mode");
  }
  const double nu_sign = wave.nu < 0.0 ? -1.0 : 1.0;
  const double nu = wave.nu;
  const double mu = system.quad->nodes.at(static_cast<std::size_t>(dir.node));
  const cplx sk = wave.dot(mu, dir.phi);
  const cplx denom = nu - sk;
  if (std::abs(denom) < kPoleTolerance) {
    throw PoleProximity("rotated_mode: nu - s.k vanishes");
  }
  const int l_max = system.phase.degree;
  const cplx c = wave.cos_theta();
  const cplx s = wave.sin_theta();
  const double phi_k = wave.phi_k();
  const double transverse = std::sqrt(std::max(0.0, 1.0 - mu * mu));

  // harmonic[l] accumulates (R_k Y_lm)(s_i) for l = |m| .. l_max.
  std::vector<cplx> harmonic(static_cast<std::size_t>(l_max + 1), cplx(0.0));
  for (int mp = -l_max; mp <= l_max; ++mp) {
    const int lo = std::max(std::abs(mp), std::abs(m));
    const auto d = wigner_d_column(l_max, mp, m, c, s);
    const auto p = normalized_plm_column(l_max, mp, mu);
    const cplx azimuth =
        std::polar(1.0, mp * (dir.phi - phi_k)) * std::pow(transverse, std::abs(mp));
    for (int l = lo; l <= l_max; ++l) {
      const double ylm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi)) * sign_power(mp) *
                         p[static_cast<std::size_t>(l - std::abs(mp))];
      harmonic[l] += d[static_cast<std::size_t>(l - lo)] * ylm * azimuth;
    }
  }
  cplx sum(0.0);
  for (int l = system.order; l <= l_max; ++l) {
    sum += std::sqrt((2.0 * l + 1.0) * kPi) * system.phase.moment(l) *
           system.chandrasekhar(n, l, m, nu_sign) * harmonic[l];
  }
  return sign_power(m) * system.phase.albedo * nu / denom * sum;
}

double normalization_factor(const EigenSystem& system, int n, double q, double nu_sign) {
  check_mode(system, system.order, n);
  const auto& quad = *system.quad;
  const double nu = system.nu(n);
  const double varpi = system.phase.albedo;
  const int am = system.order;
  double total = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    // |Phi(mu_i)|^2 from the single-azimuth harmonic sum; Phi_{-nu}(mu) = Phi_nu(-mu).
    const double mu = nu_sign < 0.0 ? -quad.nodes[i] : quad.nodes[i];
    const auto p = normalized_plm_column(system.phase.degree, am, mu);
    const double taper = std::pow(1.0 - mu * mu, 0.5 * am);
    double harmonic_sum = 0.0;
    for (int l = am; l <= system.phase.degree; ++l) {
      const double ylm0 = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi)) * sign_power(am) *
                          p[static_cast<std::size_t>(l - am)] * taper;
      harmonic_sum += std::sqrt(2.0 * l + 1.0) * system.phase.moment(l) * ylm0 *
                      system.tables[n](l);
    }
    const double modulus2 =
        kPi * varpi * varpi * nu * nu / ((nu - mu) * (nu - mu)) * harmonic_sum * harmonic_sum;
    total += quad.weights[i] * quad.nodes[i] * modulus2;
  }
  const WaveVector wave{nu, q, 0.0};
  const double value = 2.0 * kPi * wave.kz() * total;
  if (!(value > 0.0) && nu_sign > 0.0) {
    std::ostringstream msg;
    msg << "normalization_factor: non-positive N(nu, q) = " << value << " for nu=" << nu
        << " m=" << am;
    throw NormalizationFailure(msg.str());
  }
  if (!(value < 0.0) && nu_sign < 0.0) {
    throw NormalizationFailure("normalization_factor: N(-nu, q) must be negative");
  }
  return value;
}

}  // namespace ado3d
