// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.
// Usage: acceptance [--only 1,2,...] [--photons N]

#include "ado3d/errors.hpp"
#include "ado3d/hankel.hpp"
#include "ado3d/monte_carlo.hpp"
#include "ado3d/special_functions.hpp"
#include "ado3d/spectral.hpp"
#include "ado3d/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ado3d;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kShellFraction = 0.05;

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> z(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) z[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return z;
}

double max_rel_diff(const DensityField& a, const DensityField& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.u[i] - ref.u[i]) / std::abs(ref.u[i]));
  }
  return worst;
}

bool single_peaked(const DensityField& f) {
  for (double u : f.u) {
    if (!std::isfinite(u) || !(u > 0.0)) return false;
  }
  const auto peak = static_cast<std::size_t>(std::max_element(f.u.begin(), f.u.end()) - f.u.begin());
  for (std::size_t i = 0; i < peak; ++i) {
    if (!(f.u[i + 1] > f.u[i])) return false;
  }
  for (std::size_t i = peak; i + 1 < f.size(); ++i) {
    if (!(f.u[i + 1] < f.u[i])) return false;
  }
  return true;
}

DensityField curve(const MediumParams& medium, int half_order, double rho,
                   const std::vector<double>& z, const InversionParams& inversion = {}) {
  const SpectralModel model = build_spectral_model(medium, half_order, 0);
  return density_curve(model, rho, z, inversion);
}

double isotropic_root(double varpi) {
  auto f = [&](double nu) { return 0.5 * varpi * nu * std::log((nu + 1.0) / (nu - 1.0)) - 1.0; };
  double lo = 1.0 + 1e-14;
  double hi = 1e4;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Criterion convergence_rho5() {
  Criterion c{1, "convergence at rho = 5 mm, (3,3) vs (9,11)", {}};
  const auto z = linspace(-50.0, 50.0, 101);
  const auto start = std::chrono::steady_clock::now();
  const auto coarse = curve(MediumParams::make(0.01, 10.0, 0.9, 3), 3, 5.0, z);
  const auto fine = curve(MediumParams::make(0.01, 10.0, 0.9, 9), 11, 5.0, z);
  const double elapsed = seconds_since(start);
  const double diff = max_rel_diff(coarse, fine);
  c.checks.push_back({"max relative difference", diff <= 0.05, fmt("%.3g <= 0.05", diff)});
  c.checks.push_back({"runtime", elapsed <= 60.0, fmt("%.1f s <= 60 s", elapsed)});
  return c;
}

Criterion convergence_rho2() {
  Criterion c{2, "convergence at rho = 2 mm, (3,3) vs (9,11)", {}};
  const auto z = linspace(-50.0, 50.0, 101);
  const auto coarse = curve(MediumParams::make(0.01, 10.0, 0.9, 3), 3, 2.0, z);
  const auto fine = curve(MediumParams::make(0.01, 10.0, 0.9, 9), 11, 2.0, z);
  const double diff = max_rel_diff(coarse, fine);
  c.checks.push_back({"max relative difference", diff <= 0.10, fmt("%.3g <= 0.10", diff)});
  c.checks.push_back({"(9,11) finite, positive, single peaked", single_peaked(fine), ""});
  return c;
}

Criterion mc_cross_validation(int id, double g, const std::vector<double>& rhos, double z_lim,
                              std::uint64_t photons) {
  Criterion c{id, fmt("Monte Carlo cross-validation, g = %g, %llu photons", g,
                      static_cast<unsigned long long>(photons)),
              {}};
  const auto medium = MediumParams::make(0.01, 10.0, g, 3);
  const auto z = linspace(-z_lim, z_lim, 101);
  const SpectralModel model = build_spectral_model(medium, 3, 0);

  McConfig mc;
  mc.photons = photons;
  mc.mode = WeightMode::Analog;
  mc.shells = shells_around(rhos, kShellFraction);
  mc.z_edges = edges_around(z);
  const auto start = std::chrono::steady_clock::now();
  const McResult result = run_mc(medium, mc);
  const double elapsed = seconds_since(start);

  for (std::size_t k = 0; k < rhos.size(); ++k) {
    DensityField field = result.fields[k];
    field.rho = rhos[k];
    const DensityField ado = density_curve(model, rhos[k], z);
    const Comparison cmp = compare_fields(ado, field, 0.10);
    int failed = 0;
    double worst = 0.0;
    for (const auto& row : cmp.rows) {
      if (!row.checked) continue;
      failed += row.pass ? 0 : 1;
      worst = std::max(worst, std::abs(row.rel_diff));
    }
    c.checks.push_back({fmt("rho = %g mm", rhos[k]), cmp.pass,
                        fmt("%d of %zu points checked, %d outside tolerance, max |rel diff| %.3g",
                            cmp.checked, cmp.rows.size(), failed, worst)});
  }
  if (id == 3) {
    c.checks.push_back({"MC runtime", elapsed <= 600.0, fmt("%.0f s <= 600 s", elapsed)});
  } else {
    c.checks.push_back({"MC runtime", true, fmt("%.0f s", elapsed)});
  }
  return c;
}

Criterion spectral_oracle() {
  Criterion c{5, "spectral micro-oracle", {}};
  auto rule = [](int n) { return std::make_shared<const QuadratureSet>(gauss_legendre(n)); };
  const auto two = solve_eigensystem(0, rule(1), MediumParams::make(1.0, 1.0, 0.0, 0));
  const double exact = 1.0 / std::sqrt(3.0 * 0.5);
  const double err = std::abs(two.nu(0) - exact);
  c.checks.push_back({"N = 1, varpi = 0.5", err < 1e-12, fmt("|nu - 0.8164965809| = %.2g", err)});
  const auto medium = MediumParams::make(0.01, 10.0, 0.0, 0);
  const auto sys = solve_eigensystem(0, rule(16), medium);
  const double root = isotropic_root(medium.albedo());
  const double rel = std::abs(sys.nu(0) - root) / root;
  c.checks.push_back({"N = 16 largest eigenvalue vs dispersion root", rel < 1e-4,
                      fmt("nu = %.10g, root = %.10g, rel %.2g", sys.nu(0), root, rel)});
  return c;
}

// Sum_i w_i mu_i int R_k Phi^m_nu (R_k' Phi^{m'}_{nu'})^* dphi over a
// 64-point trapezoid; the conjugated unrotated mode is the order -m' mode.
struct ModeKey {
  int m;
  int n;
  double sign;
};

double lemma1_residual(const SpectralModel& model, double q, double phi_q) {
  const auto& quad = *model.quad;
  constexpr int kPhi = 64;
  std::vector<ModeKey> keys;
  for (int m = -model.max_order(); m <= model.max_order(); ++m) {
    const auto& sys = model.order(m);
    for (int n = 0; n < sys.size(); ++n) {
      for (double sign : {1.0, -1.0}) keys.push_back({m, n, sign});
    }
  }
  // samples[key][i * kPhi + j] for the mode and for its conjugate partner.
  std::vector<std::vector<cplx>> mode(keys.size());
  std::vector<std::vector<cplx>> partner(keys.size());
  for (std::size_t a = 0; a < keys.size(); ++a) {
    const auto& sys = model.order(keys[a].m);
    const WaveVector wave = mode_wave(sys, keys[a].n, keys[a].sign, q, phi_q);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      for (int j = 0; j < kPhi; ++j) {
        const Direction dir{static_cast<int>(i), 2.0 * kPi * j / kPhi};
        mode[a].push_back(rotated_mode(sys, keys[a].m, keys[a].n, wave, dir));
        partner[a].push_back(rotated_mode(sys, -keys[a].m, keys[a].n, wave, dir));
      }
    }
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < keys.size(); ++a) {
    const double norm_a = normalization_factor(model.order(keys[a].m), keys[a].n, q, keys[a].sign);
    for (std::size_t b = 0; b < keys.size(); ++b) {
      cplx sum(0.0);
      for (std::size_t i = 0; i < quad.size(); ++i) {
        cplx ring(0.0);
        for (int j = 0; j < kPhi; ++j) {
          const std::size_t k = i * kPhi + static_cast<std::size_t>(j);
          ring += mode[a][k] * partner[b][k];
        }
        sum += quad.weights[i] * quad.nodes[i] * ring * (2.0 * kPi / kPhi);
      }
      const double target = a == b ? norm_a : 0.0;
      worst = std::max(worst, std::abs(sum - target) / std::abs(norm_a));
    }
  }
  return worst;
}

Check lemma1_check() {
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int kDraws = 8;
  double worst[3] = {0.0, 0.0, 0.0};
  const double qs[3] = {0.0, 0.5, 2.0};
  int drawn = 0;
  while (drawn < kDraws) {
    const double varpi = 0.3 + 0.69 * u(rng);
    const double g = 0.9 * u(rng);
    const int l_max = static_cast<int>(4.0 * u(rng));
    const int half = 1 + static_cast<int>(8.0 * u(rng));
    const double phi_q = 2.0 * kPi * u(rng);
    const auto medium = MediumParams::make(1.0 - varpi, varpi, g, l_max);
    SpectralModel model;
    try {
      model = build_spectral_model(medium, half);
    } catch (const NumericalError&) {
      continue;
    }
    ++drawn;
    for (int k = 0; k < 3; ++k) worst[k] = std::max(worst[k], lemma1_residual(model, qs[k], phi_q));
  }
  const double all = std::max({worst[0], worst[1], worst[2]});
  return {"Lemma 1 orthogonality", all < 1e-6,
          fmt("%d draws, max residual %.2g (q=0), %.2g (q=0.5), %.2g (q=2); bound 1e-6", kDraws,
              worst[0], worst[1], worst[2])};
}

Check wigner_check() {
  double worst[3] = {0.0, 0.0, 0.0};
  const double taus[3] = {0.1, 1.0, 10.0};
  for (int t = 0; t < 3; ++t) {
    const double tau = taus[t];
    for (int l = 0; l <= 8; ++l) {
      for (int m = -l; m <= l; ++m) {
        for (int mm = -l; mm <= l; ++mm) {
          cplx sum(0.0);
          for (int mp = -l; mp <= l; ++mp) {
            sum += wigner_d_continued(l, mp, m, tau) * wigner_d_continued(l, mp, mm, tau);
          }
          worst[t] = std::max(worst[t], std::abs(sum - (m == mm ? 1.0 : 0.0)));
        }
      }
    }
  }
  const double all = std::max({worst[0], worst[1], worst[2]});
  return {"Wigner sum rule, l <= 8", all < 1e-9,
          fmt("residual %.2g (tau=0.1), %.2g (tau=1), %.2g (tau=10); bound 1e-9", worst[0],
              worst[1], worst[2])};
}

Check chandrasekhar_check() {
  const PhaseFunction phase{0.9, 12, 0.9};
  const int l_cut = default_l_cut(12);
  const auto fwd = chandrasekhar_g_forward(0, 1.5, phase, l_cut);
  const auto bwd = chandrasekhar_g_backward(0, 1.5, phase, l_cut);
  double worst = 0.0;
  for (int l = 0; l <= 12; ++l) {
    worst = std::max(worst, std::abs(fwd(l) - bwd(l)) / std::max(std::abs(fwd(l)), std::abs(bwd(l))));
  }
  return {"Chandrasekhar forward/backward at nu = 1.5", worst < 1e-8,
          fmt("max relative difference %.2g over l <= 12; bound 1e-8", worst)};
}

Check wave_vector_check() {
  // Every (nu, q) that enters U for the default medium at rho = 5 mm.
  const auto medium = MediumParams::make(0.01, 10.0, 0.9, 3);
  const SpectralModel model = build_spectral_model(medium, 3, 0);
  const HankelRule hankel = hankel_rule(medium, 5.0, InversionParams{});
  double worst = 0.0;
  double worst_scaled = 0.0;
  for (double nu : model.order(0).eigenvalues) {
    for (double q : hankel.q) {
      for (double sign : {1.0, -1.0}) {
        const WaveVector k{sign * nu, q, 0.7};
        const auto c = k.components();
        const double r = std::abs(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] - 1.0);
        worst = std::max(worst, r);
        worst_scaled = std::max(worst_scaled, r / std::max(1.0, nu * nu * q * q));
      }
    }
  }
  return {"k.k = 1", worst_scaled < 1e-12,
          fmt("residual / max(1, (nu q)^2) = %.2g (absolute %.2g)", worst_scaled, worst)};
}

Check f_continuity_check() {
  double worst = 0.0;
  for (double g : {0.0, 0.9}) {
    const auto model = build_spectral_model(MediumParams::make(0.01, 10.0, g, 3), 3, 0);
    for (double q : {0.0, 0.5, 2.0, 10.0}) {
      const double above = f_kernel(model.order(0), q, 0.0);
      const double below = f_kernel(model.order(0), q, -std::numeric_limits<double>::denorm_min());
      worst = std::max(worst, std::abs(above - below) / std::abs(above));
    }
  }
  return {"F branch continuity at z* = 0", worst < 1e-10, fmt("relative jump %.2g", worst)};
}

Check c_continuity_check() {
  // Same arguments evaluated by the degenerate limit and by the exact branch.
  double worst = 0.0;
  for (double tau : {0.01, 1.0, 30.0}) {
    for (double zeta : {0.2, 1.0, 5.0}) {
      for (double gap : {1e-8, 1e-7}) {
        const double eta = zeta * (1.0 + gap);
        const double limit = exp_diff_C(tau, zeta, eta, 2.0 * gap);
        const double exact = exp_diff_C(tau, zeta, eta, 0.5 * gap);
        worst = std::max(worst, std::abs(limit - exact) / std::abs(exact));
      }
    }
  }
  return {"exp_diff_C degenerate-limit continuity", worst < 1e-9,
          fmt("relative jump between branches %.2g", worst)};
}

Check self_convergence_check() {
  const auto medium = MediumParams::make(0.01, 10.0, 0.9, 3);
  const SpectralModel model = build_spectral_model(medium, 3, 0);
  const std::vector<double> z{-20.0, 0.0, 5.0, 30.0};
  InversionParams doubled;
  doubled.de_step = 0.5 * doubled.de_step;
  doubled.de_halfwidth *= 2;
  doubled.trapezoids *= 2;
  double worst = 0.0;
  for (double rho : {2.0, 5.0}) {
    const auto base = density_curve(model, rho, z);
    const auto fine = density_curve(model, rho, z, doubled);
    worst = std::max(worst, max_rel_diff(base, fine));
  }
  return {"self-convergence of U", worst < 1e-3, fmt("max relative change %.2g <= 1e-3", worst)};
}

Criterion property_suites() {
  Criterion c{6, "property suites", {}};
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::function<Check()>> checks{
      lemma1_check,       wigner_check,       chandrasekhar_check,   wave_vector_check,
      f_continuity_check, c_continuity_check, self_convergence_check};
  for (const auto& check : checks) c.checks.push_back(check());
  const double elapsed = seconds_since(start);
  c.checks.push_back({"runtime", elapsed < 60.0, fmt("%.1f s < 60 s", elapsed)});
  return c;
}

void report(const Criterion& c) {
  std::printf("criterion %d: %s  %s\n", c.id, c.pass() ? "PASS" : "FAIL", c.title.c_str());
  for (const auto& check : c.checks) {
    std::printf("    [%s] %s%s%s\n", check.pass ? "pass" : "FAIL", check.name.c_str(),
                check.detail.empty() ? "" : ": ", check.detail.c_str());
  }
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ado3d acceptance suite"};
  std::vector<int> only;
  std::uint64_t photons = 10000000;
  app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
  app.add_option("--photons", photons, "Monte Carlo photons for criteria 3 and 4");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6}
                                              : std::set<int>(only.begin(), only.end());

  const std::vector<std::pair<int, std::function<Criterion()>>> suite{
      {1, convergence_rho5},
      {2, convergence_rho2},
      {3, [&] { return mc_cross_validation(3, 0.9, {5.0, 10.0}, 50.0, photons); }},
      {4, [&] { return mc_cross_validation(4, 0.0, {1.0, 2.0, 3.0}, 5.0, photons); }},
      {5, spectral_oracle},
      {6, property_suites},
  };
  bool all = true;
  for (const auto& [id, run] : suite) {
    if (!selected.contains(id)) continue;
    try {
      const Criterion c = run();
      report(c);
      all = all && c.pass();
    } catch (const std::exception& e) {
      std::printf("criterion %d: FAIL  %s\n", id, e.what());
      all = false;
    }
  }
  return all ? 0 : 1;
}
