#include "ado3d/monte_carlo.hpp"

#include "ado3d/errors.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ado3d {

namespace {

constexpr double kPi = std::numbers::pi;

struct Photon {
  double x = 0.0, y = 0.0, z = 0.0;
  double ux = 0.0, uy = 0.0, uz = 1.0;
  double w = 1.0;
};

using Engine = boost::random::mt19937_64;

struct BatchScore {
  std::vector<double> score;  // [shell][zbin], absorbed weight
  McTallies tallies;
};

// Uniform deviate in [0, 1) with 53 random bits.
inline double canonical(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform azimuth by rejection from the unit disk; both coordinates come
// from one 64-bit draw.
inline void azimuth(Engine& rng, double& cos_p, double& sin_p) {
  for (;;) {
    const std::uint64_t bits = rng();
    const double a = (static_cast<double>(bits >> 32) + 0.5) * 0x1.0p-31 - 1.0;
    const double b = (static_cast<double>(bits & 0xffffffffu) + 0.5) * 0x1.0p-31 - 1.0;
    const double r2 = a * a + b * b;
    if (r2 <= 1.0 && r2 > 1e-300) {
      const double inv = 1.0 / r2;
      cos_p = (a * a - b * b) * inv;
      sin_p = 2.0 * a * b * inv;
      return;
    }
  }
}

// HG inversion with the per-medium constants hoisted.
class HgSampler {
 public:
  explicit HgSampler(double g)
      : g_(g), one_minus_g2_(1.0 - g * g), one_minus_g_(1.0 - g), two_g_(2.0 * g),
        one_plus_g2_(1.0 + g * g), inv_two_g_(g == 0.0 ? 0.0 : 0.5 / g) {}

  double operator()(double u) const {
    if (g_ == 0.0) return 2.0 * u - 1.0;
    const double frac = one_minus_g2_ / (one_minus_g_ + two_g_ * u);
    return std::clamp((one_plus_g2_ - frac * frac) * inv_two_g_, -1.0, 1.0);
  }

 private:
  double g_, one_minus_g2_, one_minus_g_, two_g_, one_plus_g2_, inv_two_g_;
};

class Scorer {
 public:
  explicit Scorer(const McConfig& config)
      : shells_(config.shells), z_edges_(config.z_edges), nz_(config.z_edges.size() - 1) {
    for (const Shell& s : shells_) {
      lo2_.push_back(s.lo * s.lo);
      hi2_.push_back(s.hi * s.hi);
    }
    z_lo_ = z_edges_.front();
    z_hi_ = z_edges_.back();
    rho_max2_ = hi2_.back();
  }

  std::size_t bins() const { return shells_.size() * nz_; }

  // Bin index or -1 when outside every shell.
  long locate(double x, double y, double z) const {
    if (z < z_lo_ || z >= z_hi_) return -1;
    const double r2 = x * x + y * y;
    if (r2 >= rho_max2_) return -1;
    for (std::size_t k = 0; k < shells_.size(); ++k) {
      if (r2 >= lo2_[k] && r2 < hi2_[k]) {
        const auto it = std::upper_bound(z_edges_.begin(), z_edges_.end(), z);
        const std::size_t iz = static_cast<std::size_t>(it - z_edges_.begin()) - 1;
        return static_cast<long>(k * nz_ + iz);
      }
    }
    return -1;
  }

 private:
  std::vector<Shell> shells_;
  std::vector<double> z_edges_;
  std::size_t nz_;
  std::vector<double> lo2_, hi2_;
  double z_lo_ = 0.0, z_hi_ = 0.0, rho_max2_ = 0.0;
};

BatchScore run_batch(const MediumParams& medium, const McConfig& config, const Scorer& scorer,
                     std::uint64_t batch, std::uint64_t photons) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
  Engine rng(seq);

  const double mu_t = medium.mu_t();
  const double varpi = medium.albedo();
  const double absorb_fraction = 1.0 - varpi;
  const double log_varpi = std::log(varpi);
  const HgSampler hg(medium.phase.anisotropy);
  const bool analog = config.mode == WeightMode::Analog;
  boost::random::exponential_distribution<double> free_path(mu_t);

  BatchScore out;
  out.score.assign(scorer.bins(), 0.0);
  out.tallies.photons = photons;
  for (std::uint64_t i = 0; i < photons; ++i) {
    Photon p;
    // Analog: the collision at which the photon is absorbed is geometric
    // with parameter 1 - varpi, drawn once up front.
    std::uint64_t remaining = 0;
    if (analog) {
      const double u = 1.0 - canonical(rng);
      remaining = 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / log_varpi));
    }
    for (;;) {
      const double step = free_path(rng);
      p.x += step * p.ux;
      p.y += step * p.uy;
      p.z += step * p.uz;
      ++out.tallies.collisions;

      const double deposit = p.w * absorb_fraction;
      const long bin = scorer.locate(p.x, p.y, p.z);
      if (bin >= 0) out.score[static_cast<std::size_t>(bin)] += deposit;

      if (analog) {
        if (--remaining == 0) {
          out.tallies.absorbed += p.w;
          break;
        }
      } else {
        out.tallies.absorbed += deposit;
        p.w -= deposit;
        if (p.w < config.weight_cutoff) {
          if (canonical(rng) < config.roulette_survival) {
            const double boosted = p.w / config.roulette_survival;
            out.tallies.roulette_gain += boosted - p.w;
            p.w = boosted;
          } else {
            out.tallies.roulette_killed += p.w;
            break;
          }
        }
      }
      double cos_p = 1.0;
      double sin_p = 0.0;
      azimuth(rng, cos_p, sin_p);
      scatter_direction(p.ux, p.uy, p.uz, hg(canonical(rng)), cos_p, sin_p);
    }
  }
  return out;
}

}  // namespace

double sample_hg(double g, double u) {
  if (!(g >= 0.0 && g < 1.0)) [[unlikely]] {
    throw std::invalid_argument("sample_hg: anisotropy must lie in [0, 1)");
  }
  return HgSampler(g)(u);
}

void scatter_direction(double& ux, double& uy, double& uz, double cos_t, double cos_p,
                       double sin_p) {
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  if (std::abs(uz) > 0.99999) {
    ux = sin_t * cos_p;
    uy = sin_t * sin_p;
    uz = uz > 0.0 ? cos_t : -cos_t;
    return;
  }
  const double temp = std::sqrt(1.0 - uz * uz);
  const double ratio = sin_t / temp;
  const double new_ux = ratio * (ux * uz * cos_p - uy * sin_p) + ux * cos_t;
  const double new_uy = ratio * (uy * uz * cos_p + ux * sin_p) + uy * cos_t;
  uz = -sin_t * cos_p * temp + uz * cos_t;
  ux = new_ux;
  uy = new_uy;
}

void McConfig::validate() const {
  if (photons < 1) throw ConfigError("mc: photons must be >= 1");
  if (batches < 1) throw ConfigError("mc: batches must be >= 1");
  if (shells.empty()) throw ConfigError("mc: no rho shells");
  if (z_edges.size() < 2) throw ConfigError("mc: need at least two z edges");
  for (std::size_t k = 0; k < shells.size(); ++k) {
    if (!(shells[k].lo >= 0.0) || !(shells[k].hi > shells[k].lo)) {
      throw ConfigError("mc: zero-volume or inverted rho shell");
    }
    if (k > 0 && shells[k].lo < shells[k - 1].hi) {
      throw ConfigError("mc: rho shells must be sorted and disjoint");
    }
  }
  for (std::size_t i = 1; i < z_edges.size(); ++i) {
    if (!(z_edges[i] > z_edges[i - 1])) throw ConfigError("mc: zero-volume z bin");
  }
  if (mode == WeightMode::ImplicitCapture) {
    if (!(weight_cutoff > 0.0) || !(weight_cutoff < 1.0)) {
      throw ConfigError("mc: weight cutoff must lie in (0, 1)");
    }
    if (!(roulette_survival > 0.0) || !(roulette_survival <= 1.0)) {
      throw ConfigError("mc: roulette survival must lie in (0, 1]");
    }
  }
}

std::vector<Shell> shells_around(const std::vector<double>& rho, double frac) {
  std::vector<Shell> shells;
  for (double r : rho) shells.push_back({r * (1.0 - frac), r * (1.0 + frac)});
  return shells;
}

std::vector<double> edges_around(const std::vector<double>& centers) {
  if (centers.empty()) return {};
  if (centers.size() == 1) return {centers[0] - 0.5, centers[0] + 0.5};
  std::vector<double> edges;
  edges.push_back(centers[0] - 0.5 * (centers[1] - centers[0]));
  for (std::size_t i = 1; i < centers.size(); ++i) {
    edges.push_back(0.5 * (centers[i - 1] + centers[i]));
  }
  const std::size_t n = centers.size();
  edges.push_back(centers[n - 1] + 0.5 * (centers[n - 1] - centers[n - 2]));
  return edges;
}

McResult run_mc(const MediumParams& medium, const McConfig& config) {
  medium.validate();
  config.validate();
  const Scorer scorer(config);
  const auto batches = static_cast<std::uint64_t>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(config.batches), config.photons));

  std::vector<BatchScore> results(batches);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next++; b < batches; b = next++) {
      const std::uint64_t count = config.photons / batches + (b < config.photons % batches);
      results[b] = run_batch(medium, config, scorer, b, count);
    }
  };
  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, batches));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Merge in batch order so the result is independent of scheduling.
  McResult result;
  const std::size_t nz = config.z_edges.size() - 1;
  const std::size_t bins = scorer.bins();
  std::vector<double> total(bins, 0.0);
  std::vector<double> mean_sq(bins, 0.0);
  for (const BatchScore& batch : results) {
    result.tallies.photons += batch.tallies.photons;
    result.tallies.collisions += batch.tallies.collisions;
    result.tallies.absorbed += batch.tallies.absorbed;
    result.tallies.roulette_killed += batch.tallies.roulette_killed;
    result.tallies.roulette_gain += batch.tallies.roulette_gain;
    for (std::size_t j = 0; j < bins; ++j) {
      total[j] += batch.score[j];
      const double per_photon = batch.score[j] / static_cast<double>(batch.tallies.photons);
      mean_sq[j] += per_photon * per_photon;
    }
  }

  const double n_photons = static_cast<double>(result.tallies.photons);
  const double nb = static_cast<double>(batches);
  for (std::size_t k = 0; k < config.shells.size(); ++k) {
    const Shell& shell = config.shells[k];
    DensityField field;
    field.rho = shell.center();
    field.provenance = Provenance::MonteCarlo;
    field.stderr_u.emplace();
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const double z0 = config.z_edges[iz];
      const double z1 = config.z_edges[iz + 1];
      const double volume = kPi * (shell.hi * shell.hi - shell.lo * shell.lo) * (z1 - z0);
      const double scale = 1.0 / (medium.mu_a * volume);
      const std::size_t j = k * nz + iz;
      const double mean = total[j] / n_photons;
      // Spread of batch means around the pooled mean.
      double se = 0.0;
      if (batches > 1) {
        const double var = std::max(0.0, mean_sq[j] / nb - mean * mean) * nb / (nb - 1.0);
        se = std::sqrt(var / nb);
      }
      field.z.push_back(0.5 * (z0 + z1));
      field.u.push_back(mean * scale);
      field.stderr_u->push_back(se * scale);
    }
    result.fields.push_back(std::move(field));
  }
  return result;
}

Comparison compare_fields(const DensityField& ado, const DensityField& mc, double tol,
                          double max_rel_se) {
  if (ado.size() != mc.size()) throw std::invalid_argument("compare_fields: grid size mismatch");
  if (!mc.stderr_u) throw std::invalid_argument("compare_fields: MC field lacks errors");
  Comparison cmp;
  cmp.rho = ado.rho;
  for (std::size_t i = 0; i < ado.size(); ++i) {
    if (std::abs(ado.z[i] - mc.z[i]) > 1e-9 * std::max(1.0, std::abs(ado.z[i]))) {
      throw std::invalid_argument("compare_fields: z grids differ");
    }
    ComparisonRow row;
    row.z = ado.z[i];
    row.u_ado = ado.u[i];
    row.u_mc = mc.u[i];
    row.stderr_mc = (*mc.stderr_u)[i];
    row.rel_diff = row.u_mc != 0.0 ? (row.u_ado - row.u_mc) / row.u_mc : 0.0;
    row.checked = row.u_mc > 0.0 && row.stderr_mc < max_rel_se * row.u_mc;
    if (row.checked) {
      const double allowed = std::max(tol * row.u_mc, 3.0 * row.stderr_mc);
      row.pass = std::abs(row.u_ado - row.u_mc) <= allowed;
      ++cmp.checked;
      cmp.pass = cmp.pass && row.pass;
    }
    cmp.rows.push_back(row);
  }
  cmp.pass = cmp.pass && cmp.checked > 0;
  return cmp;
}

}  // namespace ado3d
