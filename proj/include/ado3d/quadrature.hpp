#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ado3d {

/// Discrete ordinates on [-1, 1]: 2N Gauss-Legendre nodes ordered as
/// 0 < mu_1 < ... < mu_N < 1 followed by mu_{N+i} = -mu_i.
struct QuadratureSet {
  int half_order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  std::span<const double> positive_nodes() const {
    return {nodes.data(), static_cast<std::size_t>(half_order)};
  }
  std::span<const double> positive_weights() const {
    return {weights.data(), static_cast<std::size_t>(half_order)};
  }
};

/// Golub-Welsch construction of the 2N-point rule. Throws
/// std::invalid_argument for half_order < 1.
QuadratureSet gauss_legendre(int half_order);

}  // namespace ado3d
