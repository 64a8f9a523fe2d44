#include "ado3d/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ado3d {

namespace {

constexpr double kNodeTolerance = 1e-14;

}  // namespace

QuadratureSet gauss_legendre(int half_order) {
  if (half_order < 1) {
    throw std::invalid_argument("gauss_legendre: half order must be >= 1, got " +
                                std::to_string(half_order));
  }
  const int points = 2 * half_order;

  // Jacobi matrix of the Legendre recurrence: zero diagonal,
  // off-diagonal k / sqrt(4k^2 - 1).
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd sub(points - 1);
  for (int k = 1; k < points; ++k) {
    const double kk = k;
    sub(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_legendre: tridiagonal eigen-solve failed");
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  // Symmetrize: pair the i-th largest node with the i-th smallest.
  std::vector<int> order(points);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lambda(a) < lambda(b); });

  QuadratureSet quad;
  quad.half_order = half_order;
  quad.nodes.resize(points);
  quad.weights.resize(points);
  for (int i = 0; i < half_order; ++i) {
    const int pos = order[half_order + i];
    const int neg = order[half_order - 1 - i];
    const double mu = 0.5 * (lambda(pos) - lambda(neg));
    if (!(mu > kNodeTolerance)) {
      throw std::runtime_error("gauss_legendre: non-positive node after reindexing");
    }
    const double w =
        vectors(0, pos) * vectors(0, pos) + vectors(0, neg) * vectors(0, neg);
    quad.nodes[i] = mu;
    quad.nodes[half_order + i] = -mu;
    quad.weights[i] = w;
    quad.weights[half_order + i] = w;
  }
  for (int i = 1; i < half_order; ++i) {
    if (quad.nodes[i] - quad.nodes[i - 1] <= kNodeTolerance) {
      throw std::runtime_error("gauss_legendre: coincident nodes");
    }
  }
  return quad;
}

}  // namespace ado3d
