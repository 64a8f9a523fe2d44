#include "ado3d/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using ado3d::gauss_legendre;

namespace {

// Newton iteration on P_n, independent of the Golub-Welsch path.
struct NewtonRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

NewtonRule newton_reference(int n) {
  NewtonRule rule;
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

}  // namespace

TEST_CASE("two-point rule") {
  const auto q = gauss_legendre(1);
  REQUIRE(q.size() == 2);
  CHECK(q.nodes[0] == doctest::Approx(0.5773502692).epsilon(1e-10));
  CHECK(q.nodes[1] == doctest::Approx(-0.5773502692).epsilon(1e-10));
  CHECK(q.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("four-point rule values") {
  const auto q = gauss_legendre(2);
  CHECK(q.nodes[0] == doctest::Approx(0.3399810436).epsilon(1e-10));
  CHECK(q.nodes[1] == doctest::Approx(0.8611363116).epsilon(1e-10));
  CHECK(q.weights[0] == doctest::Approx(0.6521451549).epsilon(1e-10));
  CHECK(q.weights[1] == doctest::Approx(0.3478548451).epsilon(1e-10));
  CHECK(q.nodes[2] == -q.nodes[0]);
  CHECK(q.nodes[3] == -q.nodes[1]);
}

TEST_CASE("ordering, symmetry and weight sum") {
  for (int n = 1; n <= 32; ++n) {
    const auto q = gauss_legendre(n);
    REQUIRE(q.size() == static_cast<std::size_t>(2 * n));
    double sum = 0.0;
    for (double w : q.weights) sum += w;
    CHECK(std::abs(sum - 2.0) < 1e-13);
    for (int i = 0; i < n; ++i) {
      CHECK(q.nodes[i] > 0.0);
      CHECK(q.nodes[i] < 1.0);
      if (i > 0) CHECK(q.nodes[i] > q.nodes[i - 1]);
      CHECK(q.nodes[n + i] == -q.nodes[i]);
      CHECK(q.weights[n + i] == q.weights[i]);
    }
  }
}

TEST_CASE("monomials up to degree 4N-1 are exact") {
  for (int n = 1; n <= 32; ++n) {
    const auto q = gauss_legendre(n);
    for (int k = 0; k <= 4 * n - 1; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * std::pow(q.nodes[i], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0;
      CHECK_MESSAGE(std::abs(sum - exact) < 1e-10, "N=" << n << " k=" << k);
    }
  }
}

TEST_CASE("matches Newton-on-Legendre reference") {
  for (int n = 1; n <= 32; ++n) {
    const auto q = gauss_legendre(n);
    const auto ref = newton_reference(2 * n);
    // ref nodes descend from +1; the first N are the positive ones.
    for (int i = 0; i < n; ++i) {
      const double x = ref.nodes[static_cast<std::size_t>(n - 1 - i)];
      const double w = ref.weights[static_cast<std::size_t>(n - 1 - i)];
      CHECK_MESSAGE(std::abs(q.nodes[i] - x) < 1e-12, "N=" << n << " i=" << i);
      CHECK_MESSAGE(std::abs(q.weights[i] - w) < 1e-12, "N=" << n << " i=" << i);
    }
  }
}

TEST_CASE("rejects empty rule") {
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(-3), std::invalid_argument);
}
