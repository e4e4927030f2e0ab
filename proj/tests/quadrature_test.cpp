#include "nonlocal/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace nonlocal;

TEST(GaussLegendre, ThreePointRule) {
  const QuadratureRule r = gauss_legendre(3);
  ASSERT_EQ(r.nodes.size(), 3u);
  EXPECT_NEAR(r.nodes[0], -std::sqrt(0.6), 1e-15);
  EXPECT_DOUBLE_EQ(r.nodes[1], 0.0);
  EXPECT_NEAR(r.nodes[2], std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(r.weights[0], 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 8.0 / 9.0, 1e-15);
}

TEST(GaussLegendre, SinglePoint) {
  const QuadratureRule r = gauss_legendre(1);
  ASSERT_EQ(r.nodes.size(), 1u);
  EXPECT_DOUBLE_EQ(r.nodes[0], 0.0);
  EXPECT_NEAR(r.weights[0], 2.0, 1e-15);
}

TEST(GaussLegendre, ExactForDegreeUpTo2nMinus1) {
  for (int n : {2, 5, 16, 32, 64}) {
    const QuadratureRule r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(sum, exact, 1e-13) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussLegendre, NodesAscendInsideInterval) {
  const QuadratureRule r = gauss_legendre(40);
  for (std::size_t i = 1; i < r.nodes.size(); ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
  EXPECT_GT(r.nodes.front(), -1.0);
  EXPECT_LT(r.nodes.back(), 1.0);
}

TEST(GaussLegendre, MappedIntervalIntegratesCosine) {
  const QuadratureRule r = gauss_legendre(32, 0.2, 1.7);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * std::cos(r.nodes[i]);
  EXPECT_NEAR(sum, std::sin(1.7) - std::sin(0.2), 1e-15);
  EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.5, 1e-14);
}

TEST(GaussLegendre, RejectsNonPositiveOrder) {
  EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}
