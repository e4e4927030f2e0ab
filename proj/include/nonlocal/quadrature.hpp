#pragma once

#include <vector>

namespace nonlocal {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree
/// 2n - 1. Nodes ascend.
QuadratureRule gauss_legendre(int n);

/// Same rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace nonlocal
