#pragma once

#include <Eigen/Dense>

#include <functional>

namespace nonlocal {

struct NelderMeadOptions {
  double initial_step = 0.5;
  /// Stop when the spread of simplex values falls below this.
  double ftol = 1e-10;
  int max_evaluations = 20000;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace nonlocal
