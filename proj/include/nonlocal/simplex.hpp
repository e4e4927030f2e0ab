#pragma once

// Dense two-phase simplex for small standard-form problems
//   minimize c.x  subject to  A x = b,  x >= 0.
// Pivoting follows Bland's rule, so degenerate problems terminate.

#include <Eigen/Dense>

namespace nonlocal::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  /// Phase-one residual: total artificial mass left at the end of phase one.
  double infeasibility = 0.0;
};

Result minimize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                const Eigen::VectorXd& b, double tol = 1e-9);

/// Phase one only.
Result find_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol = 1e-9);

}  // namespace nonlocal::lp
