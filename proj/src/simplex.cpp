#include "nonlocal/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nonlocal::lp {

namespace {

// Constraint rows on top, reduced-cost row last, right-hand side last column.
// The objective row stores -z in its rhs entry.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol)
      : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())), tol_(tol) {
    t_ = Eigen::MatrixXd::Zero(m_ + 1, n_ + m_ + 1);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign * b(i);
      basis_[i] = n_ + i;
    }
    allowed_ = n_ + m_;
  }

  int rhs() const { return n_ + m_; }

  void set_objective(const Eigen::VectorXd& cost) {
    t_.row(m_).setZero();
    t_.row(m_).head(cost.size()) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      const double cb = j < cost.size() ? cost(j) : 0.0;
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  /// Returns false when the objective is unbounded below.
  bool run() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < allowed_; ++j) {
        if (t_(m_, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (t_(i, enter) > tol_) {
          const double ratio = t_(i, rhs()) / t_(i, enter);
          const bool tie = leave >= 0 && std::abs(ratio - best) <= tol_;
          if (leave < 0 || ratio < best - tol_ || (tie && basis_[i] < basis_[leave])) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  double objective() const { return -t_(m_, rhs()); }

  /// Pivots remaining artificials out of the basis and drops redundant rows.
  void expel_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > tol_) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        t_.row(i).setZero();
      }
    }
    allowed_ = n_;
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = t_(i, rhs());
    }
    return x;
  }

 private:
  void pivot(int r, int s) {
    t_.row(r) /= t_(r, s);
    for (int i = 0; i <= m_; ++i) {
      if (i != r && t_(i, s) != 0.0) t_.row(i) -= t_(i, s) * t_.row(r);
    }
    basis_[r] = s;
  }

  int m_;
  int n_;
  double tol_;
  int allowed_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

Tableau phase_one(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                  Result& out) {
  if (A.rows() != b.size()) throw std::invalid_argument("lp: A and b sizes differ");
  Tableau tab(A, b, tol);
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
  cost.tail(m).setOnes();
  tab.set_objective(cost);
  tab.run();
  out.infeasibility = tab.objective();
  out.status = out.infeasibility > tol ? Status::Infeasible : Status::Optimal;
  return tab;
}

}  // namespace

Result find_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol) {
  Result out;
  Tableau tab = phase_one(A, b, tol, out);
  if (out.status == Status::Optimal) {
    tab.expel_artificials();
    out.x = tab.solution();
  }
  return out;
}

Result minimize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                const Eigen::VectorXd& b, double tol) {
  if (c.size() != A.cols()) throw std::invalid_argument("lp: cost size mismatch");
  Result out;
  Tableau tab = phase_one(A, b, tol, out);
  if (out.status != Status::Optimal) return out;
  tab.expel_artificials();
  tab.set_objective(c);
  if (!tab.run()) {
    out.status = Status::Unbounded;
    return out;
  }
  out.x = tab.solution();
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace nonlocal::lp
