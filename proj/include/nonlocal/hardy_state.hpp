#pragma once

// Goldstein's construction of a Hardy experiment from a state
// b|01> + c|10> + d|11>.

#include "nonlocal/circuit.hpp"

#include <utility>

namespace nonlocal {

struct GoldsteinState {
  Complex b;
  Complex c;
  Complex d;

  State4 amplitudes() const;
};

/// X and Y observables (eigenvalues +-1) for one party.
struct ObservablePair {
  Unitary2 x;
  Unitary2 y;
  /// Eigenvectors of Y for outcomes + and -.
  Eigen::Vector2cd y_plus;
  Eigen::Vector2cd y_minus;
};

/// Throws std::domain_error when |b|^2+|d|^2 or |c|^2+|d|^2 vanishes.
std::pair<ObservablePair, ObservablePair> goldstein_observables(const GoldsteinState& s);

/// |bcd|^2 / ((|b|^2+|d|^2)(|c|^2+|d|^2)).
double hardy_probability(const GoldsteinState& s);

/// Correlation table of the state measured in the Goldstein bases; outcome +
/// is the +1 eigenvector of each observable.
CorrelationTable goldstein_table(const GoldsteinState& s);

struct HardyOptimum {
  GoldsteinState state;
  double probability;
  /// |d|^2 at the optimum.
  double d_squared;
};

/// Maximizes hardy_probability over real states with b = c, where it reduces
/// to D (1-D)^2 / (1+D)^2 in D = |d|^2; bisects the sign of its log-derivative.
HardyOptimum maximize_hardy(double bracket_tol = 1e-12);

}  // namespace nonlocal
