#pragma once

// Two-qubit linear algebra for the coupled interferometers.
//
// Basis ordering is |00>, |01>, |10>, |11> with the first slot belonging to
// particle 1 (second index runs fastest). Outcome +1 is basis state |0>,
// outcome -1 is basis state |1>.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace nonlocal {

template <typename Real>
using ComplexT = std::complex<Real>;
template <typename Real>
using Unitary2T = Eigen::Matrix<ComplexT<Real>, 2, 2>;
template <typename Real>
using Unitary4T = Eigen::Matrix<ComplexT<Real>, 4, 4>;
template <typename Real>
using State4T = Eigen::Matrix<ComplexT<Real>, 4, 1>;
/// p(m1,m2) at index 2*m1+m2, with m = 0 for '+' and m = 1 for '-'.
template <typename Real>
using OutcomeProbsT = Eigen::Matrix<Real, 4, 1>;

using Complex = ComplexT<double>;
using Unitary2 = Unitary2T<double>;
using Unitary4 = Unitary4T<double>;
using State4 = State4T<double>;
using OutcomeProbs = OutcomeProbsT<double>;

inline constexpr double kUnitarityTol = 1e-12;
inline constexpr double kNormTol = 1e-12;

namespace detail {
template <typename Real>
void require_finite(Real x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + ": angle must be finite");
  }
}
}  // namespace detail

/// Real rotation [cos, -sin; sin, cos] modelling a beam splitter.
template <typename Real>
Unitary2T<Real> beam_splitter(Real theta) {
  detail::require_finite(theta, "beam_splitter");
  using std::cos;
  using std::sin;
  Unitary2T<Real> u;
  u << cos(theta), -sin(theta),
       sin(theta), cos(theta);
  return u;
}

/// diag(1, e^{i phi}).
template <typename Real>
Unitary2T<Real> phase_shift(Real phi) {
  detail::require_finite(phi, "phase_shift");
  Unitary2T<Real> u = Unitary2T<Real>::Identity();
  u(1, 1) = std::polar(Real(1), phi);
  return u;
}

/// Controlled phase diag(1, 1, 1, e^{2 i phi}).
template <typename Real>
Unitary4T<Real> coupler(Real phi) {
  detail::require_finite(phi, "coupler");
  Unitary4T<Real> u = Unitary4T<Real>::Identity();
  u(3, 3) = std::polar(Real(1), Real(2) * phi);
  return u;
}

/// Kronecker product, particle-1 factor leftmost.
template <typename Derived1, typename Derived2>
Unitary4T<typename Derived1::RealScalar> tensor(
    const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  Unitary4T<typename Derived1::RealScalar> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
State4T<Real> apply(const Unitary4T<Real>& u, const State4T<Real>& s) {
  return u * s;
}

template <typename Real = double>
State4T<Real> basis_state(int index) {
  if (index < 0 || index > 3) {
    throw std::out_of_range("basis_state: index must be in [0, 3]");
  }
  State4T<Real> s = State4T<Real>::Zero();
  s(index) = Real(1);
  return s;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kUnitarityTol) {
  const auto identity = Derived::PlainObject::Identity(u.rows(), u.cols());
  return ((u.adjoint() * u).eval() - identity).cwiseAbs().maxCoeff() <= tol;
}

template <typename Real>
bool is_normalized(const State4T<Real>& s, double tol = kNormTol) {
  return std::abs(s.squaredNorm() - Real(1)) <= tol;
}

/// Detection probabilities |amplitude|^2; rejects states off the unit sphere.
template <typename Real>
OutcomeProbsT<Real> outcome_probs(const State4T<Real>& s) {
  if (!is_normalized(s)) {
    throw std::invalid_argument("outcome_probs: state is not normalized");
  }
  return s.cwiseAbs2();
}

}  // namespace nonlocal
