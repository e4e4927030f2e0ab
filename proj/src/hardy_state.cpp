#include "nonlocal/hardy_state.hpp"

#include <cmath>
#include <stdexcept>

namespace nonlocal {

namespace {

Eigen::Vector2cd ket(Complex a0, Complex a1) {
  Eigen::Vector2cd v;
  v << a0, a1;
  return v;
}

Unitary2 dichotomic(const Eigen::Vector2cd& plus, const Eigen::Vector2cd& minus) {
  return plus * plus.adjoint() - minus * minus.adjoint();
}

ObservablePair party_observables(Complex partner, Complex d) {
  const double norm2 = std::norm(partner) + std::norm(d);
  if (!(norm2 > 0.0)) {
    throw std::domain_error("goldstein_observables: degenerate normalizer");
  }
  const double n = std::sqrt(norm2);
  ObservablePair out;
  out.x = Unitary2::Identity();
  out.x(1, 1) = -1.0;
  out.y_plus = ket(std::conj(d), -std::conj(partner)) / n;
  out.y_minus = ket(partner, d) / n;
  out.y = dichotomic(out.y_plus, out.y_minus);
  return out;
}

}  // namespace

State4 GoldsteinState::amplitudes() const {
  State4 s;
  s << 0.0, b, c, d;
  return s;
}

std::pair<ObservablePair, ObservablePair> goldstein_observables(const GoldsteinState& s) {
  // The second party uses c where the first uses b.
  return {party_observables(s.b, s.d), party_observables(s.c, s.d)};
}

double hardy_probability(const GoldsteinState& s) {
  const double nb = std::norm(s.b) + std::norm(s.d);
  const double nc = std::norm(s.c) + std::norm(s.d);
  if (!(nb > 0.0) || !(nc > 0.0)) {
    throw std::domain_error("hardy_probability: degenerate normalizer");
  }
  return std::norm(s.b) * std::norm(s.c) * std::norm(s.d) / (nb * nc);
}

CorrelationTable goldstein_table(const GoldsteinState& s) {
  const auto [o1, o2] = goldstein_observables(s);
  const State4 psi = s.amplitudes();
  if (!is_normalized(psi)) {
    throw std::invalid_argument("goldstein_table: state is not normalized");
  }
  auto basis = [](const ObservablePair& o, Setting m) {
    std::array<Eigen::Vector2cd, 2> v;
    if (m == Setting::X) {
      v = {ket(1.0, 0.0), ket(0.0, 1.0)};
    } else {
      v = {o.y_plus, o.y_minus};
    }
    return v;
  };
  CorrelationTable t;
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      const auto e1 = basis(o1, a);
      const auto e2 = basis(o2, b);
      for (int m1 = 0; m1 < 2; ++m1) {
        for (int m2 = 0; m2 < 2; ++m2) {
          State4 proj;
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) proj(2 * i + j) = e1[m1](i) * e2[m2](j);
          }
          t.set(a, b, static_cast<Outcome>(m1), static_cast<Outcome>(m2),
                std::norm(proj.dot(psi)));
        }
      }
    }
  }
  return t;
}

HardyOptimum maximize_hardy(double bracket_tol) {
  // The objective is flat at its peak, so comparing values pins D only to
  // about sqrt(machine epsilon). The sign of d/dD log f is sharp instead:
  // 1/D - 2/(1-D) - 2/(1+D) decreases strictly on (0, 1).
  auto slope = [](double D) { return 1.0 / D - 2.0 / (1.0 - D) - 2.0 / (1.0 + D); };
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > bracket_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  const double D = 0.5 * (lo + hi);
  HardyOptimum out;
  const double bc = std::sqrt(0.5 * (1.0 - D));
  out.state = GoldsteinState{bc, bc, std::sqrt(D)};
  out.probability = hardy_probability(out.state);
  out.d_squared = D;
  return out;
}

}  // namespace nonlocal
