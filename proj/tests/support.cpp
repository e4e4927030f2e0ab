#include "support.hpp"

#include "nonlocal/quadrature.hpp"
#include "nonlocal/robustness.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace testing_support {

namespace {

// Rotation [c, -s; s, c] on the amplitude pair (i, j).
void rotate(State4& psi, int i, int j, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex a = psi(i), b = psi(j);
  psi(i) = c * a - s * b;
  psi(j) = s * a + c * b;
}

std::vector<double> dirichlet(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = e(rng));
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

State4 simulate(const CircuitParams& p) {
  const double c1 = std::cos(p.theta1), s1 = std::sin(p.theta1);
  const double c2 = std::cos(p.theta2), s2 = std::sin(p.theta2);
  State4 psi;
  psi << c1 * c2, c1 * s2, s1 * c2, s1 * s2;
  psi(3) *= std::polar(1.0, 2.0 * p.phi);
  psi(2) *= std::polar(1.0, p.phi1);
  psi(3) *= std::polar(1.0, p.phi1 + p.phi2);
  psi(1) *= std::polar(1.0, p.phi2);
  rotate(psi, 0, 2, p.theta1p);
  rotate(psi, 1, 3, p.theta1p);
  rotate(psi, 0, 1, p.theta2p);
  rotate(psi, 2, 3, p.theta2p);
  return psi;
}

CorrelationTable simulated_table(const SettingParams& params) {
  CorrelationTable t;
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      const State4 psi = simulate(params[setting_index(a, b)]);
      for (int k = 0; k < 4; ++k) {
        t.set(a, b, static_cast<Outcome>(k >> 1), static_cast<Outcome>(k & 1), std::norm(psi(k)));
      }
    }
  }
  return t;
}

CorrelationTable brute_force_average(const SettingParams& params, const AngleOffsets& half_width,
                                     int order) {
  std::vector<int> axes;
  for (int a = 0; a < kNumAngles; ++a) {
    if (half_width[a] > 0.0) axes.push_back(a);
  }
  const QuadratureRule rule = gauss_legendre(order);
  std::array<CorrelationTable::Block, 4> sum;
  for (auto& b : sum) b.setZero();

  AngleOffsets offset{};
  std::function<void(std::size_t, double)> visit = [&](std::size_t depth, double weight) {
    if (depth == axes.size()) {
      SettingParams shifted = params;
      for (auto& p : shifted) p = p + offset;
      const CorrelationTable t = simulated_table(shifted);
      for (Setting a : kSettings) {
        for (Setting b : kSettings) sum[setting_index(a, b)] += weight * t.block(a, b);
      }
      return;
    }
    const int axis = axes[depth];
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      offset[axis] = half_width[axis] * rule.nodes[k];
      visit(depth + 1, weight * 0.5 * rule.weights[k]);
    }
  };
  visit(0, 1.0);

  CorrelationTable out;
  for (Setting a : kSettings) {
    for (Setting b : kSettings) out.set_block(a, b, sum[setting_index(a, b)]);
  }
  return out;
}

double ch_from_rows(const CorrelationTable& t) {
  using enum Setting;
  constexpr Outcome P = Outcome::Plus, M = Outcome::Minus;
  const double p1 = t(Y, X, P, P) + t(Y, X, P, M);
  const double p2 = t(X, Y, P, P) + t(X, Y, M, P);
  return t(X, Y, P, P) + t(Y, X, P, P) + t(Y, Y, P, P) - t(X, X, P, P) - p1 - p2;
}

SettingParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Eigen::VectorXd x(11);
  for (int k = 0; k < 11; ++k) x(k) = angle(rng);
  return unpack_angles(x);
}

GoldsteinState random_goldstein(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Complex b(g(rng), g(rng)), c(g(rng), g(rng)), d(g(rng), g(rng));
  const double n = std::sqrt(std::norm(b) + std::norm(c) + std::norm(d));
  return {b / n, c / n, d / n};
}

CorrelationVector random_causal_point(std::mt19937_64& rng, int terms) {
  static const std::vector<CorrelationVector> vertices = causal_vertices();
  const int count = terms == 0 ? static_cast<int>(vertices.size()) : terms;
  std::uniform_int_distribution<int> pick(0, static_cast<int>(vertices.size()) - 1);
  const std::vector<double> w = dirichlet(rng, count);
  CorrelationVector v = CorrelationVector::Zero();
  for (int k = 0; k < count; ++k) v += w[k] * vertices[terms == 0 ? k : pick(rng)];
  return v;
}

HardyPoint random_hardy_point(std::mt19937_64& rng) {
  static const std::vector<HardyPoint> vertices = hardy_vertices();
  const std::vector<double> w = dirichlet(rng, static_cast<int>(vertices.size()));
  HardyPoint p = HardyPoint::Zero();
  for (std::size_t k = 0; k < vertices.size(); ++k) p += w[k] * vertices[k];
  return p;
}

}  // namespace testing_support
