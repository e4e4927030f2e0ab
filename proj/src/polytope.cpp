#include "nonlocal/polytope.hpp"

#include "nonlocal/inequalities.hpp"
#include "nonlocal/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace nonlocal {

namespace {

bool lex_less(const CorrelationVector& a, const CorrelationVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + 16, b.data(), b.data() + 16);
}

const char* setting_char(int M) { return M == 0 ? "X" : "Y"; }
const char* outcome_char(int m) { return m == 0 ? "+" : "-"; }

std::string entry_name(int M1, int M2, int m1, int m2) {
  return std::string("P(") + outcome_char(m1) + outcome_char(m2) + "|" +
         setting_char(M1) + setting_char(M2) + ")";
}

// Base CH functional with each marginal expanded as the mean over both
// partner settings.
ChVariant base_ch() {
  ChVariant f;
  f.coeffs.setZero();
  f.coeffs(correlation_index(0, 1, 0, 0)) += 1.0;
  f.coeffs(correlation_index(1, 0, 0, 0)) += 1.0;
  f.coeffs(correlation_index(1, 1, 0, 0)) += 1.0;
  f.coeffs(correlation_index(0, 0, 0, 0)) -= 1.0;
  for (int partner = 0; partner < 2; ++partner) {
    for (int m = 0; m < 2; ++m) {
      f.coeffs(correlation_index(1, partner, 0, m)) -= 0.5;
      f.coeffs(correlation_index(partner, 1, m, 0)) -= 0.5;
    }
  }
  f.label = "CH";
  return f;
}

struct Symmetry {
  bool swap_parties = false;
  int setting_flip[2] = {0, 0};
  // outcome_flip[party][setting]
  int outcome_flip[2][2] = {{0, 0}, {0, 0}};

  // Source index read by target index i, i.e. (g v)[i] = v[source(i)].
  int source(int i) const {
    int M1 = (i >> 3) & 1, M2 = (i >> 2) & 1, m1 = (i >> 1) & 1, m2 = i & 1;
    m1 ^= outcome_flip[0][M1];
    m2 ^= outcome_flip[1][M2];
    M1 ^= setting_flip[0];
    M2 ^= setting_flip[1];
    if (swap_parties) {
      std::swap(M1, M2);
      std::swap(m1, m2);
    }
    return correlation_index(M1, M2, m1, m2);
  }

  std::string label() const {
    std::string s = swap_parties ? "swap" : "id";
    s += " settings=" + std::to_string(setting_flip[0]) + std::to_string(setting_flip[1]);
    s += " flips=";
    for (int p = 0; p < 2; ++p) {
      for (int k = 0; k < 2; ++k) s += std::to_string(outcome_flip[p][k]);
    }
    return s;
  }
};

std::vector<ChVariant> build_ch_variants() {
  const ChVariant base = base_ch();
  const auto vertices = causal_vertices();
  std::vector<ChVariant> out;
  std::vector<std::vector<long long>> signatures;
  for (int code = 0; code < 128; ++code) {
    Symmetry g;
    g.swap_parties = (code >> 6) & 1;
    g.setting_flip[0] = (code >> 5) & 1;
    g.setting_flip[1] = (code >> 4) & 1;
    g.outcome_flip[0][0] = (code >> 3) & 1;
    g.outcome_flip[0][1] = (code >> 2) & 1;
    g.outcome_flip[1][0] = (code >> 1) & 1;
    g.outcome_flip[1][1] = code & 1;
    ChVariant f;
    f.coeffs.setZero();
    f.constant = base.constant;
    for (int i = 0; i < 16; ++i) f.coeffs(g.source(i)) += base.coeffs(i);
    f.label = g.label();
    std::vector<long long> sig;
    for (const auto& v : vertices) sig.push_back(std::llround(f(v) * 1e6));
    if (std::find(signatures.begin(), signatures.end(), sig) == signatures.end()) {
      signatures.push_back(sig);
      out.push_back(f);
    }
  }
  return out;
}

// Normalization and no-signaling rows of the equality system on correlation vectors.
Eigen::MatrixXd equality_constraints() {
  Eigen::MatrixXd eq = Eigen::MatrixXd::Zero(12, 16);
  int row = 0;
  for (int M1 = 0; M1 < 2; ++M1) {
    for (int M2 = 0; M2 < 2; ++M2, ++row) {
      for (int k = 0; k < 4; ++k) eq(row, correlation_index(M1, M2, k >> 1, k & 1)) = 1.0;
    }
  }
  for (int M = 0; M < 2; ++M) {
    for (int m = 0; m < 2; ++m, row += 2) {
      for (int k = 0; k < 2; ++k) {
        eq(row, correlation_index(M, 0, m, k)) += 1.0;
        eq(row, correlation_index(M, 1, m, k)) -= 1.0;
        eq(row + 1, correlation_index(0, M, k, m)) += 1.0;
        eq(row + 1, correlation_index(1, M, k, m)) -= 1.0;
      }
    }
  }
  return eq;
}

}  // namespace

CorrelationVector to_vector(const CorrelationTable& t) {
  if (t.three_outcome()) throw std::invalid_argument("to_vector: two-outcome table expected");
  CorrelationVector v;
  for (int M1 = 0; M1 < 2; ++M1) {
    for (int M2 = 0; M2 < 2; ++M2) {
      for (int m1 = 0; m1 < 2; ++m1) {
        for (int m2 = 0; m2 < 2; ++m2) {
          v(correlation_index(M1, M2, m1, m2)) =
              t(static_cast<Setting>(M1), static_cast<Setting>(M2),
                static_cast<Outcome>(m1), static_cast<Outcome>(m2));
        }
      }
    }
  }
  return v;
}

CorrelationTable to_table(const CorrelationVector& v) {
  CorrelationTable t;
  for (int M1 = 0; M1 < 2; ++M1) {
    for (int M2 = 0; M2 < 2; ++M2) {
      for (int m1 = 0; m1 < 2; ++m1) {
        for (int m2 = 0; m2 < 2; ++m2) {
          t.set(static_cast<Setting>(M1), static_cast<Setting>(M2), static_cast<Outcome>(m1),
                static_cast<Outcome>(m2), v(correlation_index(M1, M2, m1, m2)));
        }
      }
    }
  }
  return t;
}

std::vector<ConstraintViolation> validate_causal(const CorrelationVector& v, double tol) {
  using Kind = ConstraintViolation::Kind;
  std::vector<ConstraintViolation> out;
  for (int M1 = 0; M1 < 2; ++M1) {
    for (int M2 = 0; M2 < 2; ++M2) {
      double sum = 0.0;
      for (int m1 = 0; m1 < 2; ++m1) {
        for (int m2 = 0; m2 < 2; ++m2) {
          const double p = v(correlation_index(M1, M2, m1, m2));
          sum += p;
          if (p < -tol || p > 1.0 + tol) {
            out.push_back({Kind::Positivity, entry_name(M1, M2, m1, m2) + " outside [0,1]",
                           p < 0.0 ? -p : p - 1.0});
          }
        }
      }
      if (std::abs(sum - 1.0) > tol) {
        out.push_back({Kind::Normalization,
                       std::string("sum over outcomes for ") + setting_char(M1) +
                           setting_char(M2) + " != 1",
                       sum - 1.0});
      }
    }
  }
  for (int M = 0; M < 2; ++M) {
    for (int m = 0; m < 2; ++m) {
      double first[2] = {0.0, 0.0};
      double second[2] = {0.0, 0.0};
      for (int partner = 0; partner < 2; ++partner) {
        for (int k = 0; k < 2; ++k) {
          first[partner] += v(correlation_index(M, partner, m, k));
          second[partner] += v(correlation_index(partner, M, k, m));
        }
      }
      if (std::abs(first[0] - first[1]) > tol) {
        out.push_back({Kind::NoSignaling,
                       std::string("P1(") + outcome_char(m) + "|" + setting_char(M) +
                           ") depends on the partner setting",
                       first[0] - first[1]});
      }
      if (std::abs(second[0] - second[1]) > tol) {
        out.push_back({Kind::NoSignaling,
                       std::string("P2(") + outcome_char(m) + "|" + setting_char(M) +
                           ") depends on the partner setting",
                       second[0] - second[1]});
      }
    }
  }
  return out;
}

CorrelationVector local_vertex(int alpha, int beta, int gamma, int delta) {
  CorrelationVector v = CorrelationVector::Zero();
  for (int M1 = 0; M1 < 2; ++M1) {
    for (int M2 = 0; M2 < 2; ++M2) {
      const int m1 = (alpha * M1) ^ beta;
      const int m2 = (gamma * M2) ^ delta;
      v(correlation_index(M1, M2, m1 & 1, m2 & 1)) = 1.0;
    }
  }
  return v;
}

std::vector<CorrelationVector> local_vertices() {
  std::vector<CorrelationVector> out;
  for (int bits = 0; bits < 16; ++bits) {
    out.push_back(local_vertex((bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1));
  }
  return out;
}

std::vector<CorrelationVector> causal_vertices(std::optional<unsigned> shuffle_seed) {
  // Per setting pair: one certain outcome pair or an even split over two.
  std::vector<Eigen::Vector4d> blocks;
  for (int i = 0; i < 4; ++i) blocks.push_back(Eigen::Vector4d::Unit(i));
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      blocks.push_back(0.5 * (Eigen::Vector4d::Unit(i) + Eigen::Vector4d::Unit(j)));
    }
  }
  const int nb = static_cast<int>(blocks.size());
  std::vector<int> order(nb * nb * nb * nb);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle_seed) {
    std::mt19937 rng(*shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  const Eigen::MatrixXd eq = equality_constraints();
  std::vector<CorrelationVector> out;
  for (int code : order) {
    CorrelationVector v;
    for (int s = 0, c = code; s < 4; ++s, c /= nb) v.segment<4>(4 * s) = blocks[c % nb];
    if (!validate_causal(v).empty()) continue;
    // Vertex iff the constraint columns on the support are independent.
    std::vector<int> support;
    for (int i = 0; i < 16; ++i) {
      if (v(i) > 0.0) support.push_back(i);
    }
    Eigen::MatrixXd cols(eq.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) cols.col(k) = eq.col(support[k]);
    if (Eigen::FullPivLU<Eigen::MatrixXd>(cols).rank() == cols.cols()) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

const std::vector<ChVariant>& ch_variants() {
  static const std::vector<ChVariant> variants = build_ch_variants();
  return variants;
}

LhvResult lhv_decompose(const CorrelationVector& v, double tol) {
  if (!validate_causal(v, tol).empty()) {
    throw std::invalid_argument("lhv_decompose: input is not a causal table");
  }
  const auto vertices = local_vertices();
  Eigen::MatrixXd A(16, 16);
  for (int k = 0; k < 16; ++k) A.col(k) = vertices[k];
  const lp::Result lp_result = lp::find_feasible(A, v, tol);

  LhvResult out;
  if (lp_result.status == lp::Status::Optimal) {
    LhvDecomposition d;
    d.weights = lp_result.x.cwiseMax(0.0);
    if ((A * d.weights - v).cwiseAbs().maxCoeff() <= tol &&
        std::abs(d.weights.sum() - 1.0) <= tol) {
      out.feasible = true;
      out.decomposition = d;
      return out;
    }
  }
  const auto& variants = ch_variants();
  int worst = 0;
  for (int k = 1; k < static_cast<int>(variants.size()); ++k) {
    if (variants[k](v) > variants[worst](v)) worst = k;
  }
  out.certificate = worst;
  out.certificate_value = variants[worst](v);
  return out;
}

bool is_local_fine(const CorrelationVector& v, double tol) {
  if (v.minCoeff() < -tol) return false;
  for (const auto& f : ch_variants()) {
    if (f(v) > tol) return false;
  }
  return true;
}

std::vector<int> saturated_variants(const CorrelationVector& v, double tol) {
  std::vector<int> out;
  const auto& variants = ch_variants();
  for (int k = 0; k < static_cast<int>(variants.size()); ++k) {
    if (std::abs(variants[k](v)) <= tol) out.push_back(k);
  }
  return out;
}

CorrelationVector hardy_table(const HardyPoint& p) {
  const double x = p(0);  // P(--|XY)
  const double y = p(1);  // P(--|YX)
  const double q = p(2);  // P(-+|YY)
  const double s = p(3);  // P(--|YY)
  CorrelationVector v;
  // XX
  v(correlation_index(0, 0, 0, 0)) = 0.0;
  v(correlation_index(0, 0, 0, 1)) = 1.0 - x;
  v(correlation_index(0, 0, 1, 0)) = 1.0 - y;
  v(correlation_index(0, 0, 1, 1)) = x + y - 1.0;
  // XY
  v(correlation_index(0, 1, 0, 0)) = q;
  v(correlation_index(0, 1, 0, 1)) = 1.0 - x - q;
  v(correlation_index(0, 1, 1, 0)) = 0.0;
  v(correlation_index(0, 1, 1, 1)) = x;
  // YX
  v(correlation_index(1, 0, 0, 0)) = 1.0 - s - q;
  v(correlation_index(1, 0, 0, 1)) = 0.0;
  v(correlation_index(1, 0, 1, 0)) = s + q - y;
  v(correlation_index(1, 0, 1, 1)) = y;
  // YY
  v(correlation_index(1, 1, 0, 0)) = 0.0;
  v(correlation_index(1, 1, 0, 1)) = 1.0 - s - q;
  v(correlation_index(1, 1, 1, 0)) = q;
  v(correlation_index(1, 1, 1, 1)) = s;
  return v;
}

CorrelationVector hardy_embed(const HardyPoint& p, double tol) {
  const CorrelationVector v = hardy_table(p);
  for (int i = 0; i < 16; ++i) {
    if (v(i) < -tol || v(i) > 1.0 + tol) {
      const int M1 = (i >> 3) & 1, M2 = (i >> 2) & 1, m1 = (i >> 1) & 1, m2 = i & 1;
      throw NotInHardyPolytope("hardy_embed: " + entry_name(M1, M2, m1, m2) + " = " +
                               std::to_string(v(i)) + " outside [0,1]");
    }
  }
  return v;
}

HardyPoint hardy_project(const CorrelationVector& v) {
  return HardyPoint(v(correlation_index(0, 1, 1, 1)), v(correlation_index(1, 0, 1, 1)),
                    v(correlation_index(1, 1, 1, 0)), v(correlation_index(1, 1, 1, 1)));
}

bool hardy_membership(const HardyPoint& p, double tol) {
  const double x = p(0), y = p(1), q = p(2), s = p(3);
  return s >= -tol && s <= 1.0 + tol &&
         q >= -tol && q <= 1.0 - s + tol &&
         x >= 1.0 - q - s - tol && x <= 1.0 - q + tol &&
         y >= 1.0 - x - tol && y <= s + q + tol;
}

std::vector<HardyPoint> hardy_vertices() {
  std::vector<HardyPoint> out;
  for (int bits = 0; bits < 16; ++bits) {
    const HardyPoint p((bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1);
    if (validate_causal(hardy_table(p)).empty()) out.push_back(p);
  }
  return out;
}

double hardy_facet_check(const HardyPoint& p) {
  return ch_value(to_table(hardy_embed(p))).value;
}

CrossSection cross_section(double p_mm_yy, int slices) {
  if (!(p_mm_yy >= 0.0 && p_mm_yy <= 1.0)) {
    throw std::invalid_argument("cross_section: P(--|YY) must lie in [0,1]");
  }
  if (slices < 1) throw std::invalid_argument("cross_section: need at least one slice");
  const double s = p_mm_yy;
  const double q_max = 1.0 - s;
  const int n = q_max > 0.0 ? slices : 1;
  CrossSection out;
  out.p_mm_yy = s;
  for (int k = 0; k < n; ++k) {
    const double q = n > 1 ? q_max * k / (n - 1) : 0.0;
    HardySlice slice;
    slice.p_mp_yy = q;
    const std::array<Eigen::Vector2d, 3> corners = {
        Eigen::Vector2d(1.0 - q, q), Eigen::Vector2d(1.0 - q, s + q),
        Eigen::Vector2d(1.0 - s - q, s + q)};
    for (const auto& c : corners) {
      const bool seen = std::any_of(slice.vertices.begin(), slice.vertices.end(),
                                    [&](const Eigen::Vector2d& u) { return (u - c).norm() <= kGeometryTol; });
      if (!seen) slice.vertices.push_back(c);
    }
    out.slices.push_back(std::move(slice));
  }
  if (s <= kGeometryTol) {
    out.segment = {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)};
  }
  return out;
}

}  // namespace nonlocal
