#pragma once

// Geometry of two-setting, two-outcome correlations: the causal (no-signaling)
// polytope, the local polytope and its CH facets, and the 4D Hardy polytope.

#include "nonlocal/circuit.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonlocal {

/// P(m1,m2|M1,M2) at index ((2*M1 + M2)*2 + m1)*2 + m2 with X,+ -> 0 and Y,- -> 1.
using CorrelationVector = Eigen::Matrix<double, 16, 1>;

inline constexpr int correlation_index(int M1, int M2, int m1, int m2) {
  return ((2 * M1 + M2) * 2 + m1) * 2 + m2;
}

CorrelationVector to_vector(const CorrelationTable& t);
CorrelationTable to_table(const CorrelationVector& v);

inline constexpr double kGeometryTol = 1e-9;

struct ConstraintViolation {
  enum class Kind { Normalization, Positivity, NoSignaling };
  Kind kind;
  std::string description;
  double residual;
};

/// Empty iff normalization, positivity (0 <= P <= 1) and no-signaling hold.
std::vector<ConstraintViolation> validate_causal(const CorrelationVector& v,
                                                 double tol = kGeometryTol);

/// Deterministic strategy m1 = alpha*M1 xor beta, m2 = gamma*M2 xor delta.
CorrelationVector local_vertex(int alpha, int beta, int gamma, int delta);
std::vector<CorrelationVector> local_vertices();

/// Vertices of the causal polytope, sorted lexicographically. Candidates have
/// entries in {0, 1/2, 1}; the search visits them in an order shuffled by
/// `shuffle_seed` when given.
std::vector<CorrelationVector> causal_vertices(std::optional<unsigned> shuffle_seed = {});

/// Affine functional coeffs.v + constant <= 0 on causal tables.
struct ChVariant {
  CorrelationVector coeffs;
  double constant = 0.0;
  std::string label;

  double operator()(const CorrelationVector& v) const { return coeffs.dot(v) + constant; }
};

/// Images of the CH inequality under party exchange, X<->Y relabeling and
/// outcome flips, deduplicated as functionals on the causal polytope.
const std::vector<ChVariant>& ch_variants();

struct LhvDecomposition {
  /// Weights on local_vertices(), ordered by (alpha, beta, gamma, delta) bits.
  Eigen::Matrix<double, 16, 1> weights;
};

struct LhvResult {
  bool feasible = false;
  std::optional<LhvDecomposition> decomposition;
  /// Most violated CH variant when infeasible.
  std::optional<int> certificate;
  double certificate_value = 0.0;
};

/// LP over convex weights on the 16 local vertices. Throws for non-causal input.
LhvResult lhv_decompose(const CorrelationVector& v, double tol = kGeometryTol);

/// True iff every CH variant holds within tol.
bool is_local_fine(const CorrelationVector& v, double tol = kGeometryTol);

/// Indices of CH variants with |value| <= tol.
std::vector<int> saturated_variants(const CorrelationVector& v, double tol = kGeometryTol);

/// p = (P(--|XY), P(--|YX), P(-+|YY), P(--|YY)).
using HardyPoint = Eigen::Vector4d;

class NotInHardyPolytope : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Table with P(++|XX) = P(+-|YX) = P(-+|XY) = P(++|YY) = 0 and the free
/// coordinates p; dependent entries follow from normalization and
/// no-signaling. No range checks.
CorrelationVector hardy_table(const HardyPoint& p);

/// hardy_table plus range checks; throws NotInHardyPolytope.
CorrelationVector hardy_embed(const HardyPoint& p, double tol = kGeometryTol);

HardyPoint hardy_project(const CorrelationVector& v);

/// The chained inequalities describing H.
bool hardy_membership(const HardyPoint& p, double tol = kGeometryTol);

std::vector<HardyPoint> hardy_vertices();

/// ch_value of the embedded table; throws NotInHardyPolytope outside H.
double hardy_facet_check(const HardyPoint& p);

/// Slice of H at fixed P(--|YY) and P(-+|YY), as vertices in the
/// (P(--|XY), P(--|YX)) plane.
struct HardySlice {
  double p_mp_yy = 0.0;
  std::vector<Eigen::Vector2d> vertices;
};

struct CrossSection {
  double p_mm_yy = 0.0;
  std::vector<HardySlice> slices;
  /// Union of the slices projected on the plane when they degenerate to
  /// points (P(--|YY) = 0): the segment from (1,0) to (0,1). Empty otherwise.
  std::vector<Eigen::Vector2d> segment;
};

/// `slices` evenly spaced values of P(-+|YY) in [0, 1 - P(--|YY)].
CrossSection cross_section(double p_mm_yy, int slices = 5);

}  // namespace nonlocal
