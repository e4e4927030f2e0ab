#pragma once

// CH values averaged over uniform angle fluctuations, violation boundaries,
// loss thresholds and angle optimization.

#include "nonlocal/circuit.hpp"

#include <optional>
#include <vector>

namespace nonlocal {

/// Uniform offsets in [-delta, +delta] per angle, shared by the four setting
/// pairs. A zero half-width means the angle does not fluctuate.
struct FluctuationSpec {
  AngleOffsets half_width{};
  /// Gauss-Legendre points per fluctuating axis.
  int order = 32;

  /// Throws std::invalid_argument on negative or non-finite widths or order < 2.
  void validate() const;
  std::vector<Angle> fluctuating() const;
};

/// Average of each joint probability over the fluctuation box, around the
/// per-setting-pair angles in `params`.
CorrelationTable averaged_table(const SettingParams& params, const FluctuationSpec& spec);
CorrelationTable averaged_table(TestKind test, const FluctuationSpec& spec);

/// Averaged P(++|XY)+P(++|YX)+P(++|YY)-P(++|XX) and P1(+|Y)+P2(+|Y).
struct ChComponents {
  double joint = 0.0;
  double marginals = 0.0;

  double at(double r) const { return joint * (1.0 - r) - marginals; }
};

ChComponents averaged_ch_components(TestKind test, const FluctuationSpec& spec);

/// joint * (1 - r) - marginals; positive values violate local realism.
double averaged_ch(TestKind test, const FluctuationSpec& spec, double r = 0.0);

enum class ThirdAxis { Loss, CouplerPhase };

/// Axis pair and third axis of one boundary surface.
struct Panel {
  char label;
  Angle axis1;
  Angle axis2;
  ThirdAxis third;
};

inline constexpr std::array<Panel, 4> kPanels = {{
    {'a', Angle::Theta1, Angle::Theta2, ThirdAxis::Loss},
    {'b', Angle::Theta1p, Angle::Theta2p, ThirdAxis::Loss},
    {'c', Angle::Phi1, Angle::Phi2, ThirdAxis::Loss},
    {'d', Angle::Phi1, Angle::Phi2, ThirdAxis::CouplerPhase},
}};

/// Throws std::invalid_argument unless (axis1, axis2, third) is one of kPanels.
void validate_panel(Angle axis1, Angle axis2, ThirdAxis third);

struct BoundaryOptions {
  int grid = 81;
  double delta_max = 1.5707963267948966;
  int order = 32;
  double tol = 1e-12;
};

/// Third-axis search interval: loss in [0, 1], coupler half-width in [0, pi/2].
double third_axis_max(ThirdAxis third);

struct BoundarySample {
  enum class Status {
    Found,
    /// No violation even at zero third-axis value.
    NoViolation,
    /// Violation persists over the whole third-axis interval.
    NoCrossing,
  };
  double delta1 = 0.0;
  double delta2 = 0.0;
  Status status = Status::NoViolation;
  /// Third-axis value of the sign change; set only when Found.
  std::optional<double> boundary;
  /// Averaged CH at the boundary; set only when Found.
  std::optional<double> ch_at_boundary;
};

struct BoundarySurface {
  TestKind test = TestKind::Hardy;
  Angle axis1 = Angle::Theta1;
  Angle axis2 = Angle::Theta2;
  ThirdAxis third = ThirdAxis::Loss;
  BoundaryOptions options;
  /// Row-major with delta1 the slow index.
  std::vector<BoundarySample> samples;

  const BoundarySample& at(int i, int j) const { return samples[i * options.grid + j]; }
  /// Boundary with NoViolation read as 0 and NoCrossing as third_axis_max.
  double extent(int i, int j) const;
};

BoundarySurface violation_boundary(TestKind test, Angle axis1, Angle axis2, ThirdAxis third,
                                   const BoundaryOptions& options = {});

/// Equal half-width delta on both axes where the averaged CH crosses zero at r;
/// empty when the sign does not change on [0, delta_max].
std::optional<double> symmetric_boundary(TestKind test, Angle axis1, Angle axis2, double r = 0.0,
                                         const BoundaryOptions& options = {});

/// Loss rate where the preset's CH value reaches zero.
double loss_threshold(TestKind test, double tol = 1e-10);

/// Eleven angles: shared theta1, theta2, phi; (phi_j, theta_j') per party and setting.
SettingParams unpack_angles(const Eigen::VectorXd& x);

struct OptimizationResult {
  SettingParams params;
  /// ch_value of the optimized table.
  double value = 0.0;
  int best_start = 0;
  int starts = 0;
  int evaluations = 0;
};

/// Multi-start Nelder-Mead from uniform random angles in [0, 2 pi). CHSH
/// maximizes ch_value; Hardy maximizes P(++|YY) penalized by twice the root
/// of every Hardy residual.
OptimizationResult optimize_angles(TestKind test, unsigned seed, int starts = 64);

}  // namespace nonlocal
