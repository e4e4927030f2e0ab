#pragma once

// Coupled Mach-Zehnder circuit: total unitary, measurement presets for the
// Hardy and CHSH experiments, correlation tables and the particle-loss map.

#include "nonlocal/qcore.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace nonlocal {

enum class TestKind { Hardy, Chsh };
enum class Setting : int { X = 0, Y = 1 };
enum class Outcome : int { Plus = 0, Minus = 1, Lost = 2 };
enum class Party : int { First = 0, Second = 1 };

/// The seven circuit angles: input splitters A1/A2, coupler, internal phases,
/// output splitters B1/B2.
enum class Angle : int { Theta1, Theta2, Phi, Phi1, Phi2, Theta1p, Theta2p };
inline constexpr int kNumAngles = 7;
inline constexpr std::array<Angle, kNumAngles> kAllAngles = {
    Angle::Theta1, Angle::Theta2, Angle::Phi,    Angle::Phi1,
    Angle::Phi2,   Angle::Theta1p, Angle::Theta2p};
inline constexpr std::array<Setting, 2> kSettings = {Setting::X, Setting::Y};

std::string_view angle_name(Angle a);
std::optional<Angle> parse_angle(std::string_view name);
std::string_view test_name(TestKind t);
std::optional<TestKind> parse_test(std::string_view name);

struct CircuitParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double theta1p = 0.0;
  double theta2p = 0.0;

  double& operator[](Angle a);
  double operator[](Angle a) const;
};

/// Additive offsets per angle, indexed by Angle.
using AngleOffsets = std::array<double, kNumAngles>;

CircuitParams operator+(CircuitParams p, const AngleOffsets& offsets);

/// U = [B(t1') x B(t2')] [P(f1) x P(f2)] C(f) [B(t1) x B(t2)].
Unitary4 total_unitary(const CircuitParams& p);

/// theta0 = phi0 = arccos(2 - sqrt 5) / 2.
double hardy_theta0();
/// chi with cot(chi) = tan(theta0) cos(phi0).
double hardy_chi();

/// Optimal angles for one setting pair.
CircuitParams preset(TestKind test, Setting m1, Setting m2);

/// Presets for all four setting pairs, indexed by 2*M1+M2.
using SettingParams = std::array<CircuitParams, 4>;
SettingParams presets(TestKind test);

inline constexpr int setting_index(Setting m1, Setting m2) {
  return 2 * static_cast<int>(m1) + static_cast<int>(m2);
}

/// Joint probabilities P(m1,m2|M1,M2). Two-outcome tables read 0 for any
/// entry involving the loss outcome.
class CorrelationTable {
 public:
  enum class Form { TwoOutcome, ThreeOutcome };
  /// (m1, m2) block for one setting pair.
  using Block = Eigen::Matrix3d;

  explicit CorrelationTable(Form form = Form::TwoOutcome);

  Form form() const { return form_; }
  bool three_outcome() const { return form_ == Form::ThreeOutcome; }
  int outcome_count() const { return three_outcome() ? 3 : 2; }

  double operator()(Setting s1, Setting s2, Outcome o1, Outcome o2) const;
  /// Throws when writing a loss entry of a two-outcome table.
  void set(Setting s1, Setting s2, Outcome o1, Outcome o2, double value);

  const Block& block(Setting s1, Setting s2) const;
  void set_block(Setting s1, Setting s2, const Block& b);

  /// Same joint probabilities with zero loss entries.
  CorrelationTable as_three_outcome() const;

 private:
  std::array<Block, 4> blocks_;
  Form form_;
};

inline constexpr double kTableTol = 1e-9;

bool is_normalized(const CorrelationTable& t, double tol = kTableTol);
bool is_no_signaling(const CorrelationTable& t, double tol = kTableTol);
bool in_unit_range(const CorrelationTable& t, double tol = kTableTol);
/// Throws std::domain_error naming the first broken invariant.
void validate(const CorrelationTable& t, double tol = kTableTol);

/// Single-party marginal; both partner settings are summed and must agree
/// within kTableTol (no-signaling), their mean is returned.
double marginal(const CorrelationTable& t, Party party, Setting setting,
                Outcome outcome);

/// Table from per-setting-pair circuit angles, state U|00>.
CorrelationTable table_from_params(const SettingParams& params);

CorrelationTable joint_table(TestKind test,
                             const std::optional<AngleOffsets>& offsets = {});

class LossModel {
 public:
  explicit LossModel(double r);
  double rate() const { return r_; }

 private:
  double r_;
};

/// Independent, party-symmetric loss: joint entries scale by (1-r)^2, one lost
/// particle gives r(1-r) times the surviving party's marginal, P(0,0) = r^2.
CorrelationTable apply_loss(const CorrelationTable& t, const LossModel& loss);

}  // namespace nonlocal
