#pragma once

// Hardy residuals and the Bell-type tests evaluated on correlation tables.

#include "nonlocal/circuit.hpp"

namespace nonlocal {

/// eps1 = P(++|XX), eps2 = P(+-|YX), eps3 = P(-+|XY), eps4 = P(+0|YX),
/// eps5 = P(0+|XY).
struct HardyResiduals {
  std::array<double, 5> eps{};

  double sum() const;
};

inline constexpr double kViolationTol = 1e-12;

struct TestReport {
  double value = 0.0;
  double bound = 0.0;
  bool violated = false;
  /// value - bound; positive when violated.
  double margin = 0.0;
};

TestReport make_report(double value, double bound);

/// Two-outcome tables are read with zero loss entries.
HardyResiduals hardy_residuals(const CorrelationTable& t);

/// Loss entries rebuilt from marginals: P(+0|YX) = P1(+|Y) - P(++|YX) - P(+-|YX).
HardyResiduals hardy_residuals_from_marginals(const CorrelationTable& t);

/// P(++|YY) - sum of eps; violated when positive.
TestReport hardy_bound_check(const CorrelationTable& t);

/// CH form: P(++|XY)+P(++|YX)+P(++|YY)-P(++|XX)-P1(+|Y)-P2(+|Y) <= 0.
/// Requires a no-signaling table.
TestReport ch_value(const CorrelationTable& t);

/// <M1 M2> = sum m1 m2 P for a two-outcome table.
double correlator(const CorrelationTable& t, Setting m1, Setting m2);

/// Flips the +/- labels of one observable.
CorrelationTable relabel_outcomes(const CorrelationTable& t, Party party, Setting setting);

/// The printed expectation form <X1Y2>+<Y1X2>+<X1X2>-<Y1Y2> applied as-is.
double chsh_expression(const CorrelationTable& t);

/// CHSH expectation form matched to the CH form: the printed expression is
/// evaluated after flipping the outcomes of X1 and Y2, which gives
/// <X1Y2>+<Y1X2>+<Y1Y2>-<X1X2> on the original table and equals
/// 4*ch_value + 2. Bound 2; two-outcome tables only.
TestReport chsh_value(const CorrelationTable& t);

/// CH test on ideal probabilities with loss r:
/// [P(++|YY)+P(++|XY)+P(++|YX)-P(++|XX)](1-r)^2 - [P1(+|Y)+P2(+|Y)](1-r).
TestReport ch_loss_value(const CorrelationTable& t, const LossModel& loss);

/// I2233 on observed (three-outcome) probabilities; two-outcome tables embed
/// with zero loss.
TestReport i2233_value(const CorrelationTable& t);

/// I2233 on ideal two-outcome probabilities with loss r.
TestReport i2233_loss_value(const CorrelationTable& t, const LossModel& loss);

/// Which single-party terms multiply r(1-r) in the I2233 decomposition.
enum class RemainderMarginals {
  /// P1(+|X) + P2(+|X), as printed with the decomposition.
  PlusX,
  /// P1(-|Y) + P2(-|Y), obtained term by term from the two definitions.
  MinusY,
};

/// Sum of the remainder marginals for a two-outcome table.
double remainder_marginals(const CorrelationTable& t, RemainderMarginals which);

/// |i2233_loss - (ch_loss - r(1-r) * remainder)|.
double decomposition_identity_check(const CorrelationTable& t, const LossModel& loss,
                                    RemainderMarginals which = RemainderMarginals::PlusX);

}  // namespace nonlocal
