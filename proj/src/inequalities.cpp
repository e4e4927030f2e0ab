#include "nonlocal/inequalities.hpp"

#include <cmath>
#include <stdexcept>

namespace nonlocal {

namespace {

using enum Setting;
constexpr Outcome kP = Outcome::Plus;
constexpr Outcome kM = Outcome::Minus;
constexpr Outcome kL = Outcome::Lost;

void require_two_outcome(const CorrelationTable& t, const char* what) {
  if (t.three_outcome()) {
    throw std::invalid_argument(std::string(what) + ": expects a two-outcome table");
  }
}

double pp(const CorrelationTable& t, Setting a, Setting b) { return t(a, b, kP, kP); }

// P(++|XY)+P(++|YX)+P(++|YY)-P(++|XX)
double ch_joint(const CorrelationTable& t) {
  return pp(t, X, Y) + pp(t, Y, X) + pp(t, Y, Y) - pp(t, X, X);
}

double ch_marginals(const CorrelationTable& t) {
  return marginal(t, Party::First, Y, kP) + marginal(t, Party::Second, Y, kP);
}

double i2233_joint(const CorrelationTable& t) {
  return t(Y, Y, kM, kP) + t(Y, Y, kP, kP) + t(Y, Y, kM, kM)
       + t(X, Y, kP, kP) + t(X, Y, kM, kM) + t(X, Y, kP, kM)
       + t(Y, X, kP, kP) + t(Y, X, kM, kM) + t(Y, X, kP, kM)
       - t(X, X, kP, kP) - t(X, X, kM, kM) - t(X, X, kP, kM);
}

double i2233_marginals(const CorrelationTable& t) {
  return marginal(t, Party::First, Y, kM) + marginal(t, Party::First, Y, kP)
       + marginal(t, Party::Second, Y, kP) + marginal(t, Party::Second, Y, kM);
}

}  // namespace

double HardyResiduals::sum() const {
  double s = 0.0;
  for (double e : eps) s += e;
  return s;
}

TestReport make_report(double value, double bound) {
  return TestReport{value, bound, value > bound + kViolationTol, value - bound};
}

HardyResiduals hardy_residuals(const CorrelationTable& t) {
  HardyResiduals h;
  h.eps = {t(X, X, kP, kP), t(Y, X, kP, kM), t(X, Y, kM, kP),
           t.three_outcome() ? t(Y, X, kP, kL) : 0.0,
           t.three_outcome() ? t(X, Y, kL, kP) : 0.0};
  return h;
}

HardyResiduals hardy_residuals_from_marginals(const CorrelationTable& t) {
  HardyResiduals h = hardy_residuals(t);
  h.eps[3] = marginal(t, Party::First, Y, kP) - t(Y, X, kP, kP) - t(Y, X, kP, kM);
  h.eps[4] = marginal(t, Party::Second, Y, kP) - t(X, Y, kP, kP) - t(X, Y, kM, kP);
  return h;
}

TestReport hardy_bound_check(const CorrelationTable& t) {
  return make_report(pp(t, Y, Y) - hardy_residuals(t).sum(), 0.0);
}

TestReport ch_value(const CorrelationTable& t) {
  return make_report(ch_joint(t) - ch_marginals(t), 0.0);
}

double correlator(const CorrelationTable& t, Setting m1, Setting m2) {
  require_two_outcome(t, "correlator");
  return t(m1, m2, kP, kP) + t(m1, m2, kM, kM) - t(m1, m2, kP, kM) - t(m1, m2, kM, kP);
}

CorrelationTable relabel_outcomes(const CorrelationTable& t, Party party, Setting setting) {
  CorrelationTable out = t;
  for (Setting partner : kSettings) {
    const Setting a = party == Party::First ? setting : partner;
    const Setting b = party == Party::First ? partner : setting;
    CorrelationTable::Block blk = t.block(a, b);
    if (party == Party::First) {
      blk.row(0).swap(blk.row(1));
    } else {
      blk.col(0).swap(blk.col(1));
    }
    out.set_block(a, b, blk);
  }
  return out;
}

double chsh_expression(const CorrelationTable& t) {
  return correlator(t, X, Y) + correlator(t, Y, X) + correlator(t, X, X) - correlator(t, Y, Y);
}

TestReport chsh_value(const CorrelationTable& t) {
  require_two_outcome(t, "chsh_value");
  const CorrelationTable mapped =
      relabel_outcomes(relabel_outcomes(t, Party::First, X), Party::Second, Y);
  return make_report(chsh_expression(mapped), 2.0);
}

TestReport ch_loss_value(const CorrelationTable& t, const LossModel& loss) {
  require_two_outcome(t, "ch_loss_value");
  const double kept = 1.0 - loss.rate();
  return make_report(ch_joint(t) * kept * kept - ch_marginals(t) * kept, 0.0);
}

TestReport i2233_value(const CorrelationTable& t) {
  return make_report(i2233_joint(t) - i2233_marginals(t), 0.0);
}

TestReport i2233_loss_value(const CorrelationTable& t, const LossModel& loss) {
  require_two_outcome(t, "i2233_loss_value");
  const double kept = 1.0 - loss.rate();
  return make_report(i2233_joint(t) * kept * kept - i2233_marginals(t) * kept, 0.0);
}

double remainder_marginals(const CorrelationTable& t, RemainderMarginals which) {
  if (which == RemainderMarginals::PlusX) {
    return marginal(t, Party::First, X, kP) + marginal(t, Party::Second, X, kP);
  }
  return marginal(t, Party::First, Y, kM) + marginal(t, Party::Second, Y, kM);
}

double decomposition_identity_check(const CorrelationTable& t, const LossModel& loss,
                                    RemainderMarginals which) {
  const double r = loss.rate();
  const double lhs = i2233_loss_value(t, loss).value;
  const double rhs = ch_loss_value(t, loss).value - r * (1.0 - r) * remainder_marginals(t, which);
  return std::abs(lhs - rhs);
}

}  // namespace nonlocal
