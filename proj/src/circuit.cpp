#include "nonlocal/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nonlocal {

namespace {

constexpr std::array<std::string_view, kNumAngles> kAngleNames = {
    "theta1", "theta2", "phi", "phi1", "phi2", "theta1p", "theta2p"};

int idx(Outcome o) { return static_cast<int>(o); }

}  // namespace

std::string_view angle_name(Angle a) { return kAngleNames[static_cast<int>(a)]; }

std::optional<Angle> parse_angle(std::string_view name) {
  for (int i = 0; i < kNumAngles; ++i) {
    if (kAngleNames[i] == name) return static_cast<Angle>(i);
  }
  return std::nullopt;
}

std::string_view test_name(TestKind t) {
  return t == TestKind::Hardy ? "hardy" : "chsh";
}

std::optional<TestKind> parse_test(std::string_view name) {
  if (name == "hardy") return TestKind::Hardy;
  if (name == "chsh") return TestKind::Chsh;
  return std::nullopt;
}

double& CircuitParams::operator[](Angle a) {
  switch (a) {
    case Angle::Theta1: return theta1;
    case Angle::Theta2: return theta2;
    case Angle::Phi: return phi;
    case Angle::Phi1: return phi1;
    case Angle::Phi2: return phi2;
    case Angle::Theta1p: return theta1p;
    case Angle::Theta2p: return theta2p;
  }
  throw std::out_of_range("CircuitParams: bad angle");
}

double CircuitParams::operator[](Angle a) const {
  return const_cast<CircuitParams&>(*this)[a];
}

CircuitParams operator+(CircuitParams p, const AngleOffsets& offsets) {
  for (Angle a : kAllAngles) p[a] += offsets[static_cast<int>(a)];
  return p;
}

Unitary4 total_unitary(const CircuitParams& p) {
  const Unitary4 prepare = tensor(beam_splitter(p.theta1), beam_splitter(p.theta2));
  const Unitary4 phases = tensor(phase_shift(p.phi1), phase_shift(p.phi2));
  const Unitary4 readout = tensor(beam_splitter(p.theta1p), beam_splitter(p.theta2p));
  return readout * phases * coupler(p.phi) * prepare;
}

double hardy_theta0() { return 0.5 * std::acos(2.0 - std::sqrt(5.0)); }

double hardy_chi() {
  const double t0 = hardy_theta0();
  // arccot(x) on (0, pi) for x > 0.
  return std::atan2(1.0, std::tan(t0) * std::cos(t0));
}

CircuitParams preset(TestKind test, Setting m1, Setting m2) {
  using std::numbers::pi;
  CircuitParams p;
  const bool y1 = m1 == Setting::Y;
  const bool y2 = m2 == Setting::Y;
  if (test == TestKind::Hardy) {
    const double t0 = hardy_theta0();
    const double f0 = t0;
    p.theta1 = pi / 4;
    p.theta2 = t0;
    p.phi = f0;
    p.phi1 = y1 ? -2.0 * f0 : 0.0;
    p.phi2 = y2 ? -f0 : 0.0;
    p.theta1p = pi / 4;
    p.theta2p = y2 ? hardy_chi() : 0.0;
  } else {
    p.theta1 = pi / 4;
    p.theta2 = pi / 4;
    p.phi = pi / 2;
    p.phi1 = 0.0;
    p.phi2 = pi;
    p.theta1p = y1 ? 0.0 : pi / 4;
    p.theta2p = y2 ? 3.0 * pi / 8 : pi / 8;
  }
  return p;
}

SettingParams presets(TestKind test) {
  SettingParams out;
  for (Setting a : kSettings) {
    for (Setting b : kSettings) out[setting_index(a, b)] = preset(test, a, b);
  }
  return out;
}

CorrelationTable::CorrelationTable(Form form) : form_(form) {
  for (auto& b : blocks_) b.setZero();
}

double CorrelationTable::operator()(Setting s1, Setting s2, Outcome o1,
                                    Outcome o2) const {
  return blocks_[setting_index(s1, s2)](idx(o1), idx(o2));
}

void CorrelationTable::set(Setting s1, Setting s2, Outcome o1, Outcome o2,
                           double value) {
  if (!three_outcome() && (o1 == Outcome::Lost || o2 == Outcome::Lost)) {
    throw std::invalid_argument("two-outcome table has no loss entries");
  }
  blocks_[setting_index(s1, s2)](idx(o1), idx(o2)) = value;
}

const CorrelationTable::Block& CorrelationTable::block(Setting s1, Setting s2) const {
  return blocks_[setting_index(s1, s2)];
}

void CorrelationTable::set_block(Setting s1, Setting s2, const Block& b) {
  if (!three_outcome() &&
      (b.row(2).cwiseAbs().maxCoeff() != 0.0 || b.col(2).cwiseAbs().maxCoeff() != 0.0)) {
    throw std::invalid_argument("two-outcome table has no loss entries");
  }
  blocks_[setting_index(s1, s2)] = b;
}

CorrelationTable CorrelationTable::as_three_outcome() const {
  CorrelationTable out(Form::ThreeOutcome);
  out.blocks_ = blocks_;
  return out;
}

bool in_unit_range(const CorrelationTable& t, double tol) {
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      const auto& blk = t.block(a, b);
      if (blk.minCoeff() < -tol || blk.maxCoeff() > 1.0 + tol) return false;
    }
  }
  return true;
}

bool is_normalized(const CorrelationTable& t, double tol) {
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      if (std::abs(t.block(a, b).sum() - 1.0) > tol) return false;
    }
  }
  return true;
}

bool is_no_signaling(const CorrelationTable& t, double tol) {
  for (Setting a : kSettings) {
    // Party 1 with setting a: rows of the (a,X) and (a,Y) blocks.
    const Eigen::Vector3d r1 = t.block(a, Setting::X).rowwise().sum();
    const Eigen::Vector3d r2 = t.block(a, Setting::Y).rowwise().sum();
    if ((r1 - r2).cwiseAbs().maxCoeff() > tol) return false;
    const Eigen::RowVector3d c1 = t.block(Setting::X, a).colwise().sum();
    const Eigen::RowVector3d c2 = t.block(Setting::Y, a).colwise().sum();
    if ((c1 - c2).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

void validate(const CorrelationTable& t, double tol) {
  if (!in_unit_range(t, tol)) throw std::domain_error("table entry outside [0,1]");
  if (!is_normalized(t, tol)) throw std::domain_error("table is not normalized");
  if (!is_no_signaling(t, tol)) throw std::domain_error("table is signaling");
}

double marginal(const CorrelationTable& t, Party party, Setting setting,
                Outcome outcome) {
  if (!t.three_outcome() && outcome == Outcome::Lost) return 0.0;
  const int o = idx(outcome);
  double sums[2];
  for (Setting partner : kSettings) {
    const int k = static_cast<int>(partner);
    sums[k] = party == Party::First ? t.block(setting, partner).row(o).sum()
                                    : t.block(partner, setting).col(o).sum();
  }
  if (std::abs(sums[0] - sums[1]) > kTableTol) {
    throw std::domain_error("marginal: table is signaling");
  }
  return 0.5 * (sums[0] + sums[1]);
}

CorrelationTable table_from_params(const SettingParams& params) {
  CorrelationTable t;
  const State4 in = basis_state(0);
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      const OutcomeProbs p = outcome_probs(nonlocal::apply(total_unitary(params[setting_index(a, b)]), in));
      CorrelationTable::Block blk = CorrelationTable::Block::Zero();
      blk(0, 0) = p(0);
      blk(0, 1) = p(1);
      blk(1, 0) = p(2);
      blk(1, 1) = p(3);
      t.set_block(a, b, blk);
    }
  }
  return t;
}

CorrelationTable joint_table(TestKind test, const std::optional<AngleOffsets>& offsets) {
  SettingParams params = presets(test);
  if (offsets) {
    for (auto& p : params) p = p + *offsets;
  }
  CorrelationTable t = table_from_params(params);
  validate(t);
  return t;
}

LossModel::LossModel(double r) : r_(r) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw std::invalid_argument("loss rate must lie in [0, 1), got " + std::to_string(r));
  }
}

CorrelationTable apply_loss(const CorrelationTable& t, const LossModel& loss) {
  if (t.three_outcome()) {
    throw std::invalid_argument("apply_loss expects a two-outcome table");
  }
  const double r = loss.rate();
  const double kept = (1.0 - r) * (1.0 - r);
  const double one_lost = r * (1.0 - r);
  CorrelationTable out(CorrelationTable::Form::ThreeOutcome);
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      const auto& in = t.block(a, b);
      CorrelationTable::Block blk = CorrelationTable::Block::Zero();
      blk.topLeftCorner<2, 2>() = kept * in.topLeftCorner<2, 2>();
      for (int m = 0; m < 2; ++m) {
        blk(m, 2) = one_lost * in.row(m).head<2>().sum();
        blk(2, m) = one_lost * in.col(m).head<2>().sum();
      }
      blk(2, 2) = r * r;
      out.set_block(a, b, blk);
    }
  }
  return out;
}

}  // namespace nonlocal
