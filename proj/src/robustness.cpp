#include "nonlocal/robustness.hpp"

#include "nonlocal/inequalities.hpp"
#include "nonlocal/nelder_mead.hpp"
#include "nonlocal/quadrature.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

namespace nonlocal {

namespace {

using enum Setting;
constexpr Outcome kP = Outcome::Plus;

using Povm = std::array<Eigen::Matrix2cd, 2>;

// Offsets and weights of the normalized average over [-delta, delta].
struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};

Nodes nodes_for(double delta, const QuadratureRule& unit) {
  if (delta == 0.0) return {{0.0}, {1.0}};
  Nodes n{unit.nodes, unit.weights};
  for (std::size_t k = 0; k < n.x.size(); ++k) {
    n.x[k] *= delta;
    n.w[k] *= 0.5;
  }
  return n;
}

// Gauss-Legendre rules on [-1, 1], cached per order.
const QuadratureRule& unit_rule(int order) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
  return it->second;
}

// E[b b^T] with b = (cos, sin) of the splitter angle.
Eigen::Matrix2d input_density(double theta, const Nodes& n) {
  Eigen::Matrix2d rho = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < n.x.size(); ++k) {
    const Eigen::Vector2d b(std::cos(theta + n.x[k]), std::sin(theta + n.x[k]));
    rho += n.w[k] * b * b.transpose();
  }
  return rho;
}

// Average of e^{2i(phi + x)}, the coupler's phase on |11>.
Complex coupler_factor(double phi, const Nodes& n) {
  Complex g = 0.0;
  for (std::size_t k = 0; k < n.x.size(); ++k) g += n.w[k] * std::polar(1.0, 2.0 * (phi + n.x[k]));
  return g;
}

// Averaged effects of reading |m> after the phase shift and output splitter.
Povm party_povm(double phase, double split, const Nodes& np, const Nodes& ns) {
  Povm e = {Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero()};
  for (std::size_t i = 0; i < np.x.size(); ++i) {
    for (std::size_t j = 0; j < ns.x.size(); ++j) {
      const Unitary2 m = beam_splitter(split + ns.x[j]) * phase_shift(phase + np.x[i]);
      const double w = np.w[i] * ns.w[j];
      for (int o = 0; o < 2; ++o) {
        e[o] += w * m.row(o).adjoint() * m.row(o);
      }
    }
  }
  return e;
}

// Averaged state before the coupler and averaged effects per setting pair,
// so that the coupler width can change without recomputing the rest.
class AveragedCircuit {
 public:
  AveragedCircuit(const SettingParams& params, const FluctuationSpec& spec)
      : params_(params), unit_(unit_rule(spec.order)) {
    spec.validate();
    auto n = [&](Angle a) { return nodes_for(spec.half_width[static_cast<int>(a)], unit_); };
    const Nodes n1 = n(Angle::Theta1), n2 = n(Angle::Theta2);
    const Nodes p1 = n(Angle::Phi1), p2 = n(Angle::Phi2);
    const Nodes s1 = n(Angle::Theta1p), s2 = n(Angle::Theta2p);
    // Setting pairs usually share each party's measurement angles.
    std::vector<std::tuple<double, double, Povm>> seen1, seen2;
    auto effects = [](std::vector<std::tuple<double, double, Povm>>& seen, double phase,
                      double split, const Nodes& np, const Nodes& ns) -> const Povm& {
      for (const auto& [f, t, e] : seen) {
        if (f == phase && t == split) return e;
      }
      seen.emplace_back(phase, split, party_povm(phase, split, np, ns));
      return std::get<2>(seen.back());
    };
    for (int k = 0; k < 4; ++k) {
      const CircuitParams& p = params_[k];
      const Eigen::Matrix4cd rho = tensor(input_density(p.theta1, n1).cast<Complex>().eval(),
                                          input_density(p.theta2, n2).cast<Complex>().eval());
      const Povm e1 = effects(seen1, p.phi1, p.theta1p, p1, s1);
      const Povm e2 = effects(seen2, p.phi2, p.theta2p, p2, s2);
      // Tr[E C rho C^dagger] = fixed + 2 Re(g * phased), g the averaged
      // coupler phase on |11>, since the coupler only rescales row and
      // column 3 of rho off the diagonal.
      for (int m1 = 0; m1 < 2; ++m1) {
        for (int m2 = 0; m2 < 2; ++m2) {
          const Eigen::Matrix4cd e = tensor(e1[m1], e2[m2]);
          Complex fixed = 0.0, phased = 0.0;
          for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
              const Complex term = e(i, j) * rho(j, i);
              if (j == 3 && i != 3) {
                phased += term;
              } else if (i != 3 || j == 3) {
                fixed += term;
              }
            }
          }
          fixed_[k](m1, m2) = fixed.real();
          phased_[k](m1, m2) = phased;
        }
      }
    }
    set_coupler_width(spec.half_width[static_cast<int>(Angle::Phi)]);
  }

  void set_coupler_width(double delta) {
    if (!std::isfinite(delta) || delta < 0.0) {
      throw std::invalid_argument("coupler half-width must be finite and >= 0");
    }
    const Nodes nc = nodes_for(delta, unit_);
    for (int k = 0; k < 4; ++k) coupler_[k] = coupler_factor(params_[k].phi, nc);
  }

  CorrelationTable table() const {
    CorrelationTable t;
    for (Setting a : kSettings) {
      for (Setting b : kSettings) {
        const int k = setting_index(a, b);
        CorrelationTable::Block blk = CorrelationTable::Block::Zero();
        blk.topLeftCorner<2, 2>() =
            fixed_[k] + 2.0 * (coupler_[k] * phased_[k]).real();
        t.set_block(a, b, blk);
      }
    }
    validate(t);
    return t;
  }

 private:
  SettingParams params_;
  const QuadratureRule& unit_;
  std::array<Eigen::Matrix2d, 4> fixed_;
  std::array<Eigen::Matrix2cd, 4> phased_;
  std::array<Complex, 4> coupler_;
};

ChComponents components(const CorrelationTable& t) {
  ChComponents c;
  c.joint = t(X, Y, kP, kP) + t(Y, X, kP, kP) + t(Y, Y, kP, kP) - t(X, X, kP, kP);
  c.marginals = marginal(t, Party::First, Y, kP) + marginal(t, Party::Second, Y, kP);
  return c;
}

// Sign change of f on [lo, hi] with f(lo) > 0 >= f(hi).
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void validate_options(const BoundaryOptions& o) {
  if (o.grid < 2) throw std::invalid_argument("boundary: grid must be at least 2");
  if (!(o.delta_max > 0.0) || !std::isfinite(o.delta_max)) {
    throw std::invalid_argument("boundary: delta_max must be positive and finite");
  }
  if (!(o.tol > 0.0)) throw std::invalid_argument("boundary: tolerance must be positive");
}

}  // namespace

void FluctuationSpec::validate() const {
  for (Angle a : kAllAngles) {
    const double d = half_width[static_cast<int>(a)];
    if (!std::isfinite(d) || d < 0.0) {
      throw std::invalid_argument("FluctuationSpec: half-width of " +
                                  std::string(angle_name(a)) + " must be finite and >= 0");
    }
  }
  if (order < 2) throw std::invalid_argument("FluctuationSpec: order must be at least 2");
}

std::vector<Angle> FluctuationSpec::fluctuating() const {
  std::vector<Angle> out;
  for (Angle a : kAllAngles) {
    if (half_width[static_cast<int>(a)] > 0.0) out.push_back(a);
  }
  return out;
}

CorrelationTable averaged_table(const SettingParams& params, const FluctuationSpec& spec) {
  return AveragedCircuit(params, spec).table();
}

CorrelationTable averaged_table(TestKind test, const FluctuationSpec& spec) {
  return averaged_table(presets(test), spec);
}

ChComponents averaged_ch_components(TestKind test, const FluctuationSpec& spec) {
  return components(averaged_table(test, spec));
}

double averaged_ch(TestKind test, const FluctuationSpec& spec, double r) {
  const LossModel loss(r);
  return averaged_ch_components(test, spec).at(loss.rate());
}

void validate_panel(Angle axis1, Angle axis2, ThirdAxis third) {
  for (const Panel& p : kPanels) {
    if (p.axis1 == axis1 && p.axis2 == axis2 && p.third == third) return;
  }
  throw std::invalid_argument(
      "boundary: axes must be theta1,theta2 / theta1p,theta2p / phi1,phi2 with loss, "
      "or phi1,phi2 with coupler phase");
}

double third_axis_max(ThirdAxis third) {
  return third == ThirdAxis::Loss ? 1.0 : std::numbers::pi / 2.0;
}

double BoundarySurface::extent(int i, int j) const {
  const BoundarySample& s = at(i, j);
  switch (s.status) {
    case BoundarySample::Status::Found: return *s.boundary;
    case BoundarySample::Status::NoViolation: return 0.0;
    case BoundarySample::Status::NoCrossing: return third_axis_max(third);
  }
  return 0.0;
}

BoundarySurface violation_boundary(TestKind test, Angle axis1, Angle axis2, ThirdAxis third,
                                   const BoundaryOptions& options) {
  validate_panel(axis1, axis2, third);
  validate_options(options);
  BoundarySurface surface{test, axis1, axis2, third, options, {}};
  surface.samples.reserve(static_cast<std::size_t>(options.grid) * options.grid);
  const double top = third_axis_max(third);
  const SettingParams params = presets(test);

  for (int i = 0; i < options.grid; ++i) {
    for (int j = 0; j < options.grid; ++j) {
      BoundarySample s;
      s.delta1 = options.delta_max * i / (options.grid - 1);
      s.delta2 = options.delta_max * j / (options.grid - 1);
      FluctuationSpec spec;
      spec.order = options.order;
      spec.half_width[static_cast<int>(axis1)] = s.delta1;
      spec.half_width[static_cast<int>(axis2)] = s.delta2;

      AveragedCircuit circuit(params, spec);
      std::function<double(double)> f;
      if (third == ThirdAxis::Loss) {
        const ChComponents c = components(circuit.table());
        f = [c](double r) { return c.at(r); };
      } else {
        f = [&circuit](double d) {
          circuit.set_coupler_width(d);
          return components(circuit.table()).at(0.0);
        };
      }
      if (f(0.0) <= 0.0) {
        s.status = BoundarySample::Status::NoViolation;
      } else if (f(top) > 0.0) {
        s.status = BoundarySample::Status::NoCrossing;
      } else {
        s.status = BoundarySample::Status::Found;
        s.boundary = bisect(f, 0.0, top, options.tol);
        s.ch_at_boundary = f(*s.boundary);
      }
      surface.samples.push_back(s);
    }
  }
  return surface;
}

std::optional<double> symmetric_boundary(TestKind test, Angle axis1, Angle axis2, double r,
                                         const BoundaryOptions& options) {
  if (axis1 == axis2) throw std::invalid_argument("symmetric_boundary: axes must differ");
  validate_options(options);
  const LossModel loss(r);
  const SettingParams params = presets(test);
  auto f = [&](double d) {
    FluctuationSpec spec;
    spec.order = options.order;
    spec.half_width[static_cast<int>(axis1)] = d;
    spec.half_width[static_cast<int>(axis2)] = d;
    return components(averaged_table(params, spec)).at(loss.rate());
  };
  if (f(0.0) <= 0.0 || f(options.delta_max) > 0.0) return std::nullopt;
  return bisect(f, 0.0, options.delta_max, options.tol);
}

double loss_threshold(TestKind test, double tol) {
  const ChComponents c = averaged_ch_components(test, FluctuationSpec{});
  if (c.at(0.0) <= 0.0) return 0.0;
  return bisect([c](double r) { return c.at(r); }, 0.0, 1.0, tol);
}

SettingParams unpack_angles(const Eigen::VectorXd& x) {
  if (x.size() != 11) throw std::invalid_argument("unpack_angles: expects 11 angles");
  SettingParams out;
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      const int i = static_cast<int>(a);
      const int j = static_cast<int>(b);
      CircuitParams& p = out[setting_index(a, b)];
      p.theta1 = x(0);
      p.theta2 = x(1);
      p.phi = x(2);
      p.phi1 = x(3 + 2 * i);
      p.theta1p = x(4 + 2 * i);
      p.phi2 = x(7 + 2 * j);
      p.theta2p = x(8 + 2 * j);
    }
  }
  return out;
}

OptimizationResult optimize_angles(TestKind test, unsigned seed, int starts) {
  if (starts < 1) throw std::invalid_argument("optimize_angles: starts must be positive");
  auto objective = [test](const Eigen::VectorXd& x) {
    const CorrelationTable t = table_from_params(unpack_angles(x));
    if (test == TestKind::Chsh) return -ch_value(t).value;
    const HardyResiduals h = hardy_residuals(t);
    double penalty = 0.0;
    for (int k = 0; k < 3; ++k) penalty += std::sqrt(h.eps[k]);
    return -(t(Y, Y, kP, kP) - 2.0 * penalty);
  };

  // Restarts a fresh simplex at the last optimum until a round stops improving.
  auto descend = [&](Eigen::VectorXd& x, double& value, double step, double ftol, int rounds,
                     int& evaluations) {
    NelderMeadOptions opts;
    opts.initial_step = step;
    opts.ftol = ftol;
    for (int round = 0; round < rounds; ++round) {
      const NelderMeadResult r = nelder_mead(objective, x, opts);
      evaluations += r.evaluations;
      const bool improved = r.value < value - 1e-15;
      if (r.value < value) {
        value = r.value;
        x = r.x;
      }
      if (!improved) break;
    }
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  OptimizationResult best;
  best.starts = starts;
  double best_objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;

  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x(11);
    for (int k = 0; k < 11; ++k) x(k) = angle(rng);
    double value = std::numeric_limits<double>::infinity();
    descend(x, value, 0.5, 1e-10, 10, best.evaluations);
    if (value < best_objective) {
      best_objective = value;
      best_x = x;
      best.best_start = s;
    }
  }
  // Polish with alternating simplex sizes until a full cycle is flat.
  for (int cycle = 0; cycle < 200; ++cycle) {
    const double before = best_objective;
    for (double step : {0.3, 0.03, 0.003}) {
      descend(best_x, best_objective, step, 1e-15, 100, best.evaluations);
    }
    if (best_objective > before - 1e-12) break;
  }
  best.params = unpack_angles(best_x);
  best.value = ch_value(table_from_params(best.params)).value;
  return best;
}

}  // namespace nonlocal
