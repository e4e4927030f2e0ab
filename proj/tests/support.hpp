#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "nonlocal/circuit.hpp"
#include "nonlocal/hardy_state.hpp"
#include "nonlocal/polytope.hpp"

#include <random>

namespace testing_support {

using namespace nonlocal;

/// U|00> by applying each gate to the amplitudes in sequence.
State4 simulate(const CircuitParams& p);

CorrelationTable simulated_table(const SettingParams& params);

/// Literal tensor-product Gauss-Legendre average: every fluctuating angle gets
/// its own nested loop and the full circuit is re-simulated at every node.
CorrelationTable brute_force_average(const SettingParams& params, const AngleOffsets& half_width,
                                     int order);

/// CH with P1(+|Y) read from the YX row and P2(+|Y) from the XY column.
double ch_from_rows(const CorrelationTable& t);

SettingParams random_params(std::mt19937_64& rng);
GoldsteinState random_goldstein(std::mt19937_64& rng);

/// Random mixture of `terms` causal vertices; terms = 0 mixes all 24.
CorrelationVector random_causal_point(std::mt19937_64& rng, int terms = 0);

/// Random convex combination of the Hardy vertices.
HardyPoint random_hardy_point(std::mt19937_64& rng);

}  // namespace testing_support
