#pragma once

#include <cstddef>
#include <vector>

#include "relaysel/belief.hpp"
#include "relaysel/policy.hpp"

namespace relaysel {

/// Brute-force finite-horizon DP on a uniform belief grid.
///
/// Pushed-forward beliefs are read off the next stage by linear
/// interpolation. Shares nothing with the envelope algebra, which makes it a
/// reference for the exact solver.
struct GridSolution {
  std::vector<double> grid;                 ///< grid_points abscissae on [0,1]
  std::vector<std::vector<double>> value;   ///< value[m][i] ~ K_m(grid[i])
  std::vector<std::vector<Action>> action;  ///< argmin action per stage and point
};

/// Throws std::invalid_argument when horizon == 0 or grid_points < 101.
GridSolution grid_dp_oracle(const ChannelModel& model, const CostModel& cost,
                            std::size_t horizon, std::size_t grid_points);

}  // namespace relaysel
