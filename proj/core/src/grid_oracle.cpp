#include "relaysel/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relaysel {
namespace {

double interpolate(const std::vector<double>& samples, double r) {
  const std::size_t last = samples.size() - 1;
  const double pos = r * static_cast<double>(last);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), last - 1);
  const double t = pos - static_cast<double>(i);
  return samples[i] + t * (samples[i + 1] - samples[i]);
}

}  // namespace

GridSolution grid_dp_oracle(const ChannelModel& model, const CostModel& cost,
                            std::size_t horizon, std::size_t grid_points) {
  if (horizon == 0) throw std::invalid_argument("horizon must be at least 1");
  if (grid_points < 101) throw std::invalid_argument("grid needs at least 101 points");

  GridSolution out;
  out.grid.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    out.grid[i] = static_cast<double>(i) / static_cast<double>(grid_points - 1);
  }
  out.value.assign(horizon, std::vector<double>(grid_points));
  out.action.assign(horizon, std::vector<Action>(grid_points));

  const double d1 = cost.reject_cost();
  const double d2 = cost.accept_cost();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double r = out.grid[i];
    const double reject = r * d1;
    const double accept = (1.0 - r) * d2;
    out.value[horizon - 1][i] = std::min(reject, accept);
    out.action[horizon - 1][i] = reject < accept ? Action::Reject : Action::Accept;
  }

  for (std::size_t m = horizon - 1; m-- > 0;) {
    const std::vector<double>& next = out.value[m + 1];
    for (std::size_t i = 0; i < grid_points; ++i) {
      const double r = out.grid[i];
      const double y = ack_likelihood(model, r);
      double expected = 0.0;
      if (y > 0.0) expected += y * interpolate(next, update(model, r, Ack::Success));
      if (y < 1.0) expected += (1.0 - y) * interpolate(next, update(model, r, Ack::Failure));
      const double reject = r * d1;
      const double accept = (1.0 - r) * d2;
      const double cont = cost.probe_cost() + expected;

      double best = reject;
      Action act = Action::Reject;
      if (accept < best) {
        best = accept;
        act = Action::Accept;
      }
      if (cont < best) {
        best = cont;
        act = Action::Continue;
      }
      out.value[m][i] = best;
      out.action[m][i] = act;
    }
  }
  return out;
}

}  // namespace relaysel
