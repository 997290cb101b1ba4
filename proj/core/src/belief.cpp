#include "relaysel/belief.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relaysel {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0,1], got " << p;
    throw std::domain_error(msg.str());
  }
}

ChannelModel::ChannelModel(Unchecked, double q, double s, double k, double g)
    : q_(q), s_(s), k_(k), g_(g) {
  try {
    require_probability(q, "q");
    require_probability(s, "s");
    require_probability(k, "k");
    require_probability(g, "g");
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
}

ChannelModel::ChannelModel(double q, double s, double k, double g)
    : ChannelModel(Unchecked{}, q, s, k, g) {
  if (!(q > s)) {
    throw std::invalid_argument("channel model requires q > s, got " + describe());
  }
  if (!(k > g)) {
    throw std::invalid_argument("channel model requires k > g, got " + describe());
  }
}

ChannelModel ChannelModel::relaxed(double q, double s, double k, double g) {
  return ChannelModel(Unchecked{}, q, s, k, g);
}

std::string ChannelModel::describe() const {
  std::ostringstream out;
  out << "(q=" << q_ << ", s=" << s_ << ", k=" << k_ << ", g=" << g_ << ")";
  return out.str();
}

double predict(const ChannelModel& model, double r) {
  require_probability(r, "belief");
  return model.q() * r + (1.0 - r) * model.s();
}

double ack_likelihood(const ChannelModel& model, double r) {
  const double good = predict(model, r);
  return good * model.k() + (1.0 - good) * model.g();
}

double observation_probability(const ChannelModel& model, double r, Ack w) {
  const double y = ack_likelihood(model, r);
  return w == Ack::Success ? y : 1.0 - y;
}

double update(const ChannelModel& model, double r, Ack w) {
  const double good = predict(model, r);
  const double bad = 1.0 - good;
  double numerator = 0.0;
  double denominator = 0.0;
  if (w == Ack::Success) {
    numerator = good * model.k();
    denominator = numerator + bad * model.g();
  } else {
    numerator = good * (1.0 - model.k());
    denominator = numerator + bad * (1.0 - model.g());
  }
  if (!(denominator > 0.0)) {
    throw DegenerateEvidence("observation has zero probability under " +
                             model.describe());
  }
  // Rounding can push the ratio a hair past 1 when the bad branch vanishes.
  return std::min(1.0, numerator / denominator);
}

std::vector<double> observation_trajectory(const ChannelModel& model, double r0,
                                           Ack w, std::size_t x) {
  std::vector<double> out;
  out.reserve(x);
  double r = r0;
  for (std::size_t j = 0; j < x; ++j) {
    r = update(model, r, w);
    out.push_back(r);
  }
  return out;
}

}  // namespace relaysel
