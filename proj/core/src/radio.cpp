#include "relaysel/radio.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace relaysel {
namespace {
constexpr double kSpeedOfLight = 299'792'458.0;
}

void RadioParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "radio." << name << " must be positive, got " << v;
      throw std::invalid_argument(msg.str());
    }
  };
  positive(carrier_hz, "carrier_hz");
  positive(bandwidth_hz, "bandwidth_hz");
  positive(packet_bytes, "packet_bytes");
  if (!(path_loss_exponent >= 2.0)) {
    throw std::invalid_argument("radio.path_loss_exponent must be >= 2");
  }
  if (!(shadowing_sigma_db >= 0.0)) {
    throw std::invalid_argument("radio.shadowing_sigma_db must be >= 0");
  }
  if (!(blockage_loss_db >= 0.0)) {
    throw std::invalid_argument("radio.blockage_loss_db must be >= 0");
  }
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(tx_gain_db) ||
      !std::isfinite(rx_gain_db) || !std::isfinite(noise_density_dbm_hz)) {
    throw std::invalid_argument("radio power and gain figures must be finite");
  }
}

double reference_loss_db(const RadioParams& radio) {
  return 20.0 * std::log10(4.0 * std::numbers::pi * radio.carrier_hz / kSpeedOfLight);
}

double path_loss_db(const RadioParams& radio, double distance_m) {
  if (!(distance_m > 0.0)) {
    std::ostringstream msg;
    msg << "path loss needs a positive distance, got " << distance_m;
    throw std::domain_error(msg.str());
  }
  return reference_loss_db(radio) + 10.0 * radio.path_loss_exponent * std::log10(distance_m);
}

double noise_floor_dbm(const RadioParams& radio) {
  return radio.noise_density_dbm_hz + 10.0 * std::log10(radio.bandwidth_hz);
}

double mean_rss_dbm(const RadioParams& radio, double distance_m) {
  return radio.tx_power_dbm + radio.tx_gain_db + radio.rx_gain_db -
         path_loss_db(radio, distance_m);
}

double capacity_bps(const RadioParams& radio, double snr_linear) {
  return radio.bandwidth_hz * std::log2(1.0 + snr_linear);
}

LinkSample make_link_sample(const RadioParams& radio, double distance_m,
                            double shadowing_db, LinkState truth) {
  LinkSample out;
  out.truth = truth;
  out.rss_dbm = mean_rss_dbm(radio, distance_m) + shadowing_db -
                (truth == LinkState::Bad ? radio.blockage_loss_db : 0.0);
  out.snr_linear = std::pow(10.0, (out.rss_dbm - noise_floor_dbm(radio)) / 10.0);
  out.capacity_bps = capacity_bps(radio, out.snr_linear);
  return out;
}

}  // namespace relaysel
