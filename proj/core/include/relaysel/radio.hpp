#pragma once

#include "relaysel/belief.hpp"

namespace relaysel {

/// Link-budget parameters of the mmWave D2D radios.
struct RadioParams {
  double carrier_hz = 60e9;
  double tx_power_dbm = 24.0;
  double tx_gain_db = 6.0;
  double rx_gain_db = 6.0;
  double path_loss_exponent = 2.5;
  double shadowing_sigma_db = 3.5;
  double noise_density_dbm_hz = -174.0;
  double bandwidth_hz = 20e6;
  double packet_bytes = 65535.0;
  /// Extra loss on a probe's RSS while the link is blocked. Off by default:
  /// the RSS measurement does not see blockage.
  double blockage_loss_db = 0.0;

  /// Throws std::invalid_argument on non-physical values.
  void validate() const;
};

/// Free-space loss at the 1 m reference distance, 20 log10(4 pi f / c).
double reference_loss_db(const RadioParams& radio);

/// Log-distance path loss. Throws std::domain_error for d <= 0.
double path_loss_db(const RadioParams& radio, double distance_m);

/// Thermal noise over the channel bandwidth, in dBm.
double noise_floor_dbm(const RadioParams& radio);

/// Received power without shadowing or blockage.
double mean_rss_dbm(const RadioParams& radio, double distance_m);

double capacity_bps(const RadioParams& radio, double snr_linear);

struct LinkSample {
  double rss_dbm = 0.0;
  double snr_linear = 0.0;
  double capacity_bps = 0.0;
  LinkState truth = LinkState::Good;

  /// Time to push one packet at this capacity.
  double airtime_s(const RadioParams& radio) const {
    return radio.packet_bytes * 8.0 / capacity_bps;
  }
};

/// Assembles a sample from geometry, a shadowing draw and the link state.
LinkSample make_link_sample(const RadioParams& radio, double distance_m,
                            double shadowing_db, LinkState truth);

}  // namespace relaysel
