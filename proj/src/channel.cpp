#include "rofsim/channel.hpp"

#include <cmath>
#include <numbers>

namespace rofsim {

double path_loss_db(double distance_m, double carrier_hz) {
  if (distance_m < 0.5) {
    throw DomainError("path loss model invalid below 0.5 m");
  }
  if (carrier_hz <= 0.0) throw ConfigError("carrier must be positive");
  return 32.4 + 21.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_hz / 1e9);
}

LinkGain link_coefficient(double distance_m, double carrier_hz, const AntennaGains& gains) {
  LinkGain g;
  const double pl = path_loss_db(distance_m, carrier_hz);
  g.amplitude = std::pow(10.0, (gains.rrh_dbi + gains.ue_dbi - pl) / 20.0);
  g.delay_s = distance_m / kSpeedOfLight;
  g.phase_rad = std::remainder(-2.0 * std::numbers::pi * carrier_hz * g.delay_s,
                               2.0 * std::numbers::pi);
  return g;
}

std::vector<PassbandSignal> apply_channel(const std::vector<PassbandSignal>& tx,
                                          const std::vector<std::vector<LinkGain>>& gains) {
  if (tx.empty()) throw InputShapeError("apply_channel: no transmitters");
  const size_t n = tx[0].samples.size();
  const double fs = tx[0].sample_rate;
  for (const auto& t : tx) {
    if (t.samples.size() != n || t.sample_rate != fs) {
      throw InputShapeError("apply_channel: transmitter signals disagree in shape");
    }
  }
  for (const auto& row : gains) {
    if (row.size() != tx.size()) {
      throw InputShapeError("apply_channel: gain matrix width != transmitter count");
    }
  }

  std::vector<PassbandSignal> rx(gains.size());
  for (size_t i = 0; i < gains.size(); ++i) {
    rx[i].sample_rate = fs;
    rx[i].impedance = tx[0].impedance;
    rx[i].samples.assign(n, 0.0);
    for (size_t k = 0; k < tx.size(); ++k) {
      const LinkGain& g = gains[i][k];
      const size_t shift = static_cast<size_t>(std::llround(g.delay_s * fs));
      if (shift >= n) continue;
      const double a = g.amplitude;
      const double* src = tx[k].samples.data();
      double* dst = rx[i].samples.data() + shift;
      for (size_t s = 0; s < n - shift; ++s) dst[s] += a * src[s];
    }
  }
  return rx;
}

}  // namespace rofsim
