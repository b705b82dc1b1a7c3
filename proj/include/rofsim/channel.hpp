#pragma once

#include <array>
#include <vector>

#include "rofsim/types.hpp"

namespace rofsim {

struct AntennaGains {
  double rrh_dbi = 6.5;  // patch
  double ue_dbi = 2.15;  // dipole
};

// Street-canyon line-of-sight path loss, valid for distance >= 0.5 m:
// 32.4 + 21 log10(d) + 20 log10(f/GHz).
double path_loss_db(double distance_m, double carrier_hz);

struct LinkGain {
  double amplitude = 1.0;  // linear voltage scale
  double phase_rad = 0.0;  // ideal carrier phase -2 pi f d / c, wrapped
  double delay_s = 0.0;    // propagation delay
};

LinkGain link_coefficient(double distance_m, double carrier_hz,
                          const AntennaGains& gains = {});

// rx[i] = sum_k amplitude[i][k] * tx[k] delayed by round(delay * fs) samples.
// gains is indexed [receiver][transmitter].  All tx share rate and length.
std::vector<PassbandSignal> apply_channel(const std::vector<PassbandSignal>& tx,
                                          const std::vector<std::vector<LinkGain>>& gains);

}  // namespace rofsim
