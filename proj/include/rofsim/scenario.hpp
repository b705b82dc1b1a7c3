#pragma once

#include <array>
#include <string>
#include <vector>

#include "rofsim/channel.hpp"
#include "rofsim/cu.hpp"
#include "rofsim/frontend.hpp"

namespace rofsim {

enum class Direction { uplink, downlink };

// Full description of one deployment + radio configuration.  Frequencies are
// the nominal full-rate values; `scale` divides every frequency (and
// multiplies the noise temperatures) when the frame is run.
struct Scenario {
  std::vector<std::array<double, 2>> rrh_xy;
  std::vector<std::array<double, 2>> ue_xy;

  std::vector<double> ue_power_dbm;  // uplink transmit power per UE
  double rrh_power_dbm = 5.0;        // downlink transmit power per RRH

  double carrier_hz = 2.35e9;
  double fronthaul_hz = 25e9;
  double bandwidth_hz = 75e6;
  double subcarrier_hz = 240e3;
  int n_fft = 512;
  double cp_fraction = 1.0 / 16.0;
  double dither_hz = 76e6;
  double dither_dbm = -2.0;

  QuantMode mode = QuantMode::one_bit;
  Direction direction = Direction::uplink;
  Combiner combiner = Combiner::mrc;
  Precoder precoder = Precoder::mrt;

  double scale = 1.0;
  bool cable = false;  // single RRH fed directly, channel bypassed
  uint64_t seed = 1;

  FrontendConfig frontend;
  AntennaGains antennas;
};

void validate(const Scenario& s);

// Single-link bathtub deployment: one RRH, one UE on a cable.
Scenario preset_fig8();
// Two UEs, three RRHs; UE 0 sits inside the RRH cluster, UE 1 far away.
Scenario preset_fig9();
// Five UEs, twelve RRHs; UE 4 is center-of-room and transmits at +10 dBm.
Scenario preset_fig10();
// Single-UE coverage: 6 RRHs, 11 UE spots, distributed or co-located array.
std::vector<Scenario> preset_su_coverage(bool colocated);

// INI-style scenario file: [geometry]/[radio]/[power]/[mode]/[seed].
Scenario scenario_from_file(const std::string& path);

}  // namespace rofsim
