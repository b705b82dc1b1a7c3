#pragma once

#include "rofsim/filters.hpp"
#include "rofsim/rng.hpp"
#include "rofsim/sdm.hpp"
#include "rofsim/types.hpp"

namespace rofsim {

// Gain stage with input-referred thermal noise of total power k*Te*B.
struct AmplifierSpec {
  double gain_db = 0.0;
  double noise_temp_k = 0.0;  // effective input noise temperature
  double noise_bw_hz = 0.0;   // noise bandwidth the temperature refers to
};

// Radio-head receive hardware.  Temperatures/bandwidths are the full-rate
// values; the harness rescales them for reduced-rate runs.
struct FrontendConfig {
  AmplifierSpec lna{24.0, 119.0, 400e6};
  AmplifierSpec vga{0.0, 4867.0, 3e9};  // gain set per frame by the AGC
  AmplifierSpec da{15.0, 319.0, 180e6};
  double signal_filter_bw_hz = 100e6;   // passband filter around the carrier
  double dither_filter_cutoff_hz = 180e6;
  int filter_order = 4;
  double comparator_vth = 10e-3;  // volt
  double full_scale = 0.4;        // volt, two-level reconstruction amplitude
};

enum class QuantMode { one_bit, inf_bit };

// out = G * (x + n), n white Gaussian with power k*Te*B into the impedance.
void amplifier_apply(PassbandSignal& x, const AmplifierSpec& spec, RngStream& rng);

// Measured input power -> gain: +10 dB below -41 dBm, -35 dB above +4 dBm,
// otherwise -(P + 31) dB, holding the output near -31 dBm.
double vga_gain_db(double input_power_dbm);

// Measures the frame-average power, then applies the variable-gain stage
// with that single gain.  Returns the gain used.
double agc_apply(PassbandSignal& y1, const AmplifierSpec& vga, RngStream& rng);

// z = 1 if y - d > vth, 0 if y - d < -vth, fair coin otherwise.
BitStream comparator_quantize(const PassbandSignal& y, const PassbandSignal& dither,
                              double vth, RngStream& rng);

struct RrhStreams {
  RngStream lna;
  RngStream vga;
  RngStream da;
  RngStream comparator;
};

struct RrhChainOutput {
  QuantMode mode;
  BitStream bits;         // one_bit
  PassbandSignal analog;  // inf_bit: conditioned signal before the quantizer
  double vga_gain_db = 0.0;
};

// Signal path LNA -> AGC'd VGA -> carrier bandpass; dither path is the
// shared reconstructed dither through the driver amplifier.  In one_bit
// mode the comparator output is returned; inf_bit skips the quantizer.
RrhChainOutput rrh_uplink_chain(const PassbandSignal& antenna, const PassbandSignal& dither_lpf,
                                const FrontendConfig& cfg, double carrier_hz, QuantMode mode,
                                RrhStreams& streams);

}  // namespace rofsim
