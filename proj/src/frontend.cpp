#include "rofsim/frontend.hpp"

#include <cmath>

#include "rofsim/waveform.hpp"

namespace rofsim {

void amplifier_apply(PassbandSignal& x, const AmplifierSpec& spec, RngStream& rng) {
  if (spec.noise_temp_k < 0.0 || spec.noise_bw_hz < 0.0) {
    throw ConfigError("amplifier noise parameters must be non-negative");
  }
  const double g = std::pow(10.0, spec.gain_db / 20.0);
  const double sigma =
      std::sqrt(kBoltzmann * spec.noise_temp_k * spec.noise_bw_hz * x.impedance);
  if (sigma > 0.0) {
    for (double& v : x.samples) v = g * (v + sigma * rng.next_normal());
  } else {
    for (double& v : x.samples) v *= g;
  }
}

double vga_gain_db(double input_power_dbm) {
  if (input_power_dbm < -41.0) return 10.0;
  if (input_power_dbm > 4.0) return -35.0;
  return -input_power_dbm - 31.0;
}

double agc_apply(PassbandSignal& y1, const AmplifierSpec& vga, RngStream& rng) {
  AmplifierSpec s = vga;
  s.gain_db = vga_gain_db(measure_power_dbm(y1));
  amplifier_apply(y1, s, rng);
  return s.gain_db;
}

BitStream comparator_quantize(const PassbandSignal& y, const PassbandSignal& dither,
                              double vth, RngStream& rng) {
  if (y.samples.size() != dither.samples.size()) {
    throw InputShapeError("comparator inputs differ in length");
  }
  if (vth < 0.0) throw ConfigError("comparator threshold must be non-negative");
  BitStream out;
  out.sample_rate = y.sample_rate;
  out.bits.resize(y.samples.size());
  for (size_t i = 0; i < y.samples.size(); ++i) {
    const double diff = y.samples[i] - dither.samples[i];
    uint8_t b;
    if (diff > vth) {
      b = 1;
    } else if (diff < -vth) {
      b = 0;
    } else {
      b = rng.next_bit() ? 1 : 0;  // metastable region
    }
    out.bits[i] = b;
  }
  return out;
}

RrhChainOutput rrh_uplink_chain(const PassbandSignal& antenna, const PassbandSignal& dither_lpf,
                                const FrontendConfig& cfg, double carrier_hz, QuantMode mode,
                                RrhStreams& streams) {
  RrhChainOutput out;
  out.mode = mode;

  PassbandSignal y = antenna;
  amplifier_apply(y, cfg.lna, streams.lna);
  out.vga_gain_db = agc_apply(y, cfg.vga, streams.vga);

  FilterSpec bpf;
  bpf.kind = FilterSpec::Kind::bandpass;
  bpf.center_hz = carrier_hz;
  bpf.bandwidth_hz = cfg.signal_filter_bw_hz;
  bpf.order = cfg.filter_order;
  apply_zero_phase(y, bpf);

  if (mode == QuantMode::inf_bit) {
    out.analog = std::move(y);
    return out;
  }

  if (dither_lpf.samples.size() != y.samples.size()) {
    throw InputShapeError("dither frame length mismatch");
  }
  PassbandSignal d2 = dither_lpf;
  amplifier_apply(d2, cfg.da, streams.da);
  out.bits = comparator_quantize(y, d2, cfg.comparator_vth, streams.comparator);
  return out;
}

}  // namespace rofsim
