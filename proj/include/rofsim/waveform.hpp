#pragma once

#include <cmath>
#include <vector>

#include "rofsim/types.hpp"

namespace rofsim {

// OFDM numerology.  Active subcarriers sit symmetrically around DC, which
// stays empty; bins outside the active set are guards and stay empty too.
struct OfdmConfig {
  int n_fft = 512;
  double subcarrier_hz = 240e3;
  double cp_fraction = 1.0 / 16.0;
  int active_count = 312;

  double base_rate() const { return n_fft * subcarrier_hz; }
  int cp_len() const { return static_cast<int>(std::lround(n_fft * cp_fraction)); }
  int symbol_len() const { return n_fft + cp_len(); }
  double occupied_bw() const { return active_count * subcarrier_hz; }
  std::vector<int> active_bins() const;
};

// Largest symmetric active set that fits the requested occupied bandwidth.
int active_count_for_bandwidth(double bandwidth_hz, double subcarrier_hz);

// Gray-mapped 16QAM, unit average energy.  Four bits per symbol; the first
// two select I, the last two Q, each axis 00,01,11,10 -> -3,-1,+1,+3 (/sqrt10).
std::vector<cplx> map_qam16(const std::vector<uint8_t>& bits);
std::vector<uint8_t> demap_qam16(const std::vector<cplx>& symbols);

// QPSK, unit energy; bit pairs map sign of I then Q: 0 -> +, 1 -> -.
std::vector<cplx> map_qpsk(const std::vector<uint8_t>& bits);

// Unitary IDFT per symbol plus cyclic prefix.  Output rate is base_rate().
std::vector<cplx> ofdm_modulate(const ResourceGrid& grid, const OfdmConfig& cfg);

// Inverse of ofdm_modulate: strips the prefix, unitary DFT, keeps active bins.
ResourceGrid ofdm_demodulate(const std::vector<cplx>& baseband, const OfdmConfig& cfg,
                             int n_symbols);

// Interpolates to an integer multiple of baseband_rate, mixes onto the
// carrier, and scales so the average power meets target_dbm.  The returned
// sample_rate is the snapped integer multiple.  target_dbm of -inf (or an
// all-zero input) yields a silent signal.
PassbandSignal to_passband(const std::vector<cplx>& baseband, double baseband_rate,
                           double carrier_hz, double target_dbm, double target_rate,
                           double impedance = kRefImpedanceOhm);

// Mixes the carrier band down to complex baseband at out_rate (an integer
// divisor of the input rate), lowpass-filtered to reject out-of-band content
// and decimation aliases.  signal_bw bounds the band to preserve.
std::vector<cplx> from_passband(const PassbandSignal& sig, double carrier_hz, double out_rate,
                                double signal_bw);

double measure_power_dbm(const PassbandSignal& sig);
double measure_power_dbm(const std::vector<double>& samples, double impedance);

// 100 * sqrt(sum|rx-ref|^2 / sum|ref|^2)
double evm_percent(const std::vector<cplx>& rx, const std::vector<cplx>& ref);

}  // namespace rofsim
