#pragma once

#include <string>

#include "rofsim/filters.hpp"
#include "rofsim/types.hpp"

namespace rofsim {

// Phase-continuous symmetric triangle at the requested average power.
// Peak amplitude for power P into R is sqrt(3 P R).
PassbandSignal triangle_dither(double freq_hz, double power_dbm, double sample_rate,
                               size_t n_samples, double impedance = kRefImpedanceOhm);

enum class SdmKind { lowpass, bandpass };

// Second-order error-feedback two-level modulator.  The noise transfer
// function is (1 - z^-1)^2 for lowpass and 1 - 2cos(theta) z^-1 + z^-2 for
// bandpass, with theta = 2 pi center_hz / sample_rate (zeros on the carrier).
// Requires |x| <= full_scale for bounded internal state.
BitStream sdm_encode(const PassbandSignal& x, SdmKind kind, double center_hz,
                     double full_scale = 0.4);

// bits -> +-full_scale volts, then the zero-phase reconstruction filter.
PassbandSignal reconstruct(const BitStream& bits, const FilterSpec& filter,
                           double impedance = kRefImpedanceOhm);

// Debug dump: 8-byte magic, u64 little-endian rate in Hz, then the bits
// packed LSB-first.  full_scale is not stored.
void write_bitstream(const std::string& path, const BitStream& bits);
BitStream read_bitstream(const std::string& path);

}  // namespace rofsim
