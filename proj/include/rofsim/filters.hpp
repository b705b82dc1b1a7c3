#pragma once

#include <memory>
#include <vector>

#include "rofsim/types.hpp"

namespace rofsim {

// Magnitude prototype applied as zero-phase weighting in the frequency domain.
struct FilterSpec {
  enum class Kind { lowpass, bandpass };
  Kind kind = Kind::lowpass;
  double cutoff_hz = 0.0;     // lowpass: -3 dB edge
  double center_hz = 0.0;     // bandpass: center
  double bandwidth_hz = 0.0;  // bandpass: -3 dB width
  int order = 4;
};

void validate(const FilterSpec& spec);

// |H(f)| of the Butterworth prototype described by spec.
double butterworth_mag(const FilterSpec& spec, double f_hz);

// Multiplies the signal's spectrum by butterworth_mag (zero phase, in place).
void apply_zero_phase(PassbandSignal& sig, const FilterSpec& spec);

// Linear-phase lowpass FIR (Kaiser window), odd length, unit passband gain.
// pass_hz/stop_hz are the transition edges, atten_db the stopband depth.
std::vector<double> design_kaiser_lowpass(double pass_hz, double stop_hz, double atten_db,
                                          double sample_rate);

// Zero-phase amplitude response of a symmetric odd-length FIR at one frequency.
double fir_amplitude_response(const std::vector<double>& taps, double sample_rate, double f_hz);

// Response sampled on bins k = 0..count-1 of an n-point grid (spacing fs/n).
// Memoized; the same taps/grid pair is computed once.
std::shared_ptr<const std::vector<double>> fir_response_grid(const std::vector<double>& taps,
                                                             size_t n, size_t count);

}  // namespace rofsim
