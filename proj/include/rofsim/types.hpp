#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rofsim {

using cplx = std::complex<double>;

// SI / reference constants
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kRoomTempK = 290.0;           // noise reference temperature
inline constexpr double kRefImpedanceOhm = 50.0;

// Thrown when an input span/matrix has a size inconsistent with its peers.
struct InputShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a configuration value is out of its legal range.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a physical-model argument leaves the model's validity region.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a matrix inversion meets a numerically singular system.
struct SingularityError : std::runtime_error {
  SingularityError(const std::string& what, int subcarrier_bin)
      : std::runtime_error(what), subcarrier(subcarrier_bin) {}
  int subcarrier;
};

// Real-valued RF samples on a fixed-rate grid, referenced to an impedance.
struct PassbandSignal {
  std::vector<double> samples;
  double sample_rate = 0.0;          // Hz
  double impedance = kRefImpedanceOhm;  // ohm
};

// Two-level sample stream (values 0/1) plus the amplitude mapping used
// when the stream is turned back into volts.
struct BitStream {
  std::vector<uint8_t> bits;
  double sample_rate = 0.0;  // Hz
  double full_scale = 0.4;   // volt, bit b -> (2b-1)*full_scale
};

// Frequency-domain OFDM frame: n_fft bins by n_symbols, only bins listed in
// `active` may be nonzero.  Storage is column-major, one symbol per column.
struct ResourceGrid {
  int n_fft = 0;
  int n_symbols = 0;
  std::vector<int> active;  // FFT bin indices, sorted, DC excluded
  std::vector<cplx> data;   // n_fft * n_symbols

  cplx& at(int bin, int symbol) { return data[static_cast<size_t>(symbol) * n_fft + bin]; }
  const cplx& at(int bin, int symbol) const {
    return data[static_cast<size_t>(symbol) * n_fft + bin];
  }
};

inline ResourceGrid make_grid(int n_fft, int n_symbols, std::vector<int> active) {
  ResourceGrid g;
  g.n_fft = n_fft;
  g.n_symbols = n_symbols;
  g.active = std::move(active);
  g.data.assign(static_cast<size_t>(n_fft) * n_symbols, cplx{0.0, 0.0});
  for (int b : g.active) {
    if (b <= 0 || b >= n_fft) throw ConfigError("active bin outside (0, n_fft)");
  }
  return g;
}

inline constexpr double kNegInfDbm = -std::numeric_limits<double>::infinity();

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) {
  return w > 0.0 ? 10.0 * std::log10(w / 1e-3) : kNegInfDbm;
}
inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace rofsim
