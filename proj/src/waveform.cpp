#include "rofsim/waveform.hpp"

#include <algorithm>
#include <list>
#include <memory>
#include <mutex>
#include <numbers>

#include "rofsim/fft.hpp"
#include "rofsim/filters.hpp"

namespace rofsim {

std::vector<int> OfdmConfig::active_bins() const {
  if (active_count < 2 || active_count >= n_fft - 1) {
    throw ConfigError("active_count outside [2, n_fft-2]");
  }
  const int neg = (active_count + 1) / 2;
  const int pos = active_count / 2;
  std::vector<int> bins;
  bins.reserve(active_count);
  for (int s = -neg; s <= pos; ++s) {
    if (s == 0) continue;
    bins.push_back(s < 0 ? n_fft + s : s);
  }
  std::sort(bins.begin(), bins.end());
  return bins;
}

int active_count_for_bandwidth(double bandwidth_hz, double subcarrier_hz) {
  if (bandwidth_hz <= 0.0 || subcarrier_hz <= 0.0) {
    throw ConfigError("bandwidth and subcarrier spacing must be positive");
  }
  return static_cast<int>(std::floor(bandwidth_hz / subcarrier_hz));
}

namespace {

constexpr double kInvSqrt10 = 0.31622776601683794;
constexpr double kInvSqrt2 = 0.7071067811865476;

// per-axis Gray code 00,01,11,10 -> -3,-1,+1,+3
inline double gray_axis(uint8_t b_hi, uint8_t b_lo) {
  static constexpr double lvl[4] = {-3.0, -1.0, +3.0, +1.0};  // index b_hi*2+b_lo
  return lvl[(b_hi << 1) | b_lo];
}

inline void gray_axis_bits(double v, uint8_t& b_hi, uint8_t& b_lo) {
  if (v < -2.0 * kInvSqrt10) {
    b_hi = 0; b_lo = 0;
  } else if (v < 0.0) {
    b_hi = 0; b_lo = 1;
  } else if (v < 2.0 * kInvSqrt10) {
    b_hi = 1; b_lo = 1;
  } else {
    b_hi = 1; b_lo = 0;
  }
}

}  // namespace

std::vector<cplx> map_qam16(const std::vector<uint8_t>& bits) {
  if (bits.size() % 4 != 0) throw InputShapeError("16QAM needs a multiple of 4 bits");
  std::vector<cplx> out(bits.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) {
    const uint8_t* b = &bits[4 * i];
    out[i] = cplx{gray_axis(b[0], b[1]), gray_axis(b[2], b[3])} * kInvSqrt10;
  }
  return out;
}

std::vector<uint8_t> demap_qam16(const std::vector<cplx>& symbols) {
  std::vector<uint8_t> bits(symbols.size() * 4);
  for (size_t i = 0; i < symbols.size(); ++i) {
    gray_axis_bits(symbols[i].real(), bits[4 * i + 0], bits[4 * i + 1]);
    gray_axis_bits(symbols[i].imag(), bits[4 * i + 2], bits[4 * i + 3]);
  }
  return bits;
}

std::vector<cplx> map_qpsk(const std::vector<uint8_t>& bits) {
  if (bits.size() % 2 != 0) throw InputShapeError("QPSK needs a multiple of 2 bits");
  std::vector<cplx> out(bits.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = cplx{bits[2 * i] ? -kInvSqrt2 : kInvSqrt2,
                  bits[2 * i + 1] ? -kInvSqrt2 : kInvSqrt2};
  }
  return out;
}

std::vector<cplx> ofdm_modulate(const ResourceGrid& grid, const OfdmConfig& cfg) {
  if (grid.n_fft != cfg.n_fft) throw InputShapeError("grid/config n_fft mismatch");
  const int cp = cfg.cp_len();
  const int sym_len = cfg.symbol_len();
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_fft));
  std::vector<cplx> out(static_cast<size_t>(sym_len) * grid.n_symbols);
  std::vector<cplx> bins(cfg.n_fft), time(cfg.n_fft);
  for (int s = 0; s < grid.n_symbols; ++s) {
    std::copy_n(&grid.data[static_cast<size_t>(s) * cfg.n_fft], cfg.n_fft, bins.begin());
    fft::c2c_inverse(bins, time);
    cplx* dst = &out[static_cast<size_t>(s) * sym_len];
    for (int n = 0; n < cfg.n_fft; ++n) dst[cp + n] = time[n] * scale;
    for (int n = 0; n < cp; ++n) dst[n] = dst[cfg.n_fft + n];
  }
  return out;
}

ResourceGrid ofdm_demodulate(const std::vector<cplx>& baseband, const OfdmConfig& cfg,
                             int n_symbols) {
  const int sym_len = cfg.symbol_len();
  if (baseband.size() < static_cast<size_t>(sym_len) * n_symbols) {
    throw InputShapeError("baseband shorter than the requested symbol count");
  }
  ResourceGrid grid = make_grid(cfg.n_fft, n_symbols, cfg.active_bins());
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_fft));
  std::vector<cplx> time(cfg.n_fft), bins(cfg.n_fft);
  const int cp = cfg.cp_len();
  for (int s = 0; s < n_symbols; ++s) {
    const cplx* src = &baseband[static_cast<size_t>(s) * sym_len + cp];
    std::copy_n(src, cfg.n_fft, time.begin());
    fft::c2c_forward(time, bins);
    for (int b : grid.active) grid.at(b, s) = bins[b] * scale;
  }
  return grid;
}

namespace {

// Shared complex oscillator e^{+j 2 pi f n / fs}; down-mixing conjugates it.
std::mutex osc_mutex;
struct OscEntry {
  size_t n;
  double ratio;
  std::shared_ptr<const std::vector<cplx>> table;
};
std::list<OscEntry> osc_cache;

std::shared_ptr<const std::vector<cplx>> oscillator(size_t n, double ratio) {
  {
    std::lock_guard<std::mutex> lock(osc_mutex);
    for (auto it = osc_cache.begin(); it != osc_cache.end(); ++it) {
      if (it->n == n && it->ratio == ratio) {
        osc_cache.splice(osc_cache.begin(), osc_cache, it);
        return osc_cache.front().table;
      }
    }
  }
  auto table = std::make_shared<std::vector<cplx>>(n);
  const double w = 2.0 * std::numbers::pi * ratio;
  for (size_t i = 0; i < n; ++i) {
    const double ph = w * static_cast<double>(i);
    (*table)[i] = cplx{std::cos(ph), std::sin(ph)};
  }
  std::lock_guard<std::mutex> lock(osc_mutex);
  osc_cache.push_front({n, ratio, table});
  while (osc_cache.size() > 6) osc_cache.pop_back();
  return table;
}

// Interpolation / decimation FIR edges relative to the narrow-side Nyquist.
constexpr double kResampleAttenDb = 80.0;

}  // namespace

PassbandSignal to_passband(const std::vector<cplx>& baseband, double baseband_rate,
                           double carrier_hz, double target_dbm, double target_rate,
                           double impedance) {
  if (baseband.empty()) throw InputShapeError("to_passband: empty baseband");
  if (baseband_rate <= 0.0 || target_rate <= 0.0) throw ConfigError("rates must be positive");
  const long long l = std::llround(target_rate / baseband_rate);
  if (l < 1) throw ConfigError("target rate below baseband rate");
  const double fs = static_cast<double>(l) * baseband_rate;
  if (carrier_hz + baseband_rate / 2.0 > fs / 2.0) {
    throw ConfigError("carrier plus signal bandwidth exceeds Nyquist");
  }

  PassbandSignal out;
  out.sample_rate = fs;
  out.impedance = impedance;
  const size_t n_bb = baseband.size();
  const size_t n = n_bb * static_cast<size_t>(l);
  out.samples.assign(n, 0.0);

  bool silent = target_dbm == kNegInfDbm;
  if (!silent) {
    double e = 0.0;
    for (const cplx& v : baseband) e += std::norm(v);
    silent = e == 0.0;
  }
  if (silent) return out;

  std::vector<cplx> bins;
  fft::c2c_forward(baseband, bins);

  // spectral replication of the zero-stuffed stream, then the image filter
  std::vector<cplx> big(n);
  if (l > 1) {
    const double nyq = baseband_rate / 2.0;
    const auto taps = design_kaiser_lowpass(0.7 * nyq, 1.3 * nyq, kResampleAttenDb, fs);
    const auto resp = fir_response_grid(taps, n, n / 2 + 1);
    const double inv_nbb = 1.0 / static_cast<double>(n_bb);
    for (size_t k = 0; k < n; ++k) {
      const size_t mirror = k <= n / 2 ? k : n - k;
      big[k] = bins[k % n_bb] * ((*resp)[mirror] * inv_nbb);
    }
  } else {
    const double inv_nbb = 1.0 / static_cast<double>(n_bb);
    for (size_t k = 0; k < n; ++k) big[k] = bins[k] * inv_nbb;
  }

  std::vector<cplx> interp;
  fft::c2c_inverse(big, interp);

  const auto osc = oscillator(n, carrier_hz / fs);
  for (size_t i = 0; i < n; ++i) {
    out.samples[i] = (interp[i] * (*osc)[i]).real();
  }

  const double p = dbm_to_watt(target_dbm);
  double ms = 0.0;
  for (double v : out.samples) ms += v * v;
  ms /= static_cast<double>(n);
  const double scale = std::sqrt(p * impedance / ms);
  for (double& v : out.samples) v *= scale;
  return out;
}

std::vector<cplx> from_passband(const PassbandSignal& sig, double carrier_hz, double out_rate,
                                double signal_bw) {
  if (sig.samples.empty()) throw InputShapeError("from_passband: empty signal");
  if (out_rate <= 0.0 || signal_bw <= 0.0) throw ConfigError("rates must be positive");
  const long long m = std::llround(sig.sample_rate / out_rate);
  if (m < 1) throw ConfigError("output rate above input rate");
  if (signal_bw > out_rate) throw ConfigError("signal bandwidth exceeds output rate");
  const size_t n = sig.samples.size();
  if (n % static_cast<size_t>(m) != 0) {
    throw ConfigError("decimation factor must divide the frame length");
  }
  const size_t n_out = n / static_cast<size_t>(m);

  const auto osc = oscillator(n, carrier_hz / sig.sample_rate);
  std::vector<cplx> mixed(n);
  for (size_t i = 0; i < n; ++i) mixed[i] = sig.samples[i] * std::conj((*osc)[i]);

  std::vector<cplx> bins;
  fft::c2c_forward(mixed, bins);

  std::vector<cplx> low(n_out);
  const double inv_n = 1.0 / static_cast<double>(n);
  if (m > 1) {
    const auto taps =
        design_kaiser_lowpass(signal_bw / 2.0, out_rate - signal_bw / 2.0, kResampleAttenDb,
                              sig.sample_rate);
    const auto resp = fir_response_grid(taps, n, n_out / 2 + 1);
    for (size_t k = 0; k < n_out; ++k) {
      const bool upper = k > n_out / 2;
      const size_t mag = upper ? n_out - k : k;
      const size_t src = upper ? n - (n_out - k) : k;
      low[k] = bins[src] * ((*resp)[mag] * inv_n);
    }
  } else {
    for (size_t k = 0; k < n_out; ++k) low[k] = bins[k] * inv_n;
  }

  std::vector<cplx> out;
  fft::c2c_inverse(low, out);
  return out;
}

double measure_power_dbm(const std::vector<double>& samples, double impedance) {
  if (samples.empty()) return kNegInfDbm;
  double ms = 0.0;
  for (double v : samples) ms += v * v;
  ms /= static_cast<double>(samples.size());
  return watt_to_dbm(ms / impedance);
}

double measure_power_dbm(const PassbandSignal& sig) {
  return measure_power_dbm(sig.samples, sig.impedance);
}

double evm_percent(const std::vector<cplx>& rx, const std::vector<cplx>& ref) {
  if (rx.size() != ref.size()) throw InputShapeError("evm: rx/ref size mismatch");
  if (ref.empty()) throw InputShapeError("evm: empty input");
  double err = 0.0, pwr = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    err += std::norm(rx[i] - ref[i]);
    pwr += std::norm(ref[i]);
  }
  if (pwr == 0.0) throw DomainError("evm: zero reference power");
  return 100.0 * std::sqrt(err / pwr);
}

}  // namespace rofsim
