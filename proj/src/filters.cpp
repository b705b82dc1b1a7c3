#include "rofsim/filters.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include "rofsim/fft.hpp"

namespace rofsim {

void validate(const FilterSpec& spec) {
  if (spec.order < 1) throw ConfigError("filter order must be >= 1");
  if (spec.kind == FilterSpec::Kind::lowpass) {
    if (spec.cutoff_hz <= 0.0) throw ConfigError("lowpass cutoff must be positive");
  } else {
    if (spec.bandwidth_hz <= 0.0) throw ConfigError("bandpass width must be positive");
    if (spec.center_hz <= spec.bandwidth_hz / 2.0) {
      throw ConfigError("bandpass center must exceed half its width");
    }
  }
}

double butterworth_mag(const FilterSpec& spec, double f_hz) {
  validate(spec);
  const double f = std::abs(f_hz);
  double g;
  if (spec.kind == FilterSpec::Kind::lowpass) {
    g = f / spec.cutoff_hz;
  } else {
    if (f == 0.0) return 0.0;
    // lowpass-to-bandpass frequency map
    g = (f * f - spec.center_hz * spec.center_hz) / (spec.bandwidth_hz * f);
  }
  return 1.0 / std::sqrt(1.0 + std::pow(g * g, spec.order));
}

void apply_zero_phase(PassbandSignal& sig, const FilterSpec& spec) {
  validate(spec);
  const size_t n = sig.samples.size();
  if (n == 0) return;
  std::vector<cplx> spec_bins;
  fft::r2c(sig.samples, spec_bins);
  const double df = sig.sample_rate / static_cast<double>(n);
  for (size_t k = 0; k < spec_bins.size(); ++k) {
    spec_bins[k] *= butterworth_mag(spec, df * static_cast<double>(k)) / static_cast<double>(n);
  }
  fft::c2r(spec_bins, sig.samples, n);
}

namespace {

double bessel_i0(double x) {
  // power series; converges quickly for the beta range used here
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

std::vector<double> design_kaiser_lowpass(double pass_hz, double stop_hz, double atten_db,
                                          double sample_rate) {
  if (!(pass_hz > 0.0) || !(stop_hz > pass_hz) || stop_hz >= sample_rate / 2.0) {
    throw ConfigError("FIR transition band outside (0, fs/2)");
  }
  const double a = atten_db;
  double beta = 0.0;
  if (a > 50.0) {
    beta = 0.1102 * (a - 8.7);
  } else if (a >= 21.0) {
    beta = 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
  }
  const double dw = 2.0 * std::numbers::pi * (stop_hz - pass_hz) / sample_rate;
  size_t n = static_cast<size_t>(std::ceil((a - 8.0) / (2.285 * dw))) + 1;
  if (n % 2 == 0) ++n;
  const double fc = 0.5 * (pass_hz + stop_hz) / sample_rate;  // normalized cutoff
  const ptrdiff_t m = static_cast<ptrdiff_t>(n / 2);
  const double i0b = bessel_i0(beta);
  std::vector<double> taps(n);
  for (ptrdiff_t i = 0; i < static_cast<ptrdiff_t>(n); ++i) {
    const double k = static_cast<double>(i - m);
    const double x = 2.0 * fc * k;
    const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double r = k / static_cast<double>(m);
    const double win = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    taps[i] = 2.0 * fc * sinc * win;
  }
  return taps;
}

double fir_amplitude_response(const std::vector<double>& taps, double sample_rate, double f_hz) {
  const size_t m = taps.size() / 2;
  double acc = taps[m];
  const double w = 2.0 * std::numbers::pi * f_hz / sample_rate;
  for (size_t k = 1; k <= m; ++k) {
    acc += 2.0 * taps[m + k] * std::cos(w * static_cast<double>(k));
  }
  return acc;
}

namespace {

std::mutex grid_mutex;
std::map<std::tuple<uint64_t, size_t, size_t>, std::shared_ptr<const std::vector<double>>>
    grid_cache;

uint64_t hash_taps(const std::vector<double>& taps) {
  uint64_t h = 1469598103934665603ull;
  for (double t : taps) {
    uint64_t bits;
    std::memcpy(&bits, &t, sizeof bits);
    h = (h ^ bits) * 1099511628211ull;
  }
  return h ^ taps.size();
}

}  // namespace

std::shared_ptr<const std::vector<double>> fir_response_grid(const std::vector<double>& taps,
                                                             size_t n, size_t count) {
  if (count > n / 2 + 1) throw InputShapeError("fir_response_grid: count exceeds half grid");
  const auto key = std::make_tuple(hash_taps(taps), n, count);
  {
    std::lock_guard<std::mutex> lock(grid_mutex);
    auto it = grid_cache.find(key);
    if (it != grid_cache.end()) return it->second;
  }

  auto grid = std::make_shared<std::vector<double>>(count);
  if (count * taps.size() < (1u << 24)) {
    // direct evaluation for small grids
    const double df = 1.0 / static_cast<double>(n);  // cycles/sample per bin
    for (size_t k = 0; k < count; ++k) {
      (*grid)[k] = fir_amplitude_response(taps, 1.0, df * static_cast<double>(k));
    }
  } else {
    // group-delay-centered taps on the full grid, one transform
    std::vector<double> padded(n, 0.0);
    const size_t m = taps.size() / 2;
    for (size_t i = 0; i < taps.size(); ++i) {
      const size_t idx = (i + n - m) % n;
      padded[idx] += taps[i];
    }
    std::vector<cplx> resp;
    fft::r2c(padded, resp);
    for (size_t k = 0; k < count; ++k) (*grid)[k] = resp[k].real();
  }

  std::lock_guard<std::mutex> lock(grid_mutex);
  grid_cache[key] = grid;
  return grid;
}

}  // namespace rofsim
