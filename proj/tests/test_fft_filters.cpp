#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rofsim/fft.hpp"
#include "rofsim/filters.hpp"
#include "rofsim/rng.hpp"

using namespace rofsim;

namespace {
std::vector<double> random_real(size_t n, uint64_t seed) {
  RngStream r(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = r.next_normal();
  return v;
}
}  // namespace

TEST_CASE("complex transform round trip and Parseval") {
  const size_t n = 1024;
  RngStream r(5);
  std::vector<cplx> x(n), X(n), back(n);
  for (auto& v : x) v = {r.next_normal(), r.next_normal()};
  fft::c2c_forward(x, X);
  fft::c2c_inverse(X, back);

  double ex = 0.0, eX = 0.0;
  for (size_t i = 0; i < n; ++i) {
    CHECK(std::abs(back[i] / double(n) - x[i]) < 1e-12);
    ex += std::norm(x[i]);
    eX += std::norm(X[i]);
  }
  CHECK(eX / double(n) == doctest::Approx(ex).epsilon(1e-12));
}

TEST_CASE("real transform matches complex transform") {
  const size_t n = 256;
  std::vector<double> x = random_real(n, 8);
  std::vector<cplx> spec;
  fft::r2c(x, spec);
  REQUIRE(spec.size() == n / 2 + 1);

  std::vector<cplx> xc(n), Xc(n);
  for (size_t i = 0; i < n; ++i) xc[i] = x[i];
  fft::c2c_forward(xc, Xc);
  for (size_t k = 0; k < spec.size(); ++k) CHECK(std::abs(spec[k] - Xc[k]) < 1e-10);

  std::vector<double> back;
  std::vector<cplx> work = spec;
  fft::c2r(work, back, n);
  for (size_t i = 0; i < n; ++i) CHECK(back[i] / double(n) == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("lowpass magnitude law") {
  FilterSpec f;
  f.kind = FilterSpec::Kind::lowpass;
  f.cutoff_hz = 180e6;
  f.order = 4;

  CHECK(butterworth_mag(f, 0.0) == doctest::Approx(1.0));
  CHECK(-20.0 * std::log10(butterworth_mag(f, 180e6)) == doctest::Approx(3.0103).epsilon(1e-4));
  // order-4 rolloff: one octave past cutoff
  CHECK(-20.0 * std::log10(butterworth_mag(f, 360e6)) == doctest::Approx(24.0993).epsilon(1e-4));
  // half a decade past cutoff
  CHECK(-20.0 * std::log10(butterworth_mag(f, 180e6 * std::pow(10.0, 0.5))) >= 40.0);
  CHECK(butterworth_mag(f, 360e6) < butterworth_mag(f, 181e6));
}

TEST_CASE("bandpass magnitude law") {
  FilterSpec f;
  f.kind = FilterSpec::Kind::bandpass;
  f.center_hz = 2.35e9;
  f.bandwidth_hz = 100e6;
  f.order = 4;

  CHECK(butterworth_mag(f, f.center_hz) == doctest::Approx(1.0));
  CHECK(butterworth_mag(f, 0.0) == doctest::Approx(0.0));

  // half-power points: |f^2 - f0^2| = BW * f, separated by exactly BW with
  // geometric mean at the center
  const double f0 = f.center_hz, bw = f.bandwidth_hz;
  const double fu = (bw + std::sqrt(bw * bw + 4.0 * f0 * f0)) / 2.0;
  const double fl = fu - bw;
  CHECK(fu * fl == doctest::Approx(f0 * f0).epsilon(1e-12));
  CHECK(butterworth_mag(f, fu) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(butterworth_mag(f, fl) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

  // far skirts
  CHECK(butterworth_mag(f, 2.35e9 - 400e6) < 0.01);
  CHECK(butterworth_mag(f, 2.35e9 + 400e6) < 0.012);
}

TEST_CASE("zero-phase filtering scales pure tones by the magnitude response") {
  const size_t n = 4096;
  const double fs = 1e9;
  FilterSpec f;
  f.kind = FilterSpec::Kind::lowpass;
  f.cutoff_hz = 100e6;

  PassbandSignal sig;
  sig.sample_rate = fs;
  sig.samples.resize(n);
  const double f_in = 32 * fs / n;   // in band
  const double f_out = 1600 * fs / n;  // deep in the stopband
  for (size_t i = 0; i < n; ++i) {
    const double t = double(i) / fs;
    sig.samples[i] = std::sin(2.0 * std::numbers::pi * f_in * t) +
                     std::sin(2.0 * std::numbers::pi * f_out * t);
  }
  apply_zero_phase(sig, f);

  // project back onto the two tones
  auto amp_at = [&](double freq) {
    double c = 0.0, s = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double t = double(i) / fs;
      c += sig.samples[i] * std::cos(2.0 * std::numbers::pi * freq * t);
      s += sig.samples[i] * std::sin(2.0 * std::numbers::pi * freq * t);
    }
    return 2.0 * std::hypot(c, s) / double(n);
  };
  CHECK(amp_at(f_in) == doctest::Approx(butterworth_mag(f, f_in)).epsilon(1e-9));
  CHECK(amp_at(f_out) == doctest::Approx(butterworth_mag(f, f_out)).epsilon(1e-6));
}

TEST_CASE("windowed lowpass design meets its template") {
  const double fs = 1e9;
  const auto taps = design_kaiser_lowpass(100e6, 150e6, 80.0, fs);
  REQUIRE(taps.size() % 2 == 1);
  for (size_t i = 0; i < taps.size() / 2; ++i)
    CHECK(std::abs(taps[i] - taps[taps.size() - 1 - i]) < 1e-15);

  for (double f = 0.0; f <= 100e6; f += 10e6)
    CHECK(std::abs(fir_amplitude_response(taps, fs, f) - 1.0) < 2e-4);
  for (double f = 150e6; f <= 500e6; f += 25e6)
    CHECK(std::abs(fir_amplitude_response(taps, fs, f)) < std::pow(10.0, -78.0 / 20.0));
}

TEST_CASE("gridded response equals the direct evaluation and is memoized") {
  const double fs = 1e9;
  const auto taps = design_kaiser_lowpass(80e6, 140e6, 60.0, fs);
  const size_t n = 2048, count = 300;
  auto grid = fir_response_grid(taps, n, count);
  REQUIRE(grid->size() == count);
  for (size_t k = 0; k < count; k += 17) {
    const double f = double(k) * fs / double(n);
    CHECK((*grid)[k] == doctest::Approx(fir_amplitude_response(taps, fs, f)).epsilon(1e-9));
  }
  auto again = fir_response_grid(taps, n, count);
  CHECK(grid.get() == again.get());
  CHECK_THROWS_AS(fir_response_grid(taps, n, n), InputShapeError);
}
