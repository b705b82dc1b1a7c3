#include "rofsim/sdm.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

namespace rofsim {

PassbandSignal triangle_dither(double freq_hz, double power_dbm, double sample_rate,
                               size_t n_samples, double impedance) {
  if (freq_hz <= 0.0 || sample_rate <= 0.0) throw ConfigError("dither rates must be positive");
  if (freq_hz >= sample_rate / 2.0) throw ConfigError("dither frequency above Nyquist");
  PassbandSignal out;
  out.sample_rate = sample_rate;
  out.impedance = impedance;
  out.samples.resize(n_samples);
  const double vpk = std::sqrt(3.0 * dbm_to_watt(power_dbm) * impedance);
  const double step = freq_hz / sample_rate;  // cycles per sample
  for (size_t i = 0; i < n_samples; ++i) {
    const double t = std::fmod(step * static_cast<double>(i), 1.0);
    const double tri = t < 0.5 ? 4.0 * t - 1.0 : 3.0 - 4.0 * t;
    out.samples[i] = vpk * tri;
  }
  return out;
}

BitStream sdm_encode(const PassbandSignal& x, SdmKind kind, double center_hz,
                     double full_scale) {
  if (full_scale <= 0.0) throw ConfigError("full_scale must be positive");
  if (kind == SdmKind::bandpass &&
      (center_hz <= 0.0 || center_hz >= x.sample_rate / 2.0)) {
    throw ConfigError("bandpass center outside (0, fs/2)");
  }
  for (double v : x.samples) {
    if (std::abs(v) > full_scale) {
      throw DomainError("sdm_encode input exceeds full scale");
    }
  }

  const double c = kind == SdmKind::lowpass
                       ? 2.0
                       : 2.0 * std::cos(2.0 * std::numbers::pi * center_hz / x.sample_rate);
  BitStream out;
  out.sample_rate = x.sample_rate;
  out.full_scale = full_scale;
  out.bits.resize(x.samples.size());
  double e1 = 0.0, e2 = 0.0;
  for (size_t i = 0; i < x.samples.size(); ++i) {
    const double u = x.samples[i] + c * e1 - e2;
    const double q = u >= 0.0 ? full_scale : -full_scale;
    out.bits[i] = u >= 0.0 ? 1 : 0;
    e2 = e1;
    e1 = u - q;
  }
  return out;
}

PassbandSignal reconstruct(const BitStream& bits, const FilterSpec& filter, double impedance) {
  PassbandSignal out;
  out.sample_rate = bits.sample_rate;
  out.impedance = impedance;
  out.samples.resize(bits.bits.size());
  for (size_t i = 0; i < bits.bits.size(); ++i) {
    out.samples[i] = bits.bits[i] ? bits.full_scale : -bits.full_scale;
  }
  apply_zero_phase(out, filter);
  return out;
}

namespace {
constexpr std::array<char, 8> kMagic = {'R', 'O', 'F', 'B', 'I', 'T', 'S', '1'};
}

void write_bitstream(const std::string& path, const BitStream& bits) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  std::fwrite(kMagic.data(), 1, kMagic.size(), f);
  uint64_t rate = static_cast<uint64_t>(std::llround(bits.sample_rate));
  uint8_t rate_le[8];
  for (int i = 0; i < 8; ++i) rate_le[i] = static_cast<uint8_t>(rate >> (8 * i));
  std::fwrite(rate_le, 1, 8, f);
  std::vector<uint8_t> packed((bits.bits.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits.bits.size(); ++i) {
    if (bits.bits[i]) packed[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  }
  std::fwrite(packed.data(), 1, packed.size(), f);
  std::fclose(f);
}

BitStream read_bitstream(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw ConfigError("cannot open " + path);
  char magic[8];
  uint8_t rate_le[8];
  if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, kMagic.data(), 8) != 0) {
    std::fclose(f);
    throw ConfigError("bad bitstream magic in " + path);
  }
  if (std::fread(rate_le, 1, 8, f) != 8) {
    std::fclose(f);
    throw ConfigError("truncated bitstream header in " + path);
  }
  uint64_t rate = 0;
  for (int i = 0; i < 8; ++i) rate |= static_cast<uint64_t>(rate_le[i]) << (8 * i);
  BitStream out;
  out.sample_rate = static_cast<double>(rate);
  std::vector<uint8_t> packed;
  uint8_t buf[4096];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) packed.insert(packed.end(), buf, buf + got);
  std::fclose(f);
  out.bits.resize(packed.size() * 8);
  for (size_t i = 0; i < out.bits.size(); ++i) {
    out.bits[i] = (packed[i / 8] >> (i % 8)) & 1u;
  }
  return out;
}

}  // namespace rofsim
