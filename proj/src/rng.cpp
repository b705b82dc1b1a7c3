#include "rofsim/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>

namespace rofsim {

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> words) {
  uint64_t h = mix64(master);
  for (uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

RngStream::RngStream(uint64_t seed) {
  // expand with splitmix64 as recommended for xoshiro seeding
  uint64_t x = seed;
  for (auto& s : s_) {
    x += 0x9E3779B97F4A7C15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    s = z ^ (z >> 31);
  }
  if (!(s_[0] | s_[1] | s_[2] | s_[3])) s_[0] = 1;
}

static inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

uint64_t RngStream::next_u64() {
  const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

// Ziggurat tables for the standard normal (128 layers, 63-bit magnitudes).
namespace {

constexpr double kZigR = 3.442619855899;
constexpr double kM63 = 9223372036854775808.0;  // 2^63

uint64_t zig_k[128];
double zig_w[128];
double zig_f[128];
std::once_flag zig_once;

void zig_init() {
  double dn = kZigR, tn = kZigR;
  const double vn = 9.91256303526217e-3;
  double q = vn / std::exp(-0.5 * dn * dn);
  zig_k[0] = static_cast<uint64_t>((dn / q) * kM63);
  zig_k[1] = 0;
  zig_w[0] = q / kM63;
  zig_w[127] = dn / kM63;
  zig_f[0] = 1.0;
  zig_f[127] = std::exp(-0.5 * dn * dn);
  for (int i = 126; i >= 1; --i) {
    dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
    zig_k[i + 1] = static_cast<uint64_t>((dn / tn) * kM63);
    tn = dn;
    zig_f[i] = std::exp(-0.5 * dn * dn);
    zig_w[i] = dn / kM63;
  }
}

}  // namespace

double RngStream::next_normal() {
  std::call_once(zig_once, zig_init);
  for (;;) {
    const int64_t h = static_cast<int64_t>(next_u64());
    const int iz = static_cast<int>(h & 127);
    const uint64_t mag = h < 0 ? ~static_cast<uint64_t>(h) + 1 : static_cast<uint64_t>(h);
    if (mag < zig_k[iz]) return static_cast<double>(h) * zig_w[iz];
    if (iz == 0) {
      // tail beyond +-r
      double x, y;
      do {
        double u1 = (next_u64() >> 11) * 0x1.0p-53;
        double u2 = (next_u64() >> 11) * 0x1.0p-53;
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        if (u2 <= 0.0) u2 = 0x1.0p-53;
        x = -std::log(u1) / kZigR;
        y = -std::log(u2);
      } while (y + y < x * x);
      return h > 0 ? kZigR + x : -kZigR - x;
    }
    const double x = static_cast<double>(h) * zig_w[iz];
    if (zig_f[iz] + next_double() * (zig_f[iz - 1] - zig_f[iz]) < std::exp(-0.5 * x * x)) {
      return x;
    }
  }
}

}  // namespace rofsim
