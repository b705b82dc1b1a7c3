#pragma once

#include <cstdint>
#include <initializer_list>

namespace rofsim {

// splitmix64 finalizer; used both as a stream-id hash and to expand seeds.
uint64_t mix64(uint64_t x);

// xoshiro256++ with a ziggurat normal sampler.  Every stochastic piece of the
// simulator owns one stream, keyed by (master seed, purpose, indices), so
// results do not depend on scheduling or on which other streams were consumed.
class RngStream {
 public:
  explicit RngStream(uint64_t seed);

  uint64_t next_u64();
  // uniform in [0, 1)
  double next_double();
  // single fair bit
  bool next_bit() { return next_u64() >> 63; }
  // standard normal
  double next_normal();

 private:
  uint64_t s_[4];
};

// Stream id for (master seed, tag words).  Tag words identify the consumer:
// purpose code, sweep point, radio head index, user index.
uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> words);

// Purpose codes for derive_seed.
enum StreamPurpose : uint64_t {
  kStreamLnaNoise = 1,
  kStreamVgaNoise = 2,
  kStreamDaNoise = 3,
  kStreamComparator = 4,
  kStreamPayload = 5,
  kStreamPilot = 6,
};

}  // namespace rofsim
