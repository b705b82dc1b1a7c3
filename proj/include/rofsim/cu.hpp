#pragma once

#include <vector>

#include "rofsim/types.hpp"

namespace rofsim {

// Which OFDM symbols carry whose pilots, plus the shared payload symbol.
struct PilotSchedule {
  std::vector<std::vector<int>> pilot_symbols;  // per transmitter
  int data_symbol = -1;
};

// Per-subcarrier narrowband channel, laid out [active-bin][receiver][transmitter].
struct ChannelEstimate {
  int n_rx = 0;
  int n_tx = 0;
  std::vector<int> active;
  std::vector<cplx> h;

  cplx& at(size_t bin_idx, int rx, int tx) {
    return h[(bin_idx * n_rx + rx) * n_tx + tx];
  }
  const cplx& at(size_t bin_idx, int rx, int tx) const {
    return h[(bin_idx * n_rx + rx) * n_tx + tx];
  }
};

// Least-squares estimate averaged over each transmitter's pilot symbols:
// h = mean(Y / X) on every active subcarrier.
ChannelEstimate estimate_channel_ls(const std::vector<ResourceGrid>& rx,
                                    const std::vector<ResourceGrid>& pilot_refs,
                                    const PilotSchedule& schedule);

enum class Combiner { mrc, zf };

// Equalized payload estimates, one single-symbol grid per transmitter.
// mrc: s = h^H y / |h|^2 per transmitter; zf: s = (H^H H)^-1 H^H y.
// A condition number above 1e12 on H^H H raises SingularityError.
std::vector<ResourceGrid> combine(const ChannelEstimate& est,
                                  const std::vector<ResourceGrid>& rx, int data_symbol,
                                  Combiner kind);

enum class Precoder { mrt, zf };

// Transmit-side weights from the (fed-back) estimate: mrt X = conj(H) s,
// zf X = conj(H) (H^T conj(H))^-1 s, one common scale across antennas so the
// summed mean transmit power is one.  Physical power is set downstream.
std::vector<ResourceGrid> precode(const ChannelEstimate& est,
                                  const std::vector<ResourceGrid>& tx_grids, Precoder kind);

}  // namespace rofsim
