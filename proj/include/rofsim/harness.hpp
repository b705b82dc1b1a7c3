#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rofsim/scenario.hpp"

namespace rofsim {

struct EvmReport {
  std::vector<double> ue_evm_percent;
  std::vector<double> rrh_rx_dbm;  // uplink: antenna-referred receive power;
                                   // downlink: realized transmit power
  QuantMode mode = QuantMode::one_bit;
  std::vector<double> vga_gain_db;  // uplink diagnostic, one per RRH
};

// Runs one frame: modulation, propagation, radio heads, fronthaul transport,
// and central-unit processing.  point_index separates the noise streams of
// sweep points; threads parallelizes the per-RRH chains without changing
// any result.
EvmReport run_frame(const Scenario& s, uint64_t seed, int point_index = 0, int threads = 1);

struct ResultRow {
  double sweep_value = 0.0;
  int ue = 0;
  double evm_percent = 0.0;
  std::string mode;
  std::vector<double> rx_dbm;
};

struct ResultTable {
  size_t n_rrh = 0;
  std::vector<ResultRow> rows;
};

// sweep_value,ue_id,evm_percent,mode,rx_power_dbm_rrh_0..N-1 with six
// significant digits, LF endings.
void emit_csv(const ResultTable& table, std::ostream& os);
std::string to_csv(const ResultTable& table);

// One row per UE for a single configuration; sweep_value is the UE's own
// transmit power.
ResultTable run_point(const Scenario& s, uint64_t seed, int threads = 1);

// Injected-power sweep (cable deployments).  One configuration per entry of
// bandwidths_hz; rows use ue = bandwidth index.  Noise streams are paired
// across bandwidths at equal levels.
ResultTable sweep_received_power(const Scenario& base, const std::vector<double>& levels_dbm,
                                 const std::vector<double>& bandwidths_hz, uint64_t seed,
                                 int threads = 1);

// Transmit-power sweep over a subset of UEs, start down to stop inclusive.
ResultTable sweep_ue_power(const Scenario& base, const std::vector<int>& swept_ues,
                           double start_dbm, double stop_dbm, double step_db, uint64_t seed,
                           int threads = 1);

}  // namespace rofsim
