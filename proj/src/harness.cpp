#include "rofsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "rofsim/channel.hpp"
#include "rofsim/cu.hpp"
#include "rofsim/frontend.hpp"
#include "rofsim/rng.hpp"
#include "rofsim/sdm.hpp"
#include "rofsim/waveform.hpp"

namespace rofsim {
namespace {

// All rates divided by scale, amplifier noise temperatures multiplied by it.
// Band-limited noise power kTeB and every rate ratio are unchanged, so a
// reduced-rate run reproduces the full-rate waveform sample for sample.
struct ScaledParams {
  double carrier_hz;
  double fronthaul_hz;
  double bandwidth_hz;
  double subcarrier_hz;
  double dither_hz;
  FrontendConfig fe;
  OfdmConfig ofdm;
  size_t oversample;      // passband samples per baseband sample
  double sample_rate_hz;  // realized fronthaul rate, oversample * base rate
};

ScaledParams materialize(const Scenario& s) {
  const double d = s.scale;
  ScaledParams p;
  p.carrier_hz = s.carrier_hz / d;
  p.fronthaul_hz = s.fronthaul_hz / d;
  p.bandwidth_hz = s.bandwidth_hz / d;
  p.subcarrier_hz = s.subcarrier_hz / d;
  p.dither_hz = s.dither_hz / d;

  p.fe = s.frontend;
  for (AmplifierSpec* a : {&p.fe.lna, &p.fe.vga, &p.fe.da}) {
    a->noise_temp_k *= d;
    a->noise_bw_hz /= d;
  }
  p.fe.signal_filter_bw_hz /= d;
  p.fe.dither_filter_cutoff_hz /= d;

  p.ofdm.n_fft = s.n_fft;
  p.ofdm.subcarrier_hz = p.subcarrier_hz;
  p.ofdm.cp_fraction = s.cp_fraction;
  p.ofdm.active_count = active_count_for_bandwidth(p.bandwidth_hz, p.subcarrier_hz);

  const double base = p.ofdm.base_rate();
  p.oversample = static_cast<size_t>(std::llround(p.fronthaul_hz / base));
  if (p.oversample < 2)
    throw ConfigError("fronthaul rate too low for the configured baseband rate");
  p.sample_rate_hz = p.oversample * base;
  return p;
}

const char* mode_str(QuantMode m) { return m == QuantMode::one_bit ? "one_bit" : "inf_bit"; }

std::vector<cplx> draw_qpsk(RngStream& rng, size_t count) {
  std::vector<uint8_t> bits(2 * count);
  for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
  return map_qpsk(bits);
}

std::vector<cplx> draw_qam16(RngStream& rng, size_t count) {
  std::vector<uint8_t> bits(4 * count);
  for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
  return map_qam16(bits);
}

void place_symbol(ResourceGrid& g, size_t symbol, const std::vector<std::complex<double>>& vals) {
  for (size_t a = 0; a < g.active.size(); ++a) g.at(g.active[a], symbol) = vals[a];
}

struct SampleTap {
  double amplitude;
  double phase_rad;
  long shift;  // whole samples at the realized fronthaul rate
};

// Propagation is evaluated in the nominal (unscaled) frame and applied as a
// sample-domain tap, so reduced-rate runs keep the identical channel.
std::vector<std::vector<SampleTap>> sample_taps(const Scenario& s, const ScaledParams& p,
                                                bool rrh_rx) {
  const double fs_nominal = p.sample_rate_hz * s.scale;
  const size_t n_rx = rrh_rx ? s.rrh_xy.size() : s.ue_xy.size();
  const size_t n_tx = rrh_rx ? s.ue_xy.size() : s.rrh_xy.size();
  std::vector<std::vector<SampleTap>> taps(n_rx, std::vector<SampleTap>(n_tx));
  for (size_t r = 0; r < n_rx; ++r) {
    for (size_t t = 0; t < n_tx; ++t) {
      const auto& a = rrh_rx ? s.rrh_xy[r] : s.ue_xy[r];
      const auto& b = rrh_rx ? s.ue_xy[t] : s.rrh_xy[t];
      const double dist = std::hypot(a[0] - b[0], a[1] - b[1]);
      const LinkGain g = link_coefficient(dist, s.carrier_hz, s.antennas);
      SampleTap tap;
      tap.amplitude = g.amplitude;
      tap.shift = std::lround(g.delay_s * fs_nominal);
      tap.phase_rad = g.phase_rad;
      taps[r][t] = tap;
    }
  }
  return taps;
}

std::vector<PassbandSignal> propagate(const std::vector<PassbandSignal>& tx,
                                      const std::vector<std::vector<SampleTap>>& taps,
                                      double fs) {
  const size_t n_rx = taps.size();
  const size_t n_tx = tx.size();
  std::vector<std::vector<LinkGain>> gains(n_rx, std::vector<LinkGain>(n_tx));
  for (size_t r = 0; r < n_rx; ++r)
    for (size_t t = 0; t < n_tx; ++t) {
      gains[r][t].amplitude = taps[r][t].amplitude;
      gains[r][t].phase_rad = taps[r][t].phase_rad;
      gains[r][t].delay_s = taps[r][t].shift / fs;
    }
  return apply_channel(tx, gains);
}

// Triangle dither shared by every radio head: encoded once, transported,
// reconstructed, then rescaled so the noise-free post-amplifier power lands
// on the configured level.
PassbandSignal shared_dither(const Scenario& s, const ScaledParams& p, size_t n_samples) {
  const double pre_da_dbm = s.dither_dbm - p.fe.da.gain_db;
  PassbandSignal tri = triangle_dither(p.dither_hz, pre_da_dbm, p.sample_rate_hz, n_samples);
  BitStream bits = sdm_encode(tri, SdmKind::lowpass, 0.0, p.fe.full_scale);
  FilterSpec lpf;
  lpf.kind = FilterSpec::Kind::lowpass;
  lpf.cutoff_hz = p.fe.dither_filter_cutoff_hz;
  PassbandSignal rec = reconstruct(bits, lpf);
  const double now_dbm = measure_power_dbm(rec) + p.fe.da.gain_db;
  const double k = std::pow(10.0, (s.dither_dbm - now_dbm) / 20.0);
  for (double& v : rec.samples) v *= k;
  return rec;
}

PassbandSignal bits_to_levels(const BitStream& b) {
  PassbandSignal out;
  out.sample_rate = b.sample_rate;
  out.samples.resize(b.bits.size());
  for (size_t i = 0; i < b.bits.size(); ++i)
    out.samples[i] = b.bits[i] ? b.full_scale : -b.full_scale;
  return out;
}

void for_each_rrh(size_t n_rrh, int threads, const std::function<void(size_t)>& body);

EvmReport run_uplink(const Scenario& s, const ScaledParams& p, uint64_t seed, int point,
                     int threads) {
  const size_t n_ue = s.ue_xy.size();
  const size_t n_rrh = s.cable ? 1 : s.rrh_xy.size();
  const size_t n_sym = 4 * n_ue + 1;
  const size_t data_sym = 4 * n_ue;
  const size_t n_active = p.ofdm.active_bins().size();
  const double base_rate = p.ofdm.base_rate();
  const size_t frame_pb = n_sym * p.ofdm.symbol_len() * p.oversample;

  PilotSchedule sched;
  sched.data_symbol = static_cast<int>(data_sym);
  sched.pilot_symbols.resize(n_ue);
  for (size_t k = 0; k < n_ue; ++k) {
    const int kk = static_cast<int>(k);
    sched.pilot_symbols[k] = {4 * kk, 4 * kk + 1, 4 * kk + 2, 4 * kk + 3};
  }

  std::vector<ResourceGrid> tx_grids;
  std::vector<std::vector<std::complex<double>>> ref_data(n_ue);
  std::vector<PassbandSignal> tx(n_ue);
  for (size_t k = 0; k < n_ue; ++k) {
    ResourceGrid g = make_grid(p.ofdm.n_fft, n_sym, p.ofdm.active_bins());
    RngStream pilot_rng(derive_seed(0, {static_cast<uint64_t>(kStreamPilot), k}));
    for (size_t slot = 0; slot < 4; ++slot)
      place_symbol(g, sched.pilot_symbols[k][slot], draw_qpsk(pilot_rng, n_active));
    RngStream data_rng(derive_seed(
        seed, {static_cast<uint64_t>(kStreamPayload), static_cast<uint64_t>(point), k}));
    ref_data[k] = draw_qam16(data_rng, n_active);
    place_symbol(g, data_sym, ref_data[k]);
    tx_grids.push_back(g);

    std::vector<std::complex<double>> bb = ofdm_modulate(g, p.ofdm);
    // Power target counts only the five occupied symbols of this UE.
    const double rho = 5.0 / static_cast<double>(n_sym);
    double target = s.ue_power_dbm[k];
    if (std::isfinite(target)) target += 10.0 * std::log10(rho);
    tx[k] = to_passband(bb, base_rate, p.carrier_hz, target, p.fronthaul_hz);
  }

  std::vector<PassbandSignal> rx;
  if (s.cable) {
    rx.push_back(tx[0]);
  } else {
    rx = propagate(tx, sample_taps(s, p, true), p.sample_rate_hz);
  }

  PassbandSignal dither;
  if (s.mode == QuantMode::one_bit) dither = shared_dither(s, p, frame_pb);

  std::vector<ResourceGrid> rx_grids(n_rrh,
                                     make_grid(p.ofdm.n_fft, n_sym, p.ofdm.active_bins()));
  std::vector<double> rx_dbm(n_rrh), vga_db(n_rrh);
  for_each_rrh(n_rrh, threads, [&](size_t r) {
    rx_dbm[r] = measure_power_dbm(rx[r]);
    RrhStreams st{
        RngStream(derive_seed(seed, {static_cast<uint64_t>(kStreamLnaNoise),
                                     static_cast<uint64_t>(point), r})),
        RngStream(derive_seed(seed, {static_cast<uint64_t>(kStreamVgaNoise),
                                     static_cast<uint64_t>(point), r})),
        RngStream(derive_seed(seed, {static_cast<uint64_t>(kStreamDaNoise),
                                     static_cast<uint64_t>(point), r})),
        RngStream(derive_seed(seed, {static_cast<uint64_t>(kStreamComparator),
                                     static_cast<uint64_t>(point), r}))};
    RrhChainOutput out = rrh_uplink_chain(rx[r], dither, p.fe, p.carrier_hz, s.mode, st);
    vga_db[r] = out.vga_gain_db;
    PassbandSignal cu_in =
        s.mode == QuantMode::one_bit ? bits_to_levels(out.bits) : std::move(out.analog);
    std::vector<std::complex<double>> bb =
        from_passband(cu_in, p.carrier_hz, base_rate, p.bandwidth_hz);
    rx_grids[r] = ofdm_demodulate(bb, p.ofdm, n_sym);
  });

  ChannelEstimate est = estimate_channel_ls(rx_grids, tx_grids, sched);
  std::vector<ResourceGrid> eq = combine(est, rx_grids, data_sym, s.combiner);

  EvmReport rep;
  rep.mode = s.mode;
  rep.rrh_rx_dbm = rx_dbm;
  rep.vga_gain_db = vga_db;
  rep.ue_evm_percent.resize(n_ue);
  for (size_t k = 0; k < n_ue; ++k) {
    std::vector<std::complex<double>> got(n_active);
    for (size_t a = 0; a < n_active; ++a) got[a] = eq[k].at(eq[k].active[a], 0);
    rep.ue_evm_percent[k] = evm_percent(got, ref_data[k]);
  }
  return rep;
}

// Drives the modulator at half full scale, reconstructs through the transmit
// bandpass filter, then sets the realized average power over the span where
// this head is scheduled to transmit.
PassbandSignal rrh_downlink_emit(const ResourceGrid& g, const ScaledParams& p, double power_dbm,
                                 size_t span_begin, size_t span_end) {
  std::vector<std::complex<double>> bb = ofdm_modulate(g, p.ofdm);
  PassbandSignal pb =
      to_passband(bb, p.ofdm.base_rate(), p.carrier_hz, -15.0, p.fronthaul_hz);
  double peak = 0.0;
  for (double v : pb.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double k = 0.5 * p.fe.full_scale / peak;
    for (double& v : pb.samples) v *= k;
  }
  BitStream bits = sdm_encode(pb, SdmKind::bandpass, p.carrier_hz, p.fe.full_scale);
  FilterSpec bpf;
  bpf.kind = FilterSpec::Kind::bandpass;
  bpf.center_hz = p.carrier_hz;
  bpf.bandwidth_hz = p.fe.signal_filter_bw_hz;
  PassbandSignal ana = reconstruct(bits, bpf);

  double acc = 0.0;
  for (size_t i = span_begin; i < span_end; ++i) acc += ana.samples[i] * ana.samples[i];
  const double span_dbm =
      watt_to_dbm(acc / (static_cast<double>(span_end - span_begin) * ana.impedance));
  const double k = std::pow(10.0, (power_dbm - span_dbm) / 20.0);
  for (double& v : ana.samples) v *= k;
  return ana;
}

EvmReport run_downlink(const Scenario& s, const ScaledParams& p, uint64_t seed, int point,
                       int threads) {
  const size_t n_ue = s.ue_xy.size();
  const size_t n_rrh = s.rrh_xy.size();
  const size_t n_active = p.ofdm.active_bins().size();
  const double base_rate = p.ofdm.base_rate();
  const size_t sym_pb = p.ofdm.symbol_len() * p.oversample;
  const auto taps = sample_taps(s, p, false);  // rows are UEs

  // Sounding stage: each head sends two pilot symbols in its own slots; the
  // UEs report exact per-subcarrier estimates back.
  const size_t n_sym_a = 2 * n_rrh;
  std::vector<ResourceGrid> sound_ref;
  std::vector<PassbandSignal> tx_a(n_rrh);
  for (size_t r = 0; r < n_rrh; ++r) {
    ResourceGrid g = make_grid(p.ofdm.n_fft, n_sym_a, p.ofdm.active_bins());
    RngStream rng(derive_seed(0, {static_cast<uint64_t>(kStreamPilot), 0x1000 + r}));
    place_symbol(g, 2 * r, draw_qpsk(rng, n_active));
    place_symbol(g, 2 * r + 1, draw_qpsk(rng, n_active));
    sound_ref.push_back(g);
    tx_a[r] = rrh_downlink_emit(g, p, s.rrh_power_dbm, 2 * r * sym_pb, (2 * r + 2) * sym_pb);
  }
  std::vector<PassbandSignal> rx_a = propagate(tx_a, taps, p.sample_rate_hz);

  PilotSchedule sched_a;
  sched_a.data_symbol = 0;  // unused for estimation
  sched_a.pilot_symbols.resize(n_rrh);
  for (size_t r = 0; r < n_rrh; ++r) {
    const int rr = static_cast<int>(r);
    sched_a.pilot_symbols[r] = {2 * rr, 2 * rr + 1};
  }

  std::vector<ResourceGrid> ue_grids_a(n_ue);
  for_each_rrh(n_ue, threads, [&](size_t u) {
    std::vector<std::complex<double>> bb =
        from_passband(rx_a[u], p.carrier_hz, base_rate, p.bandwidth_hz);
    ue_grids_a[u] = ofdm_demodulate(bb, p.ofdm, n_sym_a);
  });
  ChannelEstimate down = estimate_channel_ls(ue_grids_a, sound_ref, sched_a);

  // Precoding consumes the estimate with heads as the antenna dimension.
  ChannelEstimate est;
  est.n_rx = n_rrh;
  est.n_tx = n_ue;
  est.active = down.active;
  est.h.resize(down.h.size());
  for (size_t a = 0; a < est.active.size(); ++a)
    for (size_t r = 0; r < n_rrh; ++r)
      for (size_t u = 0; u < n_ue; ++u) est.at(a, r, u) = down.at(a, u, r);

  // Precoded stage: four precoded pilots per UE plus one shared data symbol.
  const size_t n_sym_b = 4 * n_ue + 1;
  const size_t data_sym = 4 * n_ue;
  std::vector<ResourceGrid> ue_ref;
  std::vector<std::vector<std::complex<double>>> ref_data(n_ue);
  for (size_t u = 0; u < n_ue; ++u) {
    ResourceGrid g = make_grid(p.ofdm.n_fft, n_sym_b, p.ofdm.active_bins());
    RngStream pilot_rng(derive_seed(0, {static_cast<uint64_t>(kStreamPilot), u}));
    for (size_t slot = 0; slot < 4; ++slot)
      place_symbol(g, 4 * u + slot, draw_qpsk(pilot_rng, n_active));
    RngStream data_rng(derive_seed(
        seed, {static_cast<uint64_t>(kStreamPayload), static_cast<uint64_t>(point), u}));
    ref_data[u] = draw_qam16(data_rng, n_active);
    place_symbol(g, data_sym, ref_data[u]);
    ue_ref.push_back(g);
  }
  std::vector<ResourceGrid> head_grids = precode(est, ue_ref, s.precoder);

  std::vector<PassbandSignal> tx_b(n_rrh);
  std::vector<double> tx_dbm(n_rrh);
  for_each_rrh(n_rrh, threads, [&](size_t r) {
    tx_b[r] = rrh_downlink_emit(head_grids[r], p, s.rrh_power_dbm, 0,
                                n_sym_b * sym_pb);
    tx_dbm[r] = measure_power_dbm(tx_b[r]);
  });
  std::vector<PassbandSignal> rx_b = propagate(tx_b, taps, p.sample_rate_hz);

  EvmReport rep;
  rep.mode = s.mode;
  rep.rrh_rx_dbm = tx_dbm;
  rep.ue_evm_percent.resize(n_ue);
  for (size_t u = 0; u < n_ue; ++u) {
    std::vector<std::complex<double>> bb =
        from_passband(rx_b[u], p.carrier_hz, base_rate, p.bandwidth_hz);
    ResourceGrid g = ofdm_demodulate(bb, p.ofdm, n_sym_b);
    // Effective-channel estimate from this UE's own precoded pilots.
    std::vector<std::complex<double>> got(n_active);
    for (size_t a = 0; a < n_active; ++a) {
      std::complex<double> h = 0.0;
      for (size_t slot = 0; slot < 4; ++slot) {
        const size_t sym = 4 * u + slot;
        h += g.at(g.active[a], sym) / ue_ref[u].at(g.active[a], sym);
      }
      h /= 4.0;
      got[a] = g.at(g.active[a], data_sym) / h;
    }
    rep.ue_evm_percent[u] = evm_percent(got, ref_data[u]);
  }
  return rep;
}

void for_each_rrh(size_t n, int threads, const std::function<void(size_t)>& body) {
  const int t_count = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (t_count == 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(t_count);
  for (int t = 0; t < t_count; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (size_t i = static_cast<size_t>(t); i < n; i += t_count) body(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace

EvmReport run_frame(const Scenario& s, uint64_t seed, int point_index, int threads) {
  validate(s);
  const ScaledParams p = materialize(s);
  if (s.direction == Direction::uplink) return run_uplink(s, p, seed, point_index, threads);
  return run_downlink(s, p, seed, point_index, threads);
}

void emit_csv(const ResultTable& table, std::ostream& os) {
  os << "sweep_value,ue_id,evm_percent,mode";
  for (size_t r = 0; r < table.n_rrh; ++r) os << ",rx_power_dbm_rrh_" << r;
  os << "\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    os << buf;
  };
  for (const auto& row : table.rows) {
    put(row.sweep_value);
    os << "," << row.ue << ",";
    put(row.evm_percent);
    os << "," << row.mode;
    for (size_t r = 0; r < table.n_rrh; ++r) {
      os << ",";
      put(r < row.rx_dbm.size() ? row.rx_dbm[r] : 0.0);
    }
    os << "\n";
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream ss;
  emit_csv(table, ss);
  return ss.str();
}

ResultTable run_point(const Scenario& s, uint64_t seed, int threads) {
  ResultTable t;
  t.n_rrh = s.cable ? 1 : s.rrh_xy.size();
  EvmReport rep = run_frame(s, seed, 0, threads);
  for (size_t k = 0; k < rep.ue_evm_percent.size(); ++k) {
    ResultRow row;
    row.sweep_value = s.ue_power_dbm[k];
    row.ue = static_cast<int>(k);
    row.evm_percent = rep.ue_evm_percent[k];
    row.mode = mode_str(rep.mode);
    row.rx_dbm = rep.rrh_rx_dbm;
    t.rows.push_back(row);
  }
  return t;
}

ResultTable sweep_received_power(const Scenario& base, const std::vector<double>& levels_dbm,
                                 const std::vector<double>& bandwidths_hz, uint64_t seed,
                                 int threads) {
  ResultTable t;
  t.n_rrh = base.cable ? 1 : base.rrh_xy.size();
  for (size_t b = 0; b < bandwidths_hz.size(); ++b) {
    Scenario s = base;
    s.bandwidth_hz = bandwidths_hz[b];
    for (size_t i = 0; i < levels_dbm.size(); ++i) {
      s.ue_power_dbm.assign(s.ue_xy.size(), levels_dbm[i]);
      EvmReport rep = run_frame(s, seed, static_cast<int>(i), threads);
      ResultRow row;
      row.sweep_value = levels_dbm[i];
      row.ue = static_cast<int>(b);
      row.evm_percent = rep.ue_evm_percent[0];
      row.mode = mode_str(rep.mode);
      row.rx_dbm = rep.rrh_rx_dbm;
      t.rows.push_back(row);
    }
  }
  return t;
}

ResultTable sweep_ue_power(const Scenario& base, const std::vector<int>& swept_ues,
                           double start_dbm, double stop_dbm, double step_db, uint64_t seed,
                           int threads) {
  if (step_db <= 0.0) throw ConfigError("sweep step must be positive");
  ResultTable t;
  t.n_rrh = base.cable ? 1 : base.rrh_xy.size();
  int point = 0;
  for (double level = start_dbm; level >= stop_dbm - 1e-9; level -= step_db, ++point) {
    Scenario s = base;
    for (int ue : swept_ues) {
      if (ue < 0 || static_cast<size_t>(ue) >= s.ue_power_dbm.size())
        throw ConfigError("swept UE index out of range");
      s.ue_power_dbm[static_cast<size_t>(ue)] = level;
    }
    EvmReport rep = run_frame(s, seed, point, threads);
    for (size_t k = 0; k < rep.ue_evm_percent.size(); ++k) {
      ResultRow row;
      row.sweep_value = level;
      row.ue = static_cast<int>(k);
      row.evm_percent = rep.ue_evm_percent[k];
      row.mode = mode_str(rep.mode);
      row.rx_dbm = rep.rrh_rx_dbm;
      t.rows.push_back(row);
    }
  }
  return t;
}

}  // namespace rofsim
