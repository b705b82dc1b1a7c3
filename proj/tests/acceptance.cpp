// Acceptance gate: end-to-end behavioral criteria for the link simulator.
// Each criterion prints exactly one PASS/FAIL line; the exit code is the
// number of failed criteria.  Tolerances are pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rofsim/cu.hpp"
#include "rofsim/frontend.hpp"
#include "rofsim/harness.hpp"
#include "rofsim/rng.hpp"
#include "rofsim/scenario.hpp"
#include "rofsim/waveform.hpp"

using namespace rofsim;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
// Gain-control law and comparator reproduced against independent literal
// re-statements; amplifier noise floors against kTB computed from constants.
Outcome criterion1() {
  Outcome r;
  std::ostringstream d;

  auto law = [](double p) {
    if (p < -41.0) return 10.0;
    if (p > 4.0) return -35.0;
    return -p - 31.0;
  };
  RngStream rng(derive_seed(2026, {1}));
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const double p = -80.0 + 100.0 * rng.next_double();
    if (vga_gain_db(p) != law(p)) ++mismatches;
  }
  // both corners belong to the linear branch and equal the saturated values
  if (vga_gain_db(-41.0) != 10.0) ++mismatches;
  if (vga_gain_db(4.0) != -35.0) ++mismatches;
  if (vga_gain_db(std::nextafter(-41.0, -100.0)) != 10.0) ++mismatches;
  if (vga_gain_db(std::nextafter(4.0, 100.0)) != -35.0) ++mismatches;
  if (mismatches > 0) {
    r.ok = false;
    d << "gain law mismatches=" << mismatches << "; ";
  }

  const double vth = 10e-3;
  PassbandSignal y, dith;
  y.sample_rate = dith.sample_rate = 1e9;
  y.samples = {0.2, -0.2, 0.0301, 0.0099, -0.0301, 0.05, -0.05};
  dith.samples = {0.0, 0.0, 0.02, -0.0011, -0.02, 0.065, -0.065};
  // differences: +.2 -.2 +.0101 +.011 -.0101 -.015 +.015
  const std::vector<uint8_t> want = {1, 0, 1, 1, 0, 0, 1};
  RngStream crng(derive_seed(2026, {2}));
  const BitStream bits = comparator_quantize(y, dith, vth, crng);
  if (bits.bits != want) {
    r.ok = false;
    d << "comparator deterministic branches wrong; ";
  }

  const int n_coin = 100000;
  PassbandSignal z;
  z.sample_rate = 1e9;
  z.samples.assign(n_coin, 0.0);
  RngStream coin(derive_seed(2026, {3}));
  const BitStream flips = comparator_quantize(z, z, vth, coin);
  const double p1 =
      double(std::count(flips.bits.begin(), flips.bits.end(), uint8_t(1))) / n_coin;
  if (std::abs(p1 - 0.5) > 0.01) {
    r.ok = false;
    d << "dead-zone coin p1=" << fmt(p1) << "; ";
  }

  const FrontendConfig fe;
  const AmplifierSpec rows[] = {fe.lna, fe.vga, fe.da};
  const char* names[] = {"lna", "vga", "da"};
  for (int i = 0; i < 3; ++i) {
    PassbandSignal x;
    x.sample_rate = 1e9;
    x.samples.assign(400000, 0.0);
    RngStream nr(derive_seed(2026, {4, uint64_t(i)}));
    amplifier_apply(x, rows[i], nr);
    const double got = measure_power_dbm(x) - rows[i].gain_db;
    const double want_dbm =
        watt_to_dbm(kBoltzmann * rows[i].noise_temp_k * rows[i].noise_bw_hz);
    d << names[i] << "=" << fmt(got) << "dBm(ref " << fmt(want_dbm) << "); ";
    if (std::abs(got - want_dbm) > 0.2) r.ok = false;
  }

  d << "coin p1=" << fmt(p1);
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- criterion 2
// Injected-power bathtub on the cable link, both allocation widths.
Outcome criterion2() {
  Outcome r;
  std::ostringstream d;

  std::vector<double> levels;
  for (int p = -75; p <= 5; p += 5) levels.push_back(p);
  const size_t n = levels.size();
  const Scenario s = preset_fig8();
  const ResultTable t = sweep_received_power(s, levels, {75e6, 5e6}, 1);

  // rows are bandwidth-major: [b*n + i]
  double plateau_mean[2] = {0, 0};
  for (int b = 0; b < 2; ++b) {
    std::vector<double> curve(n);
    for (size_t i = 0; i < n; ++i) curve[i] = t.rows[b * n + i].evm_percent;

    std::vector<double> plateau;
    for (size_t i = 0; i < n; ++i)
      if (levels[i] >= -60.0 && levels[i] <= -25.0) plateau.push_back(curve[i]);
    const double pm = mean(plateau);
    plateau_mean[b] = pm;
    const double worst = *std::max_element(plateau.begin(), plateau.end());
    if (worst >= 12.5) {
      r.ok = false;
      d << "bw" << b << " plateau max=" << fmt(worst) << "%; ";
    }
    if (curve.front() < 2.0 * pm || curve.back() < 2.0 * pm) {
      r.ok = false;
      d << "bw" << b << " ends " << fmt(curve.front()) << "/" << fmt(curve.back())
        << "% vs 2x mean " << fmt(2.0 * pm) << "%; ";
    }
  }
  for (size_t i = 0; i < n; ++i) {
    const double wide = t.rows[i].evm_percent;
    const double narrow = t.rows[n + i].evm_percent;
    if (narrow > wide + 0.5) {
      r.ok = false;
      d << "narrow>" << "wide at " << levels[i] << "dBm (" << fmt(narrow) << ">"
        << fmt(wide) << "); ";
    }
  }
  d << "plateau means " << fmt(plateau_mean[0]) << "%/" << fmt(plateau_mean[1]) << "%";
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- criterion 3
// Near-far deployment: the far user fails over the two-level transport and
// recovers on the unquantized one; unquantized never loses to two-level.
Outcome criterion3() {
  Outcome r;
  std::ostringstream d;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario s = preset_fig9();
    s.mode = QuantMode::one_bit;
    const EvmReport one = run_frame(s, seed);
    s.mode = QuantMode::inf_bit;
    const EvmReport inf = run_frame(s, seed);
    if (seed == 1) {
      d << "seed1 one=" << fmt(one.ue_evm_percent[0]) << "/" << fmt(one.ue_evm_percent[1])
        << "% inf=" << fmt(inf.ue_evm_percent[0]) << "/" << fmt(inf.ue_evm_percent[1])
        << "%";
    }
    if (!(one.ue_evm_percent[1] > 12.5)) {
      r.ok = false;
      d << "; seed" << seed << " far-UE two-level " << fmt(one.ue_evm_percent[1])
        << "% not >12.5";
    }
    if (!(one.ue_evm_percent[0] < 12.5)) {
      r.ok = false;
      d << "; seed" << seed << " near-UE two-level " << fmt(one.ue_evm_percent[0])
        << "% not <12.5";
    }
    if (!(inf.ue_evm_percent[0] < 12.5 && inf.ue_evm_percent[1] < 12.5)) {
      r.ok = false;
      d << "; seed" << seed << " unquantized " << fmt(inf.ue_evm_percent[0]) << "/"
        << fmt(inf.ue_evm_percent[1]) << "% not both <12.5";
    }
    for (int u = 0; u < 2; ++u) {
      if (!(inf.ue_evm_percent[u] < one.ue_evm_percent[u])) {
        r.ok = false;
        d << "; seed" << seed << " ue" << u << " unquantized not better";
      }
    }
  }
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- criterion 4
// Power-control sweep: lowering the four swept users first helps the fixed
// center user, crosses equal EVM near 9 dBm, then hurts it again once their
// estimates degrade.
Outcome criterion4() {
  Outcome r;
  std::ostringstream d;

  const ResultTable t = sweep_ue_power(preset_fig10(), {0, 1, 2, 3}, 10.0, 0.0, 1.0, 1);
  const int n_ue = 5;
  const int n_lv = int(t.rows.size()) / n_ue;
  std::vector<double> level(n_lv), fixed(n_lv), swept(n_lv);
  for (int i = 0; i < n_lv; ++i) {
    level[i] = t.rows[size_t(i) * n_ue].sweep_value;
    fixed[i] = t.rows[size_t(i) * n_ue + 4].evm_percent;
    double acc = 0;
    for (int u = 0; u < 4; ++u) acc += t.rows[size_t(i) * n_ue + u].evm_percent;
    swept[i] = acc / 4.0;
  }

  bool dec = fixed[0] > fixed[1] && fixed[1] > fixed[2] && fixed[2] > fixed[3];
  if (!dec) {
    r.ok = false;
    d << "fixed-UE EVM not strictly decreasing over first 3 steps ("
      << fmt(fixed[0]) << "," << fmt(fixed[1]) << "," << fmt(fixed[2]) << ","
      << fmt(fixed[3]) << "); ";
  }

  double cross = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i < n_lv; ++i) {
    const double a = fixed[i - 1] - swept[i - 1];
    const double b = fixed[i] - swept[i];
    if (a > 0.0 && b <= 0.0) {
      cross = level[i - 1] + (level[i] - level[i - 1]) * a / (a - b);
      break;
    }
  }
  if (std::isnan(cross) || cross < 6.0 || cross > 12.0) {
    r.ok = false;
    d << "equal-EVM crossing at " << fmt(cross) << " dBm, want 9+-3; ";
  }

  const int imin = int(std::min_element(fixed.begin(), fixed.end()) - fixed.begin());
  if (imin == 0 || imin == n_lv - 1 || !(fixed[n_lv - 1] > fixed[imin])) {
    r.ok = false;
    d << "fixed-UE minimum not interior (idx " << imin << "); ";
  }

  d << "crossing " << fmt(cross) << " dBm, min at " << fmt(level[imin]) << " dBm ("
    << fmt(fixed[imin]) << "%), end " << fmt(fixed[n_lv - 1]) << "%";
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- criterion 5
// Algebraic oracles: regularized combiner against an SVD pseudo-inverse, the
// modulation chain against its own bits, estimation against a known channel.
Outcome criterion5() {
  Outcome r;
  std::ostringstream d;

  // (a) zero-forcing combine vs SVD solve, 100 random 6x2 systems
  {
    RngStream rng(derive_seed(55, {1}));
    std::vector<int> bins;
    for (int b = 1; b <= 100; ++b) bins.push_back(b);
    ChannelEstimate est;
    est.n_rx = 6;
    est.n_tx = 2;
    est.active = bins;
    est.h.resize(bins.size() * 12);
    for (cplx& v : est.h) v = cplx(rng.next_normal(), rng.next_normal());

    std::vector<ResourceGrid> rx(6, make_grid(256, 1, bins));
    std::vector<std::vector<cplx>> y(bins.size(), std::vector<cplx>(6));
    for (size_t bi = 0; bi < bins.size(); ++bi) {
      for (int i = 0; i < 6; ++i) {
        y[bi][i] = cplx(rng.next_normal(), rng.next_normal());
        rx[i].at(bins[bi], 0) = y[bi][i];
      }
    }
    const std::vector<ResourceGrid> out = combine(est, rx, 0, Combiner::zf);

    double worst = 0.0;
    for (size_t bi = 0; bi < bins.size(); ++bi) {
      Eigen::MatrixXcd H(6, 2);
      Eigen::VectorXcd yy(6);
      for (int i = 0; i < 6; ++i) {
        for (int t = 0; t < 2; ++t) H(i, t) = est.at(bi, i, t);
        yy(i) = y[bi][i];
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXcd ref = svd.solve(yy);
      for (int t = 0; t < 2; ++t)
        worst = std::max(worst, std::abs(ref(t) - out[t].at(bins[bi], 0)));
    }
    d << "combine-vs-svd max err " << fmt(worst);
    if (worst > 1e-9) {
      r.ok = false;
      d << " (>1e-9)";
    }
    d << "; ";
  }

  // (b) modulation chain round trip recovers the exact payload bits
  {
    OfdmConfig ofdm;
    RngStream rng(derive_seed(55, {2}));
    const std::vector<int> bins = ofdm.active_bins();
    std::vector<uint8_t> pbits(2 * bins.size()), dbits(4 * bins.size());
    for (auto& b : pbits) b = rng.next_bit() ? 1 : 0;
    for (auto& b : dbits) b = rng.next_bit() ? 1 : 0;
    const std::vector<cplx> pil = map_qpsk(pbits);
    const std::vector<cplx> pay = map_qam16(dbits);

    ResourceGrid tx = make_grid(ofdm.n_fft, 2, bins);
    for (size_t i = 0; i < bins.size(); ++i) {
      tx.at(bins[i], 0) = pil[i];
      tx.at(bins[i], 1) = pay[i];
    }
    const std::vector<cplx> bb = ofdm_modulate(tx, ofdm);
    const PassbandSignal pb =
        to_passband(bb, ofdm.base_rate(), 2.35e9, -20.0, 25e9);
    const std::vector<cplx> bb2 =
        from_passband(pb, 2.35e9, ofdm.base_rate(), ofdm.occupied_bw() + 5e6);
    const ResourceGrid rx = ofdm_demodulate(bb2, ofdm, 2);

    PilotSchedule sched;
    sched.pilot_symbols = {{0}};
    sched.data_symbol = 1;
    const ChannelEstimate est = estimate_channel_ls({rx}, {tx}, sched);
    const std::vector<ResourceGrid> eq = combine(est, {rx}, 1, Combiner::mrc);
    std::vector<cplx> shat(bins.size());
    for (size_t i = 0; i < bins.size(); ++i) shat[i] = eq[0].at(bins[i], 0);
    const std::vector<uint8_t> back = demap_qam16(shat);
    if (back != dbits) {
      r.ok = false;
      d << "chain round trip corrupted bits; ";
    } else {
      d << "chain bits exact; ";
    }
  }

  // (c) noiseless estimation error
  {
    RngStream rng(derive_seed(55, {3}));
    std::vector<int> bins;
    for (int b = 1; b <= 10; ++b) bins.push_back(b);
    const int n_rx = 3, n_tx = 2;
    std::vector<cplx> h(bins.size() * n_rx * n_tx);
    for (cplx& v : h) v = cplx(rng.next_normal(), rng.next_normal());

    PilotSchedule sched;
    sched.pilot_symbols = {{0, 1}, {2, 3}};
    sched.data_symbol = -1;
    std::vector<ResourceGrid> refs(n_tx, make_grid(64, 4, bins));
    for (int t = 0; t < n_tx; ++t)
      for (int sym : sched.pilot_symbols[t])
        for (int b : bins) {
          const double re = rng.next_bit() ? 1.0 : -1.0;
          const double im = rng.next_bit() ? 1.0 : -1.0;
          refs[t].at(b, sym) = cplx(re, im) / std::sqrt(2.0);
        }
    std::vector<ResourceGrid> rx(n_rx, make_grid(64, 4, bins));
    for (size_t bi = 0; bi < bins.size(); ++bi)
      for (int i = 0; i < n_rx; ++i)
        for (int t = 0; t < n_tx; ++t) {
          const cplx hv = h[(bi * n_rx + i) * n_tx + t];
          for (int sym : sched.pilot_symbols[t])
            rx[i].at(bins[bi], sym) += hv * refs[t].at(bins[bi], sym);
        }
    const ChannelEstimate est = estimate_channel_ls(rx, refs, sched);
    double worst = 0.0;
    for (size_t bi = 0; bi < bins.size(); ++bi)
      for (int i = 0; i < n_rx; ++i)
        for (int t = 0; t < n_tx; ++t)
          worst = std::max(worst,
                           std::abs(est.at(bi, i, t) - h[(bi * n_rx + i) * n_tx + t]));
    d << "estimate max err " << fmt(worst);
    if (worst > 1e-9) {
      r.ok = false;
      d << " (>1e-9)";
    }
  }

  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- criterion 6
// Repeatability: identical seed gives byte-identical CSV; worker threads do
// not change a single sample.
Outcome criterion6() {
  Outcome r;
  std::ostringstream d;

  const Scenario f9 = preset_fig9();
  const std::string a = to_csv(run_point(f9, 7));
  const std::string b = to_csv(run_point(f9, 7));
  if (a != b) {
    r.ok = false;
    d << "near-far CSV differs between identical runs; ";
  }

  const Scenario f8 = preset_fig8();
  const std::string c = to_csv(sweep_received_power(f8, {-40.0}, {75e6}, 3));
  const std::string e = to_csv(sweep_received_power(f8, {-40.0}, {75e6}, 3));
  if (c != e) {
    r.ok = false;
    d << "bathtub CSV differs between identical runs; ";
  }

  const EvmReport t1 = run_frame(f9, 7, 0, 1);
  const EvmReport t3 = run_frame(f9, 7, 0, 3);
  if (t1.ue_evm_percent != t3.ue_evm_percent || t1.rrh_rx_dbm != t3.rrh_rx_dbm ||
      t1.vga_gain_db != t3.vga_gain_db) {
    r.ok = false;
    d << "thread count changed results; ";
  }

  if (r.ok) d << "byte-identical CSV, thread-invariant samples";
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- criterion 7
// Transport ordering: the unquantized fronthaul never does worse than the
// two-level one, every deployment, every user, five paired seeds.
Outcome criterion7() {
  Outcome r;
  std::ostringstream d;

  std::vector<std::pair<std::string, Scenario>> cases;
  cases.emplace_back("bathtub", preset_fig8());
  cases.emplace_back("near-far", preset_fig9());
  cases.emplace_back("power-control", preset_fig10());
  cases.emplace_back("coverage-dist", preset_su_coverage(false)[9]);
  cases.emplace_back("coverage-coloc", preset_su_coverage(true)[9]);

  int checked = 0;
  double worst_gap = -1e9;
  for (auto& [name, base] : cases) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      Scenario s = base;
      s.mode = QuantMode::one_bit;
      const EvmReport one = run_frame(s, seed);
      s.mode = QuantMode::inf_bit;
      const EvmReport inf = run_frame(s, seed);
      for (size_t u = 0; u < one.ue_evm_percent.size(); ++u) {
        ++checked;
        const double gap = inf.ue_evm_percent[u] - one.ue_evm_percent[u];
        worst_gap = std::max(worst_gap, gap);
        if (gap > 0.1) {
          r.ok = false;
          d << name << " seed" << seed << " ue" << u << " unquantized worse by "
            << fmt(gap) << " pp; ";
        }
      }
    }
  }
  d << checked << " orderings, worst unquantized-minus-two-level gap " << fmt(worst_gap)
    << " pp";
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------- criterion 8
// Direction sanity: a single-user downlink at 5 dBm per head beats the same
// user's two-level uplink.
Outcome criterion8() {
  Outcome r;
  std::ostringstream d;

  const Scenario base = preset_su_coverage(false)[9];
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    Scenario ul = base;
    ul.mode = QuantMode::one_bit;
    const double up = run_frame(ul, seed).ue_evm_percent[0];

    Scenario dl = base;
    dl.direction = Direction::downlink;
    dl.precoder = Precoder::mrt;
    dl.rrh_power_dbm = 5.0;
    const double down = run_frame(dl, seed).ue_evm_percent[0];

    if (seed == 1) d << "downlink " << fmt(down) << "% vs uplink " << fmt(up) << "%";
    if (!(down < up)) {
      r.ok = false;
      d << "; seed" << seed << " downlink " << fmt(down) << "% not below uplink "
        << fmt(up) << "%";
    }
  }
  r.detail = d.str();
  return r;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
    double budget_s;  // 0 = no stated budget
  };
  const Entry entries[] = {
      {1, "front-end exact models", criterion1, 60.0},
      {2, "injected-power bathtub", criterion2, 900.0},
      {3, "near-far separation", criterion3, 600.0},
      {4, "power-control knee", criterion4, 1200.0},
      {5, "algebraic oracles", criterion5, 0.0},
      {6, "determinism", criterion6, 0.0},
      {7, "transport ordering", criterion7, 0.0},
      {8, "downlink beats uplink", criterion8, 0.0},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome res;
    try {
      res = e.fn();
    } catch (const std::exception& ex) {
      res.ok = false;
      res.detail = std::string("exception: ") + ex.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.budget_s > 0.0 && secs > e.budget_s) {
      res.ok = false;
      res.detail += "; over time budget";
    }
    if (!res.ok) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", res.ok ? "PASS" : "FAIL", e.id,
                e.name, res.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/8 criteria passed\n", 8 - failures);
  return failures;
}
