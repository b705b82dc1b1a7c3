#include "rofsim/cu.hpp"

#include <Eigen/Dense>

namespace rofsim {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kCondLimit = 1e12;

void check_grids(const std::vector<ResourceGrid>& grids) {
  if (grids.empty()) throw InputShapeError("no grids supplied");
  for (const auto& g : grids) {
    if (g.n_fft != grids[0].n_fft || g.active != grids[0].active ||
        g.n_symbols != grids[0].n_symbols) {
      throw InputShapeError("grids disagree in geometry");
    }
  }
}

}  // namespace

ChannelEstimate estimate_channel_ls(const std::vector<ResourceGrid>& rx,
                                    const std::vector<ResourceGrid>& pilot_refs,
                                    const PilotSchedule& schedule) {
  check_grids(rx);
  check_grids(pilot_refs);
  if (rx[0].active != pilot_refs[0].active) {
    throw InputShapeError("rx and pilot grids use different active sets");
  }
  if (schedule.pilot_symbols.size() != pilot_refs.size()) {
    throw InputShapeError("schedule does not match pilot grid count");
  }

  ChannelEstimate est;
  est.n_rx = static_cast<int>(rx.size());
  est.n_tx = static_cast<int>(pilot_refs.size());
  est.active = rx[0].active;
  est.h.assign(est.active.size() * est.n_rx * est.n_tx, cplx{});

  for (int t = 0; t < est.n_tx; ++t) {
    const auto& syms = schedule.pilot_symbols[t];
    if (syms.empty()) throw ConfigError("transmitter has no pilot symbols");
    for (int s : syms) {
      if (s < 0 || s >= rx[0].n_symbols) throw ConfigError("pilot symbol index out of frame");
    }
    for (size_t a = 0; a < est.active.size(); ++a) {
      const int bin = est.active[a];
      for (int r = 0; r < est.n_rx; ++r) {
        cplx acc{};
        for (int s : syms) {
          const cplx x = pilot_refs[t].at(bin, s);
          if (x == cplx{}) throw ConfigError("zero pilot value on an active bin");
          acc += rx[r].at(bin, s) / x;
        }
        est.at(a, r, t) = acc / static_cast<double>(syms.size());
      }
    }
  }
  return est;
}

std::vector<ResourceGrid> combine(const ChannelEstimate& est,
                                  const std::vector<ResourceGrid>& rx, int data_symbol,
                                  Combiner kind) {
  check_grids(rx);
  if (static_cast<int>(rx.size()) != est.n_rx) {
    throw InputShapeError("combine: estimate/receiver count mismatch");
  }
  if (rx[0].active != est.active) throw InputShapeError("combine: active set mismatch");
  if (data_symbol < 0 || data_symbol >= rx[0].n_symbols) {
    throw ConfigError("data symbol outside frame");
  }

  std::vector<ResourceGrid> out(est.n_tx);
  for (int t = 0; t < est.n_tx; ++t) out[t] = make_grid(rx[0].n_fft, 1, est.active);

  Mat h(est.n_rx, est.n_tx);
  Vec y(est.n_rx);
  for (size_t a = 0; a < est.active.size(); ++a) {
    const int bin = est.active[a];
    for (int r = 0; r < est.n_rx; ++r) {
      y(r) = rx[r].at(bin, data_symbol);
      for (int t = 0; t < est.n_tx; ++t) h(r, t) = est.at(a, r, t);
    }
    if (kind == Combiner::mrc) {
      for (int t = 0; t < est.n_tx; ++t) {
        const double nrm = h.col(t).squaredNorm();
        out[t].at(bin, 0) = nrm > 0.0 ? cplx{h.col(t).dot(y) / nrm} : cplx{};
      }
    } else {
      const Mat gram = h.adjoint() * h;
      Eigen::JacobiSVD<Mat> svd(h);
      const auto& sv = svd.singularValues();
      const double smin = sv(sv.size() - 1);
      if (smin <= 0.0 || (sv(0) * sv(0)) / (smin * smin) > kCondLimit) {
        throw SingularityError("zero-forcing system singular", bin);
      }
      const Vec s = gram.ldlt().solve(h.adjoint() * y);
      for (int t = 0; t < est.n_tx; ++t) out[t].at(bin, 0) = s(t);
    }
  }
  return out;
}

std::vector<ResourceGrid> precode(const ChannelEstimate& est,
                                  const std::vector<ResourceGrid>& tx_grids, Precoder kind) {
  check_grids(tx_grids);
  if (static_cast<int>(tx_grids.size()) != est.n_tx) {
    throw InputShapeError("precode: estimate/stream count mismatch");
  }
  if (tx_grids[0].active != est.active) throw InputShapeError("precode: active set mismatch");

  const int n_ant = est.n_rx;
  const int n_sym = tx_grids[0].n_symbols;
  std::vector<ResourceGrid> out(n_ant);
  for (int i = 0; i < n_ant; ++i) out[i] = make_grid(tx_grids[0].n_fft, n_sym, est.active);

  Mat h(n_ant, est.n_tx);
  Vec s(est.n_tx);
  for (size_t a = 0; a < est.active.size(); ++a) {
    const int bin = est.active[a];
    for (int r = 0; r < n_ant; ++r) {
      for (int t = 0; t < est.n_tx; ++t) h(r, t) = est.at(a, r, t);
    }
    Mat w;  // n_ant x n_tx
    if (kind == Precoder::mrt) {
      w = h.conjugate();
    } else {
      const Mat a2 = h.transpose() * h.conjugate();  // n_tx x n_tx
      Eigen::JacobiSVD<Mat> svd(h);
      const auto& sv = svd.singularValues();
      const double smin = sv(sv.size() - 1);
      if (smin <= 0.0 || (sv(0) * sv(0)) / (smin * smin) > kCondLimit) {
        throw SingularityError("zero-forcing precoder singular", bin);
      }
      w = h.conjugate() * a2.ldlt().solve(Mat::Identity(est.n_tx, est.n_tx));
    }
    for (int sym = 0; sym < n_sym; ++sym) {
      for (int t = 0; t < est.n_tx; ++t) s(t) = tx_grids[t].at(bin, sym);
      const Vec x = w * s;
      for (int r = 0; r < n_ant; ++r) out[r].at(bin, sym) += x(r);
    }
  }

  // one common scale: summed mean active-bin power across antennas -> 1
  double total = 0.0;
  for (const auto& g : out) {
    for (size_t a = 0; a < est.active.size(); ++a) {
      for (int sym = 0; sym < n_sym; ++sym) total += std::norm(g.at(est.active[a], sym));
    }
  }
  total /= static_cast<double>(est.active.size() * n_sym);
  if (total > 0.0) {
    const double alpha = 1.0 / std::sqrt(total);
    for (auto& g : out) {
      for (auto& v : g.data) v *= alpha;
    }
  }
  return out;
}

}  // namespace rofsim
