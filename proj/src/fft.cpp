#include "rofsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace rofsim::fft {

namespace {

enum class Kind { fwd, inv, r2c, c2r };

std::mutex plan_mutex;
std::map<std::pair<size_t, Kind>, fftw_plan> plan_cache;

fftw_plan get_plan(size_t n, Kind kind) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = plan_cache.find({n, kind});
  if (it != plan_cache.end()) return it->second;

  // Scratch buffers only seed the planner; execution uses the caller's arrays.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p = nullptr;
  if (kind == Kind::fwd || kind == Kind::inv) {
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    p = fftw_plan_dft_1d(static_cast<int>(n), a, b,
                         kind == Kind::fwd ? FFTW_FORWARD : FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
  } else if (kind == Kind::r2c) {
    double* a = fftw_alloc_real(n);
    fftw_complex* b = fftw_alloc_complex(n / 2 + 1);
    p = fftw_plan_dft_r2c_1d(static_cast<int>(n), a, b, flags);
    fftw_free(a);
    fftw_free(b);
  } else {
    fftw_complex* a = fftw_alloc_complex(n / 2 + 1);
    double* b = fftw_alloc_real(n);
    p = fftw_plan_dft_c2r_1d(static_cast<int>(n), a, b, flags);
    fftw_free(a);
    fftw_free(b);
  }
  if (!p) throw std::runtime_error("fftw plan creation failed");
  plan_cache[{n, kind}] = p;
  return p;
}

inline fftw_complex* fc(std::vector<cplx>& v) { return reinterpret_cast<fftw_complex*>(v.data()); }
inline const fftw_complex* fc(const std::vector<cplx>& v) {
  return reinterpret_cast<const fftw_complex*>(v.data());
}

}  // namespace

void c2c_forward(const std::vector<cplx>& in, std::vector<cplx>& out) {
  out.resize(in.size());
  fftw_plan p = get_plan(in.size(), Kind::fwd);
  fftw_execute_dft(p, const_cast<fftw_complex*>(fc(in)), fc(out));
}

void c2c_inverse(const std::vector<cplx>& in, std::vector<cplx>& out) {
  out.resize(in.size());
  fftw_plan p = get_plan(in.size(), Kind::inv);
  fftw_execute_dft(p, const_cast<fftw_complex*>(fc(in)), fc(out));
}

void r2c(const std::vector<double>& in, std::vector<cplx>& out) {
  out.resize(in.size() / 2 + 1);
  fftw_plan p = get_plan(in.size(), Kind::r2c);
  fftw_execute_dft_r2c(p, const_cast<double*>(in.data()), fc(out));
}

void c2r(std::vector<cplx>& in, std::vector<double>& out, size_t n) {
  if (in.size() != n / 2 + 1) throw std::invalid_argument("c2r spectrum size mismatch");
  out.resize(n);
  fftw_plan p = get_plan(n, Kind::c2r);
  fftw_execute_dft_c2r(p, fc(in), out.data());
}

}  // namespace rofsim::fft
