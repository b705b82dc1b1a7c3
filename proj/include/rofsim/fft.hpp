#pragma once

#include <cstddef>
#include <vector>

#include "rofsim/types.hpp"

namespace rofsim::fft {

// Unnormalized transforms (inverse(forward(x)) == n * x).  Plans are cached
// per size and shared; execution is thread-safe.  in and out must differ.

void c2c_forward(const std::vector<cplx>& in, std::vector<cplx>& out);
void c2c_inverse(const std::vector<cplx>& in, std::vector<cplx>& out);

// out has n/2 + 1 bins
void r2c(const std::vector<double>& in, std::vector<cplx>& out);

// n is the real length; `in` is clobbered by FFTW's c2r pass
void c2r(std::vector<cplx>& in, std::vector<double>& out, size_t n);

}  // namespace rofsim::fft
