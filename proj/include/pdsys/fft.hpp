#pragma once

#include <vector>

#include "pdsys/types.hpp"

namespace pdsys {

/// In-place multidimensional complex DFT over a row-major array with the given
/// extents. sign = −1 computes Σ x_j e^{−2πi k·j/N}, sign = +1 the unnormalized
/// inverse. Plans are cached; execution is safe from several threads.
void fft_inplace(std::vector<Complex>& data, const std::vector<int>& dims, int sign);
void fft_inplace(Complex* data, const std::vector<int>& dims, int sign);

}  // namespace pdsys
