#pragma once

#include <complex>
#include <span>

namespace mkdv {

using cplx = std::complex<double>;

enum class FftDirection { forward, backward };

// Unnormalized in-place DFT: forward uses e^{-2 pi i jk/n}, backward e^{+2 pi i jk/n}.
// Plans are cached per (length, direction); safe to call from several threads.
void fft_inplace(std::span<cplx> data, FftDirection dir);

}  // namespace mkdv
