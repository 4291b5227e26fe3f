#pragma once

#include <complex>

namespace simrad::fft {

using cplx = std::complex<double>;

enum class Direction { Forward, Backward };

// Unnormalized in-place DFTs (Forward uses exp(-2 pi i k j / n)).
// Plans are cached per shape; execution is thread-safe.

/// n0 x n1 x n2 array with axis 0 fastest.
void transform_3d(cplx* data, int n0, int n1, int n2, Direction dir);

/// n0 x n1 array with axis 0 fastest.
void transform_2d(cplx* data, int n0, int n1, Direction dir);

/// `count` contiguous rows of length n.
void transform_rows(cplx* data, int n, int count, Direction dir);

/// Signed DFT bin index for position k of an n-point transform.
inline int signed_bin(int k, int n) { return k <= n / 2 ? k : k - n; }

} // namespace simrad::fft
