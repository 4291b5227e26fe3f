#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace simrad::detail {

// Cubic B-spline interpolation with mirror boundaries (Thevenaz/Unser recursive prefilter).

inline constexpr double kBsplinePole = -0.26794919243112270; // sqrt(3) - 2

/// In-place prefilter of `n` samples separated by `stride`.
template <typename T>
void bspline_prefilter_line(T* c, std::size_t n, std::size_t stride) {
    if (n < 2)
        return;
    const double z = kBsplinePole;
    const double lambda = (1.0 - z) * (1.0 - 1.0 / z);
    for (std::size_t k = 0; k < n; ++k)
        c[k * stride] *= lambda;

    // causal initialization, mirror-symmetric boundary
    const std::size_t horizon = 30; // |z|^30 < 1e-17
    T sum = c[0];
    if (horizon < n) {
        double zn = z;
        for (std::size_t k = 1; k < horizon; ++k) {
            sum += zn * c[k * stride];
            zn *= z;
        }
    } else {
        double zn = z;
        const double iz = 1.0 / z;
        double z2n = std::pow(z, static_cast<double>(n - 1));
        sum = c[0] + z2n * c[(n - 1) * stride];
        z2n *= z2n * iz;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            sum += (zn + z2n) * c[k * stride];
            zn *= z;
            z2n *= iz;
        }
        sum /= (1.0 - zn * zn);
    }
    c[0] = sum;
    for (std::size_t k = 1; k < n; ++k)
        c[k * stride] += z * c[(k - 1) * stride];

    c[(n - 1) * stride] = (z / (z * z - 1.0)) * (z * c[(n - 2) * stride] + c[(n - 1) * stride]);
    for (std::size_t k = n - 1; k-- > 0;)
        c[k * stride] = z * (c[(k + 1) * stride] - c[k * stride]);
}

/// Weights and mirrored indices of the four taps around fractional index x.
struct BsplineTaps {
    std::array<int, 4> index;
    std::array<double, 4> weight;
};

inline int mirror_index(int k, int n) {
    if (n == 1)
        return 0;
    const int period = 2 * (n - 1);
    k %= period;
    if (k < 0)
        k += period;
    return k < n ? k : period - k;
}

inline BsplineTaps bspline_taps(double x, int n) {
    const double fl = std::floor(x);
    const int i = static_cast<int>(fl);
    const double t = x - fl;
    const double t2 = t * t, t3 = t2 * t;
    const double u = 1.0 - t;
    BsplineTaps taps;
    taps.weight = {u * u * u / 6.0, (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0,
                   (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0, t3 / 6.0};
    for (int k = 0; k < 4; ++k)
        taps.index[k] = mirror_index(i - 1 + k, n);
    return taps;
}

/// Prefilters an n0 x n1 x n2 array stored with axis 0 fastest.
template <typename T>
void bspline_prefilter_3d(T* c, int n0, int n1, int n2) {
    const std::size_t s1 = static_cast<std::size_t>(n0);
    const std::size_t s2 = s1 * static_cast<std::size_t>(n1);
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < n1; ++j)
            bspline_prefilter_line(c + j * s1 + k * s2, n0, 1);
    for (int k = 0; k < n2; ++k)
        for (int i = 0; i < n0; ++i)
            bspline_prefilter_line(c + i + k * s2, n1, s1);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i)
            bspline_prefilter_line(c + i + j * s1, n2, s2);
}

/// Evaluates prefiltered coefficients at fractional index (x, y, z).
template <typename T>
T bspline_eval_3d(const T* c, int n0, int n1, int n2, double x, double y, double z) {
    const BsplineTaps tx = bspline_taps(x, n0);
    const BsplineTaps ty = bspline_taps(y, n1);
    const BsplineTaps tz = bspline_taps(z, n2);
    const std::size_t s1 = static_cast<std::size_t>(n0);
    const std::size_t s2 = s1 * static_cast<std::size_t>(n1);
    T result{};
    for (int c2 = 0; c2 < 4; ++c2) {
        T plane{};
        for (int c1 = 0; c1 < 4; ++c1) {
            const T* row = c + ty.index[c1] * s1 + tz.index[c2] * s2;
            const T line = tx.weight[0] * row[tx.index[0]] + tx.weight[1] * row[tx.index[1]] +
                           tx.weight[2] * row[tx.index[2]] + tx.weight[3] * row[tx.index[3]];
            plane += ty.weight[c1] * line;
        }
        result += tz.weight[c2] * plane;
    }
    return result;
}

template <typename T>
T bspline_eval_1d(const T* c, int n, double x) {
    const BsplineTaps t = bspline_taps(x, n);
    return t.weight[0] * c[t.index[0]] + t.weight[1] * c[t.index[1]] +
           t.weight[2] * c[t.index[2]] + t.weight[3] * c[t.index[3]];
}

} // namespace simrad::detail
