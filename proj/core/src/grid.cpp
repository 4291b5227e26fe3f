#include "simrad/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "simrad/detail/bspline.hpp"
#include "simrad/errors.hpp"
#include "simrad/fft.hpp"
#include "simrad/parallel.hpp"

namespace simrad {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(-2 pi i w . origin)
cplx origin_phase(const Vec3& w, const Vec3& origin) {
    const double arg = -2.0 * kPi * w.dot(origin);
    return {std::cos(arg), std::sin(arg)};
}

} // namespace

GridSpec GridSpec::centered(int n, double h) {
    GridSpec g{n, h, Vec3::Constant(-0.5 * n * h)};
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (n < 8 || n % 2 != 0)
        throw InvalidArgument("grid size must be even and at least 8");
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidArgument("grid spacing must be positive");
    if (!origin.allFinite())
        throw InvalidArgument("grid origin must be finite");
}

Volume::Volume(const GridSpec& grid) : grid_(grid) {
    grid_.validate();
    data_.assign(grid_.size(), 0.0);
}

Volume::Volume(const GridSpec& grid, std::vector<double> samples)
    : grid_(grid), data_(std::move(samples)) {
    grid_.validate();
    if (data_.size() != grid_.size())
        throw InvalidArgument("sample count does not match grid");
}

Volume& Volume::operator+=(const Volume& other) {
    if (other.data_.size() != data_.size())
        throw InvalidArgument("volume sizes differ");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

Volume& Volume::operator*=(double factor) {
    for (double& x : data_)
        x *= factor;
    return *this;
}

Volume operator-(const Volume& a, const Volume& b) {
    if (a.data().size() != b.data().size())
        throw InvalidArgument("volume sizes differ");
    Volume out(a.grid());
    for (std::size_t i = 0; i < a.data().size(); ++i)
        out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

double inner(const Volume& a, const Volume& b) {
    if (a.data().size() != b.data().size())
        throw InvalidArgument("volume sizes differ");
    std::vector<double> prod(a.data().size());
    for (std::size_t i = 0; i < prod.size(); ++i)
        prod[i] = a.data()[i] * b.data()[i];
    return std::pow(a.h(), 3) * pairwise_sum(prod.data(), prod.size());
}

double norm(const Volume& v) { return std::sqrt(inner(v, v)); }

double max_abs(const Volume& v) {
    double m = 0.0;
    for (double x : v.data())
        m = std::max(m, std::abs(x));
    return m;
}

double relative_l2_error(const Volume& a, const Volume& ref, double interior_fraction) {
    if (a.n() != ref.n())
        throw InvalidArgument("volume sizes differ");
    const int n = a.n();
    const double half = 0.5 * interior_fraction * n;
    const double center = 0.5 * (n - 1);
    std::vector<double> diff, base;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (std::abs(i - center) > half || std::abs(j - center) > half ||
                    std::abs(k - center) > half)
                    continue;
                const double r = ref.at(i, j, k);
                const double d = a.at(i, j, k) - r;
                diff.push_back(d * d);
                base.push_back(r * r);
            }
    const double den = pairwise_sum(base.data(), base.size());
    if (den == 0.0)
        return pairwise_sum(diff.data(), diff.size()) == 0.0 ? 0.0 : INFINITY;
    return std::sqrt(pairwise_sum(diff.data(), diff.size()) / den);
}

VolumeSampler::VolumeSampler(const Volume& v, Interpolation mode)
    : grid_(v.grid()), mode_(mode), coeff_(v.data()) {
    if (mode_ == Interpolation::CubicBSpline)
        detail::bspline_prefilter_3d(coeff_.data(), grid_.n, grid_.n, grid_.n);
}

double VolumeSampler::operator()(const Vec3& x) const {
    const int n = grid_.n;
    const Vec3 q = (x - grid_.origin) / grid_.h;
    if (mode_ == Interpolation::CubicBSpline) {
        constexpr double eps = 1e-9;
        const double hi = n - 1 + eps;
        if (q.x() < -eps || q.y() < -eps || q.z() < -eps || q.x() > hi || q.y() > hi || q.z() > hi)
            return 0.0;
        return detail::bspline_eval_3d(coeff_.data(), n, n, n, q.x(), q.y(), q.z());
    }

    if (q.x() <= -1.0 || q.y() <= -1.0 || q.z() <= -1.0 || q.x() >= n || q.y() >= n || q.z() >= n)
        return 0.0;
    const int i0 = static_cast<int>(std::floor(q.x()));
    const int j0 = static_cast<int>(std::floor(q.y()));
    const int k0 = static_cast<int>(std::floor(q.z()));
    const double fx = q.x() - i0, fy = q.y() - j0, fz = q.z() - k0;
    const std::size_t sn = static_cast<std::size_t>(n);
    auto value = [&](int i, int j, int k) -> double {
        if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
            return 0.0;
        return coeff_[i + sn * (j + sn * k)];
    };
    double result = 0.0;
    for (int dz = 0; dz < 2; ++dz) {
        const double wz = dz ? fz : 1.0 - fz;
        for (int dy = 0; dy < 2; ++dy) {
            const double wy = dy ? fy : 1.0 - fy;
            const double v0 = value(i0, j0 + dy, k0 + dz);
            const double v1 = value(i0 + 1, j0 + dy, k0 + dz);
            result += wz * wy * ((1.0 - fx) * v0 + fx * v1);
        }
    }
    return result;
}

Volume gaussian_phantom(const Vec3& center, double scale, int n, double h) {
    if (!(scale > 0.0))
        throw InvalidArgument("phantom scale must be positive");
    if (n * h < 8.0 * scale)
        throw SupportOverflow("grid extent N*h is smaller than 8 * scale");
    return gaussian_mixture({{center, scale, 1.0}}, n, h);
}

Volume gaussian_mixture(const std::vector<GaussianBlob>& blobs, int n, double h) {
    Volume v(GridSpec::centered(n, h));
    for (const auto& blob : blobs)
        if (n * h < 8.0 * blob.scale)
            throw SupportOverflow("grid extent N*h is smaller than 8 * scale");
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Vec3 x = v.grid().position(i, j, k);
                double s = 0.0;
                for (const auto& blob : blobs)
                    s += blob.weight *
                         std::exp(-kPi * (x - blob.center).squaredNorm() / (blob.scale * blob.scale));
                v.at(i, j, k) = s;
            }
    });
    return v;
}

double log_wavelet_value(double s, double r) {
    const double amplitude = 2.0 * std::numbers::sqrt2 * kPi * s * s;
    const double q = kPi * r * r / (s * s);
    return amplitude / (4.0 * kPi * kPi * s * s * s) * (2.0 * kPi / (s * s)) * (3.0 - 2.0 * q) *
           std::exp(-q);
}

Volume log_wavelet(double s, int n, double h) {
    if (!(s > 0.0))
        throw InvalidArgument("wavelet scale must be positive");
    Volume v(GridSpec::centered(n, h));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                v.at(i, j, k) = log_wavelet_value(s, v.grid().position(i, j, k).norm());
    return v;
}

Spectrum3D::Spectrum3D(int m, double h, const Vec3& origin)
    : m_(m), h_(h), origin_(origin), data_(static_cast<std::size_t>(m) * m * m) {
    if (m < 2 || m % 2 != 0)
        throw InvalidArgument("spectrum size must be even");
}

double norm(const Spectrum3D& s) {
    std::vector<double> sq(s.data().size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        sq[i] = std::norm(s.data()[i]);
    return std::sqrt(pairwise_sum(sq.data(), sq.size()) * std::pow(s.freq_spacing(), 3));
}

Spectrum3D dft3(const Volume& v, int pad) {
    if (pad < 1)
        throw InvalidArgument("padding factor must be >= 1");
    const int n = v.n();
    const int m = pad * n;
    const std::size_t sm = static_cast<std::size_t>(m);
    std::vector<cplx> buf(sm * sm * sm);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                buf[i + sm * (j + sm * k)] = v.at(i, j, k);
    fft::transform_3d(buf.data(), m, m, m, fft::Direction::Forward);

    Spectrum3D s(m, v.h(), v.grid().origin);
    const double h3 = std::pow(v.h(), 3);
    const int half = m / 2;
    parallel_for(sm, [&](std::size_t cz) {
        const int kz = static_cast<int>(cz) - half;
        const std::size_t bz = static_cast<std::size_t>((kz + m) % m);
        for (int ky = -half; ky < half; ++ky) {
            const std::size_t by = static_cast<std::size_t>((ky + m) % m);
            for (int kx = -half; kx < half; ++kx) {
                const std::size_t bx = static_cast<std::size_t>((kx + m) % m);
                s.at(kx, ky, kz) = h3 * buf[bx + sm * (by + sm * bz)] *
                                   origin_phase(s.frequency(kx, ky, kz), s.origin());
            }
        }
    });
    return s;
}

Volume idft3(const Spectrum3D& s) {
    const int m = s.m();
    const std::size_t sm = static_cast<std::size_t>(m);
    const int half = m / 2;
    std::vector<cplx> buf(sm * sm * sm);
    const double h3 = std::pow(s.h(), 3);
    for (int kz = -half; kz < half; ++kz)
        for (int ky = -half; ky < half; ++ky)
            for (int kx = -half; kx < half; ++kx) {
                const std::size_t b = static_cast<std::size_t>((kx + m) % m) +
                                      sm * (static_cast<std::size_t>((ky + m) % m) +
                                            sm * static_cast<std::size_t>((kz + m) % m));
                buf[b] = s.at(kx, ky, kz) * std::conj(origin_phase(s.frequency(kx, ky, kz), s.origin())) / h3;
            }
    fft::transform_3d(buf.data(), m, m, m, fft::Direction::Backward);
    Volume v(GridSpec{m, s.h(), s.origin()});
    const double scale = 1.0 / static_cast<double>(sm * sm * sm);
    for (std::size_t i = 0; i < buf.size(); ++i)
        v.data()[i] = buf[i].real() * scale;
    return v;
}

SpectrumSampler::SpectrumSampler(const Volume& v, int pad)
    : spectrum_(dft3(v, pad)), coeff_(spectrum_.data()) {
    const int m = spectrum_.m();
    detail::bspline_prefilter_3d(coeff_.data(), m, m, m);
}

cplx SpectrumSampler::operator()(const Vec3& w) const {
    const int m = spectrum_.m();
    const Vec3 q = w / spectrum_.freq_spacing() + Vec3::Constant(m / 2);
    constexpr double eps = 1e-9;
    const double hi = m - 1 + eps;
    if (q.x() < -eps || q.y() < -eps || q.z() < -eps || q.x() > hi || q.y() > hi || q.z() > hi)
        return {0.0, 0.0};
    return detail::bspline_eval_3d(coeff_.data(), m, m, m, q.x(), q.y(), q.z());
}

Volume apply_pi(const GroupElement& g, const Volume& v, Interpolation mode, bool* truncated) {
    const VolumeSampler sampler(v, mode);
    const GroupElement ginv = inverse(g);
    const double amplitude = std::pow(g.a(), -1.5);
    const int n = v.n();
    Volume out(v.grid());
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                out.at(i, j, k) = amplitude * sampler(act_point(ginv, v.grid().position(i, j, k)));
    });

    // Did any significant source voxel land outside the box?
    const double threshold = 1e-12 * max_abs(v);
    const Vec3 lo = v.grid().origin;
    const Vec3 hi = lo + Vec3::Constant((n - 1) * v.h());
    bool lost = false;
    for (int k = 0; k < n && !lost; ++k)
        for (int j = 0; j < n && !lost; ++j)
            for (int i = 0; i < n; ++i) {
                if (std::abs(v.at(i, j, k)) <= threshold)
                    continue;
                const Vec3 y = act_point(g, v.grid().position(i, j, k));
                if ((y.array() < lo.array()).any() || (y.array() > hi.array()).any()) {
                    lost = true;
                    break;
                }
            }
    if (truncated)
        *truncated = lost;
    else if (lost)
        std::clog << "warning: apply_pi truncated part of the support at the grid boundary\n";
    return out;
}

} // namespace simrad
