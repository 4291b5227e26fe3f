#include "simrad/xform.hpp"

#include <cmath>
#include <numbers>

#include "simrad/detail/bspline.hpp"
#include "simrad/errors.hpp"
#include "simrad/fft.hpp"
#include "simrad/parallel.hpp"

namespace simrad {

namespace {

constexpr double kPi = std::numbers::pi;

cplx expi(double arg) { return {std::cos(arg), std::sin(arg)}; }

double disc_sum(const VolumeSampler& f, double h, double radius, const Vec3& base, const Vec3& e1,
                const Vec3& e2) {
    const int amax = static_cast<int>(std::floor(radius / h));
    double total = 0.0;
    for (int a = -amax; a <= amax; ++a) {
        const double x = a * h;
        const double rem = radius * radius - x * x;
        if (rem < 0.0)
            continue;
        const int bmax = static_cast<int>(std::floor(std::sqrt(rem) / h));
        const Vec3 row = base + x * e1;
        double s = 0.0;
        for (int b = -bmax; b <= bmax; ++b)
            s += f(row + (b * h) * e2);
        total += s;
    }
    return total * h * h;
}

} // namespace

double support_radius(const Volume& v) {
    const double threshold = 1e-12 * max_abs(v);
    double r2 = 0.0;
    const int n = v.n();
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (std::abs(v.at(i, j, k)) > threshold && v.at(i, j, k) != 0.0)
                    r2 = std::max(r2, v.grid().position(i, j, k).squaredNorm());
    return std::sqrt(r2) + 2.0 * v.h();
}

double plane_integral(const VolumeSampler& f, double h, double support, double theta, double phi,
                      double t) {
    if (std::abs(t) >= support)
        return 0.0;
    const Mat3 R = rotation_from_angles(theta, phi);
    const double radius = std::sqrt(support * support - t * t);
    return disc_sum(f, h, radius, t * R.col(2), R.col(0), R.col(1));
}

double line_integral(const VolumeSampler& f, double h, double support, const Vec3& n,
                     const Vec3& p) {
    const double p2 = p.squaredNorm();
    if (p2 >= support * support)
        return 0.0;
    const int smax = static_cast<int>(std::floor(std::sqrt(support * support - p2) / h));
    double s = 0.0;
    for (int k = -smax; k <= smax; ++k)
        s += f(p + (k * h) * n);
    return s * h;
}

PlaneSinogram radon_plane(const Volume& v, const PlaneGeometry& geom, Interpolation mode) {
    geom.validate();
    const double support = support_radius(v);
    if (geom.tmax < support)
        throw GeometryMismatch("t range [-tmax, tmax] does not cover the volume support");
    const VolumeSampler f(v, mode);
    PlaneSinogram s(geom);
    const auto& dirs = s.directions();
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        const Mat3& R = dirs.rotation(i, j);
        double* row = s.row(i, j);
        for (int k = 0; k < geom.nt; ++k) {
            const double t = geom.t(k);
            if (std::abs(t) >= support)
                continue;
            const double radius = std::sqrt(support * support - t * t);
            row[k] = disc_sum(f, v.h(), radius, t * R.col(2), R.col(0), R.col(1));
        }
    });
    return s;
}

LineSinogram xray(const Volume& v, const LineGeometry& geom, Interpolation mode) {
    geom.validate();
    const double support = support_radius(v);
    if (geom.uvmax < support)
        throw GeometryMismatch("(u, v) range does not cover the volume support");
    const VolumeSampler f(v, mode);
    LineSinogram s(geom);
    const auto& dirs = s.directions();
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        const Mat3& R = dirs.rotation(i, j);
        const Vec3 n = R.col(2);
        double* plane = s.plane(i, j);
        for (int m = 0; m < geom.nuv; ++m)
            for (int q = 0; q < geom.nuv; ++q) {
                const Vec3 p = geom.u(m) * R.col(0) + geom.u(q) * R.col(1);
                plane[static_cast<std::size_t>(m) * geom.nuv + q] =
                    line_integral(f, v.h(), support, n, p);
            }
    });
    return s;
}

Volume backproject_plane(const PlaneSinogram& s, const GridSpec& grid) {
    Volume out(grid);
    const auto& dirs = s.directions();
    const int n = grid.n;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Vec3 x = grid.position(i, j, k);
                double acc = 0.0;
                for (int a = 0; a < dirs.ntheta(); ++a)
                    for (int b = 0; b < dirs.nphi(); ++b)
                        acc += dirs.weight(b) * s.sample_row(a, b, dirs.normal(a, b).dot(x));
                out.at(i, j, k) = acc;
            }
    });
    return out;
}

Volume backproject_line(const LineSinogram& s, const GridSpec& grid) {
    Volume out(grid);
    const auto& dirs = s.directions();
    const int n = grid.n;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Vec3 x = grid.position(i, j, k);
                double acc = 0.0;
                for (int a = 0; a < dirs.ntheta(); ++a)
                    for (int b = 0; b < dirs.nphi(); ++b) {
                        const Mat3& R = dirs.rotation(a, b);
                        acc += dirs.weight(b) *
                               s.sample_plane(a, b, x.dot(R.col(0)), x.dot(R.col(1)));
                    }
                out.at(i, j, k) = acc;
            }
    });
    return out;
}

std::vector<cplx> fourier_slice_plane(const SpectrumSampler& f, double theta, double phi,
                                      const std::vector<double>& tau) {
    const Vec3 n = unit_normal(theta, phi);
    std::vector<cplx> out(tau.size());
    for (std::size_t k = 0; k < tau.size(); ++k)
        out[k] = f(tau[k] * n);
    return out;
}

std::vector<cplx> fourier_slice_plane(const Volume& v, double theta, double phi,
                                      const std::vector<double>& tau) {
    return fourier_slice_plane(SpectrumSampler(v), theta, phi, tau);
}

std::vector<cplx> fourier_slice_line(const SpectrumSampler& f, double theta, double phi,
                                     const std::vector<double>& nu) {
    const Mat3 R = rotation_from_angles(theta, phi);
    std::vector<cplx> out(nu.size() * nu.size());
    for (std::size_t m = 0; m < nu.size(); ++m)
        for (std::size_t q = 0; q < nu.size(); ++q)
            out[m * nu.size() + q] = f(nu[m] * R.col(0) + nu[q] * R.col(1));
    return out;
}

std::vector<cplx> fourier_slice_line(const Volume& v, double theta, double phi,
                                     const std::vector<double>& nu) {
    return fourier_slice_line(SpectrumSampler(v), theta, phi, nu);
}

std::vector<double> centered_frequencies(int m, double dx) {
    std::vector<double> out(m);
    for (int c = 0; c < m; ++c)
        out[c] = (c - m / 2) / (m * dx);
    return out;
}

std::vector<cplx> row_spectrum(const PlaneSinogram& s, int i, int j, int pad) {
    const auto& geom = s.geometry();
    const int m = pad * geom.nt;
    std::vector<cplx> buf(m);
    const double* row = s.row(i, j);
    for (int k = 0; k < geom.nt; ++k)
        buf[k] = row[k];
    fft::transform_rows(buf.data(), m, 1, fft::Direction::Forward);
    const std::vector<double> tau = centered_frequencies(m, geom.dt());
    std::vector<cplx> out(m);
    for (int c = 0; c < m; ++c) {
        const int k = c - m / 2;
        out[c] = geom.dt() * buf[(k + m) % m] * expi(2.0 * kPi * tau[c] * geom.tmax);
    }
    return out;
}

std::vector<cplx> plane_spectrum(const LineSinogram& s, int i, int j, int pad) {
    const auto& geom = s.geometry();
    const int m = pad * geom.nuv;
    const std::size_t sm = static_cast<std::size_t>(m);
    std::vector<cplx> buf(sm * sm);
    const double* p = s.plane(i, j);
    for (int a = 0; a < geom.nuv; ++a)
        for (int b = 0; b < geom.nuv; ++b)
            buf[a * sm + b] = p[static_cast<std::size_t>(a) * geom.nuv + b];
    fft::transform_2d(buf.data(), m, m, fft::Direction::Forward);
    const std::vector<double> nu = centered_frequencies(m, geom.du());
    const double du2 = geom.du() * geom.du();
    std::vector<cplx> out(sm * sm);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const std::size_t ka = static_cast<std::size_t>((a - m / 2 + m) % m);
            const std::size_t kb = static_cast<std::size_t>((b - m / 2 + m) % m);
            out[a * sm + b] = du2 * buf[ka * sm + kb] *
                              expi(2.0 * kPi * (nu[a] + nu[b]) * geom.uvmax);
        }
    return out;
}

PlaneSliceSpectra::PlaneSliceSpectra(const PlaneSinogram& s, int pad)
    : dirs_(s.directions()), m_(pad * s.geometry().nt),
      dtau_(1.0 / (m_ * s.geometry().dt())) {
    coeff_.resize(dirs_.count() * static_cast<std::size_t>(m_));
    parallel_for(dirs_.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs_.nphi());
        const int j = static_cast<int>(d % dirs_.nphi());
        const std::vector<cplx> spec = row_spectrum(s, i, j, pad);
        cplx* dst = coeff_.data() + d * m_;
        std::copy(spec.begin(), spec.end(), dst);
        detail::bspline_prefilter_line(dst, m_, 1);
    });
}

cplx PlaneSliceSpectra::row(int i, int j, double tau) const {
    const double q = tau / dtau_ + m_ / 2;
    if (q < -1e-9 || q > m_ - 1 + 1e-9)
        return {0.0, 0.0};
    return detail::bspline_eval_1d(coeff_.data() + dirs_.flat(i, j) * m_, m_, q);
}

cplx PlaneSliceSpectra::operator()(const Vec3& u, double tau) const {
    cplx s{0.0, 0.0};
    for (const auto& nb : dirs_.stencil(u))
        if (nb.weight != 0.0)
            s += nb.weight * row(nb.i, nb.j, nb.sign * tau);
    return s;
}

Spectrum3D dual_transform_spectrum(const PlaneSinogram& F, const GridSpec& grid) {
    grid.validate();
    const PlaneSliceSpectra spectra(F);
    Spectrum3D out(grid.n, grid.h, grid.origin);
    const int half = grid.n / 2;
    parallel_for(static_cast<std::size_t>(grid.n), [&](std::size_t cz) {
        const int kz = static_cast<int>(cz) - half;
        for (int ky = -half; ky < half; ++ky)
            for (int kx = -half; kx < half; ++kx) {
                if (kx == 0 && ky == 0 && kz == 0) {
                    out.at(kx, ky, kz) = 0.0;
                    continue;
                }
                const Vec3 w = out.frequency(kx, ky, kz);
                const double r = w.norm();
                const Vec3 u = w / r;
                out.at(kx, ky, kz) = (spectra(u, r) + spectra(-u, -r)) / (r * r);
            }
    });
    return out;
}

} // namespace simrad
