#include "simrad/sinogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "simrad/errors.hpp"
#include "simrad/parallel.hpp"

namespace simrad {

namespace {

constexpr double kPi = std::numbers::pi;

// Linear interpolation on a uniform lattice x_k = x0 + k dx with zero beyond the ends.
double lerp_row(const double* row, int n, double x0, double dx, double x) {
    const double q = (x - x0) / dx;
    if (q <= -1.0 || q >= n)
        return 0.0;
    const int k = static_cast<int>(std::floor(q));
    const double f = q - k;
    const double lo = k >= 0 ? row[k] : 0.0;
    const double hi = k + 1 < n ? row[k + 1] : 0.0;
    return (1.0 - f) * lo + f * hi;
}

} // namespace

DirectionGrid::DirectionGrid(int ntheta, int nphi, bool full_sphere)
    : ntheta_(ntheta), nphi_(nphi), full_sphere_(full_sphere) {
    if (ntheta < 1 || nphi < 1)
        throw InvalidArgument("direction grid needs at least one sample per angle");
    if (full_sphere && ntheta % 2 != 0)
        throw InvalidArgument("full-sphere direction grid needs an even theta count");
    dtheta_ = (full_sphere ? 2.0 * kPi : kPi) / ntheta;
    dphi_ = kPi / nphi;
    weights_.resize(nphi);
    for (int j = 0; j < nphi; ++j)
        weights_[j] = std::sin(phi(j)) * dtheta_ * dphi_;
    normals_.resize(count());
    rotations_.resize(count());
    for (int i = 0; i < ntheta; ++i)
        for (int j = 0; j < nphi; ++j) {
            normals_[flat(i, j)] = unit_normal(theta(i), phi(j));
            rotations_[flat(i, j)] = rotation_from_angles(theta(i), phi(j));
        }
}

DirectionGrid::Neighbor DirectionGrid::wrap(int i, int j, double w) const {
    int sign = 1;
    if (full_sphere_) {
        if (j < 0) {
            j = 0;
            i += ntheta_ / 2;
        } else if (j >= nphi_) {
            j = nphi_ - 1;
            i += ntheta_ / 2;
        }
        i = ((i % ntheta_) + ntheta_) % ntheta_;
        return {i, j, w, 1};
    }
    // n(theta, -d) = -n(theta, pi - d) and n(theta, pi + d) = -n(theta, d)
    if (j < 0) {
        j = nphi_ - 1;
        sign = -sign;
    } else if (j >= nphi_) {
        j = 0;
        sign = -sign;
    }
    // n(-d, phi) = -n(pi - d, pi - phi) and n(pi + d, phi) = -n(d, pi - phi)
    if (i < 0) {
        i = ntheta_ - 1;
        j = nphi_ - 1 - j;
        sign = -sign;
    } else if (i >= ntheta_) {
        i = 0;
        j = nphi_ - 1 - j;
        sign = -sign;
    }
    return {i, j, w, sign};
}

std::array<DirectionGrid::Neighbor, 4> DirectionGrid::stencil(const Vec3& u) const {
    double theta, phi;
    int sign = 1;
    if (full_sphere_) {
        const double len = u.norm();
        if (!(len >= 1e-10))
            throw ZeroVector("cannot interpolate along a zero direction");
        theta = std::atan2(u.y(), u.x());
        if (theta < 0.0)
            theta += 2.0 * kPi;
        phi = std::acos(std::clamp(u.z() / len, -1.0, 1.0));
    } else {
        const DirectionLabel d = canonicalize_direction(u);
        theta = d.theta;
        phi = d.phi;
        sign = d.sign;
    }
    const double fi = theta / dtheta_ - 0.5;
    const double fj = phi / dphi_ - 0.5;
    const int i0 = static_cast<int>(std::floor(fi));
    const int j0 = static_cast<int>(std::floor(fj));
    const double wi = fi - i0, wj = fj - j0;
    std::array<Neighbor, 4> out{wrap(i0, j0, (1.0 - wi) * (1.0 - wj)),
                                wrap(i0 + 1, j0, wi * (1.0 - wj)),
                                wrap(i0, j0 + 1, (1.0 - wi) * wj), wrap(i0 + 1, j0 + 1, wi * wj)};
    for (auto& nb : out)
        nb.sign *= sign;
    return out;
}

void PlaneGeometry::validate() const {
    if (ntheta < 1 || nphi < 1 || nt < 3)
        throw InvalidArgument("plane geometry needs ntheta, nphi >= 1 and nt >= 3");
    if (!(tmax > 0.0))
        throw InvalidArgument("tmax must be positive");
    if (full_sphere && ntheta % 2 != 0)
        throw InvalidArgument("full-sphere geometry needs an even ntheta");
}

void LineGeometry::validate() const {
    if (ntheta < 1 || nphi < 1 || nuv < 3)
        throw InvalidArgument("line geometry needs ntheta, nphi >= 1 and nuv >= 3");
    if (!(uvmax > 0.0))
        throw InvalidArgument("uvmax must be positive");
}

PlaneSinogram::PlaneSinogram(const PlaneGeometry& geom)
    : geom_(geom), dirs_((geom.validate(), geom.ntheta), geom.nphi, geom.full_sphere),
      data_(dirs_.count() * static_cast<std::size_t>(geom.nt), 0.0) {}

double PlaneSinogram::sample_row(int i, int j, double t) const {
    return lerp_row(row(i, j), geom_.nt, -geom_.tmax, geom_.dt(), t);
}

double PlaneSinogram::sample(const Vec3& u, double t) const {
    double s = 0.0;
    for (const auto& nb : dirs_.stencil(u))
        if (nb.weight != 0.0)
            s += nb.weight * sample_row(nb.i, nb.j, nb.sign * t);
    return s;
}

LineSinogram::LineSinogram(const LineGeometry& geom)
    : geom_(geom), dirs_((geom.validate(), geom.ntheta), geom.nphi),
      data_(dirs_.count() * plane_size(), 0.0) {}

double LineSinogram::sample_plane(int i, int j, double u, double v) const {
    const int n = geom_.nuv;
    const double du = geom_.du();
    const double qu = (u + geom_.uvmax) / du;
    const double qv = (v + geom_.uvmax) / du;
    if (qu <= -1.0 || qv <= -1.0 || qu >= n || qv >= n)
        return 0.0;
    const int m0 = static_cast<int>(std::floor(qu));
    const int n0 = static_cast<int>(std::floor(qv));
    const double fu = qu - m0, fv = qv - n0;
    const double* p = plane(i, j);
    auto value = [&](int m, int k) -> double {
        if (m < 0 || k < 0 || m >= n || k >= n)
            return 0.0;
        return p[static_cast<std::size_t>(m) * n + k];
    };
    return (1.0 - fu) * ((1.0 - fv) * value(m0, n0) + fv * value(m0, n0 + 1)) +
           fu * ((1.0 - fv) * value(m0 + 1, n0) + fv * value(m0 + 1, n0 + 1));
}

double LineSinogram::sample(const Vec3& d, const Vec3& p) const {
    const auto stencil = dirs_.stencil(d);
    // foot point on d-perp, so every point of the line gives the same value
    const Vec3 n = d.normalized();
    const Vec3 q = p - n.dot(p) * n;
    double s = 0.0;
    for (const auto& nb : stencil) {
        if (nb.weight == 0.0)
            continue;
        const Mat3& R = dirs_.rotation(nb.i, nb.j);
        s += nb.weight * sample_plane(nb.i, nb.j, q.dot(R.col(0)), q.dot(R.col(1)));
    }
    return s;
}

double inner(const PlaneSinogram& a, const PlaneSinogram& b) {
    if (a.data().size() != b.data().size())
        throw InvalidArgument("sinogram sizes differ");
    const auto& dirs = a.directions();
    const int nt = a.geometry().nt;
    std::vector<double> terms(a.data().size());
    for (int i = 0; i < dirs.ntheta(); ++i)
        for (int j = 0; j < dirs.nphi(); ++j) {
            const double w = dirs.weight(j) * a.geometry().dt();
            for (int k = 0; k < nt; ++k)
                terms[a.index(i, j, k)] = w * a.at(i, j, k) * b.at(i, j, k);
        }
    return pairwise_sum(terms.data(), terms.size());
}

double inner(const LineSinogram& a, const LineSinogram& b) {
    if (a.data().size() != b.data().size())
        throw InvalidArgument("sinogram sizes differ");
    const auto& dirs = a.directions();
    const double du2 = a.geometry().du() * a.geometry().du();
    std::vector<double> terms(a.data().size());
    const std::size_t ps = a.plane_size();
    for (int i = 0; i < dirs.ntheta(); ++i)
        for (int j = 0; j < dirs.nphi(); ++j) {
            const double w = dirs.weight(j) * du2;
            const std::size_t base = a.index(i, j, 0, 0);
            for (std::size_t q = 0; q < ps; ++q)
                terms[base + q] = w * a.data()[base + q] * b.data()[base + q];
        }
    return pairwise_sum(terms.data(), terms.size());
}

double norm(const PlaneSinogram& s) { return std::sqrt(inner(s, s)); }
double norm(const LineSinogram& s) { return std::sqrt(inner(s, s)); }

} // namespace simrad
