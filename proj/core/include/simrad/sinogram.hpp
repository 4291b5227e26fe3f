#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "simrad/group.hpp"

namespace simrad {

/**
 * Midpoint grid over directions: theta_i = (i + 1/2) dtheta, phi_j = (j + 1/2) dphi,
 * with theta in [0, pi) (half sphere, one representative per +-n) or [0, 2 pi)
 * (full sphere). No sample sits on a pole.
 */
class DirectionGrid {
public:
    DirectionGrid(int ntheta, int nphi, bool full_sphere = false);

    int ntheta() const { return ntheta_; }
    int nphi() const { return nphi_; }
    bool full_sphere() const { return full_sphere_; }
    std::size_t count() const { return static_cast<std::size_t>(ntheta_) * nphi_; }

    double dtheta() const { return dtheta_; }
    double dphi() const { return dphi_; }
    double theta(int i) const { return (i + 0.5) * dtheta_; }
    double phi(int j) const { return (j + 0.5) * dphi_; }
    /// Quadrature weight sin(phi_j) dtheta dphi.
    double weight(int j) const { return weights_[j]; }

    const Vec3& normal(int i, int j) const { return normals_[flat(i, j)]; }
    const Mat3& rotation(int i, int j) const { return rotations_[flat(i, j)]; }
    std::size_t flat(int i, int j) const { return static_cast<std::size_t>(i) * nphi_ + j; }

    struct Neighbor {
        int i;
        int j;
        double weight;
        int sign; ///< grid normal (i, j) equals sign * (interpolation direction representative)
    };

    /**
     * Bilinear stencil in (theta, phi) for direction u (any nonzero vector).
     * On the half sphere, `sign` tells whether the neighbor's stored normal is
     * +u-side or -u-side: F(u, t) ~ sum w F(i, j, sign * t) for planes.
     * On the full sphere every sign is +1.
     */
    std::array<Neighbor, 4> stencil(const Vec3& u) const;

private:
    int ntheta_;
    int nphi_;
    bool full_sphere_;
    double dtheta_;
    double dphi_;
    std::vector<double> weights_;
    std::vector<Vec3> normals_;
    std::vector<Mat3> rotations_;

    Neighbor wrap(int i, int j, double w) const;
};

struct PlaneGeometry {
    int ntheta = 32;
    int nphi = 32;
    int nt = 129;
    double tmax = 6.0;
    bool full_sphere = false;

    void validate() const;
    double dt() const { return 2.0 * tmax / (nt - 1); }
    double t(int k) const { return -tmax + k * dt(); }
};

struct LineGeometry {
    int ntheta = 32;
    int nphi = 32;
    int nuv = 129;
    double uvmax = 6.0;

    void validate() const;
    double du() const { return 2.0 * uvmax / (nuv - 1); }
    double u(int m) const { return -uvmax + m * du(); }
};

/// Samples F(theta_i, phi_j, t_k), t fastest.
class PlaneSinogram {
public:
    PlaneSinogram() = default;
    explicit PlaneSinogram(const PlaneGeometry& geom);

    const PlaneGeometry& geometry() const { return geom_; }
    const DirectionGrid& directions() const { return dirs_; }

    std::size_t index(int i, int j, int k) const {
        return (dirs_.flat(i, j)) * static_cast<std::size_t>(geom_.nt) + k;
    }
    double& at(int i, int j, int k) { return data_[index(i, j, k)]; }
    double at(int i, int j, int k) const { return data_[index(i, j, k)]; }
    double* row(int i, int j) { return data_.data() + index(i, j, 0); }
    const double* row(int i, int j) const { return data_.data() + index(i, j, 0); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Linear interpolation in t along one stored direction; zero outside [-tmax, tmax].
    double sample_row(int i, int j, double t) const;
    /// F on the plane {u . x = t}, bilinear across directions, linear in t.
    double sample(const Vec3& u, double t) const;

private:
    PlaneGeometry geom_;
    DirectionGrid dirs_{1, 1};
    std::vector<double> data_;
};

/// Samples F(theta_i, phi_j, u_m, v_n) with offset u R e1 + v R e2, v fastest then u.
class LineSinogram {
public:
    LineSinogram() = default;
    explicit LineSinogram(const LineGeometry& geom);

    const LineGeometry& geometry() const { return geom_; }
    const DirectionGrid& directions() const { return dirs_; }

    std::size_t plane_size() const { return static_cast<std::size_t>(geom_.nuv) * geom_.nuv; }
    std::size_t index(int i, int j, int m, int n) const {
        return dirs_.flat(i, j) * plane_size() + static_cast<std::size_t>(m) * geom_.nuv + n;
    }
    double& at(int i, int j, int m, int n) { return data_[index(i, j, m, n)]; }
    double at(int i, int j, int m, int n) const { return data_[index(i, j, m, n)]; }
    double* plane(int i, int j) { return data_.data() + index(i, j, 0, 0); }
    const double* plane(int i, int j) const { return data_.data() + index(i, j, 0, 0); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Bilinear in (u, v) on one stored direction; zero outside the lattice.
    double sample_plane(int i, int j, double u, double v) const;
    /// F on the line through p parallel to d (p need not be perpendicular to d).
    double sample(const Vec3& d, const Vec3& p) const;

private:
    LineGeometry geom_;
    DirectionGrid dirs_{1, 1};
    std::vector<double> data_;
};

/// Quadrature of int F G dxi with dxi = sin(phi) dtheta dphi dt (resp. d^2 t_perp).
double inner(const PlaneSinogram& a, const PlaneSinogram& b);
double inner(const LineSinogram& a, const LineSinogram& b);
double norm(const PlaneSinogram& s);
double norm(const LineSinogram& s);

} // namespace simrad
