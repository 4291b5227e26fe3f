#pragma once

#include <vector>

#include "simrad/grid.hpp"
#include "simrad/sinogram.hpp"

namespace simrad {

/// Radius (about x = 0) of the ball holding every voxel above 1e-12 * max|v|, plus 2h.
double support_radius(const Volume& v);

/**
 * Plane integrals Rf(theta, phi, t) = int int f(t n + R_{theta,phi}(x, y, 0)) dx dy.
 * Midpoint rule with step h on the disc where the plane meets the support ball.
 * Throws GeometryMismatch if tmax is smaller than the support radius.
 */
PlaneSinogram radon_plane(const Volume& v, const PlaneGeometry& geom,
                          Interpolation mode = Interpolation::CubicBSpline);

/**
 * Line integrals int f(s n + t_perp) ds on a (u, v) lattice in n^perp.
 * Throws GeometryMismatch if uvmax is smaller than the support radius.
 */
LineSinogram xray(const Volume& v, const LineGeometry& geom,
                  Interpolation mode = Interpolation::CubicBSpline);

/// One plane integral at raw angles (no canonicalization), quadrature clipped to `support`.
double plane_integral(const VolumeSampler& f, double h, double support, double theta, double phi,
                      double t);
/// One line integral along unit direction n through offset p (p . n = 0).
double line_integral(const VolumeSampler& f, double h, double support, const Vec3& n,
                     const Vec3& p);

/// R# F(x) = int_{[0,pi)^2} F(theta, phi, n . x) sin(phi) dtheta dphi.
Volume backproject_plane(const PlaneSinogram& s, const GridSpec& grid);
/// R# F(x) = int_{[0,pi)^2} F(theta, phi, P_{n^perp} x) sin(phi) dtheta dphi.
Volume backproject_line(const LineSinogram& s, const GridSpec& grid);

/// F f(tau n(theta, phi)) for each tau.
std::vector<cplx> fourier_slice_plane(const SpectrumSampler& f, double theta, double phi,
                                      const std::vector<double>& tau);
std::vector<cplx> fourier_slice_plane(const Volume& v, double theta, double phi,
                                      const std::vector<double>& tau);

/// F f(nu_m R e1 + nu_n R e2) on the square nu x nu lattice, second index fastest.
std::vector<cplx> fourier_slice_line(const SpectrumSampler& f, double theta, double phi,
                                     const std::vector<double>& nu);
std::vector<cplx> fourier_slice_line(const Volume& v, double theta, double phi,
                                     const std::vector<double>& nu);

/// Frequencies k / (M dx) of an M-point centered spectrum, k = -floor(M/2) ... in order.
std::vector<double> centered_frequencies(int m, double dx);

/**
 * Continuous-FT samples of one sinogram row: dt sum_k F(t_k) exp(-2 pi i tau t_k)
 * at tau = centered_frequencies(pad * nt, dt).
 */
std::vector<cplx> row_spectrum(const PlaneSinogram& s, int i, int j, int pad = 1);

/// Same for one direction of a line sinogram (pad*nuv)^2 values, v-frequency fastest.
std::vector<cplx> plane_spectrum(const LineSinogram& s, int i, int j, int pad = 1);

/// Per-direction 1D spectra of a plane sinogram with cubic B-spline interpolation in tau.
class PlaneSliceSpectra {
public:
    explicit PlaneSliceSpectra(const PlaneSinogram& s, int pad = 2);

    /// Stored direction (i, j) at frequency tau; zero beyond the sampled band.
    cplx row(int i, int j, double tau) const;
    /// (I x F)F(u, tau) for any direction u, bilinear across directions.
    cplx operator()(const Vec3& u, double tau) const;

    double tau_max() const { return 0.5 * (m_ - 1) * dtau_; }

private:
    DirectionGrid dirs_;
    int m_;
    double dtau_;
    std::vector<cplx> coeff_;
};

/// Read-only view of F extended evenly: value(-u, -t) == value(u, t) by construction.
class EvenExtension {
public:
    explicit EvenExtension(const PlaneSinogram& s) : s_(s) {}
    double operator()(const Vec3& u, double t) const { return s_.sample(u, t); }

private:
    const PlaneSinogram& s_;
};

/**
 * F R# F(v) = |v|^-2 [ F^(v/|v|, |v|) + F^(-v/|v|, -|v|) ] on the N^3 spectrum of `grid`,
 * with the DC voxel set to 0. Integrates over the whole sphere, so its inverse DFT is
 * twice the half-sphere backproject_plane.
 */
Spectrum3D dual_transform_spectrum(const PlaneSinogram& F, const GridSpec& grid);

} // namespace simrad
