#include "simrad/invert.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "simrad/errors.hpp"
#include "simrad/fft.hpp"
#include "simrad/filter.hpp"
#include "simrad/parallel.hpp"
#include "simrad/xform.hpp"

namespace simrad {

namespace {

constexpr double kPi = std::numbers::pi;

Mat3 rotation_to(const Vec3& v) {
    const DirectionLabel d = canonicalize_direction(v);
    const Mat3 R = rotation_from_angles(d.theta, d.phi);
    return d.sign == 1 ? R : Mat3(R * rotation_x(kPi));
}

void require_zero_mean(const Volume& psi) {
    double s = 0.0;
    for (double x : psi.data())
        s += x;
    if (std::abs(s * std::pow(psi.h(), 3)) > 1e-8)
        throw NotAdmissible("wavelet has nonzero mean");
}

double grid_radius(const GridSpec& grid) {
    double r = 0.0;
    for (int c = 0; c < 8; ++c) {
        const Vec3 x = grid.position((c & 1) ? grid.n - 1 : 0, (c & 2) ? grid.n - 1 : 0,
                                     (c & 4) ? grid.n - 1 : 0);
        r = std::max(r, x.norm());
    }
    return r;
}

// Accumulates sum_g factor_g * (c_g * psi_{R,a})(x) in the Fourier domain on a 2N grid.
// Below unit scale the atom is taken band-limited (spectrum a^{3/2} psi^(a R^T w)),
// since its samples would alias; otherwise it is sampled in space.
class Synthesizer {
public:
    Synthesizer(const GridSpec& grid, const Volume& psi)
        : grid_(grid), m_(2 * grid.n), psi_(psi, Interpolation::CubicBSpline), psi_hat_(psi),
          acc_(cube(m_), cplx{0.0, 0.0}) {}

    void add(const Volume& coeff, const Mat3& R, double a, double factor) {
        const std::size_t sm = static_cast<std::size_t>(m_);
        std::vector<cplx> cbuf(cube(m_), cplx{0.0, 0.0});
        const int n = grid_.n;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    cbuf[i + sm * (j + sm * k)] = coeff.at(i, j, k);
        fft::transform_3d(cbuf.data(), m_, m_, m_, fft::Direction::Forward);
        const std::vector<cplx> pbuf = a < 1.0 ? kernel_spectrum(R, a) : kernel_samples(R, a);
        for (std::size_t q = 0; q < acc_.size(); ++q)
            acc_[q] += factor * cbuf[q] * pbuf[q];
    }

    Volume finish() {
        fft::transform_3d(acc_.data(), m_, m_, m_, fft::Direction::Backward);
        const std::size_t sm = static_cast<std::size_t>(m_);
        const double scale = 1.0 / static_cast<double>(cube(m_));
        Volume out(grid_);
        const int n = grid_.n;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    out.at(i, j, k) = acc_[i + sm * (j + sm * k)].real() * scale;
        return out;
    }

private:
    static std::size_t cube(int m) { return static_cast<std::size_t>(m) * m * m; }

    std::vector<cplx> kernel_samples(const Mat3& R, double a) const {
        const std::size_t sm = static_cast<std::size_t>(m_);
        std::vector<cplx> pbuf(cube(m_));
        const Mat3 Rt = R.transpose();
        const double amplitude = std::pow(a, -1.5);
        parallel_for(sm, [&](std::size_t kk) {
            const int oz = fft::signed_bin(static_cast<int>(kk), m_);
            for (int jj = 0; jj < m_; ++jj) {
                const int oy = fft::signed_bin(jj, m_);
                for (int ii = 0; ii < m_; ++ii) {
                    const int ox = fft::signed_bin(ii, m_);
                    const Vec3 y = grid_.h * Vec3(ox, oy, oz);
                    pbuf[ii + sm * (jj + sm * kk)] = amplitude * psi_(Rt * y / a);
                }
            }
        });
        fft::transform_3d(pbuf.data(), m_, m_, m_, fft::Direction::Forward);
        return pbuf;
    }

    // DFT of the band-limited atom: h^-3 a^{3/2} psi^(a R^T w_k).
    std::vector<cplx> kernel_spectrum(const Mat3& R, double a) const {
        const std::size_t sm = static_cast<std::size_t>(m_);
        std::vector<cplx> pbuf(cube(m_), cplx{0.0, 0.0});
        const Mat3 Rt = R.transpose();
        const double dw = 1.0 / (m_ * grid_.h);
        const double band = 0.5 / grid_.h;
        const double amplitude = std::pow(a, 1.5) / std::pow(grid_.h, 3);
        parallel_for(sm, [&](std::size_t kk) {
            const int oz = fft::signed_bin(static_cast<int>(kk), m_);
            for (int jj = 0; jj < m_; ++jj) {
                const int oy = fft::signed_bin(jj, m_);
                for (int ii = 0; ii < m_; ++ii) {
                    const int ox = fft::signed_bin(ii, m_);
                    const Vec3 w = (a * dw) * (Rt * Vec3(ox, oy, oz));
                    if (w.norm() <= band)
                        pbuf[ii + sm * (jj + sm * kk)] = amplitude * psi_hat_(w);
                }
            }
        });
        return pbuf;
    }

    GridSpec grid_;
    int m_;
    VolumeSampler psi_;
    SpectrumSampler psi_hat_;
    std::vector<cplx> acc_;
};

int next_pow2(int n) {
    int p = 1;
    while (p < n)
        p *= 2;
    return p;
}

double sum_squares(const Volume& v) {
    std::vector<double> sq(v.data().size());
    for (std::size_t q = 0; q < sq.size(); ++q)
        sq[q] = v.data()[q] * v.data()[q];
    return pairwise_sum(sq.data(), sq.size());
}

void flag_energy(WaveletResult& result) {
    const double recon = norm(result.volume);
    const double r2 = recon * recon;
    if (r2 > 0.0 && std::abs(result.coefficient_energy / r2 - 1.0) > 0.5) {
        result.lattice_too_coarse = true;
        std::clog << "warning: LatticeTooCoarse: coefficient energy departs from the "
                     "reconstruction energy by more than 50%\n";
    }
}

} // namespace

// Lattice -------------------------------------------------------------------

std::vector<Vec3> icosahedron_vertices() {
    const double g = std::numbers::phi;
    std::vector<Vec3> out;
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            out.emplace_back(0.0, s1, s2 * g);
            out.emplace_back(s1, s2 * g, 0.0);
            out.emplace_back(s2 * g, 0.0, s1);
        }
    for (auto& v : out)
        v.normalize();
    return out;
}

GroupLattice::GroupLattice(double log2_min, double log2_max, double log2_step, double coarse_step)
    : log2_min_(log2_min), log2_max_(log2_max), log2_step_(log2_step), coarse_step_(coarse_step) {
    if (!(log2_step > 0.0) || !(log2_max >= log2_min) || !(coarse_step > 0.0))
        throw InvalidArgument("lattice needs a positive step and log2_max >= log2_min");
    const int count = static_cast<int>(std::floor((log2_max - log2_min) / log2_step + 1e-9)) + 1;
    for (int k = 0; k < count; ++k)
        scales_.push_back(std::exp2(log2_min + k * log2_step));
    for (const Vec3& v : icosahedron_vertices())
        rotations_.push_back(rotation_to(v));
}

GroupLattice GroupLattice::coarse() { return {-1.0, 2.0, 1.0, 1.0}; }

GroupLattice GroupLattice::refined() const {
    return {log2_min_ - coarse_step_, log2_max_ + coarse_step_, 0.5 * log2_step_, coarse_step_};
}

double GroupLattice::node_weight(double a, double h) const {
    const double da = a * log2_step_ * std::numbers::ln2;
    return std::pow(a, -4.0) * h * h * h * rotation_weight() * da;
}

std::size_t GroupLattice::node_count(const GridSpec& grid) const {
    return scales_.size() * rotations_.size() * grid.size();
}

// Filtered backprojection --------------------------------------------------

Volume invert_fbp_plane(const PlaneSinogram& s, const GridSpec& grid) {
    const PlaneSinogram filtered =
        apply_multiplier_plane(s, MultiplierSpec::plane_unitarization().squared());
    return backproject_plane(filtered, grid);
}

Volume invert_fbp_line(const LineSinogram& s, const GridSpec& grid) {
    const LineSinogram filtered =
        apply_multiplier_line(s, MultiplierSpec::line_unitarization().squared());
    return backproject_line(filtered, grid);
}

// Direct Fourier -----------------------------------------------------------

DirectFourierResult invert_direct_fourier(const PlaneSinogram& s, const GridSpec& grid) {
    grid.validate();
    if (s.geometry().full_sphere)
        throw InvalidArgument("direct Fourier inversion expects a half-sphere sinogram");
    const PlaneSliceSpectra spectra(s);
    Spectrum3D spec(grid.n, grid.h, grid.origin);
    const int half = grid.n / 2;
    const double band = 0.5 / grid.h;
    const double limit = spectra.tau_max();

    // DC: every direction sees the total integral
    const auto& dirs = s.directions();
    cplx dc{0.0, 0.0};
    for (int i = 0; i < dirs.ntheta(); ++i)
        for (int j = 0; j < dirs.nphi(); ++j)
            dc += spectra.row(i, j, 0.0);
    spec.at(0, 0, 0) = dc / static_cast<double>(dirs.count());

    std::vector<std::size_t> in_band(grid.n, 0), filled(grid.n, 0);
    parallel_for(static_cast<std::size_t>(grid.n), [&](std::size_t cz) {
        const int kz = static_cast<int>(cz) - half;
        for (int ky = -half; ky < half; ++ky)
            for (int kx = -half; kx < half; ++kx) {
                const Vec3 w = spec.frequency(kx, ky, kz);
                const double r = w.norm();
                const bool inside = r <= band;
                in_band[cz] += inside;
                if (r == 0.0) {
                    filled[cz] += 1;
                    continue;
                }
                if (r > limit) {
                    spec.at(kx, ky, kz) = 0.0;
                    continue;
                }
                spec.at(kx, ky, kz) = spectra(w / r, r);
                filled[cz] += inside;
            }
    });
    std::size_t total = 0, got = 0;
    for (int c = 0; c < grid.n; ++c) {
        total += in_band[c];
        got += filled[c];
    }
    const double coverage = total ? static_cast<double>(got) / total : 1.0;
    if (coverage < 0.99)
        throw InsufficientCoverage("more than 1% of in-band Fourier voxels received no data");
    Volume v = idft3(spec);
    return {Volume(grid, std::move(v.data())), coverage};
}

DirectFourierResult invert_direct_fourier(const LineSinogram& s, const GridSpec& grid) {
    grid.validate();
    const auto& geom = s.geometry();
    const auto& dirs = s.directions();
    const int pad = 2;
    const int m = pad * geom.nuv;
    const double dnu = 1.0 / (m * geom.du());
    const double limit = 0.5 * (m - 1) * dnu;
    const double band = 0.5 / grid.h;
    const double delta = std::max(dirs.dtheta(), dirs.dphi());

    Spectrum3D spec(grid.n, grid.h, grid.origin);
    const int half = grid.n / 2;
    const std::size_t nvox = spec.data().size();
    std::vector<cplx> num(nvox, cplx{0.0, 0.0});
    std::vector<double> den(nvox, 0.0);

    // Frequencies are split into z-slabs so workers write disjoint voxels.
    for (int i = 0; i < dirs.ntheta(); ++i)
        for (int j = 0; j < dirs.nphi(); ++j) {
            const std::vector<cplx> plane = plane_spectrum(s, i, j, pad);
            const Mat3& R = dirs.rotation(i, j);
            const Vec3 n = R.col(2);
            auto bilinear = [&](double nu_u, double nu_v) -> cplx {
                const double qa = nu_u / dnu + m / 2;
                const double qb = nu_v / dnu + m / 2;
                if (qa < 0.0 || qb < 0.0 || qa > m - 1 || qb > m - 1)
                    return {0.0, 0.0};
                const int a0 = std::min(static_cast<int>(qa), m - 2);
                const int b0 = std::min(static_cast<int>(qb), m - 2);
                const double fa = qa - a0, fb = qb - b0;
                const std::size_t sm = static_cast<std::size_t>(m);
                return (1.0 - fa) * ((1.0 - fb) * plane[a0 * sm + b0] + fb * plane[a0 * sm + b0 + 1]) +
                       fa * ((1.0 - fb) * plane[(a0 + 1) * sm + b0] +
                             fb * plane[(a0 + 1) * sm + b0 + 1]);
            };
            parallel_for(static_cast<std::size_t>(grid.n), [&](std::size_t cz) {
                const int kz = static_cast<int>(cz) - half;
                for (int ky = -half; ky < half; ++ky)
                    for (int kx = -half; kx < half; ++kx) {
                        const Vec3 w = spec.frequency(kx, ky, kz);
                        const double r = w.norm();
                        if (r > limit)
                            continue;
                        const std::size_t q = spec.index(kx, ky, kz);
                        if (r == 0.0) {
                            num[q] += bilinear(0.0, 0.0);
                            den[q] += 1.0;
                            continue;
                        }
                        const double off = std::abs(n.dot(w)) / r;
                        if (off >= delta)
                            continue;
                        const double weight = 1.0 - off / delta;
                        num[q] += weight * bilinear(w.dot(R.col(0)), w.dot(R.col(1)));
                        den[q] += weight;
                    }
            });
        }

    std::size_t total = 0, got = 0;
    for (int kz = -half; kz < half; ++kz)
        for (int ky = -half; ky < half; ++ky)
            for (int kx = -half; kx < half; ++kx) {
                const std::size_t q = spec.index(kx, ky, kz);
                const bool inside = spec.frequency(kx, ky, kz).norm() <= band;
                total += inside;
                if (den[q] > 0.0) {
                    spec.data()[q] = num[q] / den[q];
                    got += inside;
                } else {
                    spec.data()[q] = 0.0;
                }
            }
    const double coverage = total ? static_cast<double>(got) / total : 1.0;
    if (coverage < 0.99)
        throw InsufficientCoverage("more than 1% of in-band Fourier voxels received no data");
    Volume v = idft3(spec);
    return {Volume(grid, std::move(v.data())), coverage};
}

// Wavelet frame ------------------------------------------------------------

WaveletResult invert_wavelet(const PlaneSinogram& s, const Volume& psi, const GroupLattice& lattice,
                             const GridSpec& grid) {
    grid.validate();
    require_zero_mean(psi);
    const auto& geom = s.geometry();
    if (geom.full_sphere)
        throw InvalidArgument("wavelet inversion expects a half-sphere sinogram");
    const auto& dirs = s.directions();
    const double dt = geom.dt();
    const std::size_t nd = dirs.count();

    // Psi = J^2 R psi enters through its slices: Psi^(u, rho) = rho^2 psi^(rho u).
    const SpectrumSampler psi_hat(psi);
    const double psi_band = 0.5 / psi.h();
    const double data_band = 0.5 / dt;
    const double rpsi = support_radius(psi);

    const int ks = (geom.nt - 1) / 2;
    const int ltau = static_cast<int>(std::ceil(grid_radius(grid) / dt)) + 1;
    const std::size_t nl = static_cast<std::size_t>(2 * ltau + 1);
    const CharacterSet chars(Geometry::Plane);

    // Row spectra s^(n, rho_k), rho_k = k / (L dt), one set per correlation length L.
    std::map<int, std::vector<cplx>> data_hat;
    auto spectra_for = [&](int L) -> const std::vector<cplx>& {
        auto it = data_hat.find(L);
        if (it != data_hat.end())
            return it->second;
        std::vector<cplx> buf(nd * L, cplx{0.0, 0.0});
        for (std::size_t d = 0; d < nd; ++d) {
            const double* row = s.data().data() + d * geom.nt;
            std::copy(row, row + geom.nt, buf.begin() + d * L);
        }
        fft::transform_rows(buf.data(), L, static_cast<int>(nd), fft::Direction::Forward);
        for (int k = 0; k < L; ++k) {
            const double rho = fft::signed_bin(k, L) / (L * dt);
            const cplx phase = dt * std::polar(1.0, 2.0 * kPi * rho * geom.tmax);
            for (std::size_t d = 0; d < nd; ++d)
                buf[d * L + k] *= phase;
        }
        return data_hat.emplace(L, std::move(buf)).first->second;
    };

    Synthesizer synth(grid, psi);
    WaveletResult result;
    const int n = grid.n;
    for (double a : lattice.scales()) {
        // No wrap-around for |tau| <= ltau dt: L dt > ltau dt + tmax + a r_psi.
        const int L = next_pow2(std::max(geom.nt, ltau + ks + static_cast<int>(std::ceil(a * rpsi / dt)) + 2));
        const std::vector<cplx>& shat = spectra_for(L);
        const double drho = 1.0 / (L * dt);
        const double rho_max = std::min(psi_band / a, data_band);
        for (const Mat3& R : lattice.rotations()) {
            const GroupElement g(Vec3::Zero(), R, a);
            const Mat3 Rt = R.transpose();

            // C_n(tau) = int s^(n, rho) conj(p^(n, rho)) e^{2 pi i rho tau} drho,
            // p^(n, rho) = a^{1/2} Psi^(R^T n, a rho)
            std::vector<cplx> buf(nd * L, cplx{0.0, 0.0});
            parallel_for(nd, [&](std::size_t d) {
                const int i = static_cast<int>(d / dirs.nphi());
                const int j = static_cast<int>(d % dirs.nphi());
                const Vec3 u = Rt * dirs.normal(i, j);
                for (int k = 0; k < L; ++k) {
                    const double rho = fft::signed_bin(k, L) * drho;
                    if (std::abs(rho) > rho_max)
                        continue;
                    const double ar = a * rho;
                    const cplx p = std::sqrt(a) * ar * ar * psi_hat(ar * u);
                    buf[d * L + k] = shat[d * L + k] * std::conj(p);
                }
            });
            fft::transform_rows(buf.data(), L, static_cast<int>(nd), fft::Direction::Backward);
            std::vector<double> corr(nd * nl);
            for (std::size_t d = 0; d < nd; ++d)
                for (int l = -ltau; l <= ltau; ++l)
                    corr[d * nl + (l + ltau)] = buf[d * L + ((l + L) % L)].real() * drho;

            // c(b) = sum_n w_n C_n(n . b)
            Volume coeff(grid);
            parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
                const int k = static_cast<int>(kk);
                double* slab = coeff.data().data() + static_cast<std::size_t>(k) * n * n;
                for (int i = 0; i < dirs.ntheta(); ++i)
                    for (int j = 0; j < dirs.nphi(); ++j) {
                        const Vec3 step = dirs.normal(i, j) * (grid.h / dt);
                        const double base = dirs.normal(i, j).dot(grid.position(0, 0, k)) / dt + ltau;
                        const double* c = corr.data() + dirs.flat(i, j) * nl;
                        const double wd = dirs.weight(j);
                        for (int jj = 0; jj < n; ++jj) {
                            const double row0 = base + jj * step.y();
                            double* out = slab + static_cast<std::size_t>(jj) * n;
                            for (int ii = 0; ii < n; ++ii) {
                                const double q = row0 + ii * step.x();
                                const int l0 = static_cast<int>(q);
                                const double f = q - l0;
                                out[ii] += wd * (c[l0] + f * (c[l0 + 1] - c[l0]));
                            }
                        }
                    }
            });

            const double chi = chars.chi(g);
            const double w = lattice.node_weight(a, grid.h);
            result.coefficient_energy += w * chi * chi * sum_squares(coeff);
            synth.add(coeff, R, a, w * chi);
        }
    }
    result.volume = synth.finish();
    result.nodes = lattice.node_count(grid);
    flag_energy(result);
    return result;
}

WaveletResult invert_wavelet(const LineSinogram& s, const Volume& psi, const GroupLattice& lattice,
                             const GridSpec& grid) {
    grid.validate();
    require_zero_mean(psi);
    const auto& geom = s.geometry();
    const auto& dirs = s.directions();
    const double du = geom.du();

    // Psi = J^2 X psi on the same directions and offset step
    const int kpsi = static_cast<int>(std::ceil(support_radius(psi) / du));
    LineGeometry pg{geom.ntheta, geom.nphi, 2 * kpsi + 1, kpsi * du};
    const LineSinogram Psi = apply_multiplier_line(
        xray(psi, pg), MultiplierSpec::line_unitarization().squared());

    const int kc = (geom.nuv - 1) / 2;
    const int ltau = static_cast<int>(std::ceil(grid_radius(grid) / du)) + 1;
    const int omax = kc + ltau;
    const int span = 2 * omax + 1;
    const int fm = geom.nuv + span; // correlation FFT size per axis
    const std::size_t sfm = static_cast<std::size_t>(fm);
    const std::size_t nl = static_cast<std::size_t>(2 * ltau + 1);
    const CharacterSet chars(Geometry::Line);

    // Data spectra are reused for every node.
    std::vector<cplx> data_hat(dirs.count() * sfm * sfm);
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        cplx* buf = data_hat.data() + d * sfm * sfm;
        const double* p = s.plane(i, j);
        for (int a = 0; a < geom.nuv; ++a)
            for (int b = 0; b < geom.nuv; ++b)
                buf[a * sfm + b] = p[static_cast<std::size_t>(a) * geom.nuv + b];
        fft::transform_2d(buf, fm, fm, fft::Direction::Forward);
    });

    Synthesizer synth(grid, psi);
    WaveletResult result;
    const int n = grid.n;
    for (double a : lattice.scales())
        for (const Mat3& R : lattice.rotations()) {
            const GroupElement g(Vec3::Zero(), R, a);
            const Mat3 Rt = R.transpose();
            const double amplitude = 1.0 / a;

            // C_n(tau) = du^2 sum_p s(n, p) [pi_hat(0, R, a) Psi](n, p - tau), tau on the lattice
            std::vector<double> corr(dirs.count() * nl * nl);
            parallel_for(dirs.count(), [&](std::size_t d) {
                const int i = static_cast<int>(d / dirs.nphi());
                const int j = static_cast<int>(d % dirs.nphi());
                const Mat3& Rd = dirs.rotation(i, j);
                const auto stencil = Psi.directions().stencil(Rt * Rd.col(2));
                std::vector<cplx> buf(sfm * sfm, cplx{0.0, 0.0});
                for (int ou = -omax; ou <= omax; ++ou)
                    for (int ov = -omax; ov <= omax; ++ov) {
                        const Vec3 q = (ou * du) * Rd.col(0) + (ov * du) * Rd.col(1);
                        const Vec3 x = Rt * q / a;
                        double v = 0.0;
                        for (const auto& nb : stencil) {
                            if (nb.weight == 0.0)
                                continue;
                            const Mat3& Rk = Psi.directions().rotation(nb.i, nb.j);
                            v += nb.weight *
                                 Psi.sample_plane(nb.i, nb.j, x.dot(Rk.col(0)), x.dot(Rk.col(1)));
                        }
                        buf[((ou + fm) % fm) * sfm + (ov + fm) % fm] = amplitude * v;
                    }
                fft::transform_2d(buf.data(), fm, fm, fft::Direction::Forward);
                const cplx* xh = data_hat.data() + d * sfm * sfm;
                for (std::size_t q = 0; q < buf.size(); ++q)
                    buf[q] = xh[q] * std::conj(buf[q]);
                fft::transform_2d(buf.data(), fm, fm, fft::Direction::Backward);
                // Z[r] = sum_m X[m] P[m - r]; tau index l corresponds to r = kc + l
                const double scale = du * du / static_cast<double>(sfm * sfm);
                double* c = corr.data() + d * nl * nl;
                for (int lu = -ltau; lu <= ltau; ++lu)
                    for (int lv = -ltau; lv <= ltau; ++lv) {
                        const int ru = ((kc + lu) % fm + fm) % fm;
                        const int rv = ((kc + lv) % fm + fm) % fm;
                        c[(lu + ltau) * nl + (lv + ltau)] = buf[ru * sfm + rv].real() * scale;
                    }
            });

            // c(b) = sum_n w_n C_n(P_n b)
            Volume coeff(grid);
            parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
                const int k = static_cast<int>(kk);
                double* slab = coeff.data().data() + static_cast<std::size_t>(k) * n * n;
                for (int i = 0; i < dirs.ntheta(); ++i)
                    for (int j = 0; j < dirs.nphi(); ++j) {
                        const Mat3& Rd = dirs.rotation(i, j);
                        const Vec3 o = grid.position(0, 0, k);
                        const double bu = o.dot(Rd.col(0)) / du + ltau;
                        const double bv = o.dot(Rd.col(1)) / du + ltau;
                        const double sux = grid.h * Rd(0, 0) / du, suy = grid.h * Rd(1, 0) / du;
                        const double svx = grid.h * Rd(0, 1) / du, svy = grid.h * Rd(1, 1) / du;
                        const double* c = corr.data() + dirs.flat(i, j) * nl * nl;
                        const double wd = dirs.weight(j);
                        for (int jj = 0; jj < n; ++jj) {
                            double* out = slab + static_cast<std::size_t>(jj) * n;
                            for (int ii = 0; ii < n; ++ii) {
                                const double qu = bu + ii * sux + jj * suy;
                                const double qv = bv + ii * svx + jj * svy;
                                const int u0 = static_cast<int>(qu);
                                const int v0 = static_cast<int>(qv);
                                const double fu = qu - u0, fv = qv - v0;
                                const double* c0 = c + u0 * nl + v0;
                                const double* c1 = c0 + nl;
                                const double lo = c0[0] + fv * (c0[1] - c0[0]);
                                const double hi = c1[0] + fv * (c1[1] - c1[0]);
                                out[ii] += wd * (lo + fu * (hi - lo));
                            }
                        }
                    }
            });

            const double chi = chars.chi(g);
            const double w = lattice.node_weight(a, grid.h);
            result.coefficient_energy += w * chi * chi * sum_squares(coeff);
            synth.add(coeff, R, a, w * chi);
        }
    result.volume = synth.finish();
    result.nodes = lattice.node_count(grid);
    flag_energy(result);
    return result;
}

std::string ReconstructionMetrics::to_text() const {
    std::ostringstream out;
    out.precision(9);
    if (error_l2_rel)
        out << "error_l2_rel=" << *error_l2_rel << '\n';
    if (energy_ratio)
        out << "energy_ratio=" << *energy_ratio << '\n';
    if (coverage)
        out << "coverage=" << *coverage << '\n';
    out << "runtime_ms=" << runtime_ms << '\n';
    return out.str();
}

} // namespace simrad
