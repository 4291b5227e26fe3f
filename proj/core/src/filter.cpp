#include "simrad/filter.hpp"

#include <cmath>
#include <numbers>

#include "simrad/errors.hpp"
#include "simrad/fft.hpp"
#include "simrad/parallel.hpp"
#include "simrad/quasi_regular.hpp"

namespace simrad {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

double RaisedCosineWindow::operator()(double freq) const {
    const double f = std::abs(freq);
    if (f <= pass)
        return 1.0;
    if (f >= stop)
        return 0.0;
    const double c = std::cos(0.5 * kPi * (f - pass) / (stop - pass));
    return c * c;
}

MultiplierSpec MultiplierSpec::plane_unitarization() { return {1.0, 1.0, DcPolicy::Zero, {}}; }

MultiplierSpec MultiplierSpec::line_unitarization() {
    return {0.5, 1.0 / std::sqrt(kPi), DcPolicy::Zero, {}};
}

MultiplierSpec MultiplierSpec::unitarization(Geometry geometry) {
    return geometry == Geometry::Plane ? plane_unitarization() : line_unitarization();
}

MultiplierSpec MultiplierSpec::squared() const {
    MultiplierSpec out = *this;
    out.exponent = 2.0 * exponent;
    out.gain = gain * gain;
    out.window_power = 2.0 * window_power;
    return out;
}

void MultiplierSpec::validate() const {
    if (!(exponent > 0.0))
        throw InvalidArgument("multiplier exponent must be positive");
    if (!(gain > 0.0))
        throw InvalidArgument("multiplier gain must be positive");
    if (window && !(window->stop > window->pass && window->pass >= 0.0))
        throw InvalidArgument("window needs 0 <= pass < stop");
}

double MultiplierSpec::symbol(double freq) const {
    const double f = std::abs(freq);
    if (f == 0.0)
        return 0.0;
    const double w = window ? std::pow((*window)(f), window_power) : 1.0;
    return gain * std::pow(f, exponent) * w;
}

PlaneSinogram apply_multiplier_plane(const PlaneSinogram& s, const MultiplierSpec& spec) {
    spec.validate();
    const auto& geom = s.geometry();
    const int nt = geom.nt;
    std::vector<double> symbol(nt);
    for (int k = 0; k < nt; ++k)
        symbol[k] = spec.symbol(fft::signed_bin(k, nt) / (nt * geom.dt())) / nt;
    PlaneSinogram out(geom);
    const auto& dirs = s.directions();
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        std::vector<cplx> buf(s.row(i, j), s.row(i, j) + nt);
        fft::transform_rows(buf.data(), nt, 1, fft::Direction::Forward);
        for (int k = 0; k < nt; ++k)
            buf[k] *= symbol[k];
        fft::transform_rows(buf.data(), nt, 1, fft::Direction::Backward);
        double* dst = out.row(i, j);
        for (int k = 0; k < nt; ++k)
            dst[k] = buf[k].real();
    });
    return out;
}

LineSinogram apply_multiplier_line(const LineSinogram& s, const MultiplierSpec& spec) {
    spec.validate();
    const auto& geom = s.geometry();
    const int n = geom.nuv;
    const std::size_t ps = s.plane_size();
    std::vector<double> symbol(ps);
    const double df = 1.0 / (n * geom.du());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            symbol[static_cast<std::size_t>(a) * n + b] =
                spec.symbol(df * std::hypot(fft::signed_bin(a, n), fft::signed_bin(b, n))) /
                static_cast<double>(ps);
    LineSinogram out(geom);
    const auto& dirs = s.directions();
    parallel_for(dirs.count(), [&](std::size_t d) {
        const int i = static_cast<int>(d / dirs.nphi());
        const int j = static_cast<int>(d % dirs.nphi());
        std::vector<cplx> buf(s.plane(i, j), s.plane(i, j) + ps);
        fft::transform_2d(buf.data(), n, n, fft::Direction::Forward);
        for (std::size_t q = 0; q < ps; ++q)
            buf[q] *= symbol[q];
        fft::transform_2d(buf.data(), n, n, fft::Direction::Backward);
        double* dst = out.plane(i, j);
        for (std::size_t q = 0; q < ps; ++q)
            dst[q] = buf[q].real();
    });
    return out;
}

namespace {

template <typename Sinogram, typename Multiply, typename Act>
double semi_invariance_residual(const MultiplierSpec& spec, const GroupElement& g,
                                const Sinogram& s, Multiply multiply, Act act) {
    const Sinogram js = multiply(s, spec);
    const double den = norm(js);
    const Sinogram lhs = act(g, multiply(act(inverse(g), s), spec));
    const double zeta = std::pow(g.a(), spec.exponent);
    Sinogram diff = lhs;
    for (std::size_t q = 0; q < diff.data().size(); ++q)
        diff.data()[q] -= zeta * js.data()[q];
    const double num = norm(diff);
    if (den == 0.0)
        return num == 0.0 ? 0.0 : INFINITY;
    return num / den;
}

} // namespace

double check_semi_invariance(const MultiplierSpec& spec, const GroupElement& g,
                             const PlaneSinogram& s) {
    return semi_invariance_residual(spec, g, s, apply_multiplier_plane, apply_pi_hat_plane);
}

double check_semi_invariance(const MultiplierSpec& spec, const GroupElement& g,
                             const LineSinogram& s) {
    return semi_invariance_residual(spec, g, s, apply_multiplier_line, apply_pi_hat_line);
}

double admissibility_constant(const Volume& psi, int pad) {
    const Spectrum3D spec = dft3(psi, pad);
    if (std::abs(spec.at(0, 0, 0)) > 1e-8)
        throw NotAdmissible("wavelet has nonzero mean");
    const int half = spec.m() / 2;
    std::vector<double> terms;
    terms.reserve(spec.data().size());
    for (int kz = -half; kz < half; ++kz)
        for (int ky = -half; ky < half; ++ky)
            for (int kx = -half; kx < half; ++kx) {
                if (kx == 0 && ky == 0 && kz == 0)
                    continue;
                const double r = spec.frequency(kx, ky, kz).norm();
                terms.push_back(std::norm(spec.at(kx, ky, kz)) / (r * r * r));
            }
    const double dw3 = std::pow(spec.freq_spacing(), 3);
    return pairwise_sum(terms.data(), terms.size()) * dw3 / (4.0 * kPi);
}

Volume normalize_admissible(const Volume& psi, int pad) {
    const double c = admissibility_constant(psi, pad);
    if (!(c > 0.0) || !std::isfinite(c))
        throw NotAdmissible("admissibility constant is not finite and positive");
    Volume out = psi;
    out *= 1.0 / std::sqrt(c);
    return out;
}

} // namespace simrad
