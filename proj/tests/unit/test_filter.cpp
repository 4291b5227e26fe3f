#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "simrad/errors.hpp"
#include "simrad/filter.hpp"

using namespace simrad;

namespace {

constexpr double kPi = std::numbers::pi;

PlaneGeometry row_geometry(int nt = 257, double tmax = 8.0) {
    PlaneGeometry g;
    g.ntheta = 2;
    g.nphi = 2;
    g.nt = nt;
    g.tmax = tmax;
    return g;
}

template <typename Fn>
PlaneSinogram fill_rows(const PlaneGeometry& g, Fn fn) {
    PlaneSinogram s(g);
    for (int i = 0; i < g.ntheta; ++i)
        for (int j = 0; j < g.nphi; ++j)
            for (int k = 0; k < g.nt; ++k)
                s.at(i, j, k) = fn(s.directions().normal(i, j), g.t(k));
    return s;
}

double max_diff(const PlaneSinogram& a, const PlaneSinogram& b) {
    double m = 0.0;
    for (std::size_t q = 0; q < a.data().size(); ++q)
        m = std::max(m, std::abs(a.data()[q] - b.data()[q]));
    return m;
}

} // namespace

TEST(Multiplier, CosineIsEigenfunction) {
    const PlaneGeometry g = row_geometry();
    const double period = g.nt * g.dt();
    for (int m : {1, 7, 40}) {
        const double tau0 = m / period;
        const PlaneSinogram s = fill_rows(g, [&](const Vec3&, double t) { return std::cos(2 * kPi * tau0 * t + 0.3); });
        const PlaneSinogram js = apply_multiplier_plane(s, MultiplierSpec::plane_unitarization());
        for (std::size_t q = 0; q < s.data().size(); ++q)
            EXPECT_NEAR(js.data()[q], tau0 * s.data()[q], 1e-10);
    }
}

TEST(Multiplier, DcIsRemoved) {
    const PlaneSinogram s = fill_rows(row_geometry(), [](const Vec3&, double) { return 2.5; });
    const PlaneSinogram js = apply_multiplier_plane(s, MultiplierSpec::plane_unitarization());
    for (double x : js.data())
        EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(Multiplier, GaussianAgainstQuadrature) {
    const PlaneGeometry g = row_geometry();
    const PlaneSinogram s = fill_rows(g, [](const Vec3&, double t) { return std::exp(-kPi * t * t); });
    const PlaneSinogram js = apply_multiplier_plane(s, MultiplierSpec::plane_unitarization());
    // (J g)(t) = 2 int_0^inf tau e^{-pi tau^2} cos(2 pi tau t) dtau, fine trapezoid
    auto oracle = [](double t) {
        const double d = 1e-4;
        double acc = 0.0;
        for (int q = 1; q < 80000; ++q) {
            const double tau = q * d;
            acc += tau * std::exp(-kPi * tau * tau) * std::cos(2 * kPi * tau * t);
        }
        return 2.0 * acc * d;
    };
    EXPECT_NEAR(oracle(0.0), 1.0 / kPi, 1e-6);
    for (int k : {128, 131, 140, 160, 200})
        EXPECT_NEAR(js.at(0, 0, k), oracle(g.t(k)), 1e-3);
}

TEST(Multiplier, SquaredEqualsTwice) {
    const PlaneSinogram s = fill_rows(row_geometry(), [](const Vec3& n, double t) {
        return std::exp(-kPi * (t - 0.3 * n.x()) * (t - 0.3 * n.x())) * (1.0 + t);
    });
    MultiplierSpec spec = MultiplierSpec::plane_unitarization();
    spec.window = RaisedCosineWindow{1.5, 3.0};
    const PlaneSinogram twice = apply_multiplier_plane(apply_multiplier_plane(s, spec), spec);
    EXPECT_LE(max_diff(twice, apply_multiplier_plane(s, spec.squared())), 1e-12);
}

TEST(Multiplier, LineGainRatioIsSqrtPi) {
    LineGeometry g;
    g.ntheta = 2;
    g.nphi = 2;
    g.nuv = 65;
    g.uvmax = 4.0;
    LineSinogram s(g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int m = 0; m < g.nuv; ++m)
                for (int n = 0; n < g.nuv; ++n)
                    s.at(i, j, m, n) = std::exp(-kPi * (g.u(m) * g.u(m) + 2 * g.u(n) * g.u(n)));
    MultiplierSpec bare = MultiplierSpec::line_unitarization();
    bare.gain = 1.0;
    const double ratio = norm(apply_multiplier_line(s, bare)) /
                         norm(apply_multiplier_line(s, MultiplierSpec::line_unitarization()));
    EXPECT_NEAR(ratio, std::sqrt(kPi), 1e-12);
}

TEST(Multiplier, Validation) {
    MultiplierSpec bad;
    bad.exponent = 0.0;
    EXPECT_THROW(bad.validate(), InvalidArgument);
    MultiplierSpec w;
    w.window = RaisedCosineWindow{2.0, 1.0};
    EXPECT_THROW(w.validate(), InvalidArgument);
    const RaisedCosineWindow win{1.0, 2.0};
    EXPECT_EQ(win(0.5), 1.0);
    EXPECT_NEAR(win(1.5), 0.5, 1e-15);
    EXPECT_EQ(win(2.5), 0.0);
}

TEST(Multiplier, SemiInvariance) {
    PlaneGeometry g;
    g.ntheta = 16;
    g.nphi = 16;
    g.nt = 513;
    g.tmax = 8.0;
    const Vec3 c(0.2, -0.1, 0.3);
    const PlaneSinogram s = fill_rows(g, [&](const Vec3& n, double t) {
        const double x = t - n.dot(c);
        return std::exp(-kPi * x * x);
    });
    const MultiplierSpec J = MultiplierSpec::plane_unitarization();
    EXPECT_LE(check_semi_invariance(J, GroupElement::identity(), s), 1e-12);
    EXPECT_LE(check_semi_invariance(J, GroupElement::rotation(rotation_z(0.4)), s), 1e-2);
    EXPECT_LE(check_semi_invariance(J, GroupElement::dilation(2.0), s), 3e-2);
    EXPECT_LE(check_semi_invariance(J, GroupElement::dilation(0.8), s), 3e-2);
}

TEST(Admissibility, GaussianIsRejected) {
    const Volume g = gaussian_phantom(Vec3::Zero(), 1.0, 32, 0.3);
    EXPECT_THROW(admissibility_constant(g), NotAdmissible);
    EXPECT_THROW(normalize_admissible(g), NotAdmissible);
}

TEST(Admissibility, NormalizedWaveletHasUnitConstant) {
    Volume psi = log_wavelet(1.1, 32, 0.3);
    psi *= 3.0;
    EXPECT_NEAR(admissibility_constant(normalize_admissible(psi)), 1.0, 1e-10);
}
