#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "simrad/errors.hpp"
#include "simrad/quasi_regular.hpp"

using namespace simrad;

namespace {

constexpr double kPi = std::numbers::pi;

PlaneSinogram gaussian_plane(const Vec3& c, double s, bool full = false) {
    PlaneGeometry g;
    g.ntheta = full ? 64 : 32;
    g.nphi = 32;
    g.nt = 257;
    g.tmax = 8.0;
    g.full_sphere = full;
    PlaneSinogram out(g);
    for (int i = 0; i < g.ntheta; ++i)
        for (int j = 0; j < g.nphi; ++j)
            for (int k = 0; k < g.nt; ++k) {
                const double x = g.t(k) - out.directions().normal(i, j).dot(c);
                out.at(i, j, k) = std::exp(-kPi * x * x / (s * s));
            }
    return out;
}

LineSinogram gaussian_line(const Vec3& c) {
    LineGeometry g;
    g.ntheta = 16;
    g.nphi = 16;
    g.nuv = 97;
    g.uvmax = 6.0;
    LineSinogram out(g);
    for (int i = 0; i < g.ntheta; ++i)
        for (int j = 0; j < g.nphi; ++j) {
            const Mat3& R = out.directions().rotation(i, j);
            for (int m = 0; m < g.nuv; ++m)
                for (int n = 0; n < g.nuv; ++n) {
                    const Vec3 q = g.u(m) * R.col(0) + g.u(n) * R.col(1) - c;
                    const double p2 = q.squaredNorm() - std::pow(q.dot(R.col(2)), 2);
                    out.at(i, j, m, n) = std::exp(-kPi * p2);
                }
        }
    return out;
}

template <typename S>
double rel_diff(const S& a, const S& b) {
    S d = a;
    for (std::size_t q = 0; q < d.data().size(); ++q)
        d.data()[q] -= b.data()[q];
    return norm(d) / norm(b);
}

} // namespace

TEST(QuasiRegular, IdentityIsExact) {
    const PlaneSinogram s = gaussian_plane(Vec3(0.3, 0.1, -0.2), 1.0);
    EXPECT_LE(rel_diff(apply_pi_hat_plane(GroupElement::identity(), s), s), 1e-12);
    const LineSinogram l = gaussian_line(Vec3(0.3, 0.1, -0.2));
    EXPECT_LE(rel_diff(apply_pi_hat_line(GroupElement::identity(), l), l), 1e-12);
}

TEST(QuasiRegular, PlaneActionMatchesClosedForm) {
    // R of e^{-pi |x - c|^2} is e^{-pi (t - n.c)^2}; pi_hat(g) turns it into
    // a^{-1/2} e^{-pi (t - n.g[c])^2 / a^2}
    const Vec3 c(0.3, 0.1, -0.2);
    const GroupElement g(Vec3(0.2, -0.3, 0.1), rotation_axis_angle(Vec3(1, 1, 0), 0.4), 1.25);
    const PlaneSinogram moved = apply_pi_hat_plane(g, gaussian_plane(c, 1.0));
    PlaneSinogram expect = gaussian_plane(act_point(g, c), 1.25);
    for (double& x : expect.data())
        x /= std::sqrt(1.25);
    EXPECT_LE(rel_diff(moved, expect), 3e-2);
}

TEST(QuasiRegular, PlaneIsUnitary) {
    const PlaneSinogram s = gaussian_plane(Vec3(0.2, 0.0, 0.1), 0.9);
    for (const GroupElement& g :
         {GroupElement::dilation(0.8), GroupElement::dilation(1.25),
          GroupElement(Vec3(0.5, -0.5, 0.3), rotation_z(0.5), 1.0),
          GroupElement(Vec3(0.1, 0.2, 0.3), rotation_x(0.7), 1.1)}) {
        EXPECT_NEAR(norm(apply_pi_hat_plane(g, s)) / norm(s), 1.0, 3e-2);
    }
}

TEST(QuasiRegular, LineIsUnitary) {
    const LineSinogram s = gaussian_line(Vec3(0.2, 0.0, 0.1));
    for (const GroupElement& g : {GroupElement::dilation(0.8), GroupElement(Vec3(0.3, -0.2, 0.1), rotation_z(0.4), 1.2)})
        EXPECT_NEAR(norm(apply_pi_hat_line(g, s)) / norm(s), 1.0, 3e-2);
}

TEST(QuasiRegular, Homomorphism) {
    const PlaneSinogram s = gaussian_plane(Vec3(0.2, -0.1, 0.1), 1.0);
    const GroupElement g(Vec3(0.3, 0.0, -0.2), rotation_axis_angle(Vec3(0, 1, 1), 0.3), 1.2);
    const GroupElement h(Vec3(-0.1, 0.4, 0.0), rotation_z(0.6), 0.9);
    const PlaneSinogram lhs = apply_pi_hat_plane(g, apply_pi_hat_plane(h, s));
    const PlaneSinogram rhs = apply_pi_hat_plane(compose(g, h), s);
    EXPECT_LE(rel_diff(lhs, rhs), 3e-2);
}

TEST(QuasiRegular, PrimeNeedsFullSphere) {
    const PlaneSinogram half = gaussian_plane(Vec3::Zero(), 1.0);
    EXPECT_THROW(apply_pi_hat_prime(GroupElement::dilation(1.1), half), InvalidArgument);
    const PlaneSinogram full = gaussian_plane(Vec3(0.1, 0.2, 0.0), 1.0, true);
    const GroupElement g(Vec3(0.2, 0.0, 0.1), rotation_y(0.3), 1.1);
    EXPECT_NEAR(norm(apply_pi_hat_prime(g, full)) / norm(full), 1.0, 3e-2);
}
