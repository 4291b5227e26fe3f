#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "simrad/errors.hpp"
#include "simrad/sinogram.hpp"

using namespace simrad;

namespace {

constexpr double kPi = std::numbers::pi;

double total_weight(const DirectionGrid& d) {
    double s = 0.0;
    for (int i = 0; i < d.ntheta(); ++i)
        for (int j = 0; j < d.nphi(); ++j)
            s += d.weight(j);
    return s;
}

} // namespace

TEST(DirectionGrid, MidpointsAndWeights) {
    const DirectionGrid d(32, 32);
    EXPECT_NEAR(d.theta(0), kPi / 64, 1e-15);
    EXPECT_NEAR(d.phi(31), kPi - kPi / 64, 1e-15);
    // midpoint rule on int sin(phi) dphi gives 2 (dphi/2) / sin(dphi/2) exactly
    const double mid = (d.dphi() / 2) / std::sin(d.dphi() / 2);
    EXPECT_NEAR(total_weight(d), 2.0 * kPi * mid, 1e-12);
    EXPECT_NEAR(total_weight(d), 2.0 * kPi, 3e-3);
    const DirectionGrid full(64, 32, true);
    EXPECT_NEAR(total_weight(full), 4.0 * kPi * mid, 1e-12);
    EXPECT_THROW(DirectionGrid(7, 8, true), InvalidArgument);
    EXPECT_THROW(DirectionGrid(0, 8), InvalidArgument);
}

TEST(DirectionGrid, StencilReproducesStoredNormals) {
    const DirectionGrid d(16, 12);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 12; ++j) {
            const auto st = d.stencil(d.normal(i, j));
            double wsum = 0.0;
            for (const auto& nb : st) {
                wsum += nb.weight;
                if (nb.weight > 1e-12) {
                    EXPECT_EQ(nb.i, i);
                    EXPECT_EQ(nb.j, j);
                    EXPECT_EQ(nb.sign, 1);
                }
            }
            EXPECT_NEAR(wsum, 1.0, 1e-12);
        }
}

TEST(DirectionGrid, GhostNeighboursPointTheRightWay) {
    // For every neighbour, sign * stored normal must lie close to the query direction.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.0);
    for (bool full : {false, true}) {
        const DirectionGrid d(full ? 32 : 16, 16, full);
        const double reach = 2.0 * std::max(d.dtheta(), d.dphi());
        for (int k = 0; k < 2000; ++k) {
            const Vec3 u = Vec3(N(rng), N(rng), N(rng)).normalized();
            double wsum = 0.0;
            for (const auto& nb : d.stencil(u)) {
                wsum += nb.weight;
                if (nb.weight > 0.0)
                    EXPECT_LE((nb.sign * d.normal(nb.i, nb.j) - u).norm(), reach);
                if (full)
                    EXPECT_EQ(nb.sign, 1);
            }
            EXPECT_NEAR(wsum, 1.0, 1e-12);
        }
    }
}

TEST(DirectionGrid, BoundaryGhostRules) {
    const DirectionGrid d(8, 8);
    // just above phi = 0 at theta in the first cell: the j = -1 ghost maps to (i, nphi-1) flipped
    const Vec3 u = unit_normal(d.theta(2), 0.25 * d.dphi());
    bool saw_ghost = false;
    for (const auto& nb : d.stencil(u))
        if (nb.j == 7 && nb.weight > 0.0) {
            saw_ghost = true;
            EXPECT_EQ(nb.sign, -1);
        }
    EXPECT_TRUE(saw_ghost);
    // theta just below 0: the i = -1 ghost maps to (ntheta-1, nphi-1-j) flipped
    const Vec3 v = unit_normal(0.25 * d.dtheta(), d.phi(3));
    bool saw_theta_ghost = false;
    for (const auto& nb : d.stencil(v))
        if (nb.i == 7 && nb.weight > 0.0) {
            saw_theta_ghost = true;
            EXPECT_EQ(nb.j, 8 - 1 - 3);
            EXPECT_EQ(nb.sign, -1);
        }
    EXPECT_TRUE(saw_theta_ghost);
    EXPECT_THROW(d.stencil(Vec3::Zero()), ZeroVector);
}

TEST(PlaneSinogram, SampleIsEvenOnHalfSphere) {
    PlaneGeometry g;
    g.ntheta = 16;
    g.nphi = 16;
    g.nt = 65;
    g.tmax = 4.0;
    PlaneSinogram s(g);
    const Vec3 c(0.4, -0.2, 0.3);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            for (int k = 0; k < g.nt; ++k) {
                const double x = g.t(k) - s.directions().normal(i, j).dot(c);
                s.at(i, j, k) = std::exp(-kPi * x * x);
            }
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Vec3 u = Vec3(N(rng), N(rng), N(rng)).normalized();
        const double t = N(rng);
        EXPECT_NEAR(s.sample(u, t), s.sample(-u, -t), 1e-12);
        const double x = t - u.dot(c);
        EXPECT_NEAR(s.sample(u, t), std::exp(-kPi * x * x), 3e-2);
    }
    EXPECT_EQ(s.sample_row(0, 0, 4.5), 0.0);
}

TEST(PlaneSinogram, NormQuadrature) {
    PlaneGeometry g;
    g.ntheta = 32;
    g.nphi = 32;
    g.nt = 129;
    g.tmax = 6.0;
    PlaneSinogram s(g);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            for (int k = 0; k < g.nt; ++k)
                s.at(i, j, k) = std::exp(-kPi * g.t(k) * g.t(k));
    // 2 pi * int e^{-2 pi t^2} dt = 2 pi / sqrt 2
    EXPECT_NEAR(norm(s) * norm(s), 2.0 * kPi / std::sqrt(2.0), 5e-3);
    EXPECT_NEAR(inner(s, s), norm(s) * norm(s), 1e-12);
}

TEST(LineSinogram, NormQuadratureAndSampling) {
    LineGeometry g;
    g.ntheta = 16;
    g.nphi = 16;
    g.nuv = 65;
    g.uvmax = 4.0;
    LineSinogram s(g);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            for (int m = 0; m < g.nuv; ++m)
                for (int n = 0; n < g.nuv; ++n)
                    s.at(i, j, m, n) = std::exp(-kPi * (g.u(m) * g.u(m) + g.u(n) * g.u(n)));
    // 2 pi * int e^{-2 pi |p|^2} d^2p = 2 pi / 2
    EXPECT_NEAR(norm(s) * norm(s), kPi, 2e-2);
    const Vec3 d = unit_normal(0.7, 1.1);
    const Vec3 p = Vec3(0.3, 0.2, -0.1);
    const Vec3 pp = p - d.dot(p) * d;
    EXPECT_NEAR(s.sample(d, p), std::exp(-kPi * pp.squaredNorm()), 2e-2);
    EXPECT_NEAR(s.sample(d, p), s.sample(-d, p + 2.0 * d), 1e-12);
}

TEST(Geometry, Validation) {
    PlaneGeometry p;
    p.nt = 2;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p.nt = 9;
    p.tmax = -1;
    EXPECT_THROW(p.validate(), InvalidArgument);
    LineGeometry l;
    l.uvmax = 0.0;
    EXPECT_THROW(l.validate(), InvalidArgument);
    EXPECT_NEAR(PlaneGeometry{}.dt(), 12.0 / 128.0, 1e-15);
}
