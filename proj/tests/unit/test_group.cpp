#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "simrad/errors.hpp"
#include "simrad/group.hpp"

using namespace simrad;

namespace {

constexpr double kPi = std::numbers::pi;

GroupElement random_element(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_real_distribution<double> B(-2.0, 2.0);
    const Vec3 b(B(rng), B(rng), B(rng));
    const Mat3 R = uniform_rotation(U(rng), U(rng), U(rng));
    const double a = std::exp(std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
    return {b, R, a};
}

// Unit normal and offset recomputed from three image points of the plane.
void plane_through(const Vec3& p0, const Vec3& p1, const Vec3& p2, Vec3& n, double& t) {
    n = (p1 - p0).cross(p2 - p0).normalized();
    t = n.dot(p0);
}

} // namespace

TEST(Group, ComposeMatchesHandComputedLaw) {
    const GroupElement g(Vec3::Zero(), Mat3::Identity(), 2.0);
    const GroupElement h(Vec3(1, 0, 0), Mat3::Identity(), 3.0);
    const GroupElement gh = compose(g, h);
    EXPECT_NEAR((gh.b() - Vec3(2, 0, 0)).norm(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(gh.a(), 6.0);
    EXPECT_NEAR((gh.R() - Mat3::Identity()).norm(), 0.0, 1e-15);
}

TEST(Group, InverseClosedForm) {
    const GroupElement g(Vec3(1, 0, 0), Mat3::Identity(), 2.0);
    const GroupElement gi = inverse(g);
    EXPECT_NEAR((gi.b() - Vec3(-0.5, 0, 0)).norm(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(gi.a(), 0.5);
    EXPECT_EQ(distance(inverse(GroupElement::identity()), GroupElement::identity()), 0.0);
}

TEST(Group, AxiomsOnRandomElements) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
        const GroupElement g = random_element(rng), h = random_element(rng), f = random_element(rng);
        EXPECT_LE(distance(compose(compose(g, h), f), compose(g, compose(h, f))), 1e-12);
        EXPECT_LE(distance(compose(g, GroupElement::identity()), g), 1e-15);
        EXPECT_LE(distance(compose(GroupElement::identity(), g), g), 1e-15);
        EXPECT_LE(distance(compose(g, inverse(g)), GroupElement::identity()), 1e-12);
        EXPECT_LE(distance(compose(inverse(g), g), GroupElement::identity()), 1e-12);
    }
}

TEST(Group, RejectsInvalidElements) {
    EXPECT_THROW(GroupElement(Vec3::Zero(), Mat3::Identity(), 0.0), InvalidArgument);
    EXPECT_THROW(GroupElement(Vec3::Zero(), Mat3::Identity(), -1.0), InvalidArgument);
    EXPECT_THROW(GroupElement(Vec3::Zero(), Mat3::Identity(), std::nan("")), InvalidArgument);
    Mat3 reflect = Mat3::Identity();
    reflect(2, 2) = -1.0;
    EXPECT_THROW(GroupElement(Vec3::Zero(), reflect, 1.0), InvalidArgument);
    EXPECT_THROW(GroupElement(Vec3::Zero(), 2.0 * Mat3::Identity(), 1.0), InvalidArgument);
}

TEST(Group, SlightDriftIsProjectedBack) {
    Mat3 R = rotation_z(0.3);
    R(0, 1) += 1e-11;
    const GroupElement g(Vec3::Zero(), R, 1.0);
    EXPECT_LE(orthogonality_residual(g.R()), 1e-12);
    EXPECT_NEAR(g.R().determinant(), 1.0, 1e-12);
}

TEST(Group, LongProductsStayOnSO3) {
    std::mt19937_64 rng(11);
    GroupElement g = GroupElement::identity();
    for (int k = 0; k < 10000; ++k) {
        GroupElement h = random_element(rng);
        g = compose(g, GroupElement(Vec3::Zero(), h.R(), 1.0));
    }
    EXPECT_LE(orthogonality_residual(g.R()), 1e-12);
    EXPECT_NEAR(g.R().determinant(), 1.0, 1e-12);
}

TEST(Group, ActPoint) {
    const GroupElement g(Vec3::Zero(), rotation_z(kPi / 2), 2.0);
    EXPECT_NEAR((act_point(g, Vec3(1, 0, 0)) - Vec3(0, 2, 0)).norm(), 0.0, 1e-15);
    const Vec3 x(0.3, -1.2, 4.0);
    EXPECT_EQ(act_point(GroupElement::identity(), x), x);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        const GroupElement g1 = random_element(rng), g2 = random_element(rng);
        const Vec3 y = act_point(g2, x);
        EXPECT_LE((act_point(compose(g1, g2), x) - act_point(g1, y)).norm(), 1e-12);
    }
}

TEST(Group, UnitNormal) {
    EXPECT_NEAR((unit_normal(0, 0) - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((unit_normal(0, kPi / 2) - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((unit_normal(kPi / 2, kPi / 2) - Vec3(0, 1, 0)).norm(), 0.0, 1e-15);
}

TEST(Group, RotationGauge) {
    EXPECT_NEAR((rotation_from_angles(0, 0) - Mat3::Identity()).norm(), 0.0, 1e-15);
    EXPECT_NEAR((rotation_from_angles(0, kPi / 2) * Vec3::UnitZ() - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            const double th = kPi * i / 32.0, ph = kPi * j / 32.0;
            const Mat3 R = rotation_from_angles(th, ph);
            EXPECT_LE(orthogonality_residual(R), 1e-12);
            EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
            EXPECT_LE((R.col(2) - unit_normal(th, ph)).norm(), 1e-14);
        }
}

TEST(Group, CanonicalizeDirection) {
    auto d = canonicalize_direction(Vec3(0, 0, 1));
    EXPECT_EQ(d.theta, 0.0);
    EXPECT_EQ(d.phi, 0.0);
    EXPECT_EQ(d.sign, 1);
    d = canonicalize_direction(Vec3(0, 0, -1));
    EXPECT_EQ(d.phi, 0.0);
    EXPECT_EQ(d.sign, -1);
    d = canonicalize_direction(Vec3(-1, 0, 0));
    EXPECT_NEAR(d.theta, 0.0, 1e-15);
    EXPECT_NEAR(d.phi, kPi / 2, 1e-15);
    EXPECT_EQ(d.sign, -1);
    EXPECT_THROW(canonicalize_direction(Vec3(1e-11, 0, 0)), ZeroVector);
    // not required to be unit length
    d = canonicalize_direction(Vec3(0, 3, 0));
    EXPECT_NEAR(d.theta, kPi / 2, 1e-15);
    EXPECT_EQ(d.sign, 1);
}

TEST(Group, CanonicalizeInvertsUnitNormal) {
    for (int i = 0; i < 40; ++i)
        for (int j = 1; j < 40; ++j) {
            const double th = kPi * (i + 0.25) / 40.0, ph = kPi * j / 40.0;
            const auto d = canonicalize_direction(unit_normal(th, ph));
            EXPECT_EQ(d.sign, 1);
            EXPECT_NEAR(d.theta, th, 1e-12);
            EXPECT_NEAR(d.phi, ph, 1e-12);
        }
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Vec3 u(N(rng), N(rng), N(rng));
        const auto d = canonicalize_direction(u);
        EXPECT_GE(d.theta, 0.0);
        EXPECT_LT(d.theta, kPi);
        EXPECT_GE(d.phi, 0.0);
        EXPECT_LE(d.phi, kPi);
        EXPECT_LE((d.sign * unit_normal(d.theta, d.phi) - u.normalized()).norm(), 1e-12);
    }
}

TEST(Group, ActPlaneSimpleCases) {
    PlaneLabel xi{0, 0, 0.5};
    auto r = act_plane(GroupElement::translation(Vec3(0, 0, 1)), xi);
    EXPECT_NEAR(r.t, 1.5, 1e-15);
    r = act_plane(GroupElement::dilation(2.0), xi);
    EXPECT_NEAR(r.t, 1.0, 1e-15);
    EXPECT_NEAR(r.phi, 0.0, 1e-15);
}

TEST(Group, ActPlaneMatchesImagePointSet) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> A(0.0, kPi), T(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const GroupElement g = random_element(rng);
        const PlaneLabel xi{A(rng), A(rng), T(rng)};
        const Mat3 R = rotation_from_angles(xi.theta, xi.phi);
        const Vec3 base = xi.t * R.col(2);
        Vec3 n;
        double t;
        plane_through(act_point(g, base), act_point(g, base + R.col(0)), act_point(g, base + R.col(1)), n, t);
        const PlaneLabel img = act_plane(g, xi);
        const Vec3 m = unit_normal(img.theta, img.phi);
        // same geometric plane: (m, t') = +-(n, t)
        const double s = m.dot(n) > 0 ? 1.0 : -1.0;
        EXPECT_LE((m - s * n).norm(), 1e-10);
        EXPECT_NEAR(img.t, s * t, 1e-10);
    }
    // composite flipping the normal
    const GroupElement flip = GroupElement::rotation(rotation_z(kPi / 2) * rotation_y(kPi));
    const PlaneLabel img = act_plane(flip, PlaneLabel{0, 0, 0.7});
    EXPECT_NEAR(img.phi, 0.0, 1e-12);
    EXPECT_NEAR(img.t, -0.7, 1e-12);
}

TEST(Group, ActPlaneIsAnAction) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> A(0.0, kPi), T(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const GroupElement g = random_element(rng), h = random_element(rng);
        const PlaneLabel xi{A(rng), A(rng), T(rng)};
        EXPECT_TRUE(same_plane(act_plane(compose(g, h), xi), act_plane(g, act_plane(h, xi)), 1e-10));
    }
}

TEST(Group, ActLineSimpleCases) {
    const LineLabel root{0, 0, Vec3::Zero()};
    auto r = act_line(GroupElement::translation(Vec3(1, 2, 0)), root);
    EXPECT_LE((r.t_perp - Vec3(1, 2, 0)).norm(), 1e-15);
    r = act_line(GroupElement::translation(Vec3(0, 0, 5)), root);
    EXPECT_LE(r.t_perp.norm(), 1e-15);
}

TEST(Group, ActLineMatchesImagePointSet) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> A(0.0, kPi), T(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const GroupElement g = random_element(rng);
        const Mat3 R = rotation_from_angles(A(rng), A(rng));
        LineLabel xi{0, 0, Vec3::Zero()};
        const auto d = canonicalize_direction(R.col(2));
        xi.theta = d.theta;
        xi.phi = d.phi;
        const Vec3 n = unit_normal(xi.theta, xi.phi);
        Vec3 p(T(rng), T(rng), T(rng));
        p -= n.dot(p) * n;
        xi.t_perp = p;
        const LineLabel img = act_line(g, xi);
        const Vec3 m = unit_normal(img.theta, img.phi);
        EXPECT_NEAR(m.dot(img.t_perp), 0.0, 1e-10);
        for (double s : {-3.0, 0.0, 1.5, 4.0}) {
            const Vec3 y = act_point(g, p + s * n) - img.t_perp;
            EXPECT_LE((y - m.dot(y) * m).norm(), 1e-8);
        }
    }
}

TEST(Group, ActLineIsAnAction) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> A(0.0, kPi), T(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const GroupElement g = random_element(rng), h = random_element(rng);
        const double th = A(rng), ph = A(rng);
        const Vec3 n = unit_normal(th, ph);
        Vec3 p(T(rng), T(rng), T(rng));
        p -= n.dot(p) * n;
        const LineLabel xi{th, ph, p};
        EXPECT_TRUE(same_line(act_line(compose(g, h), xi), act_line(g, act_line(h, xi)), 1e-10));
    }
}

TEST(Group, Sections) {
    const GroupElement s0 = section_plane(PlaneLabel{0, 0, 0});
    EXPECT_LE(distance(s0, GroupElement::identity()), 1e-15);
    const GroupElement s3 = section_plane(PlaneLabel{0, 0, 3});
    EXPECT_LE(distance(s3, GroupElement(Vec3(0, 0, 3), Mat3::Identity(), 1.0)), 1e-15);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> A(0.0, kPi), T(-2.0, 2.0);
    const CharacterSet planes(Geometry::Plane), lines(Geometry::Line);
    for (int k = 0; k < 100; ++k) {
        const PlaneLabel xi{A(rng), A(rng), T(rng)};
        EXPECT_TRUE(same_plane(act_plane(section_plane(xi), PlaneLabel{0, 0, 0}), xi, 1e-10));
        EXPECT_DOUBLE_EQ(planes.gamma(section_plane(xi)), 1.0);

        const Vec3 n = unit_normal(xi.theta, xi.phi);
        Vec3 p(T(rng), T(rng), T(rng));
        p -= n.dot(p) * n;
        const LineLabel li{xi.theta, xi.phi, p};
        EXPECT_TRUE(same_line(act_line(section_line(li), LineLabel{0, 0, Vec3::Zero()}), li, 1e-10));
        EXPECT_DOUBLE_EQ(lines.gamma(section_line(li)), 1.0);
    }
}

TEST(Group, CharacterValues) {
    const GroupElement g(Vec3(1, 2, 3), rotation_x(0.4), 2.0);
    const CharacterSet p(Geometry::Plane), l(Geometry::Line);
    EXPECT_DOUBLE_EQ(p.alpha(g), 8.0);
    EXPECT_DOUBLE_EQ(p.beta(g), 2.0);
    EXPECT_DOUBLE_EQ(p.gamma(g), 4.0);
    EXPECT_NEAR(p.chi(g), 0.5, 1e-15);
    EXPECT_NEAR(p.zeta(g), 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(l.alpha(g), 8.0);
    EXPECT_DOUBLE_EQ(l.beta(g), 4.0);
    EXPECT_DOUBLE_EQ(l.gamma(g), 2.0);
    EXPECT_NEAR(l.chi(g), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(l.zeta(g), std::sqrt(2.0), 1e-15);
}

TEST(Group, CharactersAreHomomorphisms) {
    std::mt19937_64 rng(29);
    for (Geometry geom : {Geometry::Plane, Geometry::Line}) {
        const CharacterSet c(geom);
        for (int k = 0; k < 100; ++k) {
            const GroupElement g = random_element(rng), h = random_element(rng);
            const GroupElement gh = compose(g, h);
            auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
            EXPECT_LE(rel(c.alpha(gh), c.alpha(g) * c.alpha(h)), 1e-12);
            EXPECT_LE(rel(c.beta(gh), c.beta(g) * c.beta(h)), 1e-12);
            EXPECT_LE(rel(c.gamma(gh), c.gamma(g) * c.gamma(h)), 1e-12);
            EXPECT_LE(rel(c.chi(gh), c.chi(g) * c.chi(h)), 1e-12);
            EXPECT_LE(rel(c.chi(g), std::sqrt(c.alpha(g) / c.beta(g)) / c.gamma(g)), 1e-12);
        }
    }
}

TEST(Group, HaarDensity) {
    EXPECT_DOUBLE_EQ(haar_weight(GroupElement::identity()), 1.0);
    EXPECT_DOUBLE_EQ(haar_weight(GroupElement::dilation(2.0)), 1.0 / 16.0);
}

TEST(Group, HaarLeftInvarianceMonteCarlo) {
    // f(b, R, a) = a^3 exp(-(ln a)^2) exp(-|b|^2) (1 + n_z / 2); int f dmu = pi^2 exactly.
    auto f = [](const GroupElement& g) {
        const double la = std::log(g.a());
        return std::pow(g.a(), 3) * std::exp(-la * la - g.b().squaredNorm()) * (1.0 + 0.5 * g.R()(2, 2));
    };
    const GroupElement g0(Vec3(0.5, -0.3, 0.2), rotation_axis_angle(Vec3(1, 1, 0), 0.6), 1.3);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    // importance sampling: b ~ N(0, sb^2 I), ln a ~ N(0, sl^2), R Haar
    const double sb = 1.0, sl = 1.0;
    std::normal_distribution<double> B(0.0, sb), LA(0.0, sl);
    const int samples = 400000;
    double plain = 0.0, moved = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Vec3 b(B(rng), B(rng), B(rng));
        const double la = LA(rng);
        const GroupElement g(b, uniform_rotation(U(rng), U(rng), U(rng)), std::exp(la));
        const double pdf = std::pow(2 * kPi * sb * sb, -1.5) * std::exp(-b.squaredNorm() / (2 * sb * sb)) *
                           std::exp(-la * la / (2 * sl * sl)) / std::sqrt(2 * kPi * sl * sl);
        const double w = haar_weight(g) * g.a() / pdf; // da = a d(ln a)
        plain += w * f(g);
        moved += w * f(compose(g0, g));
    }
    plain /= samples;
    moved /= samples;
    EXPECT_NEAR(plain / (kPi * kPi), 1.0, 0.02);
    EXPECT_NEAR(moved / plain, 1.0, 0.02);
}

TEST(Group, UniformRotationIsOrthonormal) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Vec3 mean = Vec3::Zero();
    for (int k = 0; k < 20000; ++k) {
        const Mat3 R = uniform_rotation(U(rng), U(rng), U(rng));
        EXPECT_LE(orthogonality_residual(R), 1e-12);
        mean += R.col(2);
    }
    EXPECT_LE((mean / 20000.0).norm(), 0.03);
}
