#pragma once

#include <Eigen/Dense>

namespace simrad {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Which family of submanifolds a transform integrates over.
enum class Geometry { Plane, Line };

const char* to_string(Geometry geometry);

/**
 * An element (b, R, a) of the similitude group SIM(3): translation b,
 * rotation R in SO(3) and dilation a > 0, acting on R^3 by x -> b + a R x.
 *
 * Construction validates the invariants; rotations within 1e-9 of SO(3)
 * are projected onto it so the stored matrix is orthonormal to 1e-12.
 */
class GroupElement {
public:
    GroupElement();
    GroupElement(const Vec3& b, const Mat3& R, double a);

    static GroupElement identity() { return {}; }
    static GroupElement translation(const Vec3& b);
    static GroupElement rotation(const Mat3& R);
    static GroupElement dilation(double a);

    const Vec3& b() const { return b_; }
    const Mat3& R() const { return R_; }
    double a() const { return a_; }

private:
    Vec3 b_;
    Mat3 R_;
    double a_;
};

/// Group law (b, R, a)(b', R', a') = (b + a R b', R R', a a').
GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

/// Canonical action b + a R x.
Vec3 act_point(const GroupElement& g, const Vec3& x);

/// Max-abs distance between two elements (translation, rotation entries, dilation).
double distance(const GroupElement& g, const GroupElement& h);

/// n(theta, phi) = (sin phi cos theta, sin phi sin theta, cos phi).
Vec3 unit_normal(double theta, double phi);

/// R_{theta,phi} = Rz(theta) Ry(phi); maps e3 to unit_normal(theta, phi).
Mat3 rotation_from_angles(double theta, double phi);

Mat3 rotation_x(double angle);
Mat3 rotation_y(double angle);
Mat3 rotation_z(double angle);
Mat3 rotation_axis_angle(const Vec3& axis, double angle);

/// Haar-uniform rotation from three independent uniforms in [0, 1) (Shoemake).
Mat3 uniform_rotation(double u1, double u2, double u3);

/// Nearest rotation in Frobenius norm (polar factor).
Mat3 project_to_rotation(const Mat3& M);

/// ||R^T R - I||_F.
double orthogonality_residual(const Mat3& R);

struct DirectionLabel {
    double theta;
    double phi;
    int sign; ///< unit_normal(theta, phi) == sign * u
};

/**
 * Angles (theta, phi) in the punctured square ([0,pi) x (0,pi)) u {(0,0)}
 * with unit_normal(theta, phi) = +-u. Near the pole (|u_z| > 1 - 1e-12)
 * returns (0, 0, sign(u_z)). Throws ZeroVector if |u| < 1e-10.
 */
DirectionLabel canonicalize_direction(const Vec3& u);

/// Plane {x : n(theta, phi) . x = t}.
struct PlaneLabel {
    double theta = 0.0;
    double phi = 0.0;
    double t = 0.0;
};

/// Line {s n(theta, phi) + t_perp : s real} with n . t_perp = 0.
struct LineLabel {
    double theta = 0.0;
    double phi = 0.0;
    Vec3 t_perp = Vec3::Zero();
};

PlaneLabel act_plane(const GroupElement& g, const PlaneLabel& xi);
LineLabel act_line(const GroupElement& g, const LineLabel& xi);

/// sigma(theta, phi, t) = (t n, R_{theta,phi}, 1).
GroupElement section_plane(const PlaneLabel& xi);
/// sigma(theta, phi, t) = (t, R_{theta,phi}, 1).
GroupElement section_line(const LineLabel& xi);

/// True when the labels describe the same geometric plane, i.e. (n1, t1) = +-(n2, t2).
bool same_plane(const PlaneLabel& p, const PlaneLabel& q, double tol);
/// True when the labels describe the same geometric line.
bool same_line(const LineLabel& p, const LineLabel& q, double tol);

/// Density of the left Haar measure a^-4 db dR da (dR of total mass 1).
double haar_weight(const GroupElement& g);

/**
 * Positive characters of SIM(3) attached to one geometry.
 *
 *   plane: alpha = a^3, beta = a,   gamma = a^2, chi = a^-1
 *   line:  alpha = a^3, beta = a^2, gamma = a,   chi = a^-1/2
 *
 * chi = alpha^1/2 beta^-1/2 gamma^-1 is the factor in R pi(g) = chi(g)^-1 pi_hat(g) R,
 * and zeta = chi^-1 is the weight of the unitarizing multiplier.
 */
class CharacterSet {
public:
    explicit CharacterSet(Geometry geometry) : geometry_(geometry) {}

    Geometry geometry() const { return geometry_; }

    double alpha(const GroupElement& g) const;
    double beta(const GroupElement& g) const;
    double gamma(const GroupElement& g) const;
    double chi(const GroupElement& g) const;
    double zeta(const GroupElement& g) const { return 1.0 / chi(g); }

private:
    Geometry geometry_;
};

} // namespace simrad
