#include "simrad/group.hpp"

#include <cmath>
#include <numbers>

#include "simrad/errors.hpp"

namespace simrad {

namespace {

constexpr double kAcceptOrthogonality = 1e-9;
constexpr double kRepairOrthogonality = 1e-12;
constexpr double kPoleTolerance = 1e-12;

Mat3 ensure_rotation(const Mat3& R) {
    const double residual = orthogonality_residual(R);
    if (!(residual <= kAcceptOrthogonality) || !(R.determinant() > 0.0))
        throw InvalidArgument("rotation matrix is not in SO(3)");
    return residual > kRepairOrthogonality ? project_to_rotation(R) : R;
}

} // namespace

const char* to_string(Geometry geometry) {
    return geometry == Geometry::Plane ? "plane" : "line";
}

GroupElement::GroupElement() : b_(Vec3::Zero()), R_(Mat3::Identity()), a_(1.0) {}

GroupElement::GroupElement(const Vec3& b, const Mat3& R, double a)
    : b_(b), R_(ensure_rotation(R)), a_(a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidArgument("dilation must be positive and finite");
    if (!b.allFinite())
        throw InvalidArgument("translation must be finite");
}

GroupElement GroupElement::translation(const Vec3& b) { return {b, Mat3::Identity(), 1.0}; }
GroupElement GroupElement::rotation(const Mat3& R) { return {Vec3::Zero(), R, 1.0}; }
GroupElement GroupElement::dilation(double a) { return {Vec3::Zero(), Mat3::Identity(), a}; }

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    return {g.b() + g.a() * (g.R() * h.b()), g.R() * h.R(), g.a() * h.a()};
}

GroupElement inverse(const GroupElement& g) {
    const Mat3 Rt = g.R().transpose();
    return {-(Rt * g.b()) / g.a(), Rt, 1.0 / g.a()};
}

Vec3 act_point(const GroupElement& g, const Vec3& x) { return g.b() + g.a() * (g.R() * x); }

double distance(const GroupElement& g, const GroupElement& h) {
    double d = (g.b() - h.b()).cwiseAbs().maxCoeff();
    d = std::max(d, (g.R() - h.R()).cwiseAbs().maxCoeff());
    return std::max(d, std::abs(g.a() - h.a()));
}

Vec3 unit_normal(double theta, double phi) {
    const double s = std::sin(phi);
    return {s * std::cos(theta), s * std::sin(theta), std::cos(phi)};
}

Mat3 rotation_x(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 R;
    R << 1, 0, 0, 0, c, -s, 0, s, c;
    return R;
}

Mat3 rotation_y(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 R;
    R << c, 0, s, 0, 1, 0, -s, 0, c;
    return R;
}

Mat3 rotation_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 R;
    R << c, -s, 0, s, c, 0, 0, 0, 1;
    return R;
}

Mat3 rotation_axis_angle(const Vec3& axis, double angle) {
    const double norm = axis.norm();
    if (norm < 1e-10)
        throw ZeroVector("rotation axis has zero length");
    return Eigen::AngleAxisd(angle, axis / norm).toRotationMatrix();
}

Mat3 rotation_from_angles(double theta, double phi) { return rotation_z(theta) * rotation_y(phi); }

Mat3 uniform_rotation(double u1, double u2, double u3) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double r1 = std::sqrt(1.0 - u1), r2 = std::sqrt(u1);
    Eigen::Quaterniond q(r2 * std::cos(two_pi * u3), r1 * std::sin(two_pi * u2),
                         r1 * std::cos(two_pi * u2), r2 * std::sin(two_pi * u3));
    q.normalize();
    return q.toRotationMatrix();
}

Mat3 project_to_rotation(const Mat3& M) {
    Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 U = svd.matrixU();
    const Mat3 V = svd.matrixV();
    if ((U * V.transpose()).determinant() < 0.0)
        U.col(2) *= -1.0;
    return U * V.transpose();
}

double orthogonality_residual(const Mat3& R) {
    return (R.transpose() * R - Mat3::Identity()).norm();
}

DirectionLabel canonicalize_direction(const Vec3& u) {
    const double norm = u.norm();
    if (!(norm >= 1e-10))
        throw ZeroVector("cannot canonicalize a zero direction");
    const Vec3 v = u / norm;
    if (std::abs(v.z()) > 1.0 - kPoleTolerance)
        return {0.0, 0.0, v.z() > 0.0 ? 1 : -1};

    // theta in [0, pi) and phi in (0, pi) force n_y >= 0, with n_x > 0 when n_y == 0.
    int sign = 1;
    if (v.y() < 0.0 || (v.y() == 0.0 && v.x() < 0.0))
        sign = -1;
    const Vec3 w = sign * v;
    const double phi = std::acos(std::clamp(w.z(), -1.0, 1.0));
    // adding +0 turns a -0 from atan2 into +0
    const double theta = std::atan2(w.y(), w.x()) + 0.0;
    return {theta, phi, sign};
}

PlaneLabel act_plane(const GroupElement& g, const PlaneLabel& xi) {
    const Vec3 rotated = g.R() * unit_normal(xi.theta, xi.phi);
    const DirectionLabel d = canonicalize_direction(rotated);
    return {d.theta, d.phi, d.sign * (g.a() * xi.t + rotated.dot(g.b()))};
}

LineLabel act_line(const GroupElement& g, const LineLabel& xi) {
    const Vec3 direction = g.R() * unit_normal(xi.theta, xi.phi);
    const DirectionLabel d = canonicalize_direction(direction);
    const Vec3 n = unit_normal(d.theta, d.phi);
    const Vec3 image = act_point(g, xi.t_perp);
    return {d.theta, d.phi, image - n.dot(image) * n};
}

GroupElement section_plane(const PlaneLabel& xi) {
    return {xi.t * unit_normal(xi.theta, xi.phi), rotation_from_angles(xi.theta, xi.phi), 1.0};
}

GroupElement section_line(const LineLabel& xi) {
    return {xi.t_perp, rotation_from_angles(xi.theta, xi.phi), 1.0};
}

bool same_plane(const PlaneLabel& p, const PlaneLabel& q, double tol) {
    const Vec3 np = unit_normal(p.theta, p.phi);
    const Vec3 nq = unit_normal(q.theta, q.phi);
    const bool direct = (np - nq).norm() <= tol && std::abs(p.t - q.t) <= tol;
    const bool flipped = (np + nq).norm() <= tol && std::abs(p.t + q.t) <= tol;
    return direct || flipped;
}

bool same_line(const LineLabel& p, const LineLabel& q, double tol) {
    const Vec3 np = unit_normal(p.theta, p.phi);
    const Vec3 nq = unit_normal(q.theta, q.phi);
    const bool parallel = (np - nq).norm() <= tol || (np + nq).norm() <= tol;
    return parallel && (p.t_perp - q.t_perp).norm() <= tol;
}

double haar_weight(const GroupElement& g) { return std::pow(g.a(), -4.0); }

double CharacterSet::alpha(const GroupElement& g) const { return std::pow(g.a(), 3.0); }

double CharacterSet::beta(const GroupElement& g) const {
    return geometry_ == Geometry::Plane ? g.a() : g.a() * g.a();
}

double CharacterSet::gamma(const GroupElement& g) const {
    return geometry_ == Geometry::Plane ? g.a() * g.a() : g.a();
}

double CharacterSet::chi(const GroupElement& g) const {
    return std::sqrt(alpha(g) / beta(g)) / gamma(g);
}

} // namespace simrad
