#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "symlab/errors.hpp"
#include "symlab/rng.hpp"

namespace symlab {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Input-validation tolerance for rotation matrices; self-consistency checks
// use the tighter 1e-6.
inline constexpr double kRotationInputTol = 1e-4;
inline constexpr double kRotationSelfTol = 1e-6;

inline bool is_rotation(const Mat3& R, double tol = kRotationSelfTol) {
    const Mat3 err = R.transpose() * R - Mat3::Identity();
    return err.cwiseAbs().maxCoeff() <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

// Rigid camera/viewpoint transform: x_world = R * x_local + t.
struct Pose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static Pose identity() { return {}; }

    bool valid(double tol = kRotationSelfTol) const { return is_rotation(rotation, tol); }

    Mat4 homogeneous() const {
        Mat4 m = Mat4::Identity();
        m.topLeftCorner<3, 3>() = rotation;
        m.topRightCorner<3, 1>() = translation;
        return m;
    }

    Vec3 transform_point(const Vec3& p) const { return rotation * p + translation; }
    Vec3 transform_vector(const Vec3& v) const { return rotation * v; }
};

// Composition: apply b first, then a (matrix convention a * b).
inline Pose compose(const Pose& a, const Pose& b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline Pose inverse(const Pose& p) {
    Mat3 rt = p.rotation.transpose();
    return {rt, -(rt * p.translation)};
}

// Pure rotation about an axis through the origin.
inline Pose axial_rotation(const Vec3& axis, double angle) {
    Pose g;
    g.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
    return g;
}

// Rotation angle of R, in [0, pi].
inline double rotation_angle(const Mat3& R) {
    const double c = std::min(1.0, std::max(-1.0, (R.trace() - 1.0) * 0.5));
    return std::acos(c);
}

// Geodesic distance between poses: angle of the relative rotation.
// Translation is ignored (viewpoints live on a fixed-radius sphere).
inline double pose_angular_distance(const Pose& a, const Pose& b) {
    return rotation_angle(a.rotation.transpose() * b.rotation);
}

// First two columns of R, concatenated. Continuous rotation encoding that a
// network can regress without wrap-around discontinuities.
inline Vec6 rotation_to_6d(const Mat3& R) {
    if (!is_rotation(R, kRotationInputTol))
        throw InvalidRotationError("rotation_to_6d: input is not a rotation matrix");
    Vec6 v;
    v.head<3>() = R.col(0);
    v.tail<3>() = R.col(1);
    return v;
}

// Gram-Schmidt reconstruction of the full rotation from its 6-D encoding.
inline Mat3 sixd_to_rotation(const Vec6& v) {
    const Vec3 a = v.head<3>();
    const Vec3 b = v.tail<3>();
    const double na = a.norm();
    if (na <= 1e-8) throw Degenerate6dError("sixd_to_rotation: first column has near-zero norm");
    const Vec3 c0 = a / na;
    const Vec3 proj = b - b.dot(c0) * c0;
    const double np = proj.norm();
    if (np <= 1e-8)
        throw Degenerate6dError("sixd_to_rotation: columns are parallel or second is near-zero");
    const Vec3 c1 = proj / np;
    Mat3 R;
    R.col(0) = c0;
    R.col(1) = c1;
    R.col(2) = c0.cross(c1);
    return R;
}

// Relative camera motion expressed in the source viewpoint's frame:
// 3 translation numbers plus the 6-D rotation encoding.
struct Action {
    Vec3 translation = Vec3::Zero();
    Vec6 rotation6d = (Vec6() << 1, 0, 0, 0, 1, 0).finished();

    static Action zero() { return {}; }

    Mat3 rotation() const { return sixd_to_rotation(rotation6d); }

    // 9-vector fed to the transition network.
    Vec9 encode() const {
        Vec9 e;
        e.head<3>() = translation;
        e.tail<6>() = rotation6d;
        return e;
    }
};

// Action moving the camera from v_from to v_to, in v_from's frame.
inline Action relative_action(const Pose& v_from, const Pose& v_to) {
    const Pose rel = compose(inverse(v_from), v_to);
    Action a;
    a.translation = rel.translation;
    a.rotation6d = rotation_to_6d(rel.rotation);
    return a;
}

inline Pose apply_action(const Pose& v, const Action& a) {
    return compose(v, Pose{a.rotation(), a.translation});
}

// Actions compose like the relative poses they encode.
inline Action compose_actions(const Action& a1, const Action& a2) {
    const Pose p1{a1.rotation(), a1.translation};
    const Pose p2{a2.rotation(), a2.translation};
    const Pose p = compose(p1, p2);
    Action a;
    a.translation = p.translation;
    a.rotation6d = rotation_to_6d(p.rotation);
    return a;
}

// Spherical viewpoint coordinates. World frame is right-handed with z up;
// azimuth is measured in the x-y plane from +x.
struct SphericalCoord {
    double azimuth = 0.0;    // [0, 2*pi)
    double elevation = 0.0;  // [-pi/2, pi/2]
    double radius = 1.0;     // > 0

    bool valid() const {
        return azimuth >= 0.0 && azimuth < kTwoPi && elevation >= -kPi / 2 &&
               elevation <= kPi / 2 && radius > 0.0;
    }
};

inline Vec3 spherical_to_offset(const SphericalCoord& c) {
    return {c.radius * std::cos(c.elevation) * std::cos(c.azimuth),
            c.radius * std::cos(c.elevation) * std::sin(c.azimuth),
            c.radius * std::sin(c.elevation)};
}

// Camera azimuth/elevation recovered from its position around a target.
inline SphericalCoord spherical_from_position(const Vec3& position, const Vec3& target) {
    const Vec3 d = position - target;
    SphericalCoord c;
    c.radius = d.norm();
    c.elevation = std::asin(std::min(1.0, std::max(-1.0, d.z() / c.radius)));
    c.azimuth = std::atan2(d.y(), d.x());
    if (c.azimuth < 0.0) c.azimuth += kTwoPi;
    return c;
}

// Look-at pose on the sphere around `target`. Camera axes: +z forward along
// the optical axis, +x right, +y up. Up-vector is world z, falling back to +x
// at the elevation poles.
inline Pose viewpoint_from_spherical(const SphericalCoord& c, const Vec3& target = Vec3::Zero()) {
    const Vec3 position = target + spherical_to_offset(c);
    const Vec3 forward = (target - position).normalized();
    Vec3 up = Vec3::UnitZ();
    if (std::abs(forward.dot(up)) > 1.0 - 1e-9) up = Vec3::UnitX();
    const Vec3 right = up.cross(forward).normalized();
    const Vec3 true_up = forward.cross(right);
    Pose p;
    p.rotation.col(0) = right;
    p.rotation.col(1) = true_up;
    p.rotation.col(2) = forward;
    p.translation = position;
    return p;
}

// Uniformly random rotation (quaternion method).
inline Mat3 random_rotation(Rng& rng) {
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    Eigen::Quaterniond q(b * std::cos(kTwoPi * u3), a * std::sin(kTwoPi * u2),
                         a * std::cos(kTwoPi * u2), b * std::sin(kTwoPi * u3));
    return q.toRotationMatrix();
}

inline Pose random_pose(Rng& rng, double translation_scale = 2.0) {
    Pose p;
    p.rotation = random_rotation(rng);
    p.translation = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)) *
                    translation_scale;
    return p;
}

}  // namespace symlab
