#ifndef SOAR_GEOMETRY_HPP
#define SOAR_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace soar {

template <typename Scalar>
using Vec2T = Eigen::Matrix<Scalar, 2, 1>;

using Vec2 = Vec2T<double>;

/// Planar pose: position plus heading (radians, counter-clockwise from +x).
template <typename Scalar>
struct PoseT {
    Vec2T<Scalar> position{Vec2T<Scalar>::Zero()};
    Scalar heading{0};

    bool operator==(const PoseT&) const = default;
};

using Pose = PoseT<double>;

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar angle) {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    constexpr Scalar two_pi = 2 * pi;
    angle = std::fmod(angle, two_pi);
    if (angle <= -pi) angle += two_pi;
    if (angle > pi) angle -= two_pi;
    return angle;
}

template <typename Scalar>
Vec2T<Scalar> unit_from_angle(Scalar angle) {
    return Vec2T<Scalar>(std::cos(angle), std::sin(angle));
}

/// Rotates a vector by +90 degrees.
template <typename Derived>
Vec2T<typename Derived::Scalar> left_perpendicular(const Eigen::MatrixBase<Derived>& v) {
    return Vec2T<typename Derived::Scalar>(-v.y(), v.x());
}

template <typename Derived>
typename Derived::Scalar heading_of(const Eigen::MatrixBase<Derived>& v) {
    return std::atan2(v.y(), v.x());
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
    return v.allFinite();
}

/// Shortest distance from point p to the segment [a, b].
template <typename Scalar>
Scalar point_segment_distance(const Vec2T<Scalar>& p, const Vec2T<Scalar>& a,
                              const Vec2T<Scalar>& b) {
    const Vec2T<Scalar> ab = b - a;
    const Scalar len2 = ab.squaredNorm();
    if (len2 == Scalar(0)) return (p - a).norm();
    Scalar t = (p - a).dot(ab) / len2;
    t = std::clamp(t, Scalar(0), Scalar(1));
    return (p - (a + t * ab)).norm();
}

}  // namespace soar

#endif  // SOAR_GEOMETRY_HPP
