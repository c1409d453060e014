#ifndef SOAR_STEERING_HPP
#define SOAR_STEERING_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "soar/geometry.hpp"

namespace soar {

/// Gains of the circumnavigation steering law.
///
/// `b` is the largest factor by which the obstacle term may be amplified when
/// the robot has slipped all the way to the obstacle boundary; `c` and `eta`
/// scale the classic attractive/repulsive potentials, which are computed for
/// diagnostics only and never drive motion.
template <typename Scalar>
struct SteeringParamsT {
    Scalar b{3};
    Scalar c{1};
    Scalar eta{1};

    bool operator==(const SteeringParamsT&) const = default;
};

using SteeringParams = SteeringParamsT<double>;

/// Obstacle that currently governs steering.
template <typename Scalar>
struct ActiveObstacleT {
    Vec2T<Scalar> position{Vec2T<Scalar>::Zero()};
    Scalar surface_distance{0};
    Scalar d0{0};
    int id{-1};
};

using ActiveObstacle = ActiveObstacleT<double>;

template <typename Scalar>
struct SteeringDecisionT {
    Vec2T<Scalar> a_hat{Vec2T<Scalar>::Zero()};
    std::optional<Vec2T<Scalar>> r_hat;
    Scalar c1{0};
    Scalar c2{0};
    Vec2T<Scalar> v_hat{Vec2T<Scalar>::Zero()};
    std::optional<int> active_obstacle_id;
    bool tie_break_applied{false};
};

using SteeringDecision = SteeringDecisionT<double>;

/// Norm below which the steering sum is treated as the head-on singularity.
inline constexpr double kTieBreakThreshold = 1e-9;

template <typename Scalar>
Scalar attractive_potential(const Vec2T<Scalar>& x, const Vec2T<Scalar>& goal, Scalar c) {
    return c * (x - goal).squaredNorm();
}

/// Repulsive potential of the closest obstacle at distance `p`; zero outside d0.
template <typename Scalar>
Scalar repulsive_potential(Scalar p, Scalar d0, Scalar eta) {
    if (!(p > Scalar(0))) {
        throw std::domain_error("repulsive_potential: distance must be positive");
    }
    if (p > d0) return Scalar(0);
    const Scalar gap = Scalar(1) / p - Scalar(1) / d0;
    return eta * gap * gap;
}

/// Negated alignment of the goal and obstacle directions. Adding c1 * r_hat to
/// a_hat cancels the component of a_hat along r_hat.
template <typename Scalar>
Scalar c1(const Vec2T<Scalar>& a_hat, const Vec2T<Scalar>& r_hat) {
    return -a_hat.dot(r_hat);
}

/// Intrusion gain: 1 at the clearance boundary, rising linearly to b at contact.
template <typename Scalar>
Scalar c2(Scalar dist, Scalar d0, Scalar b) {
    if (!(d0 > Scalar(0))) {
        throw std::domain_error("c2: d0 must be positive");
    }
    if (!(b > Scalar(1))) {
        throw std::domain_error("c2: b must exceed 1");
    }
    if (dist < Scalar(0) || dist > d0) {
        throw std::domain_error("c2: distance outside [0, d0]");
    }
    if (dist == d0) return Scalar(1);
    // rounding can push the ramp a few ulps outside [1, b] near the ends
    return std::clamp((Scalar(1) - b) / d0 * dist + b, Scalar(1), b);
}

template <typename Scalar>
SteeringDecisionT<Scalar> steering_direction(const Vec2T<Scalar>& robot_pos,
                                             const Vec2T<Scalar>& goal,
                                             const std::optional<ActiveObstacleT<Scalar>>& active,
                                             const SteeringParamsT<Scalar>& params) {
    const Vec2T<Scalar> to_goal = goal - robot_pos;
    const Scalar goal_dist = to_goal.norm();
    if (!(goal_dist > Scalar(0))) {
        throw std::domain_error("steering_direction: robot position coincides with goal");
    }

    SteeringDecisionT<Scalar> out;
    out.a_hat = to_goal / goal_dist;
    // an obstacle outside its own clearance ring exerts nothing
    if (!active || !(active->d0 > Scalar(0)) || active->surface_distance > active->d0) {
        out.v_hat = out.a_hat;
        return out;
    }

    const Vec2T<Scalar> to_obstacle = active->position - robot_pos;
    const Scalar obstacle_dist = to_obstacle.norm();
    if (!(obstacle_dist > Scalar(0))) {
        throw std::domain_error("steering_direction: robot position coincides with obstacle");
    }
    const Vec2T<Scalar> r_hat = to_obstacle / obstacle_dist;

    out.r_hat = r_hat;
    out.active_obstacle_id = active->id;
    out.c1 = c1(out.a_hat, r_hat);
    out.c2 = c2(active->surface_distance, active->d0, params.b);

    // The intrusion gain only amplifies c1 * r_hat while that term points away
    // from the obstacle (c1 < 0). When the goal lies away from it (c1 > 0)
    // amplifying it would pull the robot inward; the tangent is kept instead.
    const Scalar gain = out.c1 < Scalar(0) ? out.c2 : Scalar(1);
    const Vec2T<Scalar> sum = out.a_hat + out.c1 * gain * r_hat;
    const Scalar norm = sum.norm();
    if (norm < Scalar(kTieBreakThreshold)) {
        out.v_hat = left_perpendicular(r_hat);
        out.tie_break_applied = true;
    } else {
        out.v_hat = sum / norm;
    }
    return out;
}

}  // namespace soar

#endif  // SOAR_STEERING_HPP
