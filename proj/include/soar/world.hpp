#ifndef SOAR_WORLD_HPP
#define SOAR_WORLD_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soar/geometry.hpp"

namespace soar {

/// Closed-loop patrol: center -> waypoints[0] -> ... -> waypoints[n-1] -> center.
struct WaypointLoop {
    std::vector<Vec2> waypoints;
    double speed{0.0};

    bool operator==(const WaypointLoop&) const = default;
};

/// A labeled disc obstacle. `center` is the position at t = 0.
struct ObstacleInstance {
    int id{0};
    std::string class_label;
    Vec2 center{Vec2::Zero()};
    double radius{0.0};
    std::optional<WaypointLoop> motion;

    bool operator==(const ObstacleInstance&) const = default;

    bool is_static() const { return !motion.has_value(); }

    Vec2 position_at(double t) const;

    /// Distance from `p` to the disc boundary, clamped at zero.
    double surface_distance(const Vec2& p) const {
        return std::max(0.0, (p - center).norm() - radius);
    }
};

/// Copies of `obstacles` with centers advanced to time `t`.
std::vector<ObstacleInstance> obstacles_at(std::span<const ObstacleInstance> obstacles, double t);

/// Per-class clearance distances. A d0 of zero marks a class the robot may drive through.
struct ClearancePolicy {
    std::map<std::string, double> entries;
    double default_d0{1.0};

    bool operator==(const ClearancePolicy&) const = default;

    double d0(const std::string& class_label) const;
};

double effective_d0(const ClearancePolicy& policy, const std::string& class_label);

/// An obstacle as recovered by the perception pipeline.
struct LabeledObstacleEstimate {
    std::string class_label;
    Vec2 position{Vec2::Zero()};
    double surface_distance{0.0};
    int source_instance{-1};
};

struct EffectiveObstacle {
    LabeledObstacleEstimate estimate;
    double d0{0.0};

    double intrusion() const { return d0 - estimate.surface_distance; }
};

/// Picks the estimate that intrudes deepest into its own clearance ring.
///
/// Only estimates with d0 > 0 and surface_distance <= d0 qualify. Ties on
/// intrusion go to the smaller surface distance, then the smaller instance id.
std::optional<EffectiveObstacle> nearest_effective_obstacle(
    std::span<const LabeledObstacleEstimate> estimates, const ClearancePolicy& policy);

}  // namespace soar

#endif  // SOAR_WORLD_HPP
