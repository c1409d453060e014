#ifndef SOAR_SIM_HPP
#define SOAR_SIM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soar/geometry.hpp"
#include "soar/scenario.hpp"
#include "soar/steering.hpp"

namespace soar {

enum class Mode { soar, non_soar };

enum class Outcome { goal_reached, timeout, wrong_direction, stuck, collision };

std::string_view to_string(Mode mode);
std::string_view to_string(Outcome outcome);
std::optional<Mode> parse_mode(std::string_view text);
std::optional<Outcome> parse_outcome(std::string_view text);

/// Class every detection is relabeled to when semantics are withheld.
inline constexpr std::string_view kOpaqueClass = "obstacle";

struct RobotState {
    Vec2 position{Vec2::Zero()};
    double heading{0.0};
    double speed{0.0};
    double time{0.0};
};

/// Kinematic update: turn toward `v_hat` under the turn-rate limit, then advance.
///
/// Speed is cruise_speed, ramped linearly to zero inside slowdown_radius of the
/// goal. The disturbance is a velocity added on top of the commanded motion.
RobotState step(const RobotState& state, const Vec2& v_hat, const RobotParams& params,
                const Vec2& goal, const Vec2& disturbance, double dt);

/// Returns the outcome that ends the trial at the last state of `history`, if any.
///
/// Checked in order: goal reached, collision (true class, scenario policy),
/// stuck, wrong direction, timeout.
std::optional<Outcome> detect_termination(std::span<const RobotState> history,
                                          const ScenarioSpec& spec);

struct TrajectoryPoint {
    double time{0.0};
    Vec2 position{Vec2::Zero()};
    double heading{0.0};
    double speed{0.0};
};

/// Steering summary for the tick that produced the matching trajectory point.
struct TickSummary {
    std::optional<int> active_obstacle_id;
    double c1{0.0};
    double c2{0.0};
    bool tie_break_applied{false};
    /// Smallest surface distance to any obstacle whose true class must be avoided.
    double min_clearance{0.0};
    double attractive_potential{0.0};
    double repulsive_potential{0.0};
};

struct TrialResult {
    std::string scenario;
    Mode mode{Mode::soar};
    std::uint64_t seed{0};
    Outcome outcome{Outcome::timeout};
    double travel_time{0.0};
    double path_length{0.0};
    std::map<std::string, double> min_clearance_by_class;
    std::vector<TrajectoryPoint> trajectory;
    std::vector<TickSummary> tick_log;
    int dropped_detections{0};
};

/// Runs one closed-loop trial: sense, fuse, choose the governing obstacle,
/// steer, move, until a termination fires. Bit-identical for equal inputs.
TrialResult run_trial(const ScenarioSpec& spec, Mode mode, std::uint64_t seed);

}  // namespace soar

#endif  // SOAR_SIM_HPP
