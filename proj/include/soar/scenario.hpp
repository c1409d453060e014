#ifndef SOAR_SCENARIO_HPP
#define SOAR_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "soar/geometry.hpp"
#include "soar/perception.hpp"
#include "soar/steering.hpp"
#include "soar/world.hpp"

namespace soar {

inline constexpr int kScenarioFormatVersion = 1;

struct RobotParams {
    double cruise_speed{0.5};
    double max_turn_rate{2.0};
    double slowdown_radius{1.0};
    double collision_radius{0.2};
    double dt{0.05};

    bool operator==(const RobotParams&) const = default;
};

struct DisturbanceSpec {
    Vec2 constant_drift{Vec2::Zero()};
    double gust_std{0.0};

    bool operator==(const DisturbanceSpec&) const = default;
};

/// Thresholds for the non-goal terminations.
struct TerminationParams {
    double stuck_window_s{5.0};
    double stuck_epsilon_m{0.05};
    double wrong_dir_factor{1.5};

    bool operator==(const TerminationParams&) const = default;
};

struct ScenarioSpec {
    std::string name;
    std::vector<ObstacleInstance> obstacles;
    Pose start;
    Vec2 goal{Vec2::Zero()};
    double goal_radius{0.3};
    RobotParams robot;
    DisturbanceSpec disturbance;
    ClearancePolicy policy;
    double uniform_d0{1.0};
    double time_limit{120.0};
    std::uint64_t seed{42};
    SteeringParams steering;
    SensorConfig sensor;
    TerminationParams termination;

    bool operator==(const ScenarioSpec&) const = default;
};

/// Parse or validation failure. `path` names the offending field
/// (e.g. "obstacles[2].radius"); `line` is 1-based, 0 when unknown.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string path, int line, const std::string& message);

    const std::string& path() const { return path_; }
    int line() const { return line_; }

private:
    std::string path_;
    int line_;
};

/// Checks every scenario invariant; throws ScenarioError on the first violation.
void validate(const ScenarioSpec& spec);

ScenarioSpec load_scenario(const std::string& text);
ScenarioSpec load_scenario_file(const std::filesystem::path& path);

/// Emits a document that load_scenario maps back to an equal ScenarioSpec.
std::string serialize_scenario(const ScenarioSpec& spec);

}  // namespace soar

#endif  // SOAR_SCENARIO_HPP
