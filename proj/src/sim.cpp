#include "soar/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "soar/perception.hpp"
#include "soar/world.hpp"

namespace soar {

namespace {

// Sub-stream tags so perception noise and gusts never share an engine.
constexpr std::uint64_t kPerceptionStream = 0x70657263;  // "perc"
constexpr std::uint64_t kGustStream = 0x67757374;        // "gust"

constexpr double kTimeSlack = 1e-9;

double min_avoidable_clearance(std::span<const ObstacleInstance> world, const ClearancePolicy& policy,
                               const Vec2& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : world) {
        if (policy.d0(o.class_label) > 0.0) best = std::min(best, o.surface_distance(p));
    }
    return best;
}

struct RememberedObstacle {
    LabeledObstacleEstimate estimate;
    double radius{0.0};
    double last_seen{0.0};
};

/// Last-seen obstacle memory; entries expire after `ttl` seconds unseen.
class ObstacleMemory {
public:
    explicit ObstacleMemory(double ttl) : ttl_(ttl) {}

    std::vector<LabeledObstacleEstimate> update(const PerceptionFrame& frame,
                                                std::vector<LabeledObstacleEstimate> fresh,
                                                double now) {
        if (ttl_ <= 0.0) return fresh;

        std::map<int, double> radii;
        for (const auto& det : frame.detections) radii[det.instance_id] = det.radius_m.value_or(0.0);
        for (const auto& e : fresh) {
            entries_[e.source_instance] = {e, radii[e.source_instance], now};
        }

        const Vec2& eye = frame.camera_pose.position;
        std::vector<LabeledObstacleEstimate> out = std::move(fresh);
        for (auto it = entries_.begin(); it != entries_.end();) {
            auto& m = it->second;
            if (now - m.last_seen > ttl_) {
                it = entries_.erase(it);
                continue;
            }
            if (m.last_seen < now) {
                LabeledObstacleEstimate e = m.estimate;
                e.surface_distance = std::max(0.0, (e.position - eye).norm() - m.radius);
                out.push_back(std::move(e));
            }
            ++it;
        }
        return out;
    }

private:
    double ttl_;
    std::map<int, RememberedObstacle> entries_;
};

}  // namespace

std::string_view to_string(Mode mode) {
    return mode == Mode::soar ? "soar" : "non_soar";
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::goal_reached: return "goal_reached";
        case Outcome::timeout: return "timeout";
        case Outcome::wrong_direction: return "wrong_direction";
        case Outcome::stuck: return "stuck";
        case Outcome::collision: return "collision";
    }
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
    if (text == "soar") return Mode::soar;
    if (text == "non_soar" || text == "non-soar") return Mode::non_soar;
    return std::nullopt;
}

std::optional<Outcome> parse_outcome(std::string_view text) {
    for (auto o : {Outcome::goal_reached, Outcome::timeout, Outcome::wrong_direction,
                   Outcome::stuck, Outcome::collision}) {
        if (to_string(o) == text) return o;
    }
    return std::nullopt;
}

RobotState step(const RobotState& state, const Vec2& v_hat, const RobotParams& params,
                const Vec2& goal, const Vec2& disturbance, double dt) {
    RobotState next = state;

    const double max_turn = params.max_turn_rate * dt;
    const double error = normalize_angle(heading_of(v_hat) - state.heading);
    next.heading = normalize_angle(state.heading + std::clamp(error, -max_turn, max_turn));

    const double goal_dist = (goal - state.position).norm();
    next.speed = params.cruise_speed * std::min(1.0, goal_dist / params.slowdown_radius);

    next.position = state.position + next.speed * dt * unit_from_angle(next.heading) + disturbance * dt;
    next.time = state.time + dt;
    return next;
}

std::optional<Outcome> detect_termination(std::span<const RobotState> history,
                                          const ScenarioSpec& spec) {
    if (history.empty()) return std::nullopt;
    const RobotState& now = history.back();

    const double goal_dist = (spec.goal - now.position).norm();
    if (goal_dist <= spec.goal_radius) return Outcome::goal_reached;

    const auto world = obstacles_at(spec.obstacles, now.time);
    if (min_avoidable_clearance(world, spec.policy, now.position) <= spec.robot.collision_radius) {
        return Outcome::collision;
    }

    const auto& term = spec.termination;
    if (now.time + kTimeSlack >= term.stuck_window_s) {
        // latest state at or before now - window
        const double cutoff = now.time - term.stuck_window_s + kTimeSlack;
        const auto it = std::upper_bound(history.begin(), history.end(), cutoff,
                                         [](double t, const RobotState& s) { return t < s.time; });
        if (it != history.begin()) {
            const RobotState& then = *std::prev(it);
            if ((now.position - then.position).norm() < term.stuck_epsilon_m) return Outcome::stuck;
        }
    }

    const double initial_dist = (spec.goal - history.front().position).norm();
    if (goal_dist > term.wrong_dir_factor * initial_dist) return Outcome::wrong_direction;

    if (now.time + kTimeSlack >= spec.time_limit) return Outcome::timeout;
    return std::nullopt;
}

TrialResult run_trial(const ScenarioSpec& spec, Mode mode, std::uint64_t seed) {
    validate(spec);

    TrialResult result;
    result.scenario = spec.name;
    result.mode = mode;
    result.seed = seed;

    const std::uint64_t perception_seed = derive_seed(seed, kPerceptionStream);
    std::mt19937_64 gust_engine(derive_seed(seed, kGustStream));
    std::normal_distribution<double> gust(0.0, 1.0);

    const ClearancePolicy opaque_policy{{}, spec.uniform_d0};
    const ClearancePolicy& steering_policy = mode == Mode::soar ? spec.policy : opaque_policy;
    ObstacleMemory memory(spec.sensor.memory_ttl_s);

    const double dt = spec.robot.dt;
    RobotState state;
    state.position = spec.start.position;
    state.heading = normalize_angle(spec.start.heading);

    std::vector<RobotState> history{state};
    auto record = [&](const RobotState& s, TickSummary tick, std::span<const ObstacleInstance> world) {
        tick.min_clearance = min_avoidable_clearance(world, spec.policy, s.position);
        for (const auto& o : world) {
            auto [it, inserted] = result.min_clearance_by_class.try_emplace(
                o.class_label, std::numeric_limits<double>::infinity());
            it->second = std::min(it->second, o.surface_distance(s.position));
        }
        result.trajectory.push_back({s.time, s.position, s.heading, s.speed});
        result.tick_log.push_back(tick);
    };

    {
        const auto world = obstacles_at(spec.obstacles, 0.0);
        TickSummary first;
        first.attractive_potential = attractive_potential(state.position, spec.goal, spec.steering.c);
        record(state, first, world);
    }

    std::optional<Outcome> outcome = detect_termination(history, spec);
    for (std::uint64_t tick = 1; !outcome; ++tick) {
        const double t_next = static_cast<double>(tick) * dt;

        // obstacles advance first, then the robot perceives and moves
        const auto world = obstacles_at(spec.obstacles, t_next);
        const Pose pose{state.position, state.heading};
        const auto frame = sense(world, pose, spec.sensor.rig, spec.sensor.noise,
                                 FrameNoise{perception_seed, tick});
        auto fused = fuse(frame, spec.sensor.rig);
        result.dropped_detections += fused.dropped;
        auto estimates = memory.update(frame, std::move(fused.estimates), t_next);
        if (mode == Mode::non_soar) {
            for (auto& e : estimates) e.class_label = kOpaqueClass;
        }

        std::optional<ActiveObstacle> active;
        if (const auto eff = nearest_effective_obstacle(estimates, steering_policy)) {
            active = ActiveObstacle{eff->estimate.position, eff->estimate.surface_distance, eff->d0,
                                    eff->estimate.source_instance};
        }
        const auto decision = steering_direction(state.position, spec.goal, active, spec.steering);

        Vec2 disturbance = spec.disturbance.constant_drift;
        const double gx = gust(gust_engine);
        const double gy = gust(gust_engine);
        disturbance += spec.disturbance.gust_std * Vec2(gx, gy);

        RobotState next = step(state, decision.v_hat, spec.robot, spec.goal, disturbance, dt);
        next.time = t_next;
        result.path_length += (next.position - state.position).norm();

        TickSummary summary;
        summary.active_obstacle_id = decision.active_obstacle_id;
        summary.c1 = decision.c1;
        summary.c2 = decision.c2;
        summary.tie_break_applied = decision.tie_break_applied;
        summary.attractive_potential = attractive_potential(state.position, spec.goal, spec.steering.c);
        if (active) {
            summary.repulsive_potential =
                active->surface_distance > 0.0
                    ? repulsive_potential(active->surface_distance, active->d0, spec.steering.eta)
                    : std::numeric_limits<double>::infinity();
        }

        state = next;
        history.push_back(state);
        record(state, summary, world);
        outcome = detect_termination(history, spec);
    }

    result.outcome = *outcome;
    result.travel_time = std::min(state.time, spec.time_limit);
    return result;
}

}  // namespace soar
