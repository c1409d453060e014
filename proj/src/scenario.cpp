#include "soar/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace soar {

ScenarioError::ScenarioError(std::string path, int line, const std::string& message)
    : std::runtime_error(path.empty() ? message
                         : line > 0   ? path + " (line " + std::to_string(line) + "): " + message
                                      : path + ": " + message),
      path_(std::move(path)),
      line_(line) {}

namespace {

constexpr double kPi = std::numbers::pi;

int line_of(const YAML::Node& node) {
    const auto mark = node.Mark();
    return mark.line >= 0 ? mark.line + 1 : 0;
}

/// Walks one mapping node, remembering which keys were consumed so that
/// leftovers can be reported as unknown.
class MapReader {
public:
    MapReader(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (!node_.IsMap()) {
            throw ScenarioError(path_.empty() ? "<document>" : path_, line_of(node_),
                                "expected a mapping");
        }
    }

    std::string child_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    std::optional<YAML::Node> get(const std::string& key) {
        seen_.insert(key);
        YAML::Node child = node_[key];
        if (!child.IsDefined() || child.IsNull()) return std::nullopt;
        return child;
    }

    YAML::Node require(const std::string& key) {
        auto child = get(key);
        if (!child) throw ScenarioError(child_path(key), line_of(node_), key + " required");
        return *child;
    }

    template <typename T>
    T scalar(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) {
            throw ScenarioError(child_path(key), line_of(n), "expected a scalar value");
        }
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            throw ScenarioError(child_path(key), line_of(n),
                                "cannot parse '" + n.Scalar() + "'");
        }
    }

    template <typename T>
    T value(const std::string& key, T fallback) {
        auto n = get(key);
        return n ? scalar<T>(*n, key) : fallback;
    }

    template <typename T>
    T required_value(const std::string& key) {
        return scalar<T>(require(key), key);
    }

    void finish() const {
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.contains(key)) {
                throw ScenarioError(child_path(key), line_of(kv.first), "unknown key '" + key + "'");
            }
        }
    }

    const std::string& path() const { return path_; }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

Vec2 read_point(const YAML::Node& n, const std::string& path) {
    MapReader r(n, path);
    Vec2 p(r.required_value<double>("x"), r.required_value<double>("y"));
    r.finish();
    return p;
}

ObstacleInstance read_obstacle(const YAML::Node& n, const std::string& path) {
    MapReader r(n, path);
    ObstacleInstance o;
    o.id = r.required_value<int>("id");
    o.class_label = r.required_value<std::string>("class");
    o.center = Vec2(r.required_value<double>("x"), r.required_value<double>("y"));
    o.radius = r.required_value<double>("radius");
    if (auto m = r.get("motion")) {
        MapReader mr(*m, r.child_path("motion"));
        const auto type = mr.value<std::string>("type", "static");
        if (type == "waypoint_loop") {
            WaypointLoop loop;
            loop.speed = mr.required_value<double>("speed");
            const auto wps = mr.require("waypoints");
            if (!wps.IsSequence()) {
                throw ScenarioError(mr.child_path("waypoints"), line_of(wps), "expected a list");
            }
            for (std::size_t i = 0; i < wps.size(); ++i) {
                loop.waypoints.push_back(
                    read_point(wps[i], mr.child_path("waypoints") + "[" + std::to_string(i) + "]"));
            }
            o.motion = std::move(loop);
        } else if (type != "static") {
            throw ScenarioError(mr.child_path("type"), line_of(*m),
                                "unknown motion type '" + type + "'");
        }
        mr.finish();
    }
    r.finish();
    return o;
}

void read_sensor(const YAML::Node& n, SensorConfig& sensor) {
    MapReader r(n, "sensor");
    const StereoRig defaults;
    const double f = r.value("focal_px", defaults.focal_px());
    const double baseline = r.value("baseline_m", defaults.baseline_m());
    const double cx = r.value("cx", defaults.cx());
    const double cy = r.value("cy", defaults.cy());
    const int width = r.value("width", defaults.width());
    const int height = r.value("height", defaults.height());
    if (!(f > 0.0)) throw ScenarioError("sensor.focal_px", line_of(n), "focal_px > 0 violated");
    if (!(baseline > 0.0)) {
        throw ScenarioError("sensor.baseline_m", line_of(n), "baseline_m > 0 violated");
    }
    sensor.rig = StereoRig(f, baseline, cx, cy, width, height);

    auto& noise = sensor.noise;
    noise.fov_deg = r.value("fov_deg", noise.fov_deg);
    noise.max_range_m = r.value("max_range_m", noise.max_range_m);
    noise.disparity_std = r.value("disparity_std", noise.disparity_std);
    noise.misclassify_prob = r.value("misclassify_prob", noise.misclassify_prob);
    noise.samples_per_mask = r.value("samples_per_mask", noise.samples_per_mask);
    if (auto c = r.get("confusion")) {
        MapReader cr(*c, "sensor.confusion");
        for (const auto& kv : *c) {
            const auto key = kv.first.as<std::string>();
            noise.confusion[key] = cr.required_value<std::string>(key);
        }
        cr.finish();
    }
    sensor.memory_ttl_s = r.value("memory_ttl_s", sensor.memory_ttl_s);
    r.finish();
}

ScenarioSpec from_document(const YAML::Node& root) {
    MapReader top(root, "");
    const auto version_node = top.get("format_version");
    if (!version_node) throw ScenarioError("format_version", 0, "format_version required");
    const int version = top.scalar<int>(*version_node, "format_version");
    if (version != kScenarioFormatVersion) {
        throw ScenarioError("format_version", line_of(*version_node),
                            "unsupported format_version " + std::to_string(version));
    }

    ScenarioSpec spec;
    spec.name = top.required_value<std::string>("name");
    spec.time_limit = top.value("time_limit_s", spec.time_limit);
    spec.seed = top.value("seed", spec.seed);
    spec.uniform_d0 = top.value("uniform_d0", spec.uniform_d0);

    {
        MapReader r(top.require("start"), "start");
        spec.start.position = Vec2(r.required_value<double>("x"), r.required_value<double>("y"));
        spec.start.heading = r.value("heading", 0.0);
        r.finish();
    }
    {
        MapReader r(top.require("goal"), "goal");
        spec.goal = Vec2(r.required_value<double>("x"), r.required_value<double>("y"));
        spec.goal_radius = r.value("radius", spec.goal_radius);
        r.finish();
    }
    if (auto n = top.get("robot")) {
        MapReader r(*n, "robot");
        auto& rp = spec.robot;
        rp.cruise_speed = r.value("cruise_speed", rp.cruise_speed);
        rp.max_turn_rate = r.value("max_turn_rate", rp.max_turn_rate);
        rp.slowdown_radius = r.value("slowdown_radius", rp.slowdown_radius);
        rp.collision_radius = r.value("collision_radius", rp.collision_radius);
        rp.dt = r.value("dt", rp.dt);
        r.finish();
    }
    if (auto n = top.get("disturbance")) {
        MapReader r(*n, "disturbance");
        auto& d = spec.disturbance;
        d.constant_drift = Vec2(r.value("drift_x", 0.0), r.value("drift_y", 0.0));
        d.gust_std = r.value("gust_std", d.gust_std);
        r.finish();
    }
    if (auto n = top.get("policy")) {
        MapReader r(*n, "policy");
        spec.policy.default_d0 = r.value("default_d0", spec.policy.default_d0);
        if (auto c = r.get("classes")) {
            MapReader cr(*c, "policy.classes");
            for (const auto& kv : *c) {
                const auto key = kv.first.as<std::string>();
                spec.policy.entries[key] = cr.required_value<double>(key);
            }
            cr.finish();
        }
        r.finish();
    }
    if (auto n = top.get("steering")) {
        MapReader r(*n, "steering");
        spec.steering.b = r.value("b", spec.steering.b);
        spec.steering.c = r.value("c", spec.steering.c);
        spec.steering.eta = r.value("eta", spec.steering.eta);
        r.finish();
    }
    if (auto n = top.get("termination")) {
        MapReader r(*n, "termination");
        auto& t = spec.termination;
        t.stuck_window_s = r.value("stuck_window_s", t.stuck_window_s);
        t.stuck_epsilon_m = r.value("stuck_epsilon_m", t.stuck_epsilon_m);
        t.wrong_dir_factor = r.value("wrong_dir_factor", t.wrong_dir_factor);
        r.finish();
    }
    if (auto n = top.get("sensor")) read_sensor(*n, spec.sensor);
    if (auto n = top.get("obstacles")) {
        if (!n->IsSequence()) throw ScenarioError("obstacles", line_of(*n), "expected a list");
        for (std::size_t i = 0; i < n->size(); ++i) {
            spec.obstacles.push_back(
                read_obstacle((*n)[i], "obstacles[" + std::to_string(i) + "]"));
        }
    }
    top.finish();
    return spec;
}

// validation

void check(bool ok, const std::string& path, const std::string& message) {
    if (!ok) throw ScenarioError(path, 0, message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const ScenarioSpec& spec) {
    check(!spec.name.empty(), "name", "name must be non-empty");
    check(spec.start.position.allFinite() && finite(spec.start.heading), "start",
          "start must be finite");
    check(spec.goal.allFinite(), "goal", "goal must be finite");
    check(finite(spec.goal_radius) && spec.goal_radius > 0.0, "goal.radius",
          "goal radius > 0 violated");
    check(finite(spec.time_limit) && spec.time_limit > 0.0, "time_limit_s",
          "time_limit_s > 0 violated");
    check(finite(spec.uniform_d0) && spec.uniform_d0 >= 0.0, "uniform_d0", "uniform_d0 >= 0 violated");

    const auto& rp = spec.robot;
    check(finite(rp.cruise_speed) && rp.cruise_speed > 0.0, "robot.cruise_speed",
          "cruise_speed > 0 violated");
    check(finite(rp.max_turn_rate) && rp.max_turn_rate > 0.0, "robot.max_turn_rate",
          "max_turn_rate > 0 violated");
    check(finite(rp.slowdown_radius) && rp.slowdown_radius >= spec.goal_radius,
          "robot.slowdown_radius", "slowdown_radius >= goal radius violated");
    check(finite(rp.collision_radius) && rp.collision_radius >= 0.0, "robot.collision_radius",
          "collision_radius >= 0 violated");
    check(finite(rp.dt) && rp.dt > 0.0 && rp.dt <= 0.1, "robot.dt", "0 < dt <= 0.1 violated");

    check(spec.disturbance.constant_drift.allFinite(), "disturbance", "drift must be finite");
    check(finite(spec.disturbance.gust_std) && spec.disturbance.gust_std >= 0.0,
          "disturbance.gust_std", "gust_std >= 0 violated");

    check(finite(spec.policy.default_d0) && spec.policy.default_d0 >= 0.0, "policy.default_d0",
          "default_d0 >= 0 violated");
    for (const auto& [label, d0] : spec.policy.entries) {
        check(finite(d0) && d0 >= 0.0, "policy.classes." + label, label + ": d0 >= 0 violated");
    }

    const auto& st = spec.steering;
    check(finite(st.b) && st.b > 1.0, "steering.b", "b > 1 violated");
    check(finite(st.c) && st.c > 0.0, "steering.c", "c > 0 violated");
    check(finite(st.eta) && st.eta > 0.0, "steering.eta", "eta > 0 violated");

    const auto& t = spec.termination;
    check(finite(t.stuck_window_s) && t.stuck_window_s > 0.0, "termination.stuck_window_s",
          "stuck_window_s > 0 violated");
    check(finite(t.stuck_epsilon_m) && t.stuck_epsilon_m >= 0.0, "termination.stuck_epsilon_m",
          "stuck_epsilon_m >= 0 violated");
    check(finite(t.wrong_dir_factor) && t.wrong_dir_factor > 1.0, "termination.wrong_dir_factor",
          "wrong_dir_factor > 1 violated");

    const auto& noise = spec.sensor.noise;
    check(finite(noise.disparity_std) && noise.disparity_std >= 0.0, "sensor.disparity_std",
          "disparity_std >= 0 violated");
    check(noise.misclassify_prob >= 0.0 && noise.misclassify_prob <= 1.0, "sensor.misclassify_prob",
          "misclassify_prob in [0, 1] violated");
    check(noise.fov_deg > 0.0 && noise.fov_deg <= 360.0, "sensor.fov_deg",
          "fov_deg in (0, 360] violated");
    check(finite(noise.max_range_m) && noise.max_range_m > 0.0, "sensor.max_range_m",
          "max_range_m > 0 violated");
    check(noise.samples_per_mask >= 1, "sensor.samples_per_mask", "samples_per_mask >= 1 violated");
    check(finite(spec.sensor.memory_ttl_s) && spec.sensor.memory_ttl_s >= 0.0,
          "sensor.memory_ttl_s", "memory_ttl_s >= 0 violated");

    std::set<int> ids;
    for (std::size_t i = 0; i < spec.obstacles.size(); ++i) {
        const auto& o = spec.obstacles[i];
        const std::string path = "obstacles[" + std::to_string(i) + "]";
        const std::string who = "obstacle id " + std::to_string(o.id) + ": ";
        check(ids.insert(o.id).second, path + ".id", who + "id must be unique");
        check(!o.class_label.empty(), path + ".class", who + "class must be non-empty");
        check(o.center.allFinite(), path, who + "position must be finite");
        check(finite(o.radius) && o.radius >= 0.0, path + ".radius", who + "radius >= 0 violated");
        if (o.motion) {
            check(finite(o.motion->speed) && o.motion->speed >= 0.0, path + ".motion.speed",
                  who + "waypoint speed >= 0 violated");
            check(!o.motion->waypoints.empty(), path + ".motion.waypoints",
                  who + "waypoint list must be non-empty");
            for (const auto& w : o.motion->waypoints) {
                check(w.allFinite(), path + ".motion.waypoints", who + "waypoints must be finite");
            }
        }

        const double d0 = spec.policy.d0(o.class_label);
        if (d0 > 0.0) {
            check((spec.goal - o.center).norm() > o.radius + d0, "goal",
                  "goal lies inside the clearance region of obstacle id " + std::to_string(o.id));
            check(o.surface_distance(spec.start.position) > rp.collision_radius, "start",
                  "start collides with obstacle id " + std::to_string(o.id));
        }
    }
}

ScenarioSpec load_scenario(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ScenarioError("<document>", e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
    }
    if (!root.IsDefined() || root.IsNull()) {
        throw ScenarioError("format_version", 0, "format_version required");
    }
    auto spec = from_document(root);
    validate(spec);
    return spec;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

namespace {

// Shortest text that parses back to the same double.
std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string serialize_scenario(const ScenarioSpec& spec) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "format_version" << YAML::Value << kScenarioFormatVersion;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << spec.name;
    out << YAML::Key << "time_limit_s" << YAML::Value << num(spec.time_limit);
    out << YAML::Key << "seed" << YAML::Value << spec.seed;
    out << YAML::Key << "uniform_d0" << YAML::Value << num(spec.uniform_d0);

    out << YAML::Key << "start" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "x" << YAML::Value << num(spec.start.position.x())
        << YAML::Key << "y" << YAML::Value << num(spec.start.position.y())
        << YAML::Key << "heading" << YAML::Value << num(spec.start.heading) << YAML::EndMap;
    out << YAML::Key << "goal" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "x" << YAML::Value << num(spec.goal.x())
        << YAML::Key << "y" << YAML::Value << num(spec.goal.y())
        << YAML::Key << "radius" << YAML::Value << num(spec.goal_radius) << YAML::EndMap;

    const auto& rp = spec.robot;
    out << YAML::Key << "robot" << YAML::Value << YAML::BeginMap
        << YAML::Key << "cruise_speed" << YAML::Value << num(rp.cruise_speed)
        << YAML::Key << "max_turn_rate" << YAML::Value << num(rp.max_turn_rate)
        << YAML::Key << "slowdown_radius" << YAML::Value << num(rp.slowdown_radius)
        << YAML::Key << "collision_radius" << YAML::Value << num(rp.collision_radius)
        << YAML::Key << "dt" << YAML::Value << num(rp.dt) << YAML::EndMap;

    const auto& d = spec.disturbance;
    out << YAML::Key << "disturbance" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "drift_x" << YAML::Value << num(d.constant_drift.x())
        << YAML::Key << "drift_y" << YAML::Value << num(d.constant_drift.y())
        << YAML::Key << "gust_std" << YAML::Value << num(d.gust_std) << YAML::EndMap;

    out << YAML::Key << "policy" << YAML::Value << YAML::BeginMap
        << YAML::Key << "default_d0" << YAML::Value << num(spec.policy.default_d0)
        << YAML::Key << "classes" << YAML::Value << YAML::BeginMap;
    for (const auto& [label, d0] : spec.policy.entries) {
        out << YAML::Key << YAML::DoubleQuoted << label << YAML::Value << num(d0);
    }
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "steering" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "b" << YAML::Value << num(spec.steering.b)
        << YAML::Key << "c" << YAML::Value << num(spec.steering.c)
        << YAML::Key << "eta" << YAML::Value << num(spec.steering.eta) << YAML::EndMap;

    const auto& t = spec.termination;
    out << YAML::Key << "termination" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "stuck_window_s" << YAML::Value << num(t.stuck_window_s)
        << YAML::Key << "stuck_epsilon_m" << YAML::Value << num(t.stuck_epsilon_m)
        << YAML::Key << "wrong_dir_factor" << YAML::Value << num(t.wrong_dir_factor)
        << YAML::EndMap;

    const auto& rig = spec.sensor.rig;
    const auto& noise = spec.sensor.noise;
    out << YAML::Key << "sensor" << YAML::Value << YAML::BeginMap
        << YAML::Key << "focal_px" << YAML::Value << num(rig.focal_px())
        << YAML::Key << "baseline_m" << YAML::Value << num(rig.baseline_m())
        << YAML::Key << "cx" << YAML::Value << num(rig.cx())
        << YAML::Key << "cy" << YAML::Value << num(rig.cy())
        << YAML::Key << "width" << YAML::Value << rig.width()
        << YAML::Key << "height" << YAML::Value << rig.height()
        << YAML::Key << "fov_deg" << YAML::Value << num(noise.fov_deg)
        << YAML::Key << "max_range_m" << YAML::Value << num(noise.max_range_m)
        << YAML::Key << "disparity_std" << YAML::Value << num(noise.disparity_std)
        << YAML::Key << "misclassify_prob" << YAML::Value << num(noise.misclassify_prob)
        << YAML::Key << "samples_per_mask" << YAML::Value << noise.samples_per_mask
        << YAML::Key << "memory_ttl_s" << YAML::Value << num(spec.sensor.memory_ttl_s)
        << YAML::Key << "confusion" << YAML::Value << YAML::BeginMap;
    for (const auto& [from, to] : noise.confusion) {
        out << YAML::Key << YAML::DoubleQuoted << from << YAML::Value << YAML::DoubleQuoted << to;
    }
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
    for (const auto& o : spec.obstacles) {
        out << YAML::BeginMap;
        out << YAML::Key << "id" << YAML::Value << o.id;
        out << YAML::Key << "class" << YAML::Value << YAML::DoubleQuoted << o.class_label;
        out << YAML::Key << "x" << YAML::Value << num(o.center.x());
        out << YAML::Key << "y" << YAML::Value << num(o.center.y());
        out << YAML::Key << "radius" << YAML::Value << num(o.radius);
        if (o.motion) {
            out << YAML::Key << "motion" << YAML::Value << YAML::BeginMap
                << YAML::Key << "type" << YAML::Value << "waypoint_loop"
                << YAML::Key << "speed" << YAML::Value << num(o.motion->speed)
                << YAML::Key << "waypoints" << YAML::Value << YAML::BeginSeq;
            for (const auto& w : o.motion->waypoints) {
                out << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << num(w.x())
                    << YAML::Key << "y" << YAML::Value << num(w.y()) << YAML::EndMap;
            }
            out << YAML::EndSeq << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace soar
