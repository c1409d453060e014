// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "soar/perception.hpp"
#include "soar/report.hpp"
#include "soar/scenario.hpp"
#include "soar/sim.hpp"
#include "soar/steering.hpp"

using namespace soar;

namespace {

struct Verdict {
    bool ok{true};
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition && ok) detail = what;
        ok = ok && condition;
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

ScenarioSpec scenario(const std::string& name) {
    return load_scenario_file(std::string(SOAR_SCENARIO_DIR) + "/" + name);
}

ScenarioSpec fixture(const std::string& name) {
    return load_scenario_file(std::string(SOAR_FIXTURE_DIR) + "/" + name);
}

constexpr int kTrials = 10;

Verdict perpendicularity() {
    Verdict v;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const Vec2 a = unit_from_angle(ang(rng));
        // every 16th pair is the head-on case
        const Vec2 r = i % 16 == 0 ? a : unit_from_angle(ang(rng));
        worst = std::max(worst, std::abs((a + c1(a, r) * r).dot(r)));
    }
    v.require(worst <= 1e-9, fmt("max |(a + c1 r).r| = %.3g", worst));
    if (v.ok) v.detail = fmt("20000 pairs, max residual %.3g", worst);
    return v;
}

Verdict c2_contract() {
    Verdict v;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int n = 0;
    for (int i = 0; i < 20000; ++i) {
        const double d0 = 0.01 + 10.0 * unit(rng);
        // b in (1, 10]
        const double b = 10.0 - 9.0 * unit(rng) * (1.0 - 1e-12);
        v.require(c2(d0, d0, b) == 1.0, fmt("c2(d0) != 1 at d0=%g b=%g", d0, b));
        v.require(c2(0.0, d0, b) == b, fmt("c2(0) != b at d0=%g b=%g", d0, b));
        double lo = d0 * unit(rng);
        double hi = d0 * unit(rng);
        if (lo > hi) std::swap(lo, hi);
        const double c_lo = c2(lo, d0, b);
        const double c_hi = c2(hi, d0, b);
        v.require(c_lo >= 1.0 && c_lo <= b && c_hi >= 1.0 && c_hi <= b,
                  fmt("c2 outside [1, b] at d0=%g b=%g", d0, b));
        if (hi - lo > 1e-9 * d0) {
            v.require(c_lo > c_hi, fmt("not strictly decreasing at d0=%g dist=%g,%g", d0, lo, hi));
            ++n;
        }
    }
    if (v.ok) v.detail = "20000 (d0, b) draws, " + std::to_string(n) + " monotone pairs";
    return v;
}

Verdict repulsion_locality() {
    Verdict v;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double d0 = 0.01 + 5.0 * unit(rng);
        const double eta = 0.1 + 5.0 * unit(rng);
        const double p = d0 * (1.0 + 1e-12) + 10.0 * unit(rng);
        v.require(repulsive_potential(p, d0, eta) == 0.0, fmt("f_r(%g; d0=%g) != 0", p, d0));
        v.require(repulsive_potential(d0, d0, eta) == 0.0, fmt("f_r(d0=%g) != 0", d0));
    }
    const double spot = repulsive_potential(1.0, 2.0, 1.0);
    v.require(spot == 0.25, fmt("f_r(1; 2, 1) = %.17g", spot));
    if (v.ok) v.detail = "10000 draws, f_r(1; d0=2, eta=1) = 0.25";
    return v;
}

Verdict depth_round_trip() {
    Verdict v;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> f(20.0, 3000.0), B(0.01, 1.0), Z(0.2, 50.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const StereoRig rig(f(rng), B(rng), 320, 240, 640, 480);
        const double z = Z(rng);
        worst = std::max(worst, std::abs(depth_from_disparity(rig.disparity_for_depth(z), rig) - z) / z);
    }
    v.require(worst <= 1e-9, fmt("max relative error %.3g", worst));
    const double spot = depth_from_disparity(10.0, StereoRig(100, 0.1, 320, 240, 640, 480));
    v.require(std::abs(spot - 1.0) <= 1e-12, fmt("f=100 B=0.1 d=10 gives %.17g m", spot));
    if (v.ok) v.detail = fmt("1000 triples, max rel err %.3g; spot %.12g m", worst, spot);
    return v;
}

Verdict ignorable_transparency() {
    Verdict v;
    const auto with_balls = fixture("transparency.yaml");
    auto without = with_balls;
    std::erase_if(without.obstacles, [](const ObstacleInstance& o) { return o.class_label == "sports_ball"; });
    v.require(with_balls.sensor.noise.disparity_std == 0.0 && with_balls.sensor.noise.misclassify_prob == 0.0,
              "fixture is not noise-free");
    v.require(with_balls.policy.d0("sports_ball") == 0.0, "sports_ball is not ignorable in the fixture");
    v.require(without.obstacles.size() < with_balls.obstacles.size(), "fixture has no sports_ball");

    std::size_t ticks = 0;
    for (std::uint64_t seed : {42ULL, 7ULL, 1001ULL}) {
        const auto a = run_trial(with_balls, Mode::soar, seed);
        const auto b = run_trial(without, Mode::soar, seed);
        v.require(a.outcome == b.outcome, "outcomes differ");
        v.require(a.trajectory.size() == b.trajectory.size(), "tick counts differ");
        for (std::size_t i = 0; v.ok && i < a.trajectory.size(); ++i) {
            const auto& p = a.trajectory[i];
            const auto& q = b.trajectory[i];
            v.require(p.time == q.time && p.position == q.position && p.heading == q.heading &&
                          p.speed == q.speed,
                      "trajectories diverge at tick " + std::to_string(i));
        }
        ticks += a.trajectory.size();
    }
    if (v.ok) v.detail = "3 seeds, " + std::to_string(ticks) + " ticks identical";
    return v;
}

Verdict circumnavigation_clearance() {
    Verdict v;
    const auto spec = fixture("single_obstacle.yaml");
    v.require(spec.obstacles.size() == 1, "fixture must hold one obstacle");
    v.require(spec.disturbance.gust_std == 0.0 && spec.disturbance.constant_drift.isZero(),
              "fixture has a disturbance");
    v.require(spec.sensor.noise.disparity_std == 0.0, "fixture has sensor noise");
    const auto& o = spec.obstacles.front();
    const double d0 = spec.policy.d0(o.class_label);
    // the straight line from start to goal must cross the clearance ring
    const double line_gap = point_segment_distance<double>(o.center, spec.start.position, spec.goal);
    v.require(line_gap < o.radius + d0, "straight line is not blocked");

    const auto r = run_trial(spec, Mode::soar, spec.seed);
    const double clearance = r.min_clearance_by_class.at(o.class_label);
    v.require(r.outcome == Outcome::goal_reached, "outcome " + std::string(to_string(r.outcome)));
    v.require(clearance >= 0.95 * d0, fmt("min clearance %.4f < 0.95 * %.3f", clearance, d0));
    if (v.ok) v.detail = fmt("goal_reached, min clearance %.4f m >= %.4f m", clearance, 0.95 * d0);
    return v;
}

ComparisonReport compare(const ScenarioSpec& spec) {
    const auto s = run_batch(spec, Mode::soar, kTrials, spec.seed);
    const auto n = run_batch(spec, Mode::non_soar, kTrials, spec.seed);
    return make_comparison(spec.name, s.summary, n.summary);
}

Verdict terrestrial_table() {
    Verdict v;
    const auto r = compare(scenario("parking_lot.yaml"));
    v.require(r.soar.success_count == kTrials, "SOAR " + std::to_string(r.soar.success_count) + "/10");
    v.require(r.non_soar.success_count == kTrials,
              "non-SOAR " + std::to_string(r.non_soar.success_count) + "/10");
    v.require(r.relative_time_delta && *r.relative_time_delta >= 10.0,
              r.relative_time_delta ? fmt("delta %+.3f%% < +10%%", *r.relative_time_delta)
                                    : std::string("delta undefined"));
    if (v.ok) {
        v.detail = fmt("SOAR 10/10 avg %.3f s, non-SOAR 10/10 avg %.3f s, delta %+.3f%%",
                       *r.soar.mean_travel_time, *r.non_soar.mean_travel_time, *r.relative_time_delta);
    }
    return v;
}

Verdict underwater_table() {
    Verdict v;
    const auto r = compare(scenario("arch.yaml"));
    v.require(r.soar.success_count == kTrials, "SOAR " + std::to_string(r.soar.success_count) + "/10");
    v.require(r.non_soar.success_count == 0,
              "non-SOAR " + std::to_string(r.non_soar.success_count) + "/10");
    std::map<std::string, int> labels;
    for (const auto& row : r.non_soar.rows) {
        const bool allowed = row.outcome == Outcome::timeout || row.outcome == Outcome::stuck ||
                             row.outcome == Outcome::wrong_direction;
        v.require(allowed, "non-SOAR seed " + std::to_string(row.seed) + " ended " +
                               std::string(to_string(row.outcome)));
        ++labels[std::string(to_string(row.outcome))];
    }
    if (v.ok) {
        v.detail = "SOAR 10/10, non-SOAR 0/10 (";
        for (const auto& [label, count] : labels) v.detail += label + " " + std::to_string(count) + " ";
        v.detail.back() = ')';
    }
    return v;
}

Verdict misclassification_collisions() {
    Verdict v;
    auto noisy = fixture("head_on.yaml");
    v.require(noisy.sensor.noise.misclassify_prob == 0.5, "fixture misclassify_prob is not 0.5");
    const auto target = noisy.sensor.noise.confusion.begin();
    v.require(target != noisy.sensor.noise.confusion.end() && noisy.policy.d0(target->first) > 0.0 &&
                  noisy.policy.d0(target->second) == 0.0,
              "confusion must map an avoidable class to an ignorable one");
    auto clean = noisy;
    clean.sensor.noise.misclassify_prob = 0.0;

    auto collisions = [](const ScenarioSpec& spec) {
        const auto batch = run_batch(spec, Mode::soar, 20, spec.seed);
        int n = 0;
        for (const auto& t : batch.trials) n += t.outcome == Outcome::collision;
        return n;
    };
    const int with_noise = collisions(noisy);
    const int without = collisions(clean);
    v.require(with_noise >= 1, "no collision in 20 trials at p = 0.5");
    v.require(without == 0, std::to_string(without) + " collisions at p = 0");
    v.detail = "collisions " + std::to_string(with_noise) + "/20 at p=0.5, " + std::to_string(without) +
               "/20 at p=0";
    return v;
}

// Every summary artifact the CLI would emit for the shipped and fixture scenarios.
std::string all_summaries() {
    std::ostringstream out;
    const std::vector<ScenarioSpec> specs{scenario("parking_lot.yaml"), scenario("arch.yaml"),
                                          fixture("open_field.yaml"), fixture("single_obstacle.yaml"),
                                          fixture("head_on.yaml"), fixture("transparency.yaml")};
    for (const auto& spec : specs) {
        const auto s = run_batch(spec, Mode::soar, kTrials, spec.seed);
        const auto n = run_batch(spec, Mode::non_soar, kTrials, spec.seed);
        const auto r = make_comparison(spec.name, s.summary, n.summary);
        for (auto f : {ReportFormat::table, ReportFormat::delimited, ReportFormat::structured}) {
            out << format_comparison(r, f) << format_summary(spec.name, s.summary, f)
                << format_summary(spec.name, n.summary, f) << format_trial(s.trials.front(), f);
        }
        out << write_trajectory(s.trials.back()) << write_trajectory(n.trials.back());
    }
    return out.str();
}

Verdict determinism() {
    Verdict v;
    const auto first = all_summaries();
    const auto second = all_summaries();
    v.require(first == second, "summary artifacts differ between runs");
    if (v.ok) v.detail = std::to_string(first.size()) + " bytes identical across two runs";
    return v;
}

struct Criterion {
    int number;
    const char* name;
    double limit_s;
    std::function<Verdict()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "perpendicularity identity", 1.0, perpendicularity},
        {2, "c2 contract", 1.0, c2_contract},
        {3, "repulsion locality", 1.0, repulsion_locality},
        {4, "depth round trip", 1.0, depth_round_trip},
        {5, "ignorable transparency", 5.0, ignorable_transparency},
        {6, "circumnavigation clearance", 5.0, circumnavigation_clearance},
        {7, "terrestrial comparison (parking_lot)", 120.0, terrestrial_table},
        {8, "underwater comparison (arch)", 120.0, underwater_table},
        {9, "misclassification collisions (head_on)", 60.0, misclassification_collisions},
        {10, "determinism of summary artifacts", 300.0, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > c.limit_s) {
            v.ok = false;
            v.detail += fmt(" [runtime %.2f s over %.0f s limit]", elapsed, c.limit_s);
        }
        failures += !v.ok;
        std::printf("%s %2d %s: %s (%.2f s)\n", v.ok ? "PASS" : "FAIL", c.number, c.name,
                    v.detail.c_str(), elapsed);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
