#ifndef SOAR_REPORT_HPP
#define SOAR_REPORT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soar/scenario.hpp"
#include "soar/sim.hpp"

namespace soar {

struct TrialRow {
    std::uint64_t seed{0};
    double travel_time{0.0};
    Outcome outcome{Outcome::timeout};
    double path_length{0.0};
};

/// One mode's column of the results table.
struct ModeSummary {
    Mode mode{Mode::soar};
    std::vector<TrialRow> rows;
    int success_count{0};
    int total{0};
    /// Mean travel time over goal_reached trials; empty when there are none.
    std::optional<double> mean_travel_time;
};

ModeSummary summarize(Mode mode, std::span<const TrialResult> trials);

struct BatchRun {
    ModeSummary summary;
    std::vector<TrialResult> trials;  // ordered by seed
};

/// Runs seeds base_seed .. base_seed + trials - 1 on up to `jobs` threads.
BatchRun run_batch(const ScenarioSpec& spec, Mode mode, int trials, std::uint64_t base_seed,
                   int jobs = 1);

struct ComparisonReport {
    std::string scenario;
    ModeSummary soar;
    ModeSummary non_soar;
    /// (non_soar - soar) / soar of the mean travel times, in percent.
    std::optional<double> relative_time_delta;
};

ComparisonReport make_comparison(std::string scenario, ModeSummary soar, ModeSummary non_soar);

enum class ReportFormat { table, delimited, structured };

std::optional<ReportFormat> parse_report_format(std::string_view text);
std::string_view file_extension(ReportFormat format);

std::string format_summary(const std::string& scenario, const ModeSummary& summary,
                           ReportFormat format);
std::string format_comparison(const ComparisonReport& report, ReportFormat format);
std::string format_trial(const TrialResult& trial, ReportFormat format);

// trajectory files

struct TrajectoryRecord {
    double time{0.0};
    Vec2 position{Vec2::Zero()};
    double heading{0.0};
    double speed{0.0};
    std::optional<int> active_obstacle_id;
    double c1{0.0};
    double c2{0.0};
    double min_clearance{0.0};
};

struct TrajectoryFile {
    std::string scenario;
    Mode mode{Mode::soar};
    std::uint64_t seed{0};
    std::string outcome;
    std::vector<TrajectoryRecord> records;
};

/// Comma-delimited per-tick export with a one-line `#` metadata header.
std::string write_trajectory(const TrialResult& trial);
TrajectoryFile parse_trajectory(const std::string& text);
TrajectoryFile read_trajectory_file(const std::string& path);
std::string trajectory_file_name(const TrialResult& trial);

/// SVG drawing of the world with one polyline per trajectory, colored by mode.
std::string render_svg(const ScenarioSpec& spec, std::span<const TrajectoryFile> trajectories);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace soar

#endif  // SOAR_REPORT_HPP
