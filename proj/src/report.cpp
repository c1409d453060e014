#include "soar/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace soar {

namespace {

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string signed_pct(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.3f", v);
    return buf;
}

// Mean of the printed (3-decimal) times, so the Avg row can be recomputed from the table.
std::string mean_text(const ModeSummary& s) {
    if (!s.mean_travel_time) return "n/a";
    double sum = 0.0;
    for (const auto& r : s.rows) {
        if (r.outcome == Outcome::goal_reached) sum += std::stod(fixed3(r.travel_time));
    }
    return fixed3(sum / s.success_count);
}

std::string success_text(const ModeSummary& s) {
    return std::to_string(s.success_count) + "/" + std::to_string(s.total);
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

nlohmann::ordered_json summary_json(const ModeSummary& s) {
    nlohmann::ordered_json j;
    j["mode"] = to_string(s.mode);
    j["success_count"] = s.success_count;
    j["total"] = s.total;
    j["mean_travel_time_s"] = s.mean_travel_time ? nlohmann::ordered_json(*s.mean_travel_time)
                                                 : nlohmann::ordered_json(nullptr);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : s.rows) {
        rows.push_back({{"seed", r.seed},
                        {"travel_time_s", r.travel_time},
                        {"outcome", to_string(r.outcome)},
                        {"path_length_m", r.path_length}});
    }
    j["trials"] = std::move(rows);
    return j;
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ModeSummary summarize(Mode mode, std::span<const TrialResult> trials) {
    ModeSummary s;
    s.mode = mode;
    s.total = static_cast<int>(trials.size());
    double sum = 0.0;
    for (const auto& t : trials) {
        s.rows.push_back({t.seed, t.travel_time, t.outcome, t.path_length});
        if (t.outcome == Outcome::goal_reached) {
            ++s.success_count;
            sum += t.travel_time;
        }
    }
    if (s.success_count > 0) s.mean_travel_time = sum / s.success_count;
    return s;
}

BatchRun run_batch(const ScenarioSpec& spec, Mode mode, int trials, std::uint64_t base_seed,
                   int jobs) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    validate(spec);

    BatchRun out;
    out.trials.resize(static_cast<std::size_t>(trials));
    const int workers = std::clamp(jobs, 1, trials);

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (int i = next++; i < trials; i = next++) {
            try {
                out.trials[static_cast<std::size_t>(i)] =
                    run_trial(spec, mode, base_seed + static_cast<std::uint64_t>(i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    out.summary = summarize(mode, out.trials);
    return out;
}

ComparisonReport make_comparison(std::string scenario, ModeSummary soar, ModeSummary non_soar) {
    ComparisonReport r{std::move(scenario), std::move(soar), std::move(non_soar), std::nullopt};
    if (r.soar.mean_travel_time && r.non_soar.mean_travel_time && *r.soar.mean_travel_time > 0.0) {
        r.relative_time_delta = (*r.non_soar.mean_travel_time - *r.soar.mean_travel_time) /
                                *r.soar.mean_travel_time * 100.0;
    }
    return r;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
    if (text == "table") return ReportFormat::table;
    if (text == "delimited") return ReportFormat::delimited;
    if (text == "structured") return ReportFormat::structured;
    return std::nullopt;
}

std::string_view file_extension(ReportFormat format) {
    switch (format) {
        case ReportFormat::table: return ".txt";
        case ReportFormat::delimited: return ".csv";
        case ReportFormat::structured: return ".json";
    }
    return ".txt";
}

std::string format_summary(const std::string& scenario, const ModeSummary& s, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::structured: {
            nlohmann::ordered_json j;
            j["scenario"] = scenario;
            j["summary"] = summary_json(s);
            out << j.dump(2) << "\n";
            break;
        }
        case ReportFormat::delimited:
            out << "trial,seed,travel_time_s,outcome,path_length_m\n";
            for (std::size_t i = 0; i < s.rows.size(); ++i) {
                const auto& r = s.rows[i];
                out << i + 1 << "," << r.seed << "," << fixed3(r.travel_time) << ","
                    << to_string(r.outcome) << "," << fixed3(r.path_length) << "\n";
            }
            out << "avg,," << mean_text(s) << ",,\n";
            out << "success,," << success_text(s) << ",,\n";
            break;
        case ReportFormat::table:
            out << "scenario: " << scenario << "  mode: " << to_string(s.mode) << "\n";
            out << pad("trial", 7) << pad("seed", 12) << pad("time(s)", 12) << pad("outcome", 17)
                << "path(m)\n";
            for (std::size_t i = 0; i < s.rows.size(); ++i) {
                const auto& r = s.rows[i];
                out << pad(std::to_string(i + 1), 7) << pad(std::to_string(r.seed), 12)
                    << pad(fixed3(r.travel_time), 12) << pad(std::string(to_string(r.outcome)), 17)
                    << fixed3(r.path_length) << "\n";
            }
            out << pad("Avg", 19) << mean_text(s) << "\n";
            out << pad("Goal", 19) << success_text(s) << "\n";
            break;
    }
    return out.str();
}

std::string format_comparison(const ComparisonReport& r, ReportFormat format) {
    std::ostringstream out;
    const auto delta = r.relative_time_delta ? signed_pct(*r.relative_time_delta) : "n/a";
    const std::size_t n = std::max(r.soar.rows.size(), r.non_soar.rows.size());
    auto cell = [](const ModeSummary& s, std::size_t i, bool time) -> std::string {
        if (i >= s.rows.size()) return "";
        return time ? fixed3(s.rows[i].travel_time) : std::string(to_string(s.rows[i].outcome));
    };
    auto seed_of = [&](std::size_t i) {
        return i < r.soar.rows.size() ? r.soar.rows[i].seed : r.non_soar.rows[i].seed;
    };

    switch (format) {
        case ReportFormat::structured: {
            nlohmann::ordered_json j;
            j["scenario"] = r.scenario;
            j["soar"] = summary_json(r.soar);
            j["non_soar"] = summary_json(r.non_soar);
            j["relative_time_delta_pct"] = r.relative_time_delta
                                               ? nlohmann::ordered_json(*r.relative_time_delta)
                                               : nlohmann::ordered_json(nullptr);
            out << j.dump(2) << "\n";
            break;
        }
        case ReportFormat::delimited:
            out << "trial,seed,soar_travel_time_s,soar_outcome,non_soar_travel_time_s,non_soar_outcome\n";
            for (std::size_t i = 0; i < n; ++i) {
                out << i + 1 << "," << seed_of(i) << "," << cell(r.soar, i, true) << ","
                    << cell(r.soar, i, false) << "," << cell(r.non_soar, i, true) << ","
                    << cell(r.non_soar, i, false) << "\n";
            }
            out << "avg,," << mean_text(r.soar) << ",," << mean_text(r.non_soar) << ",\n";
            out << "success,," << success_text(r.soar) << ",," << success_text(r.non_soar) << ",\n";
            out << "relative_time_delta_pct,," << delta << ",,,\n";
            break;
        case ReportFormat::table:
            out << "scenario: " << r.scenario << "\n";
            out << pad("", 19) << pad("SOAR", 29) << "non-SOAR\n";
            out << pad("trial", 7) << pad("seed", 12) << pad("time(s)", 12) << pad("goal", 17)
                << pad("time(s)", 12) << "goal\n";
            for (std::size_t i = 0; i < n; ++i) {
                out << pad(std::to_string(i + 1), 7) << pad(std::to_string(seed_of(i)), 12)
                    << pad(cell(r.soar, i, true), 12) << pad(cell(r.soar, i, false), 17)
                    << pad(cell(r.non_soar, i, true), 12) << cell(r.non_soar, i, false) << "\n";
            }
            out << pad("Avg", 19) << pad(mean_text(r.soar), 29) << mean_text(r.non_soar) << "\n";
            out << pad("Goal", 19) << pad(success_text(r.soar), 29) << success_text(r.non_soar)
                << "\n";
            out << "non-SOAR vs SOAR mean travel time: " << delta << "%\n";
            break;
    }
    return out.str();
}

std::string format_trial(const TrialResult& t, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::structured: {
            nlohmann::ordered_json j;
            j["scenario"] = t.scenario;
            j["mode"] = to_string(t.mode);
            j["seed"] = t.seed;
            j["outcome"] = to_string(t.outcome);
            j["travel_time_s"] = t.travel_time;
            j["path_length_m"] = t.path_length;
            j["ticks"] = t.trajectory.size();
            j["dropped_detections"] = t.dropped_detections;
            auto clearance = nlohmann::ordered_json::object();
            for (const auto& [label, d] : t.min_clearance_by_class) {
                clearance[label] = std::isfinite(d) ? nlohmann::ordered_json(d)
                                                    : nlohmann::ordered_json(nullptr);
            }
            j["min_clearance_by_class_m"] = std::move(clearance);
            out << j.dump(2) << "\n";
            break;
        }
        case ReportFormat::delimited:
            out << "scenario,mode,seed,outcome,travel_time_s,path_length_m\n";
            out << t.scenario << "," << to_string(t.mode) << "," << t.seed << ","
                << to_string(t.outcome) << "," << fixed3(t.travel_time) << ","
                << fixed3(t.path_length) << "\n";
            break;
        case ReportFormat::table:
            out << "scenario:     " << t.scenario << "\n"
                << "mode:         " << to_string(t.mode) << "\n"
                << "seed:         " << t.seed << "\n"
                << "outcome:      " << to_string(t.outcome) << "\n"
                << "travel time:  " << fixed3(t.travel_time) << " s\n"
                << "path length:  " << fixed3(t.path_length) << " m\n";
            for (const auto& [label, d] : t.min_clearance_by_class) {
                out << "min clearance " << label << ": " << fixed3(d) << " m\n";
            }
            break;
    }
    return out.str();
}

}  // namespace soar
