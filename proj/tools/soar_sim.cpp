// soar_sim: validate scenarios, run SOAR / non-SOAR trials, compare modes, plot.
//
// Exit codes: 0 success, 1 validation or usage failure, 2 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soar/report.hpp"
#include "soar/scenario.hpp"
#include "soar/sim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Options {
    std::string scenario;
    std::string mode = "soar";
    int trials = 10;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "table";
    int jobs = 1;
    std::vector<std::string> trajectories;
};

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int effective_jobs(int requested) {
    if (const char* env = std::getenv("SOAR_SIM_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring malformed SOAR_SIM_JOBS='" << env << "'\n";
        }
    }
    return std::max(1, requested);
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RuntimeFailure("cannot write " + path.string());
    f << content;
    if (!f) throw RuntimeFailure("failed writing " + path.string());
}

soar::ReportFormat report_format(const Options& o) {
    return *soar::parse_report_format(o.format);
}

soar::Mode run_mode(const Options& o) {
    return *soar::parse_mode(o.mode);
}

void write_trials(const fs::path& dir, const std::vector<soar::TrialResult>& trials) {
    for (const auto& t : trials) write_file(dir / soar::trajectory_file_name(t), soar::write_trajectory(t));
}

template <typename Formatter>
void write_summaries(const fs::path& dir, const std::string& stem, Formatter&& format) {
    for (auto f : {soar::ReportFormat::table, soar::ReportFormat::delimited,
                   soar::ReportFormat::structured}) {
        write_file(dir / (stem + std::string(soar::file_extension(f))), format(f));
    }
}

int cmd_validate(const Options& o) {
    soar::load_scenario_file(o.scenario);
    std::cout << "OK\n";
    return kExitOk;
}

int cmd_run(const Options& o) {
    const auto spec = soar::load_scenario_file(o.scenario);
    const auto trial = soar::run_trial(spec, run_mode(o), o.seed.value_or(spec.seed));
    std::cout << soar::format_trial(trial, report_format(o));
    if (!o.out.empty()) {
        const fs::path dir(o.out);
        write_trials(dir, {trial});
        write_summaries(dir, "trial_" + std::string(soar::to_string(trial.mode)) + "_seed" +
                                 std::to_string(trial.seed),
                        [&](soar::ReportFormat f) { return soar::format_trial(trial, f); });
    }
    return kExitOk;
}

int cmd_batch(const Options& o) {
    const auto spec = soar::load_scenario_file(o.scenario);
    const auto mode = run_mode(o);
    const auto batch = soar::run_batch(spec, mode, o.trials, o.seed.value_or(spec.seed),
                                       effective_jobs(o.jobs));
    std::cout << soar::format_summary(spec.name, batch.summary, report_format(o));
    if (!o.out.empty()) {
        const fs::path dir(o.out);
        write_trials(dir, batch.trials);
        write_summaries(dir, "summary_" + std::string(soar::to_string(mode)),
                        [&](soar::ReportFormat f) {
                            return soar::format_summary(spec.name, batch.summary, f);
                        });
    }
    return kExitOk;
}

int cmd_compare(const Options& o) {
    const auto spec = soar::load_scenario_file(o.scenario);
    const auto seed = o.seed.value_or(spec.seed);
    const int jobs = effective_jobs(o.jobs);
    const auto soar_run = soar::run_batch(spec, soar::Mode::soar, o.trials, seed, jobs);
    const auto plain_run = soar::run_batch(spec, soar::Mode::non_soar, o.trials, seed, jobs);
    const auto report = soar::make_comparison(spec.name, soar_run.summary, plain_run.summary);
    std::cout << soar::format_comparison(report, report_format(o));
    if (!o.out.empty()) {
        const fs::path dir(o.out);
        write_trials(dir, soar_run.trials);
        write_trials(dir, plain_run.trials);
        write_summaries(dir, "compare_summary",
                        [&](soar::ReportFormat f) { return soar::format_comparison(report, f); });
    }
    return kExitOk;
}

int cmd_plot(const Options& o) {
    const auto spec = soar::load_scenario_file(o.scenario);
    std::vector<soar::TrajectoryFile> files;
    for (const auto& path : o.trajectories) {
        try {
            files.push_back(soar::read_trajectory_file(path));
        } catch (const std::exception& e) {
            throw RuntimeFailure(e.what());
        }
    }
    std::string svg;
    try {
        svg = soar::render_svg(spec, files);
    } catch (const std::invalid_argument& e) {
        throw RuntimeFailure(e.what());
    }

    fs::path target = o.out.empty() ? fs::path(spec.name + ".svg") : fs::path(o.out);
    if (target.extension() != ".svg") target /= spec.name + ".svg";
    write_file(target, svg);
    std::cout << "wrote " << target.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic obstacle-avoidance navigation simulator"};
    app.require_subcommand(1);
    Options o;

    auto add_scenario = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "Scenario file")->required()->check(
            CLI::ExistingFile);
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "Summary format")
            ->check(CLI::IsMember({"table", "delimited", "structured"}));
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Base seed (defaults to the scenario's seed)");
    };
    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", o.mode, "soar | non-soar")
            ->check(CLI::IsMember({"soar", "non-soar", "non_soar"}));
    };
    auto add_trials = [&](CLI::App* sub) {
        sub->add_option("--trials", o.trials, "Number of seeded trials")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", o.jobs, "Concurrent trials (SOAR_SIM_JOBS overrides)")
            ->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    add_scenario(validate);

    auto* run = app.add_subcommand("run", "Run one trial");
    add_scenario(run);
    add_mode(run);
    add_seed(run);
    add_format(run);
    run->add_option("--out", o.out, "Directory for the trajectory and summary");

    auto* batch = app.add_subcommand("batch", "Run seeded trials in one mode");
    add_scenario(batch);
    add_mode(batch);
    add_seed(batch);
    add_format(batch);
    add_trials(batch);
    batch->add_option("--out", o.out, "Directory for trajectories and summaries");

    auto* compare = app.add_subcommand("compare", "Run SOAR and non-SOAR on identical seeds");
    add_scenario(compare);
    add_seed(compare);
    add_format(compare);
    add_trials(compare);
    compare->add_option("--out", o.out, "Directory for trajectories and summaries");

    auto* plot = app.add_subcommand("plot", "Draw trajectories over the scenario as SVG");
    add_scenario(plot);
    plot->add_option("--out", o.out, "Output .svg file or directory");
    plot->add_option("trajectories", o.trajectories, "Trajectory files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*run) return cmd_run(o);
        if (*batch) return cmd_batch(o);
        if (*compare) return cmd_compare(o);
        if (*plot) return cmd_plot(o);
    } catch (const soar::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const RuntimeFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
