#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "soar/report.hpp"

namespace soar {

namespace {

constexpr std::string_view kHeader = "time_s,x,y,heading,speed,active_obstacle_id,c1,c2,min_clearance";

double parse_number(const std::string& field, int line) {
    if (field == "inf") return std::numeric_limits<double>::infinity();
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("trajectory line " + std::to_string(line) + ": bad number '" +
                                 field + "'");
    }
}

}  // namespace

std::string trajectory_file_name(const TrialResult& trial) {
    return trial.scenario + "_" + std::string(to_string(trial.mode)) + "_seed" +
           std::to_string(trial.seed) + ".csv";
}

std::string write_trajectory(const TrialResult& trial) {
    std::ostringstream out;
    out << "# scenario=" << trial.scenario << " mode=" << to_string(trial.mode)
        << " seed=" << trial.seed << " outcome=" << to_string(trial.outcome) << "\n";
    out << kHeader << "\n";
    for (std::size_t i = 0; i < trial.trajectory.size(); ++i) {
        const auto& p = trial.trajectory[i];
        const auto& t = trial.tick_log[i];
        out << format_double(p.time) << "," << format_double(p.position.x()) << ","
            << format_double(p.position.y()) << "," << format_double(p.heading) << ","
            << format_double(p.speed) << ","
            << (t.active_obstacle_id ? std::to_string(*t.active_obstacle_id) : "") << ","
            << format_double(t.c1) << "," << format_double(t.c2) << ","
            << format_double(t.min_clearance) << "\n";
    }
    return out.str();
}

TrajectoryFile parse_trajectory(const std::string& text) {
    TrajectoryFile file;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    bool have_meta = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream meta(line.substr(1));
            std::string kv;
            while (meta >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) continue;
                const auto key = kv.substr(0, eq);
                const auto value = kv.substr(eq + 1);
                if (key == "scenario") {
                    file.scenario = value;
                } else if (key == "mode") {
                    const auto m = parse_mode(value);
                    if (!m) throw std::runtime_error("trajectory: unknown mode '" + value + "'");
                    file.mode = *m;
                } else if (key == "seed") {
                    file.seed = std::stoull(value);
                } else if (key == "outcome") {
                    file.outcome = value;
                }
            }
            have_meta = true;
            continue;
        }
        if (!have_header) {
            if (line != kHeader) {
                throw std::runtime_error("trajectory line " + std::to_string(line_no) +
                                         ": unexpected header");
            }
            have_header = true;
            continue;
        }

        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.emplace_back();
        if (fields.size() != 9) {
            throw std::runtime_error("trajectory line " + std::to_string(line_no) +
                                     ": expected 9 fields");
        }
        TrajectoryRecord r;
        r.time = parse_number(fields[0], line_no);
        r.position = Vec2(parse_number(fields[1], line_no), parse_number(fields[2], line_no));
        r.heading = parse_number(fields[3], line_no);
        r.speed = parse_number(fields[4], line_no);
        if (!fields[5].empty()) r.active_obstacle_id = static_cast<int>(parse_number(fields[5], line_no));
        r.c1 = parse_number(fields[6], line_no);
        r.c2 = parse_number(fields[7], line_no);
        r.min_clearance = parse_number(fields[8], line_no);
        file.records.push_back(r);
    }

    if (!have_meta || file.scenario.empty()) {
        throw std::runtime_error("trajectory: missing '# scenario=...' metadata line");
    }
    if (file.records.empty()) throw std::runtime_error("trajectory: no records");
    return file;
}

TrajectoryFile read_trajectory_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_trajectory(buf.str());
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace soar
