#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "soar/report.hpp"

namespace soar {

namespace {

struct Bounds {
    double min_x{std::numeric_limits<double>::infinity()};
    double min_y{std::numeric_limits<double>::infinity()};
    double max_x{-std::numeric_limits<double>::infinity()};
    double max_y{-std::numeric_limits<double>::infinity()};

    void add(const Vec2& p, double r = 0.0) {
        min_x = std::min(min_x, p.x() - r);
        min_y = std::min(min_y, p.y() - r);
        max_x = std::max(max_x, p.x() + r);
        max_y = std::max(max_y, p.y() + r);
    }
};

std::string_view mode_color(Mode mode) {
    return mode == Mode::soar ? "#1f77b4" : "#d62728";
}

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg(const ScenarioSpec& spec, std::span<const TrajectoryFile> trajectories) {
    if (trajectories.empty()) throw std::invalid_argument("plot: no trajectories given");
    for (const auto& t : trajectories) {
        if (t.records.empty()) throw std::invalid_argument("plot: empty trajectory");
        if (t.scenario != spec.name) {
            throw std::invalid_argument("plot: trajectory belongs to scenario '" + t.scenario +
                                        "', not '" + spec.name + "'");
        }
    }

    Bounds b;
    b.add(spec.start.position, 0.5);
    b.add(spec.goal, spec.goal_radius + 0.5);
    for (const auto& o : spec.obstacles) b.add(o.center, o.radius + spec.policy.d0(o.class_label));
    for (const auto& t : trajectories) {
        for (const auto& r : t.records) b.add(r.position);
    }
    const double margin = 1.0;
    b.min_x -= margin;
    b.min_y -= margin;
    b.max_x += margin;
    b.max_y += margin;

    const double width_px = 800.0;
    const double scale = width_px / (b.max_x - b.min_x);
    const double height_px = (b.max_y - b.min_y) * scale;
    auto sx = [&](double x) { return f2((x - b.min_x) * scale); };
    auto sy = [&](double y) { return f2((b.max_y - y) * scale); };
    auto len = [&](double d) { return f2(d * scale); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(width_px) << "\" height=\""
        << f2(height_px) << "\" viewBox=\"0 0 " << f2(width_px) << " " << f2(height_px) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<title>" << spec.name << "</title>\n";

    for (const auto& o : spec.obstacles) {
        const double d0 = spec.policy.d0(o.class_label);
        const bool avoid = d0 > 0.0;
        if (avoid) {
            svg << "<circle cx=\"" << sx(o.center.x()) << "\" cy=\"" << sy(o.center.y()) << "\" r=\""
                << len(o.radius + d0)
                << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
        }
        svg << "<circle cx=\"" << sx(o.center.x()) << "\" cy=\"" << sy(o.center.y()) << "\" r=\""
            << len(o.radius) << "\" fill=\"" << (avoid ? "#555" : "#bbb") << "\"/>\n";
        svg << "<text x=\"" << sx(o.center.x()) << "\" y=\"" << sy(o.center.y() + o.radius + 0.1)
            << "\" font-size=\"10\" text-anchor=\"middle\">" << o.class_label << "</text>\n";
    }

    const double half = 0.25;
    svg << "<rect class=\"start\" x=\"" << sx(spec.start.position.x() - half) << "\" y=\""
        << sy(spec.start.position.y() + half) << "\" width=\"" << len(2 * half) << "\" height=\""
        << len(2 * half) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    svg << "<g class=\"goal\" stroke=\"green\" stroke-width=\"3\">"
        << "<line x1=\"" << sx(spec.goal.x() - half) << "\" y1=\"" << sy(spec.goal.y() - half)
        << "\" x2=\"" << sx(spec.goal.x() + half) << "\" y2=\"" << sy(spec.goal.y() + half) << "\"/>"
        << "<line x1=\"" << sx(spec.goal.x() - half) << "\" y1=\"" << sy(spec.goal.y() + half)
        << "\" x2=\"" << sx(spec.goal.x() + half) << "\" y2=\"" << sy(spec.goal.y() - half)
        << "\"/></g>\n";

    std::set<Mode> modes;
    for (const auto& t : trajectories) {
        modes.insert(t.mode);
        svg << "<polyline class=\"trajectory\" data-mode=\"" << to_string(t.mode) << "\" data-seed=\""
            << t.seed << "\" fill=\"none\" stroke=\"" << mode_color(t.mode)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < t.records.size(); ++i) {
            if (i) svg << ' ';
            svg << sx(t.records[i].position.x()) << ',' << sy(t.records[i].position.y());
        }
        svg << "\"/>\n";
    }

    if (modes.size() > 1 || trajectories.size() > 1) {
        svg << "<g class=\"legend\" font-size=\"12\">\n";
        double y = 18.0;
        for (const auto m : modes) {
            svg << "<line x1=\"10\" y1=\"" << f2(y - 4) << "\" x2=\"30\" y2=\"" << f2(y - 4)
                << "\" stroke=\"" << mode_color(m) << "\" stroke-width=\"2\"/>"
                << "<text x=\"36\" y=\"" << f2(y) << "\">"
                << (m == Mode::soar ? "SOAR" : "non-SOAR") << "</text>\n";
            y += 16.0;
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace soar
