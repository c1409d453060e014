#include "soar/world.hpp"

#include <cmath>

namespace soar {

Vec2 ObstacleInstance::position_at(double t) const {
    if (!motion || motion->speed <= 0.0 || motion->waypoints.empty() || t <= 0.0) {
        return center;
    }

    std::vector<Vec2> loop;
    loop.reserve(motion->waypoints.size() + 2);
    loop.push_back(center);
    loop.insert(loop.end(), motion->waypoints.begin(), motion->waypoints.end());
    loop.push_back(center);

    double perimeter = 0.0;
    for (std::size_t i = 1; i < loop.size(); ++i) perimeter += (loop[i] - loop[i - 1]).norm();
    if (perimeter <= 0.0) return center;

    double s = std::fmod(motion->speed * t, perimeter);
    for (std::size_t i = 1; i < loop.size(); ++i) {
        const Vec2 leg = loop[i] - loop[i - 1];
        const double len = leg.norm();
        if (s <= len && len > 0.0) return loop[i - 1] + leg * (s / len);
        s -= len;
    }
    return center;
}

std::vector<ObstacleInstance> obstacles_at(std::span<const ObstacleInstance> obstacles, double t) {
    std::vector<ObstacleInstance> out(obstacles.begin(), obstacles.end());
    for (auto& o : out) {
        if (!o.is_static()) o.center = o.position_at(t);
    }
    return out;
}

double ClearancePolicy::d0(const std::string& class_label) const {
    const auto it = entries.find(class_label);
    return it != entries.end() ? it->second : default_d0;
}

double effective_d0(const ClearancePolicy& policy, const std::string& class_label) {
    return policy.d0(class_label);
}

std::optional<EffectiveObstacle> nearest_effective_obstacle(
    std::span<const LabeledObstacleEstimate> estimates, const ClearancePolicy& policy) {
    std::optional<EffectiveObstacle> best;
    for (const auto& e : estimates) {
        const double d0 = policy.d0(e.class_label);
        if (!(d0 > 0.0) || e.surface_distance > d0) continue;

        EffectiveObstacle candidate{e, d0};
        if (!best) {
            best = std::move(candidate);
            continue;
        }
        const double ci = candidate.intrusion();
        const double bi = best->intrusion();
        bool better = ci > bi;
        if (ci == bi) {
            const double cd = candidate.estimate.surface_distance;
            const double bd = best->estimate.surface_distance;
            better = cd < bd || (cd == bd && e.source_instance < best->estimate.source_instance);
        }
        if (better) best = std::move(candidate);
    }
    return best;
}

}  // namespace soar
