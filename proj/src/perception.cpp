#include "soar/perception.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace soar {

namespace {

// Smallest disparity a sample is clamped to; keeps every emitted sample positive.
constexpr double kMinDisparityPx = 1e-3;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool occluded(std::span<const ObstacleInstance> obstacles, std::size_t target, const Vec2& eye,
              double target_range) {
    const Vec2& aim = obstacles[target].center;
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
        if (j == target) continue;
        const auto& o = obstacles[j];
        const double range = (o.center - eye).norm();
        if (range >= target_range || range <= o.radius) continue;
        if (point_segment_distance<double>(o.center, eye, aim) < o.radius) return true;
    }
    return false;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample set");
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

PerceptionFrame sense(std::span<const ObstacleInstance> obstacles, const Pose& camera_pose,
                      const StereoRig& rig, const SensorNoiseSpec& noise, const FrameNoise& rng) {
    PerceptionFrame frame;
    frame.camera_pose = camera_pose;
    const Vec2& eye = camera_pose.position;
    const double half_fov = 0.5 * noise.fov_rad();

    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const auto& o = obstacles[i];
        const Vec2 rel = o.center - eye;
        const double range = rel.norm();
        if (range <= o.radius) continue;  // camera inside the object
        if (range - o.radius > noise.max_range_m) continue;

        const double bearing = normalize_angle(heading_of(rel) - camera_pose.heading);
        if (std::abs(bearing) > half_fov) continue;
        if (occluded(obstacles, i, eye, range)) continue;

        std::mt19937_64 engine(derive_seed(rng.seed, rng.frame, static_cast<std::uint64_t>(o.id)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> pixel_noise(0.0, 1.0);

        Detection det;
        det.instance_id = o.id;
        det.true_class = o.class_label;
        det.reported_class = o.class_label;
        det.bearing_rad = bearing;
        det.radius_m = o.radius;

        // one label draw per instance per frame
        if (unit(engine) < noise.misclassify_prob) {
            const auto it = noise.confusion.find(o.class_label);
            if (it != noise.confusion.end()) det.reported_class = it->second;
        }

        const double apparent_radius_px = rig.focal_px() * o.radius / range;
        const double area = std::numbers::pi * apparent_radius_px * apparent_radius_px;
        det.pixel_count = std::max(1, static_cast<int>(std::lround(std::min(area, 1e9))));

        const double true_disparity = rig.disparity_for_depth(range);
        const int n = std::max(1, std::min(det.pixel_count, noise.samples_per_mask));
        det.disparity_samples.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            double d = true_disparity;
            if (noise.disparity_std > 0.0) d += noise.disparity_std * pixel_noise(engine);
            det.disparity_samples.push_back(std::max(d, kMinDisparityPx));
        }
        frame.detections.push_back(std::move(det));
    }
    return frame;
}

FuseResult fuse(const PerceptionFrame& frame, const StereoRig& rig) {
    FuseResult out;
    out.estimates.reserve(frame.detections.size());
    for (const auto& det : frame.detections) {
        std::vector<double> valid;
        valid.reserve(det.disparity_samples.size());
        std::copy_if(det.disparity_samples.begin(), det.disparity_samples.end(),
                     std::back_inserter(valid), [](double d) { return d > 0.0; });
        if (valid.empty()) {
            ++out.dropped;
            continue;
        }

        const double range = depth_from_disparity(median(std::move(valid)), rig);
        const double world_bearing = frame.camera_pose.heading + det.bearing_rad;

        LabeledObstacleEstimate e;
        e.class_label = det.reported_class;
        e.position = frame.camera_pose.position + range * unit_from_angle(world_bearing);
        e.surface_distance = std::max(0.0, range - det.radius_m.value_or(0.0));
        e.source_instance = det.instance_id;
        out.estimates.push_back(std::move(e));
    }
    return out;
}

}  // namespace soar
