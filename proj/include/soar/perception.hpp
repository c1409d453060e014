#ifndef SOAR_PERCEPTION_HPP
#define SOAR_PERCEPTION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "soar/geometry.hpp"
#include "soar/world.hpp"

namespace soar {

/// Rectified stereo pair with zero distortion and identity inter-camera rotation.
///
/// Q is the 4x4 disparity-to-depth matrix of the rectified pair:
///
///     [ 1  0  0    -cx ]
///     [ 0  1  0    -cy ]
///     [ 0  0  0      f ]
///     [ 0  0  1/B    0 ]
///
/// so that Q * (u, v, d, 1)^T = (X, Y, Z, W) with Z / W = f * B / d.
template <typename Scalar>
class StereoRigT {
public:
    using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
    using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

    StereoRigT() : StereoRigT(Scalar(500), Scalar(0.12), Scalar(320), Scalar(240), 640, 480) {}

    StereoRigT(Scalar focal_px, Scalar baseline_m, Scalar cx, Scalar cy, int width, int height)
        : focal_px_(focal_px), baseline_m_(baseline_m), cx_(cx), cy_(cy), width_(width),
          height_(height) {
        if (!(focal_px > Scalar(0))) throw std::invalid_argument("stereo rig: focal_px must be > 0");
        if (!(baseline_m > Scalar(0))) throw std::invalid_argument("stereo rig: baseline_m must be > 0");
        Q_ << 1, 0, 0, -cx,
              0, 1, 0, -cy,
              0, 0, 0, focal_px,
              0, 0, Scalar(1) / baseline_m, 0;
    }

    Scalar focal_px() const { return focal_px_; }
    Scalar baseline_m() const { return baseline_m_; }
    Scalar cx() const { return cx_; }
    Scalar cy() const { return cy_; }
    int width() const { return width_; }
    int height() const { return height_; }
    const Matrix4& Q() const { return Q_; }

    /// Camera-frame point for pixel (u, v) at disparity d.
    Vector3 reproject(Scalar u, Scalar v, Scalar disparity) const {
        const Eigen::Matrix<Scalar, 4, 1> h = Q_ * Eigen::Matrix<Scalar, 4, 1>(u, v, disparity, 1);
        return h.hnormalized();
    }

    /// Disparity an ideal matcher reports for a point at depth Z.
    Scalar disparity_for_depth(Scalar depth) const { return focal_px_ * baseline_m_ / depth; }

    bool operator==(const StereoRigT& o) const {
        return focal_px_ == o.focal_px_ && baseline_m_ == o.baseline_m_ && cx_ == o.cx_ &&
               cy_ == o.cy_ && width_ == o.width_ && height_ == o.height_;
    }

private:
    Scalar focal_px_;
    Scalar baseline_m_;
    Scalar cx_;
    Scalar cy_;
    int width_;
    int height_;
    Matrix4 Q_;
};

using StereoRig = StereoRigT<double>;

/// Depth along the optical axis for a disparity, via full Q reprojection at the
/// principal point.
template <typename Scalar>
Scalar depth_from_disparity(Scalar disparity, const StereoRigT<Scalar>& rig) {
    if (!(disparity > Scalar(0))) {
        throw std::domain_error("depth_from_disparity: disparity must be positive");
    }
    return rig.reproject(rig.cx(), rig.cy(), disparity).z();
}

struct SensorNoiseSpec {
    double disparity_std{0.0};
    double misclassify_prob{0.0};
    std::map<std::string, std::string> confusion;
    double fov_deg{360.0};
    double max_range_m{15.0};
    int samples_per_mask{9};

    double fov_rad() const { return fov_deg * std::numbers::pi / 180.0; }

    bool operator==(const SensorNoiseSpec&) const = default;
};

/// Everything the scenario file says about the camera.
struct SensorConfig {
    StereoRig rig;
    SensorNoiseSpec noise;
    /// Seconds an unseen obstacle is remembered; 0 disables memory.
    double memory_ttl_s{0.0};

    bool operator==(const SensorConfig&) const = default;
};

struct Detection {
    int instance_id{-1};
    std::string reported_class;
    std::string true_class;
    int pixel_count{1};
    std::vector<double> disparity_samples;
    /// Bearing of the mask centroid relative to the camera heading.
    double bearing_rad{0.0};
    /// Physical radius recovered from the mask extent, when known.
    std::optional<double> radius_m;
};

struct PerceptionFrame {
    std::vector<Detection> detections;
    Pose camera_pose;
};

/// Identifies one frame's worth of noise. Each obstacle draws from its own
/// engine derived from (seed, frame, instance id), so adding or removing an
/// obstacle never perturbs the noise seen by the others.
struct FrameNoise {
    std::uint64_t seed{0};
    std::uint64_t frame{0};
};

/// Mixes values into a well-spread 64-bit seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

/// Synthesizes an instance-segmented stereo frame from ground truth.
PerceptionFrame sense(std::span<const ObstacleInstance> obstacles, const Pose& camera_pose,
                      const StereoRig& rig, const SensorNoiseSpec& noise, const FrameNoise& rng);

struct FuseResult {
    std::vector<LabeledObstacleEstimate> estimates;
    int dropped{0};
};

/// Turns labeled detections into world-frame obstacle estimates.
FuseResult fuse(const PerceptionFrame& frame, const StereoRig& rig);

double median(std::vector<double> values);

}  // namespace soar

#endif  // SOAR_PERCEPTION_HPP
