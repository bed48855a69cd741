#pragma once

#include <cstdint>
#include <vector>

#include "foleylab/error.hpp"

namespace foleylab {

/// A keyframed visual observation of a sound source: horizontal box center,
/// frame geometry, and mean depth inside the box.
struct VisualCue {
    std::size_t frame_index = 0;
    double box_center_x = 0.0; // pixels, [0, frame_width]
    double frame_width = 0.0;  // pixels
    double frame_height = 0.0; // pixels
    double depth_m = 1.0;
};

struct TrajectoryPoint {
    double depth_m = 1.0;
    double azimuth_deg = 90.0; // 0 = hard left, 90 = center, 180 = hard right
    int active = 1;
};

struct Trajectory {
    double fps = 25.0;
    std::vector<TrajectoryPoint> points;

    std::size_t length() const { return points.size(); }
    double duration_s() const { return fps > 0 ? points.size() / fps : 0.0; }
};

/// Seeded random projection for sinusoidal position features. The projection
/// matrix is m x 2 with N(0, sigma^2) entries, fully determined by `seed`.
struct FourierConfig {
    std::size_t bands = 16; // m
    double sigma = 1.0;
    std::uint64_t seed = 0;
};

struct PositionalEmbedding {
    std::size_t frames = 0;     // T' = ceil(T / r)
    std::size_t dim = 0;        // d_emb
    std::size_t compression = 1; // r
    std::vector<double> values; // row-major, frames x dim

    double at(std::size_t t, std::size_t d) const { return values[t * dim + d]; }
};

/// Azimuth from a visual cue: atan(((x - W/2)/ppm) / depth) mapped to
/// [0, 180] degrees with 90 at center. `ppm` converts the pixel offset to
/// meters at the source plane.
double azimuth_from_cue(const VisualCue& cue, double ppm);

/// Linear interpolation of (depth, azimuth) between keyframes, constant
/// extrapolation outside, every frame marked active.
Trajectory interpolate_trajectory(const std::vector<VisualCue>& cues, double fps,
                                  std::size_t total_frames, double ppm);

/// Masks the trajectory with a per-frame binary activation vector. Positional
/// values are retained on inactive frames; zeroing happens in feature space.
Trajectory apply_activation(const Trajectory& traj, const std::vector<int>& activation);

/// The m x 2 projection matrix implied by `cfg` (row-major).
std::vector<double> fourier_projection(const FourierConfig& cfg);

/// [cos(2 pi B p); sin(2 pi B p)] for p = (depth_norm, azimuth_norm) in
/// [0,1]^2. Returns 2m values.
std::vector<double> fourier_features(double depth_norm, double azimuth_norm,
                                     const FourierConfig& cfg);
std::vector<double> fourier_features(double depth_norm, double azimuth_norm,
                                     const std::vector<double>& projection, std::size_t bands);

/// Activation modulation: (c + epsilon) * features. epsilon keeps weak
/// positional information alive on inactive frames.
std::vector<double> modulate_mask(const std::vector<double>& features, int c_t, double epsilon);

struct PosEncoderConfig {
    std::size_t compression = 16;   // r, power of two
    std::size_t dim = 256;          // d_emb
    std::uint64_t enc_seed = 0;
    double epsilon = 0.1;           // activation floor in feature space
    double depth_norm_max = 10.0;   // meters mapped to 1.0
};

/// Temporal downsampling encoder over modulated position features: log2(r)
/// blocks of (conv1d k=3 s=2, group normalization over channel groups of 8,
/// SiLU), then a linear map to d_emb. Weights are seeded pseudo-random, not
/// trained; output has ceil(T/r) rows and is deterministic given the seeds.
PositionalEmbedding encode_positions(const Trajectory& traj, const FourierConfig& cfg,
                                     const PosEncoderConfig& enc);

inline PositionalEmbedding encode_positions(const Trajectory& traj, const FourierConfig& cfg,
                                            std::size_t compression, std::size_t dim,
                                            std::uint64_t enc_seed) {
    PosEncoderConfig e;
    e.compression = compression;
    e.dim = dim;
    e.enc_seed = enc_seed;
    return encode_positions(traj, cfg, e);
}

} // namespace foleylab
