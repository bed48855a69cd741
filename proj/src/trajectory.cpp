#include "foleylab/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace foleylab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}

double azimuth_from_cue(const VisualCue& cue, double ppm) {
    if (cue.depth_m <= 0.0) throw_invalid("azimuth_from_cue: depth must be positive");
    if (ppm <= 0.0) throw_invalid("azimuth_from_cue: ppm must be positive");
    if (cue.frame_width <= 0.0) throw_invalid("azimuth_from_cue: frame width must be positive");
    const double lateral_m = (cue.box_center_x - cue.frame_width / 2.0) / ppm;
    return std::atan(lateral_m / cue.depth_m) * 180.0 / kPi + 90.0;
}

Trajectory interpolate_trajectory(const std::vector<VisualCue>& cues, double fps,
                                  std::size_t total_frames, double ppm) {
    if (cues.empty()) throw_invalid("interpolate_trajectory: need at least one cue");
    if (total_frames == 0) throw_invalid("interpolate_trajectory: total_frames must be >= 1");
    for (std::size_t i = 1; i < cues.size(); ++i) {
        if (cues[i].frame_index <= cues[i - 1].frame_index)
            throw_invalid("interpolate_trajectory: cue frame indices must be strictly increasing");
    }
    if (cues.back().frame_index >= total_frames)
        throw_invalid("interpolate_trajectory: cue frame index beyond trajectory length");

    struct Key {
        std::size_t frame;
        double depth;
        double azimuth;
    };
    std::vector<Key> keys;
    keys.reserve(cues.size());
    for (const auto& c : cues) keys.push_back({c.frame_index, c.depth_m, azimuth_from_cue(c, ppm)});

    Trajectory traj;
    traj.fps = fps;
    traj.points.resize(total_frames);
    std::size_t seg = 0;
    for (std::size_t t = 0; t < total_frames; ++t) {
        TrajectoryPoint p;
        p.active = 1;
        if (t <= keys.front().frame) {
            p.depth_m = keys.front().depth;
            p.azimuth_deg = keys.front().azimuth;
        } else if (t >= keys.back().frame) {
            p.depth_m = keys.back().depth;
            p.azimuth_deg = keys.back().azimuth;
        } else {
            while (keys[seg + 1].frame < t) ++seg;
            const Key& a = keys[seg];
            const Key& b = keys[seg + 1];
            const double u = static_cast<double>(t - a.frame) / static_cast<double>(b.frame - a.frame);
            p.depth_m = a.depth + u * (b.depth - a.depth);
            p.azimuth_deg = a.azimuth + u * (b.azimuth - a.azimuth);
        }
        traj.points[t] = p;
    }
    return traj;
}

Trajectory apply_activation(const Trajectory& traj, const std::vector<int>& activation) {
    if (activation.size() != traj.points.size())
        throw_invalid("apply_activation: activation length must equal trajectory length");
    Trajectory out = traj;
    for (std::size_t t = 0; t < activation.size(); ++t)
        out.points[t].active = activation[t] != 0 ? 1 : 0;
    return out;
}

std::vector<double> fourier_projection(const FourierConfig& cfg) {
    if (cfg.bands < 1) throw_invalid("fourier_projection: bands must be >= 1");
    if (cfg.sigma <= 0.0) throw_invalid("fourier_projection: sigma must be positive");
    detail::Rng rng(cfg.seed);
    std::vector<double> b(cfg.bands * 2);
    for (auto& v : b) v = rng.normal(0.0, cfg.sigma);
    return b;
}

std::vector<double> fourier_features(double depth_norm, double azimuth_norm,
                                     const std::vector<double>& projection, std::size_t bands) {
    std::vector<double> out(2 * bands);
    for (std::size_t i = 0; i < bands; ++i) {
        const double phase = kTwoPi * (projection[2 * i] * depth_norm + projection[2 * i + 1] * azimuth_norm);
        out[i] = std::cos(phase);
        out[bands + i] = std::sin(phase);
    }
    return out;
}

std::vector<double> fourier_features(double depth_norm, double azimuth_norm,
                                     const FourierConfig& cfg) {
    return fourier_features(depth_norm, azimuth_norm, fourier_projection(cfg), cfg.bands);
}

std::vector<double> modulate_mask(const std::vector<double>& features, int c_t, double epsilon) {
    if (epsilon < 0.0) throw_invalid("modulate_mask: epsilon must be non-negative");
    const double scale = static_cast<double>(c_t) + epsilon;
    std::vector<double> out(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) out[i] = scale * features[i];
    return out;
}

// ---------------------------------------------------------------------------
// Seeded positional encoder

namespace {

struct EncoderWeights {
    // One block per halving of the temporal dimension.
    struct Block {
        std::vector<double> conv; // channels x channels x 3
        std::vector<double> gamma, beta;
    };
    std::vector<Block> blocks;
    std::vector<double> linear; // dim x channels
    std::vector<double> bias;   // dim
};

EncoderWeights make_weights(std::size_t channels, std::size_t n_blocks, std::size_t dim,
                            std::uint64_t seed) {
    detail::Rng rng(seed);
    EncoderWeights w;
    const double conv_std = 1.0 / std::sqrt(3.0 * static_cast<double>(channels));
    for (std::size_t b = 0; b < n_blocks; ++b) {
        EncoderWeights::Block blk;
        blk.conv.resize(channels * channels * 3);
        for (auto& v : blk.conv) v = rng.normal(0.0, conv_std);
        blk.gamma.resize(channels);
        blk.beta.resize(channels);
        for (auto& v : blk.gamma) v = rng.normal(1.0, 0.1);
        for (auto& v : blk.beta) v = rng.normal(0.0, 0.1);
        w.blocks.push_back(std::move(blk));
    }
    const double lin_std = 1.0 / std::sqrt(static_cast<double>(channels));
    w.linear.resize(dim * channels);
    for (auto& v : w.linear) v = rng.normal(0.0, lin_std);
    w.bias.resize(dim);
    for (auto& v : w.bias) v = rng.normal(0.0, 0.01);
    return w;
}

double silu(double x) { return x / (1.0 + std::exp(-x)); }

// data is channels x time, row-major per channel.
void run_block(const EncoderWeights::Block& blk, std::vector<double>& data, std::size_t channels,
               std::size_t& time) {
    const std::size_t t_out = (time + 1) / 2; // ceil(time / 2): k=3, s=2, pad=1
    std::vector<double> out(channels * t_out, 0.0);
    for (std::size_t co = 0; co < channels; ++co) {
        for (std::size_t t = 0; t < t_out; ++t) {
            double acc = 0.0;
            const std::ptrdiff_t center = static_cast<std::ptrdiff_t>(2 * t);
            for (std::size_t ci = 0; ci < channels; ++ci) {
                const double* k = &blk.conv[(co * channels + ci) * 3];
                for (int dk = -1; dk <= 1; ++dk) {
                    const std::ptrdiff_t idx = center + dk;
                    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(time)) continue;
                    acc += k[dk + 1] * data[ci * time + static_cast<std::size_t>(idx)];
                }
            }
            out[co * t_out + t] = acc;
        }
    }

    // Group normalization over groups of 8 channels (trailing group may be
    // smaller), statistics over (group channels x time).
    const std::size_t group = 8;
    for (std::size_t g0 = 0; g0 < channels; g0 += group) {
        const std::size_t g1 = std::min(channels, g0 + group);
        const std::size_t n = (g1 - g0) * t_out;
        double mean = 0.0;
        for (std::size_t c = g0; c < g1; ++c)
            for (std::size_t t = 0; t < t_out; ++t) mean += out[c * t_out + t];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t c = g0; c < g1; ++c)
            for (std::size_t t = 0; t < t_out; ++t) {
                const double d = out[c * t_out + t] - mean;
                var += d * d;
            }
        var /= static_cast<double>(n);
        const double inv = 1.0 / std::sqrt(var + 1e-5);
        for (std::size_t c = g0; c < g1; ++c)
            for (std::size_t t = 0; t < t_out; ++t) {
                double v = (out[c * t_out + t] - mean) * inv;
                out[c * t_out + t] = silu(blk.gamma[c] * v + blk.beta[c]);
            }
    }

    data = std::move(out);
    time = t_out;
}

} // namespace

PositionalEmbedding encode_positions(const Trajectory& traj, const FourierConfig& cfg,
                                     const PosEncoderConfig& enc) {
    if (enc.compression < 1 || (enc.compression & (enc.compression - 1)) != 0)
        throw_invalid("encode_positions: compression ratio must be a power of two");
    if (enc.dim < 1) throw_invalid("encode_positions: dim must be >= 1");
    if (traj.points.empty()) throw_invalid("encode_positions: empty trajectory");

    const std::size_t T = traj.points.size();
    const std::size_t channels = 2 * cfg.bands;
    const auto projection = fourier_projection(cfg);

    // channels x T feature matrix of mask-modulated Fourier features.
    std::vector<double> data(channels * T);
    for (std::size_t t = 0; t < T; ++t) {
        const auto& p = traj.points[t];
        const double dn = std::clamp(p.depth_m / enc.depth_norm_max, 0.0, 1.0);
        const double an = std::clamp(p.azimuth_deg / 180.0, 0.0, 1.0);
        const auto feat = fourier_features(dn, an, projection, cfg.bands);
        const auto mod = modulate_mask(feat, p.active, enc.epsilon);
        for (std::size_t c = 0; c < channels; ++c) data[c * T + t] = mod[c];
    }

    std::size_t n_blocks = 0;
    for (std::size_t r = enc.compression; r > 1; r >>= 1) ++n_blocks;
    const auto weights = make_weights(channels, n_blocks, enc.dim, enc.enc_seed);

    std::size_t time = T;
    for (const auto& blk : weights.blocks) run_block(blk, data, channels, time);

    PositionalEmbedding emb;
    emb.frames = time;
    emb.dim = enc.dim;
    emb.compression = enc.compression;
    emb.values.resize(time * enc.dim);
    for (std::size_t t = 0; t < time; ++t) {
        for (std::size_t d = 0; d < enc.dim; ++d) {
            double acc = weights.bias[d];
            for (std::size_t c = 0; c < channels; ++c)
                acc += weights.linear[d * channels + c] * data[c * time + t];
            emb.values[t * enc.dim + d] = acc;
        }
    }
    return emb;
}

} // namespace foleylab
