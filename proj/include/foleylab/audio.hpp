#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "foleylab/diagnostics.hpp"
#include "foleylab/error.hpp"

namespace foleylab {

/// Sampled audio, frame-major interleaved float32 in nominal [-1, 1].
/// Channel counts are restricted to mono, stereo, and 5.1; the 6-channel
/// order is fixed to FL, FR, C, LFE, SL, SR.
struct AudioClip {
    int sample_rate = 0;
    int channels = 0;
    std::vector<float> samples;

    AudioClip() = default;
    AudioClip(int rate, int nch, std::vector<float> data)
        : sample_rate(rate), channels(nch), samples(std::move(data)) {}

    static AudioClip silence(int rate, int nch, std::size_t frames) {
        return AudioClip(rate, nch, std::vector<float>(frames * static_cast<std::size_t>(nch), 0.0f));
    }

    std::size_t frames() const {
        return channels > 0 ? samples.size() / static_cast<std::size_t>(channels) : 0;
    }
    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(frames()) / sample_rate : 0.0;
    }

    float& at(std::size_t frame, int ch) {
        return samples[frame * static_cast<std::size_t>(channels) + static_cast<std::size_t>(ch)];
    }
    float at(std::size_t frame, int ch) const {
        return samples[frame * static_cast<std::size_t>(channels) + static_cast<std::size_t>(ch)];
    }

    /// One channel as a contiguous double vector (DSP runs in double).
    std::vector<double> channel(int ch) const;
    /// Per-frame mean across channels.
    std::vector<double> channel_mean() const;
    void set_channel(int ch, const std::vector<double>& data);

    /// Throws if the structural invariants do not hold (sample rate, channel
    /// count, interleave alignment, finite amplitudes).
    void validate() const;
};

enum class WavEncoding { pcm16, float32 };

/// Reads a RIFF/WAVE file (PCM16, PCM24 or IEEE float32; 1, 2 or 6 channels).
/// Integer samples are scaled by 1/2^(bits-1).
AudioClip load_wav(const std::filesystem::path& path);

/// Writes `clip` as PCM16 or float32 WAV. 6-channel clips get a
/// WAVEFORMATEXTENSIBLE header with the standard 5.1 channel mask. PCM16
/// saturates out-of-range samples and reports the clipped count through
/// `diag`.
void save_wav(const AudioClip& clip, const std::filesystem::path& path, WavEncoding encoding,
              Diagnostics* diag = nullptr);

// ---------------------------------------------------------------------------
// Filtering

struct BiquadSpec {
    enum class Kind { lowpass, highpass, lowshelf, highshelf, peaking };

    Kind kind = Kind::lowpass;
    double cutoff_or_center_hz = 1000.0;
    double q = 0.70710678118654752; // shelf kinds use S=1 slope; q applies to LP/HP/peaking
    double gain_db = 0.0;           // shelf/peaking only
    int order = 2;                  // even; LP/HP above order 2 cascade Butterworth-Q sections
};

/// Per-channel IIR filtering with RBJ cookbook coefficients, zero initial
/// state, output length == input length. Lowpass/highpass specs of order > 2
/// cascade order/2 sections with the Butterworth pole-Q distribution so that
/// e.g. order=4 is a true 4th-order Butterworth.
AudioClip biquad_apply(const AudioClip& clip, const BiquadSpec& spec);

/// Normalized biquad coefficients {b0,b1,b2,a1,a2} for one section.
struct BiquadCoeffs {
    double b0, b1, b2, a1, a2;
};
/// All sections implied by `spec` at the given sample rate.
std::vector<BiquadCoeffs> biquad_design(const BiquadSpec& spec, int sample_rate);

/// Runs one coefficient set over a buffer (transposed direct form II).
void biquad_run(const BiquadCoeffs& c, std::vector<double>& x);

// ---------------------------------------------------------------------------
// Corpus preparation

/// Maximal segments whose short-term RMS (25 ms window, 10 ms hop) exceeds
/// `threshold_db` relative to full scale; segments shorter than 50 ms are
/// dropped. Returns (start_s, end_s) pairs, disjoint and sorted.
std::vector<std::pair<double, double>> gate_silence(const AudioClip& clip, double threshold_db);

struct DenoiseConfig {
    std::size_t window = 1024;
    std::size_t hop = 256;
    double beta = 1.0;             // over-subtraction factor
    double alpha = 0.05;           // spectral floor (fraction of original magnitude)
    double noise_percentile = 0.10;
};

/// Spectral-subtraction denoiser. Per-bin noise is estimated as the
/// `noise_percentile` quantile of magnitude over time, bias-compensated to a
/// Rayleigh mean equivalent, then magnitudes become
/// max(mag - beta*noise, alpha*mag). Bins more than |noise_floor_db| below the
/// clip's spectral peak are treated as pure noise floor. Length is preserved.
AudioClip spectral_denoise(const AudioClip& clip, double noise_floor_db,
                           const DenoiseConfig& cfg = {}, Diagnostics* diag = nullptr);

/// Extends `clip` to `target_s` seconds by repeating it with 50 ms equal-power
/// crossfades at the seams. Output duration is within one frame of target.
AudioClip loop_pad(const AudioClip& clip, double target_s, Diagnostics* diag = nullptr);

// Shared analysis constants: 25 ms RMS windows on a 10 ms hop.
inline constexpr double kRmsWindowS = 0.025;
inline constexpr double kRmsHopS = 0.010;

/// Short-term RMS envelope over a channel-mean signal. Sample k covers the
/// window starting at k * kRmsHopS.
std::vector<double> rms_envelope(const AudioClip& clip);

} // namespace foleylab
