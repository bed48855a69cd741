#include "foleylab/audio.hpp"

#include <algorithm>
#include <cmath>

#include "dsp.hpp"

namespace foleylab {

std::vector<double> AudioClip::channel(int ch) const {
    const std::size_t n = frames();
    std::vector<double> out(n);
    for (std::size_t f = 0; f < n; ++f) out[f] = at(f, ch);
    return out;
}

std::vector<double> AudioClip::channel_mean() const {
    const std::size_t n = frames();
    std::vector<double> out(n, 0.0);
    for (std::size_t f = 0; f < n; ++f) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) acc += at(f, c);
        out[f] = acc / channels;
    }
    return out;
}

void AudioClip::set_channel(int ch, const std::vector<double>& data) {
    for (std::size_t f = 0; f < frames() && f < data.size(); ++f)
        at(f, ch) = static_cast<float>(data[f]);
}

void AudioClip::validate() const {
    if (sample_rate <= 0) throw_invalid("AudioClip: sample_rate must be positive");
    if (channels != 1 && channels != 2 && channels != 6)
        throw_invalid("AudioClip: channels must be 1, 2 or 6");
    if (samples.size() % static_cast<std::size_t>(channels) != 0)
        throw_invalid("AudioClip: sample count not a multiple of channel count");
    for (float s : samples)
        if (!std::isfinite(s)) throw_invalid("AudioClip: non-finite sample");
}

// ---------------------------------------------------------------------------

std::vector<double> rms_envelope(const AudioClip& clip) {
    const auto x = clip.channel_mean();
    const std::size_t win = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(kRmsWindowS * clip.sample_rate)));
    const std::size_t hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(kRmsHopS * clip.sample_rate)));
    if (x.empty()) return {};

    std::vector<double> env;
    env.reserve(x.size() / hop + 1);
    for (std::size_t start = 0; start < x.size(); start += hop) {
        const std::size_t end = std::min(start + win, x.size());
        double acc = 0.0;
        for (std::size_t i = start; i < end; ++i) acc += x[i] * x[i];
        env.push_back(std::sqrt(acc / static_cast<double>(end - start)));
    }
    return env;
}

std::vector<std::pair<double, double>> gate_silence(const AudioClip& clip, double threshold_db) {
    if (threshold_db >= 0.0) throw_invalid("gate_silence: threshold_db must be negative");
    const auto env = rms_envelope(clip);
    if (env.empty()) return {};

    const double thr = std::pow(10.0, threshold_db / 20.0);
    const double win_s = kRmsWindowS;
    const double dur = clip.duration_s();

    std::vector<std::pair<double, double>> segments;
    bool open = false;
    double seg_start = 0.0;
    for (std::size_t k = 0; k <= env.size(); ++k) {
        const bool above = k < env.size() && env[k] > thr;
        if (above && !open) {
            open = true;
            seg_start = static_cast<double>(k) * kRmsHopS;
        } else if (!above && open) {
            open = false;
            const double seg_end = std::min(dur, static_cast<double>(k - 1) * kRmsHopS + win_s);
            if (seg_end - seg_start >= 0.050) segments.emplace_back(seg_start, seg_end);
        }
    }
    return segments;
}

// ---------------------------------------------------------------------------

namespace {

// Per-bin quantile of magnitude over time.
double quantile(std::vector<double>& v, double q) {
    if (v.empty()) return 0.0;
    const std::size_t idx =
        std::min(v.size() - 1, static_cast<std::size_t>(q * static_cast<double>(v.size())));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

std::vector<double> denoise_channel(const std::vector<double>& x, const DenoiseConfig& cfg,
                                    double noise_floor_db) {
    using detail::cplx;
    auto frames = detail::stft(x, cfg.window, cfg.hop);
    const std::size_t nbins = cfg.window;
    const std::size_t nframes = frames.size();

    // Rayleigh bias compensation: the raw percentile of a noise magnitude
    // tracks well below its mean; scale it so beta=1.0 subtracts the
    // mean-equivalent noise magnitude.
    const double p = cfg.noise_percentile;
    const double rayleigh_q = std::sqrt(-2.0 * std::log(1.0 - p)); // quantile in units of sigma
    const double rayleigh_mean = std::sqrt(3.14159265358979323846 / 2.0);
    const double bias = rayleigh_q > 1e-12 ? rayleigh_mean / rayleigh_q : 1.0;

    double peak_mag = 0.0;
    std::vector<double> noise(nbins, 0.0);
    std::vector<double> col(nframes);
    for (std::size_t b = 0; b < nbins; ++b) {
        for (std::size_t t = 0; t < nframes; ++t) col[t] = std::abs(frames[t][b]);
        peak_mag = std::max(peak_mag, *std::max_element(col.begin(), col.end()));
        noise[b] = quantile(col, p) * bias;
    }

    const double floor_mag = peak_mag * std::pow(10.0, noise_floor_db / 20.0);
    for (std::size_t t = 0; t < nframes; ++t) {
        for (std::size_t b = 0; b < nbins; ++b) {
            const double m = std::abs(frames[t][b]);
            double m2 = std::max(m - cfg.beta * noise[b], cfg.alpha * m);
            if (m < floor_mag) m2 = cfg.alpha * m;
            frames[t][b] *= (m > 1e-300 ? m2 / m : 0.0);
        }
    }
    return detail::istft(frames, cfg.window, cfg.hop, x.size());
}

} // namespace

AudioClip spectral_denoise(const AudioClip& clip, double noise_floor_db, const DenoiseConfig& cfg,
                           Diagnostics* diag) {
    if (clip.channels > 2) throw_invalid("spectral_denoise: mono or stereo only");
    if (clip.frames() < cfg.window) {
        diag_add(diag, "spectral_denoise", Diagnostic::Severity::warning,
                 "clip shorter than one analysis window; returned unchanged");
        return clip;
    }
    AudioClip out = clip;
    for (int c = 0; c < clip.channels; ++c)
        out.set_channel(c, denoise_channel(clip.channel(c), cfg, noise_floor_db));
    return out;
}

// ---------------------------------------------------------------------------

AudioClip loop_pad(const AudioClip& clip, double target_s, Diagnostics* diag) {
    if (clip.frames() == 0) throw_invalid("loop_pad: empty clip");
    const std::size_t target_frames =
        static_cast<std::size_t>(std::lround(target_s * clip.sample_rate));
    const std::size_t n = clip.frames();
    if (target_frames + 1 < n) throw_invalid("loop_pad: target shorter than clip");
    if (target_frames <= n) return clip;

    std::size_t xfade = static_cast<std::size_t>(std::lround(0.050 * clip.sample_rate));
    xfade = std::min(xfade, n / 2);
    if (xfade < 2) {
        diag_add(diag, "loop_pad", Diagnostic::Severity::warning,
                 "clip too short for a crossfade; hard-joining repetitions");
        xfade = 0;
    }

    const int nch = clip.channels;
    AudioClip out = AudioClip::silence(clip.sample_rate, nch, target_frames);

    // Equal-power crossfade: the next repetition starts xfade frames before
    // the previous one ends.
    std::size_t write = 0; // frame where the current repetition begins
    while (write < target_frames) {
        for (std::size_t f = 0; f < n && write + f < target_frames; ++f) {
            double fade_in = 1.0;
            if (write > 0 && xfade > 0 && f < xfade) {
                const double t = (static_cast<double>(f) + 0.5) / static_cast<double>(xfade);
                fade_in = std::sin(t * 1.5707963267948966);
                // the tail of the previous repetition gets the matching cosine
            }
            double fade_out = 1.0;
            const bool more = write + n < target_frames + xfade;
            if (more && xfade > 0 && f >= n - xfade) {
                const double t =
                    (static_cast<double>(f - (n - xfade)) + 0.5) / static_cast<double>(xfade);
                fade_out = std::cos(t * 1.5707963267948966);
            }
            for (int c = 0; c < nch; ++c)
                out.at(write + f, c) += static_cast<float>(clip.at(f, c) * fade_in * fade_out);
        }
        if (n <= xfade) break; // degenerate, guarded above
        write += n - xfade;
    }
    return out;
}

} // namespace foleylab
