#include <algorithm>
#include <cmath>
#include <limits>

#include "dsp.hpp"
#include "foleylab/mix.hpp"

namespace foleylab {

namespace {

constexpr double kAbsoluteGateLufs = -70.0;
constexpr double kRelativeGateLu = -10.0;
constexpr double kMeterOffset = -0.691; // compensates the K-filter gain at 997 Hz

struct Stage {
    double b0, b1, b2, a1, a2;
};

// Two-stage K-weighting pre-filter, redesigned for the clip's sample rate.
// At 48 kHz this reproduces the published reference coefficients.
Stage shelf_stage(double fs) {
    const double db = 3.999843853973347;
    const double f0 = 1681.974450955533;
    const double q = 0.7071752369554196;
    const double k = std::tan(3.14159265358979323846 * f0 / fs);
    const double vh = std::pow(10.0, db / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + k / q + k * k;
    return Stage{(vh + vb * k / q + k * k) / a0, 2.0 * (k * k - vh) / a0,
                 (vh - vb * k / q + k * k) / a0, 2.0 * (k * k - 1.0) / a0,
                 (1.0 - k / q + k * k) / a0};
}

Stage highpass_stage(double fs) {
    const double f0 = 38.13547087602444;
    const double q = 0.5003270373238773;
    const double k = std::tan(3.14159265358979323846 * f0 / fs);
    const double a0 = 1.0 + k / q + k * k;
    return Stage{1.0, -2.0, 1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0};
}

void run_stage(const Stage& s, std::vector<double>& x) {
    double s1 = 0.0, s2 = 0.0;
    for (double& v : x) {
        const double y = s.b0 * v + s1;
        s1 = s.b1 * v - s.a1 * y + s2;
        s2 = s.b2 * v - s.a2 * y;
        v = y;
    }
}

std::vector<double> channel_weights(int channels) {
    switch (channels) {
    case 1: return {1.0};
    case 2: return {1.0, 1.0};
    case 6: return {1.0, 1.0, 1.0, 0.0, 1.41, 1.41}; // FL FR C LFE SL SR
    default: throw_invalid("integrated_lufs: unsupported channel count");
    }
}

} // namespace

double integrated_lufs(const AudioClip& clip, Diagnostics* diag) {
    if (clip.frames() == 0) return -std::numeric_limits<double>::infinity();
    const double fs = clip.sample_rate;
    const auto weights = channel_weights(clip.channels);
    const Stage st1 = shelf_stage(fs);
    const Stage st2 = highpass_stage(fs);

    // K-weighted per-channel signals.
    std::vector<std::vector<double>> filtered(clip.channels);
    for (int c = 0; c < clip.channels; ++c) {
        filtered[c] = clip.channel(c);
        run_stage(st1, filtered[c]);
        run_stage(st2, filtered[c]);
    }

    const auto block = static_cast<std::size_t>(std::lround(0.400 * fs));
    const std::size_t hop = block / 4; // 75% overlap
    const std::size_t n = clip.frames();

    auto weighted_ms = [&](std::size_t start, std::size_t len) {
        double acc = 0.0;
        for (int c = 0; c < clip.channels; ++c) {
            if (weights[c] == 0.0) continue;
            double e = 0.0;
            for (std::size_t i = start; i < start + len; ++i) e += filtered[c][i] * filtered[c][i];
            acc += weights[c] * e / static_cast<double>(len);
        }
        return acc;
    };

    if (n < block) {
        diag_add(diag, "integrated_lufs", Diagnostic::Severity::warning,
                 "clip shorter than one gating block; measured ungated");
        const double ms = weighted_ms(0, n);
        return ms > 0.0 ? kMeterOffset + 10.0 * std::log10(ms)
                        : -std::numeric_limits<double>::infinity();
    }

    std::vector<double> block_ms;
    for (std::size_t start = 0; start + block <= n; start += hop)
        block_ms.push_back(weighted_ms(start, block));

    // Absolute gate at -70 LUFS.
    std::vector<double> gated;
    for (double ms : block_ms) {
        const double l = kMeterOffset + 10.0 * std::log10(std::max(ms, 1e-300));
        if (l > kAbsoluteGateLufs) gated.push_back(ms);
    }
    if (gated.empty()) return -std::numeric_limits<double>::infinity();

    // Relative gate 10 LU below the absolute-gated mean.
    double mean = 0.0;
    for (double ms : gated) mean += ms;
    mean /= static_cast<double>(gated.size());
    const double rel_thr = kMeterOffset + 10.0 * std::log10(mean) + kRelativeGateLu;

    double final_mean = 0.0;
    std::size_t count = 0;
    for (double ms : gated) {
        const double l = kMeterOffset + 10.0 * std::log10(ms);
        if (l > rel_thr) {
            final_mean += ms;
            ++count;
        }
    }
    if (count == 0) return -std::numeric_limits<double>::infinity();
    final_mean /= static_cast<double>(count);
    return kMeterOffset + 10.0 * std::log10(final_mean);
}

// ---------------------------------------------------------------------------

double schroeder_rt60(const AudioClip& clip, bool strict) {
    const std::size_t n = clip.frames();
    if (n == 0) {
        if (strict) throw Error(ErrorCode::estimation_error, "schroeder_rt60: empty clip");
        return 0.0;
    }

    // Per-frame energy, mean over channels; backward integration.
    std::vector<double> edc(n, 0.0);
    double acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        double e = 0.0;
        for (int c = 0; c < clip.channels; ++c) {
            const double v = clip.at(i, c);
            e += v * v;
        }
        acc += e / clip.channels;
        edc[i] = acc;
    }
    const double total = edc[0];
    if (total <= 0.0) {
        if (strict) throw Error(ErrorCode::estimation_error, "schroeder_rt60: silent clip");
        return 0.0;
    }

    // Least squares on the -5..-35 dB stretch of the decay curve.
    const double fs = clip.sample_rate;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    std::ptrdiff_t cross5 = -1, cross35 = -1;
    for (std::size_t i = 0; i < n; ++i) {
        const double db = 10.0 * std::log10(std::max(edc[i] / total, 1e-30));
        if (cross5 < 0 && db <= -5.0) cross5 = static_cast<std::ptrdiff_t>(i);
        if (cross35 < 0 && db <= -35.0) cross35 = static_cast<std::ptrdiff_t>(i);
        if (db > -5.0 || db < -35.0) continue;
        const double t = static_cast<double>(i) / fs;
        sx += t;
        sy += db;
        sxx += t * t;
        sxy += t * db;
        ++m;
    }
    if (cross35 < 0) {
        // The tail never decays 35 dB; nothing trustworthy to fit.
        if (strict) throw Error(ErrorCode::estimation_error, "schroeder_rt60: decay region too short");
        return 0.0;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (m < 8 || std::abs(denom) < 1e-30) {
        // Near-instantaneous decay (e.g. a dry impulse): the curve crossed the
        // fit region in fewer samples than a line needs. Extrapolate from the
        // crossing times instead.
        return 2.0 * static_cast<double>(cross35 - cross5) / fs;
    }
    const double slope = (static_cast<double>(m) * sxy - sx * sy) / denom; // dB per second
    if (slope >= -1e-9) {
        if (strict) throw Error(ErrorCode::estimation_error, "schroeder_rt60: no decay");
        return 0.0;
    }
    return -60.0 / slope;
}

// ---------------------------------------------------------------------------

std::array<double, 3> band_energies_db(const AudioClip& clip) {
    using detail::cplx;
    const auto x = clip.channel_mean();
    if (x.empty()) return {-120.0, -120.0, -120.0};

    const std::size_t nfft = detail::next_pow2(std::max<std::size_t>(x.size(), 16));
    std::vector<cplx> buf(nfft, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = cplx(x[i], 0.0);
    detail::fft(buf, false);

    const double bin_hz = static_cast<double>(clip.sample_rate) / static_cast<double>(nfft);
    double e[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k <= nfft / 2; ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        const double p = std::norm(buf[k]);
        if (f < 250.0)
            e[0] += p;
        else if (f <= 4000.0)
            e[1] += p;
        else
            e[2] += p;
    }
    const double total = e[0] + e[1] + e[2];
    std::array<double, 3> out{};
    for (int b = 0; b < 3; ++b)
        out[b] = total > 0.0 ? 10.0 * std::log10(std::max(e[b] / total, 1e-12)) : -120.0;
    return out;
}

TrackAnalysis analyze_track(const AudioClip& clip, const std::string& tag, int track_id,
                            Diagnostics* diag) {
    if (clip.frames() == 0) throw_invalid("analyze_track: empty clip");
    TrackAnalysis a;
    a.track_id = track_id;
    a.semantic_tag = tag;
    a.rt60_s = schroeder_rt60(clip);
    a.lufs = integrated_lufs(clip, diag);
    a.band_db = band_energies_db(clip);
    return a;
}

} // namespace foleylab
