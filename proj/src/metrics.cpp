#include <algorithm>
#include <cmath>

#include "dsp.hpp"
#include "foleylab/metrics.hpp"
#include "foleylab/mix.hpp"

namespace foleylab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double gcc_phat_lag(const AudioClip& stereo, double max_lag_s) {
    using detail::cplx;
    if (stereo.channels != 2) throw_invalid("gcc_phat_lag: stereo input required");
    const std::size_t n = stereo.frames();
    if (n == 0) throw Error(ErrorCode::estimation_error, "gcc_phat_lag: empty clip");

    const auto l = stereo.channel(0);
    const auto r = stereo.channel(1);
    double el = 0.0, er = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        el += l[i] * l[i];
        er += r[i] * r[i];
    }
    if (el <= 0.0 || er <= 0.0)
        throw Error(ErrorCode::estimation_error, "gcc_phat_lag: silent channel");

    const std::size_t nfft = detail::next_pow2(2 * n);
    std::vector<cplx> xl(nfft, cplx(0, 0)), xr(nfft, cplx(0, 0));
    for (std::size_t i = 0; i < n; ++i) {
        xl[i] = cplx(l[i], 0.0);
        xr[i] = cplx(r[i], 0.0);
    }
    detail::fft(xl, false);
    detail::fft(xr, false);

    std::vector<cplx> cross(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
        const cplx c = xl[k] * std::conj(xr[k]);
        const double mag = std::abs(c);
        cross[k] = mag > 1e-12 ? c / mag : cplx(0.0, 0.0);
    }
    detail::fft(cross, true);

    const double fs = stereo.sample_rate;
    const auto max_lag = static_cast<std::ptrdiff_t>(std::ceil(max_lag_s * fs)) + 1;

    // Positive lag k lives at index k, negative at nfft + k.
    double best = -1.0;
    std::ptrdiff_t best_lag = 0;
    auto corr_at = [&](std::ptrdiff_t lag) {
        const std::size_t idx = lag >= 0 ? static_cast<std::size_t>(lag)
                                         : nfft - static_cast<std::size_t>(-lag);
        return cross[idx].real();
    };
    for (std::ptrdiff_t lag = -max_lag; lag <= max_lag; ++lag) {
        const double v = corr_at(lag);
        if (v > best) {
            best = v;
            best_lag = lag;
        }
    }

    // Parabolic sub-sample refinement around the peak.
    double refined = static_cast<double>(best_lag);
    const double y0 = corr_at(best_lag - 1);
    const double y1 = corr_at(best_lag);
    const double y2 = corr_at(best_lag + 1);
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) > 1e-12) {
        const double delta = 0.5 * (y0 - y2) / denom;
        if (std::abs(delta) <= 1.0) refined += delta;
    }
    return refined / fs;
}

double gcc_phat_azimuth(const AudioClip& stereo, double interaural_m) {
    const double max_itd = interaural_m / kSpeedOfSoundMps;
    const double lag = gcc_phat_lag(stereo, max_itd);
    const double s = std::clamp(lag / max_itd, -1.0, 1.0);
    return std::clamp(90.0 + std::asin(s) * 180.0 / kPi, 0.0, 180.0);
}

double azimuth_mae(const std::vector<double>& estimates, const std::vector<double>& truths) {
    if (estimates.empty() || estimates.size() != truths.size())
        throw_invalid("azimuth_mae: lists must be non-empty and equal length");
    double acc = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) acc += std::abs(estimates[i] - truths[i]);
    return acc / static_cast<double>(estimates.size());
}

// ---------------------------------------------------------------------------

namespace {

void check_disjoint(const std::vector<EventSpan>& spans, const char* who) {
    std::vector<EventSpan> sorted = spans;
    std::sort(sorted.begin(), sorted.end(),
              [](const EventSpan& a, const EventSpan& b) { return a.start_s < b.start_s; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].start_s < sorted[i - 1].end_s)
            throw_invalid(std::string(who) + ": spans must be internally disjoint");
}

double union_length(std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    double total = 0.0, cur_start = 0.0, cur_end = -1.0;
    bool open = false;
    for (const auto& [s, e] : iv) {
        if (!open || s > cur_end) {
            if (open) total += cur_end - cur_start;
            cur_start = s;
            cur_end = e;
            open = true;
        } else {
            cur_end = std::max(cur_end, e);
        }
    }
    if (open) total += cur_end - cur_start;
    return total;
}

} // namespace

double temporal_iou(const std::vector<EventSpan>& pred, const std::vector<EventSpan>& truth) {
    check_disjoint(pred, "temporal_iou(pred)");
    check_disjoint(truth, "temporal_iou(truth)");
    if (pred.empty() && truth.empty()) return 1.0;

    std::vector<std::pair<double, double>> inter, uni;
    for (const auto& p : pred) {
        uni.emplace_back(p.start_s, p.end_s);
        for (const auto& t : truth) {
            const double s = std::max(p.start_s, t.start_s);
            const double e = std::min(p.end_s, t.end_s);
            if (e > s) inter.emplace_back(s, e);
        }
    }
    for (const auto& t : truth) uni.emplace_back(t.start_s, t.end_s);

    const double u = union_length(std::move(uni));
    if (u <= 0.0) return 1.0;
    return union_length(std::move(inter)) / u;
}

// ---------------------------------------------------------------------------

double loudness_error(const AudioClip& a, const AudioClip& b) {
    const double la = integrated_lufs(a);
    const double lb = integrated_lufs(b);
    if (!std::isfinite(la) || !std::isfinite(lb))
        throw Error(ErrorCode::estimation_error, "loudness_error: undefined for silence");
    return std::abs(la - lb);
}

double log_spectral_distance(const AudioClip& a, const AudioClip& b, Diagnostics* diag) {
    constexpr std::size_t kWin = 1024, kHop = 256;
    constexpr double kEps = 1e-10;
    if (a.sample_rate != b.sample_rate)
        throw_invalid("log_spectral_distance: sample rates differ");
    if (a.frames() != b.frames())
        diag_add(diag, "log_spectral_distance", Diagnostic::Severity::warning,
                 "durations differ; shorter side zero-padded");

    auto xa = a.channel_mean();
    auto xb = b.channel_mean();
    const std::size_t n = std::max(xa.size(), xb.size());
    xa.resize(n, 0.0);
    xb.resize(n, 0.0);

    const auto fa = detail::stft(xa, kWin, kHop);
    const auto fb = detail::stft(xb, kWin, kHop);
    const std::size_t frames = std::min(fa.size(), fb.size());
    if (frames == 0) return 0.0;

    double mean = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
        double acc = 0.0;
        const std::size_t nbins = kWin / 2 + 1;
        for (std::size_t k = 0; k < nbins; ++k) {
            const double pa = std::norm(fa[t][k]) + kEps;
            const double pb = std::norm(fb[t][k]) + kEps;
            const double d = 10.0 * std::log10(pa) - 10.0 * std::log10(pb);
            acc += d * d;
        }
        mean += std::sqrt(acc / static_cast<double>(nbins));
    }
    return mean / static_cast<double>(frames);
}

double rt60_error(const AudioClip& a, double target_s) {
    return std::abs(schroeder_rt60(a, /*strict=*/true) - target_s);
}

} // namespace foleylab
