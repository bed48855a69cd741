#include "foleylab/spatializer.hpp"

#include <algorithm>
#include <cmath>

namespace foleylab {

namespace {
constexpr double kPi = 3.14159265358979323846;

double preset_rt60(RoomSpec::Preset p) {
    switch (p) {
    case RoomSpec::Preset::dry: return 0.0;
    case RoomSpec::Preset::room: return 0.4;
    case RoomSpec::Preset::chamber: return 0.8;
    case RoomSpec::Preset::hall: return 1.5;
    case RoomSpec::Preset::plate: return 1.1;
    case RoomSpec::Preset::custom: return 0.0;
    }
    return 0.0;
}
} // namespace

const char* preset_name(RoomSpec::Preset p) {
    switch (p) {
    case RoomSpec::Preset::dry: return "dry";
    case RoomSpec::Preset::room: return "room";
    case RoomSpec::Preset::chamber: return "chamber";
    case RoomSpec::Preset::hall: return "hall";
    case RoomSpec::Preset::plate: return "plate";
    case RoomSpec::Preset::custom: return "custom";
    }
    return "custom";
}

RoomSpec RoomSpec::from_preset(Preset p, double wet, double interaural) {
    RoomSpec r;
    r.preset = p;
    r.rt60_s = preset_rt60(p);
    r.wet_ratio = p == Preset::dry ? 0.0 : wet;
    r.interaural_m = interaural;
    return r;
}

RoomSpec RoomSpec::from_preset(const std::string& name, double wet, double interaural) {
    for (Preset p : {Preset::dry, Preset::room, Preset::chamber, Preset::hall, Preset::plate}) {
        if (name == preset_name(p)) return from_preset(p, wet, interaural);
    }
    throw_invalid("RoomSpec: unknown preset '" + name + "'");
}

void RoomSpec::validate(bool strict_interaural) const {
    if (rt60_s < 0.0) throw_invalid("RoomSpec: rt60 must be non-negative");
    if (wet_ratio < 0.0 || wet_ratio > 1.0) throw_invalid("RoomSpec: wet_ratio must be in [0,1]");
    if (strict_interaural && (interaural_m < 0.16 || interaural_m > 0.18))
        throw_invalid("RoomSpec: interaural distance outside [0.16, 0.18] m");
    if (interaural_m <= 0.0) throw_invalid("RoomSpec: interaural distance must be positive");
}

double itd_of(double azimuth_deg, double interaural_m) {
    return interaural_m / kSpeedOfSoundMps * std::sin((azimuth_deg - 90.0) * kPi / 180.0);
}

std::pair<double, double> pan_gains(double azimuth_deg, double depth_m, double d_ref) {
    if (depth_m <= 0.0) throw_invalid("pan_gains: depth must be positive");
    if (d_ref <= 0.0) throw_invalid("pan_gains: d_ref must be positive");
    const double psi = azimuth_deg * kPi / 360.0;
    const double dist = d_ref / std::max(depth_m, d_ref);
    return {std::cos(psi) * dist, std::sin(psi) * dist};
}

// ---------------------------------------------------------------------------

namespace {

void comb(const std::vector<double>& in, std::vector<double>& acc, std::size_t delay, double g) {
    std::vector<double> buf(acc.size(), 0.0); // acc is already output-length
    for (std::size_t n = 0; n < acc.size(); ++n) {
        const double x = n < in.size() ? in[n] : 0.0;
        const double fb = n >= delay ? buf[n - delay] : 0.0;
        buf[n] = x + g * fb;
        acc[n] += buf[n];
    }
}

void allpass_inplace(std::vector<double>& x, std::size_t delay, double g) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double xd = n >= delay ? x[n - delay] : 0.0;
        const double yd = n >= delay ? y[n - delay] : 0.0;
        y[n] = -g * x[n] + xd + g * yd;
    }
    x = std::move(y);
}

} // namespace

AudioClip schroeder_reverb(const AudioClip& clip, const RoomSpec& room) {
    room.validate(false);
    if (room.rt60_s <= 0.0 || room.wet_ratio <= 0.0) return clip;

    const int fs = clip.sample_rate;
    const std::size_t tail = static_cast<std::size_t>(std::ceil(room.rt60_s * fs));
    const std::size_t out_frames = clip.frames() + tail;

    static constexpr double kCombMs[4] = {29.7, 37.1, 41.1, 43.7};
    static constexpr double kAllpassMs[2] = {5.0, 1.7};

    AudioClip out = AudioClip::silence(fs, clip.channels, out_frames);
    for (int ch = 0; ch < clip.channels; ++ch) {
        const auto dry = clip.channel(ch);
        std::vector<double> wet(out_frames, 0.0);
        for (double ms : kCombMs) {
            const auto delay = static_cast<std::size_t>(std::lround(ms * fs / 1000.0));
            // Feedback chosen so this comb decays 60 dB in exactly rt60.
            const double g = std::pow(10.0, -3.0 * (static_cast<double>(delay) / fs) / room.rt60_s);
            comb(dry, wet, delay, g);
        }
        for (double& v : wet) v *= 0.25; // mean of the comb bank
        for (double ms : kAllpassMs) {
            const auto delay = static_cast<std::size_t>(std::lround(ms * fs / 1000.0));
            allpass_inplace(wet, delay, 0.7);
        }
        for (std::size_t n = 0; n < out_frames; ++n) {
            const double d = n < dry.size() ? dry[n] : 0.0;
            out.at(n, ch) =
                static_cast<float>((1.0 - room.wet_ratio) * d + room.wet_ratio * wet[n]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Per-sample activity envelope with 10 ms raised-cosine fades placed inside
// the active region, so inactive spans stay exactly zero.
std::vector<double> activity_envelope(const Trajectory& traj, int fs, std::size_t n) {
    std::vector<double> env(n, 1.0);
    const double fps = traj.fps;
    bool any_inactive = false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto frame = std::min<std::size_t>(
            traj.points.size() - 1,
            static_cast<std::size_t>(static_cast<double>(i) / fs * fps));
        env[i] = traj.points[frame].active ? 1.0 : 0.0;
        any_inactive = any_inactive || env[i] == 0.0;
    }
    if (!any_inactive) return env;

    const auto fade = static_cast<std::size_t>(std::lround(0.010 * fs));
    std::vector<double> smooth = env;
    for (std::size_t i = 0; i < n; ++i) {
        if (env[i] != 0.0) continue;
        // Pull neighbouring active samples toward zero with a cosine ramp.
        for (std::size_t k = 1; k <= fade; ++k) {
            const double w = 0.5 + 0.5 * std::cos(kPi * static_cast<double>(k) / fade);
            const double gain = 1.0 - w; // 0 at the span edge, 1 a fade away
            if (i >= k && env[i - k] != 0.0) smooth[i - k] = std::min(smooth[i - k], gain);
            if (i + k < n && env[i + k] != 0.0) smooth[i + k] = std::min(smooth[i + k], gain);
        }
    }
    return smooth;
}

} // namespace

AudioClip render_event(const AudioClip& mono, const Trajectory& traj, const RoomSpec& room) {
    if (mono.channels != 1) throw_invalid("render_event: source must be mono");
    room.validate();
    if (traj.points.empty() || traj.fps <= 0.0)
        throw_invalid("render_event: empty or invalid trajectory");
    if (traj.duration_s() + 0.5 / traj.fps < mono.duration_s())
        throw Error(ErrorCode::invalid_argument, "render_event: trajectory shorter than clip");

    const int fs = mono.sample_rate;
    const std::size_t n = mono.frames();
    auto src = mono.channel(0);
    {
        const auto env = activity_envelope(traj, fs, n);
        for (std::size_t i = 0; i < n; ++i) src[i] *= env[i];
    }

    const std::size_t block = std::max<std::size_t>(4, static_cast<std::size_t>(std::lround(0.020 * fs)));
    const std::size_t hop = block / 2;

    std::vector<double> left(n, 0.0), right(n, 0.0);
    std::vector<double> win(block);
    for (std::size_t i = 0; i < block; ++i)
        win[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / block);

    // Fractional-delay read from the (activity-gated) source.
    auto read_src = [&](double pos) -> double {
        if (pos < 0.0) return 0.0;
        const auto i0 = static_cast<std::size_t>(pos);
        if (i0 + 1 >= n) return i0 < n ? src[i0] : 0.0;
        const double frac = pos - static_cast<double>(i0);
        return src[i0] * (1.0 - frac) + src[i0 + 1] * frac;
    };

    const std::size_t n_blocks = n == 0 ? 0 : (n + hop - 1) / hop;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t start = b * hop;
        const double center_s = (static_cast<double>(start) + block / 2.0) / fs;
        const auto frame = std::min<std::size_t>(
            traj.points.size() - 1, static_cast<std::size_t>(center_s * traj.fps));
        const TrajectoryPoint& pt = traj.points[frame];

        const auto [gl, gr] = pan_gains(pt.azimuth_deg, pt.depth_m);
        const double itd = itd_of(pt.azimuth_deg, room.interaural_m);
        // Split the ITD symmetrically; random access to the source lets the
        // leading channel read slightly ahead, so there is no base latency.
        const double delay_l = itd * fs / 2.0;
        const double delay_r = -itd * fs / 2.0;

        for (std::size_t i = 0; i < block; ++i) {
            const std::size_t idx = start + i;
            if (idx >= n) break;
            const double w = win[i];
            const double t = static_cast<double>(idx);
            left[idx] += w * gl * read_src(t - delay_l);
            right[idx] += w * gr * read_src(t - delay_r);
        }
    }

    // 50%-overlap Hann windows sum to 1 except at the edges; normalize there.
    std::vector<double> wsum(n, 0.0);
    for (std::size_t b = 0; b < n_blocks; ++b)
        for (std::size_t i = 0; i < block && b * hop + i < n; ++i) wsum[b * hop + i] += win[i];
    for (std::size_t i = 0; i < n; ++i) {
        if (wsum[i] > 1e-9) {
            left[i] /= wsum[i];
            right[i] /= wsum[i];
        }
    }

    AudioClip stereo = AudioClip::silence(fs, 2, n);
    for (std::size_t i = 0; i < n; ++i) {
        stereo.at(i, 0) = static_cast<float>(left[i]);
        stereo.at(i, 1) = static_cast<float>(right[i]);
    }
    return schroeder_reverb(stereo, room);
}

} // namespace foleylab
