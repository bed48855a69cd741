#include <algorithm>
#include <cmath>

#include "foleylab/mix.hpp"
#include "foleylab/spatializer.hpp"

namespace foleylab {

namespace {

// Soft-knee peak limiter: identity below the knee (ceiling - 3 dB), tanh
// saturation above, never exceeding the ceiling.
void soft_limit(std::vector<double>& x, double ceiling_dbfs) {
    const double c = std::pow(10.0, ceiling_dbfs / 20.0);
    const double knee = c * std::pow(10.0, -3.0 / 20.0);
    const double range = c - knee;
    for (double& v : x) {
        const double a = std::abs(v);
        if (a <= knee) continue;
        const double shaped = knee + range * std::tanh((a - knee) / range);
        v = v < 0.0 ? -shaped : shaped;
    }
}

double layer_target(const SceneContext& scene, Layer l) {
    return l == Layer::fg ? scene.fg_lufs : scene.bg_lufs;
}

bool overlaps(const FoleyEvent& a, const FoleyEvent& b) {
    return a.start_s < b.end_s && b.start_s < a.end_s;
}

} // namespace

MixingPlan plan_mix(const std::vector<TrackAnalysis>& analyses, const SceneContext& scene,
                    const FoleyScript& script, const PlanThresholds& th) {
    if (analyses.size() != script.events.size())
        throw_invalid("plan_mix: analyses must align one-to-one with script events");
    for (std::size_t i = 0; i < analyses.size(); ++i)
        if (analyses[i].track_id != static_cast<int>(i))
            throw_invalid("plan_mix: track_id must equal the track's position in the session");

    MixingPlan plan;
    plan.scene = scene;

    for (std::size_t i = 0; i < analyses.size(); ++i) {
        const TrackAnalysis& a = analyses[i];
        const FoleyEvent& ev = script.events[i];
        PlanEntry entry;
        entry.track_id = a.track_id;

        if (std::abs(a.rt60_s - scene.target_rt60_s) > th.rt60_tolerance_s) {
            entry.operations.insert(MixOp::reverb);
            entry.theta_rev = ReverbParams{scene.target_rt60_s, th.reverb_wet_ratio};
        }

        // Masking diagnosis against every simultaneously active track: a band
        // is contested when both tracks carry real energy there and sit
        // within the masking margin of each other. The lower-priority side
        // of the pair takes the cut (bg yields to fg, later id yields on a
        // tie), sized so the post-cut gap clears the margin.
        EqParams eq;
        bool needs_eq = false;
        for (std::size_t j = 0; j < analyses.size(); ++j) {
            if (j == i || !overlaps(ev, script.events[j])) continue;
            const FoleyEvent& other_ev = script.events[j];
            const bool i_yields =
                (ev.layer == Layer::bg && other_ev.layer == Layer::fg) ||
                (ev.layer == other_ev.layer && a.track_id > analyses[j].track_id);
            if (!i_yields) continue;
            for (int b = 0; b < 3; ++b) {
                const double own = a.band_db[b];
                const double other = analyses[j].band_db[b];
                if (own <= th.masking_floor_db || other <= th.masking_floor_db) continue;
                const double gap = other - own;
                if (std::abs(gap) >= th.masking_margin_db) continue;
                const double cut = std::min(12.0, th.masking_margin_db - gap + 0.5);
                double* band = b == 0 ? &eq.low_db : b == 1 ? &eq.mid_db : &eq.high_db;
                *band = std::min(*band, -cut);
                needs_eq = true;
            }
        }
        if (needs_eq) {
            entry.operations.insert(MixOp::eq);
            entry.theta_eq = eq;
        }

        const double target = layer_target(scene, ev.layer);
        if (std::isfinite(a.lufs) && std::abs(a.lufs - target) > th.loudness_tolerance_lu) {
            entry.operations.insert(MixOp::dyn);
            entry.theta_dyn = DynParams{target - a.lufs, -1.0};
        }

        plan.entries.push_back(std::move(entry));
    }
    return plan;
}

// ---------------------------------------------------------------------------

AudioClip apply_reverb_spec(const AudioClip& clip, const ReverbParams& p) {
    RoomSpec room;
    room.preset = RoomSpec::Preset::custom;
    room.rt60_s = p.rt60_s;
    room.wet_ratio = p.wet_ratio;
    return schroeder_reverb(clip, room);
}

AudioClip apply_eq_spec(const AudioClip& clip, const EqParams& p) {
    for (double g : {p.low_db, p.mid_db, p.high_db})
        if (g < -12.0 || g > 12.0) throw_invalid("apply_eq_spec: gains must be in [-12, 12] dB");

    AudioClip out = clip;
    BiquadSpec low{BiquadSpec::Kind::lowshelf, 250.0, 0.70710678118654752, p.low_db, 2};
    BiquadSpec mid{BiquadSpec::Kind::peaking, 1000.0, 0.7, p.mid_db, 2};
    BiquadSpec high{BiquadSpec::Kind::highshelf, 4000.0, 0.70710678118654752, p.high_db, 2};
    out = biquad_apply(out, low);
    out = biquad_apply(out, mid);
    out = biquad_apply(out, high);
    return out;
}

AudioClip apply_dyn_spec(const AudioClip& clip, const DynParams& p) {
    if (p.limiter_ceiling_dbfs > 0.0)
        throw_invalid("apply_dyn_spec: limiter ceiling must be <= 0 dBFS");
    const double g = std::pow(10.0, p.gain_db / 20.0);
    AudioClip out = clip;
    for (int c = 0; c < clip.channels; ++c) {
        auto x = clip.channel(c);
        for (double& v : x) v *= g;
        soft_limit(x, p.limiter_ceiling_dbfs);
        out.set_channel(c, x);
    }
    return out;
}

std::vector<AudioClip> execute_plan(const std::vector<AudioClip>& tracks, const MixingPlan& plan,
                                    const FoleyScript& script, Diagnostics* diag) {
    if (tracks.size() != script.events.size())
        throw_invalid("execute_plan: tracks must align with script events");
    std::vector<AudioClip> out = tracks;

    // Stage the specialists by operation type over the whole session.
    for (const auto& entry : plan.entries) {
        if (entry.track_id < 0 || static_cast<std::size_t>(entry.track_id) >= out.size())
            throw_invalid("execute_plan: plan references unknown track");
        if (entry.operations.count(MixOp::reverb)) {
            if (!entry.theta_rev) throw_invalid("execute_plan: reverb without parameters");
            out[entry.track_id] = apply_reverb_spec(out[entry.track_id], *entry.theta_rev);
        }
    }
    for (const auto& entry : plan.entries) {
        if (entry.operations.count(MixOp::eq)) {
            if (!entry.theta_eq) throw_invalid("execute_plan: eq without parameters");
            out[entry.track_id] = apply_eq_spec(out[entry.track_id], *entry.theta_eq);
        }
    }
    for (const auto& entry : plan.entries) {
        if (!entry.operations.count(MixOp::dyn)) continue;
        if (!entry.theta_dyn) throw_invalid("execute_plan: dyn without parameters");
        // Loudness moved when reverb/eq ran; refresh the gain against the
        // layer target before applying.
        DynParams p = *entry.theta_dyn;
        const double target = layer_target(plan.scene, script.events[entry.track_id].layer);
        const double current = integrated_lufs(out[entry.track_id], diag);
        if (std::isfinite(current)) p.gain_db = target - current;
        out[entry.track_id] = apply_dyn_spec(out[entry.track_id], p);
    }
    return out;
}

// ---------------------------------------------------------------------------

AudioClip mix_tracks(const std::vector<AudioClip>& tracks, const std::vector<double>& offsets_s) {
    if (tracks.empty()) throw_invalid("mix_tracks: no tracks");
    if (tracks.size() != offsets_s.size())
        throw_invalid("mix_tracks: offsets must align with tracks");
    const int fs = tracks.front().sample_rate;
    for (const auto& t : tracks) {
        if (t.channels != 2) throw_invalid("mix_tracks: all tracks must be stereo");
        if (t.sample_rate != fs) throw Error(ErrorCode::invalid_argument, "mix_tracks: sample-rate mismatch");
    }

    std::size_t out_frames = 0;
    std::vector<std::size_t> offs(tracks.size());
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        if (offsets_s[i] < 0.0) throw_invalid("mix_tracks: negative offset");
        offs[i] = static_cast<std::size_t>(std::lround(offsets_s[i] * fs));
        out_frames = std::max(out_frames, offs[i] + tracks[i].frames());
    }

    std::vector<double> left(out_frames, 0.0), right(out_frames, 0.0);
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const AudioClip& t = tracks[i];
        for (std::size_t f = 0; f < t.frames(); ++f) {
            left[offs[i] + f] += t.at(f, 0);
            right[offs[i] + f] += t.at(f, 1);
        }
    }
    soft_limit(left, -0.5);
    soft_limit(right, -0.5);

    AudioClip out = AudioClip::silence(fs, 2, out_frames);
    out.set_channel(0, left);
    out.set_channel(1, right);
    return out;
}

AudioClip lfe_channel(const AudioClip& stereo) {
    if (stereo.channels != 2) throw_invalid("lfe_channel: stereo input required");
    const std::size_t n = stereo.frames();
    AudioClip mix = AudioClip::silence(stereo.sample_rate, 1, n);
    for (std::size_t f = 0; f < n; ++f)
        mix.at(f, 0) = static_cast<float>(static_cast<double>(stereo.at(f, 0)) + stereo.at(f, 1));
    BiquadSpec lpf{BiquadSpec::Kind::lowpass, 120.0, 0.70710678118654752, 0.0, 4};
    return biquad_apply(mix, lpf);
}

AudioClip upmix_51(const AudioClip& stereo) {
    if (stereo.channels != 2) throw_invalid("upmix_51: stereo input required");
    const std::size_t n = stereo.frames();
    const AudioClip lfe = lfe_channel(stereo);

    AudioClip out = AudioClip::silence(stereo.sample_rate, 6, n);
    for (std::size_t f = 0; f < n; ++f) {
        const float l = stereo.at(f, 0);
        const float r = stereo.at(f, 1);
        out.at(f, 0) = l; // FL, bit-exact
        out.at(f, 1) = r; // FR
        out.at(f, 2) = static_cast<float>(0.3536 * (static_cast<double>(l) + r));
        out.at(f, 3) = lfe.at(f, 0);
        out.at(f, 4) = 0.5f * l; // SL
        out.at(f, 5) = 0.5f * r; // SR
    }
    return out;
}

} // namespace foleylab
