#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foleylab/audio.hpp"
#include "foleylab/foley_script.hpp"

namespace foleylab {

// ---------------------------------------------------------------------------
// Meters

/// Integrated loudness per the broadcast two-stage K-weighting recipe:
/// high-shelf +4 dB at ~1.68 kHz, high-pass at ~38 Hz, 400 ms blocks with 75%
/// overlap, -70 LUFS absolute gate then -10 LU relative gate. Channel weights
/// 1.0 (L/R/C), 1.41 (surrounds), LFE excluded. Digital silence returns
/// -infinity. Clips shorter than one block are measured ungated (diagnostic).
double integrated_lufs(const AudioClip& clip, Diagnostics* diag = nullptr);

/// Reverberation time from backward integration of signal energy: least
/// squares line on the -5..-35 dB stretch of the decay curve, extrapolated to
/// -60 dB. Returns 0 when there is no usable decay (if `strict`, throws an
/// estimation error instead).
double schroeder_rt60(const AudioClip& clip, bool strict = false);

/// Relative energies (dB) in low (<250 Hz), mid (250-4000 Hz) and high
/// (>4000 Hz) bands, normalized so the total is 0 dB.
std::array<double, 3> band_energies_db(const AudioClip& clip);

// ---------------------------------------------------------------------------
// Track analysis and planning

struct TrackAnalysis {
    int track_id = 0;
    double rt60_s = 0.0;
    double lufs = -120.0; // -inf for digital silence
    std::array<double, 3> band_db{0.0, 0.0, 0.0};
    std::string semantic_tag;
};

/// Computed acoustic features for one Foley track.
TrackAnalysis analyze_track(const AudioClip& clip, const std::string& tag, int track_id = 0,
                            Diagnostics* diag = nullptr);

struct SceneContext {
    std::string environment = "room";
    double target_rt60_s = 0.4;
    double fg_lufs = -18.0;
    double bg_lufs = -28.0;
};

enum class MixOp { reverb, eq, dyn };

struct ReverbParams {
    double rt60_s = 0.0;
    double wet_ratio = 0.25;
};
struct EqParams {
    double low_db = 0.0;  // shelf at 250 Hz
    double mid_db = 0.0;  // peaking at 1 kHz, Q 0.7
    double high_db = 0.0; // shelf at 4 kHz
};
struct DynParams {
    double gain_db = 0.0;
    double limiter_ceiling_dbfs = -1.0;
};

struct PlanEntry {
    int track_id = 0;
    std::set<MixOp> operations;
    std::optional<ReverbParams> theta_rev;
    std::optional<EqParams> theta_eq;
    std::optional<DynParams> theta_dyn;
};

struct MixingPlan {
    std::vector<PlanEntry> entries;
    SceneContext scene;
};

struct PlanThresholds {
    double rt60_tolerance_s = 0.3;
    double loudness_tolerance_lu = 3.0;
    double masking_margin_db = 3.0;
    double masking_floor_db = -30.0; // bands quieter than this (relative) can't mask
    double reverb_wet_ratio = 0.35;
};

/// Rule-based diagnosis over per-track analyses. A track gets `reverb` when
/// its decay differs from the scene target by more than 0.3 s, `eq` when it
/// shares a crowded band with a simultaneously active track (gap < 3 dB,
/// both bands above -30 dB relative) and `dyn` when it sits more than 3 LU
/// from its layer's loudness target. Analyses must align one-to-one with the
/// script's events.
MixingPlan plan_mix(const std::vector<TrackAnalysis>& analyses, const SceneContext& scene,
                    const FoleyScript& script, const PlanThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Specialists

AudioClip apply_reverb_spec(const AudioClip& clip, const ReverbParams& p);
AudioClip apply_eq_spec(const AudioClip& clip, const EqParams& p);
AudioClip apply_dyn_spec(const AudioClip& clip, const DynParams& p);

/// Runs a plan over the tracks, grouped by operation type: reverb first, then
/// eq, then dyn. The dyn gain is recomputed from the track's loudness at
/// execution time (reverb and eq shift loudness; the plan's value is the
/// planner's pre-reverb estimate).
std::vector<AudioClip> execute_plan(const std::vector<AudioClip>& tracks, const MixingPlan& plan,
                                    const FoleyScript& script, Diagnostics* diag = nullptr);

// ---------------------------------------------------------------------------
// Mixdown and surround

/// Sample-accurate sum of stereo tracks at the given offsets, soft-limited at
/// -0.5 dBFS. Output length = max(offset + track length).
AudioClip mix_tracks(const std::vector<AudioClip>& tracks, const std::vector<double>& offsets_s);

/// Stereo to 5.1 channel feed: FL=L, FR=R, C=0.3536(L+R), SL=0.5 L,
/// SR=0.5 R, LFE from lfe_channel(). Channel order FL,FR,C,LFE,SL,SR.
AudioClip upmix_51(const AudioClip& stereo);

/// L+R through a 4th-order Butterworth lowpass at 120 Hz.
AudioClip lfe_channel(const AudioClip& stereo);

} // namespace foleylab
