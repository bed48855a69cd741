#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "foleylab/annotator.hpp"
#include "foleylab/audio.hpp"
#include "foleylab/spatializer.hpp"
#include "foleylab/trajectory.hpp"

namespace foleylab {

enum class DepthZone { near, mid, far };

const char* depth_zone_name(DepthZone z);
DepthZone depth_zone_from_name(const std::string& s);

/// One spatial placement: a frontal region offset from center and a depth
/// drawn inside a zone.
struct SamplePoint {
    int azimuth_offset_deg = 0; // one of -45, -15, 0, +15, +45
    DepthZone zone = DepthZone::near;
    double depth_m = 1.0;

    double azimuth_deg() const { return 90.0 + azimuth_offset_deg; }
};

struct SampleParams {
    SamplePoint start;
    bool dynamic = false;
    std::optional<SamplePoint> end; // required (and distinct) when dynamic
    RoomSpec::Preset reverb = RoomSpec::Preset::room;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SampleDistribution {
    double dynamic_fraction = 0.64;
    std::array<double, 5> azimuth_weights{0.2, 0.2, 0.2, 0.2, 0.2}; // -45,-15,0,+15,+45
    std::array<double, 3> depth_weights{1.0 / 3, 1.0 / 3, 1.0 / 3}; // near, mid, far
    std::array<double, 4> reverb_weights{0.25, 0.25, 0.25, 0.25};   // room,chamber,hall,plate
    double far_cap_m = 10.0;

    void validate() const;
};

/// Deterministic draw of spatial parameters for one sample.
SampleParams sample_params(std::uint64_t seed, const SampleDistribution& dist = {});

struct BuiltSample {
    AudioClip stereo;
    Trajectory trajectory;
    std::vector<EventSpan> events;
};

/// Loop-pads the mono source to `target_s`, builds a constant (static) or
/// linearly interpolated (dynamic) 25 fps trajectory, renders it through the
/// preset's room, and annotates events on the pre-render mono.
BuiltSample build_sample(const AudioClip& source, const SampleParams& params, double target_s,
                         double wet_ratio = 0.25);

/// Deterministic caption: "<tag>, <region>, <zone>[, moving <from>→<to>],
/// <preset> reverb".
std::string caption_for(const std::string& tag, const SampleParams& params);

struct ManifestEntry {
    std::string sample_id;
    std::string source_path;
    std::string rendered_path;
    SampleParams params;
    std::string caption;
    std::vector<EventSpan> events;
    double duration_s = 0.0;
};

/// Optional semantic gate standing in for learned text-audio verification:
/// returns a similarity in [0,1] for (rendered clip, caption).
using SimilarityPort = std::function<double(const AudioClip&, const std::string&)>;

struct DatasetConfig {
    std::uint64_t seed = 0;
    double target_min_s = 8.0;
    double target_max_s = 10.0;
    SampleDistribution distribution;
    double wet_ratio = 0.25;
    double silence_gate_db = -40.0;
    bool qa_dry_render = false; // writes a dry variant per sample for QA checks
    SimilarityPort similarity;  // unset: verification disabled
    double similarity_threshold = 0.35;
};

/// Builds one manifest entry per playable mono WAV under `sources_dir`
/// (silent files are skipped), writing rendered stereo files and a JSON-lines
/// manifest under `out_dir`. Fully deterministic for a fixed seed.
std::vector<ManifestEntry> build_manifest(const std::filesystem::path& sources_dir,
                                          const DatasetConfig& config,
                                          const std::filesystem::path& out_dir,
                                          Diagnostics* diag = nullptr);

} // namespace foleylab
