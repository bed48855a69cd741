#include "foleylab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "foleylab/json_io.hpp"
#include "rng.hpp"

namespace foleylab {

const char* depth_zone_name(DepthZone z) {
    switch (z) {
    case DepthZone::near: return "near";
    case DepthZone::mid: return "mid";
    case DepthZone::far: return "far";
    }
    return "near";
}

DepthZone depth_zone_from_name(const std::string& s) {
    if (s == "near") return DepthZone::near;
    if (s == "mid") return DepthZone::mid;
    if (s == "far") return DepthZone::far;
    throw_invalid("unknown depth zone '" + s + "'");
}

void SampleParams::validate() const {
    static constexpr int kRegions[5] = {-45, -15, 0, 15, 45};
    auto check_region = [](int off) {
        return std::find(std::begin(kRegions), std::end(kRegions), off) != std::end(kRegions);
    };
    if (!check_region(start.azimuth_offset_deg))
        throw_invalid("SampleParams: azimuth region must be one of -45,-15,0,+15,+45");
    if (start.depth_m <= 0.0) throw_invalid("SampleParams: depth must be positive");
    if (dynamic) {
        if (!end) throw_invalid("SampleParams: dynamic motion requires an end point");
        if (!check_region(end->azimuth_offset_deg))
            throw_invalid("SampleParams: azimuth region must be one of -45,-15,0,+15,+45");
        if (end->azimuth_offset_deg == start.azimuth_offset_deg && end->zone == start.zone)
            throw_invalid("SampleParams: dynamic end must differ from start");
    } else if (end) {
        throw_invalid("SampleParams: static motion cannot carry an end point");
    }
    if (reverb == RoomSpec::Preset::dry || reverb == RoomSpec::Preset::custom)
        throw_invalid("SampleParams: reverb preset must be room/chamber/hall/plate");
}

void SampleDistribution::validate() const {
    auto sums_to_one = [](const double* w, std::size_t n) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] < 0.0) return false;
            s += w[i];
        }
        return std::abs(s - 1.0) < 1e-9;
    };
    if (dynamic_fraction < 0.0 || dynamic_fraction > 1.0)
        throw_invalid("SampleDistribution: dynamic_fraction must be in [0,1]");
    if (!sums_to_one(azimuth_weights.data(), 5))
        throw_invalid("SampleDistribution: azimuth weights must sum to 1");
    if (!sums_to_one(depth_weights.data(), 3))
        throw_invalid("SampleDistribution: depth weights must sum to 1");
    if (!sums_to_one(reverb_weights.data(), 4))
        throw_invalid("SampleDistribution: reverb weights must sum to 1");
    if (far_cap_m <= 5.0) throw_invalid("SampleDistribution: far-field cap must exceed 5 m");
}

namespace {

std::size_t pick_weighted(detail::Rng& rng, const double* w, std::size_t n) {
    const double u = rng.next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += w[i];
        if (u < acc) return i;
    }
    return n - 1;
}

SamplePoint draw_point(detail::Rng& rng, const SampleDistribution& dist) {
    static constexpr int kRegions[5] = {-45, -15, 0, 15, 45};
    SamplePoint p;
    p.azimuth_offset_deg = kRegions[pick_weighted(rng, dist.azimuth_weights.data(), 5)];
    switch (pick_weighted(rng, dist.depth_weights.data(), 3)) {
    case 0:
        p.zone = DepthZone::near;
        p.depth_m = rng.uniform(0.1, 2.0);
        break;
    case 1:
        p.zone = DepthZone::mid;
        p.depth_m = rng.uniform(2.0, 5.0);
        break;
    default:
        p.zone = DepthZone::far;
        p.depth_m = rng.uniform(5.0, dist.far_cap_m);
        break;
    }
    return p;
}

} // namespace

SampleParams sample_params(std::uint64_t seed, const SampleDistribution& dist) {
    dist.validate();
    detail::Rng rng(seed);
    SampleParams p;
    p.seed = seed;
    p.dynamic = rng.next_double() < dist.dynamic_fraction;
    p.start = draw_point(rng, dist);

    static constexpr RoomSpec::Preset kPresets[4] = {
        RoomSpec::Preset::room, RoomSpec::Preset::chamber, RoomSpec::Preset::hall,
        RoomSpec::Preset::plate};
    p.reverb = kPresets[pick_weighted(rng, dist.reverb_weights.data(), 4)];

    if (p.dynamic) {
        SamplePoint end = draw_point(rng, dist);
        while (end.azimuth_offset_deg == p.start.azimuth_offset_deg && end.zone == p.start.zone)
            end = draw_point(rng, dist);
        p.end = end;
    }
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------

BuiltSample build_sample(const AudioClip& source, const SampleParams& params, double target_s,
                         double wet_ratio) {
    if (source.channels != 1) throw_invalid("build_sample: source must be mono");
    params.validate();

    AudioClip mono = source;
    const auto target_frames =
        static_cast<std::size_t>(std::lround(target_s * source.sample_rate));
    if (mono.frames() > target_frames) {
        mono.samples.resize(target_frames); // long sources get trimmed
    } else if (mono.frames() < target_frames) {
        mono = loop_pad(mono, target_s);
    }

    const double fps = 25.0;
    const auto total_frames =
        static_cast<std::size_t>(std::ceil(mono.duration_s() * fps)) + 1;
    Trajectory traj;
    traj.fps = fps;
    traj.points.resize(total_frames);
    for (std::size_t t = 0; t < total_frames; ++t) {
        TrajectoryPoint pt;
        pt.active = 1;
        if (params.dynamic) {
            const double u =
                total_frames > 1 ? static_cast<double>(t) / static_cast<double>(total_frames - 1) : 0.0;
            pt.azimuth_deg =
                params.start.azimuth_deg() + u * (params.end->azimuth_deg() - params.start.azimuth_deg());
            pt.depth_m = params.start.depth_m + u * (params.end->depth_m - params.start.depth_m);
        } else {
            pt.azimuth_deg = params.start.azimuth_deg();
            pt.depth_m = params.start.depth_m;
        }
        traj.points[t] = pt;
    }

    BuiltSample out;
    out.events = detect_onsets(mono);
    out.trajectory = traj;
    out.stereo = render_event(mono, traj, RoomSpec::from_preset(params.reverb, wet_ratio));
    return out;
}

std::string caption_for(const std::string& tag, const SampleParams& params) {
    if (tag.empty()) throw_invalid("caption_for: empty tag");
    auto region_word = [](int off) -> const char* {
        switch (off) {
        case -45: return "far left";
        case -15: return "left";
        case 0: return "center";
        case 15: return "right";
        case 45: return "far right";
        }
        return "center";
    };
    auto zone_word = [](DepthZone z) -> const char* {
        switch (z) {
        case DepthZone::near: return "close";
        case DepthZone::mid: return "mid-distance";
        case DepthZone::far: return "distant";
        }
        return "close";
    };

    std::string caption = tag;
    caption += ", ";
    caption += region_word(params.start.azimuth_offset_deg);
    caption += ", ";
    caption += zone_word(params.start.zone);
    if (params.dynamic && params.end) {
        caption += ", moving ";
        caption += region_word(params.start.azimuth_offset_deg);
        caption += "→";
        caption += region_word(params.end->azimuth_offset_deg);
    }
    caption += ", ";
    caption += preset_name(params.reverb);
    caption += " reverb";
    return caption;
}

// ---------------------------------------------------------------------------

std::vector<ManifestEntry> build_manifest(const std::filesystem::path& sources_dir,
                                          const DatasetConfig& config,
                                          const std::filesystem::path& out_dir,
                                          Diagnostics* diag) {
    namespace fs = std::filesystem;
    config.distribution.validate();
    if (!fs::is_directory(sources_dir))
        throw Error(ErrorCode::io_error, "build_manifest: not a directory: " + sources_dir.string());
    fs::create_directories(out_dir);

    std::vector<fs::path> sources;
    for (const auto& entry : fs::directory_iterator(sources_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".wav")
            sources.push_back(entry.path());
    std::sort(sources.begin(), sources.end());
    if (sources.empty())
        diag_add(diag, "build_manifest", Diagnostic::Severity::warning, "no .wav sources found");

    std::vector<ManifestEntry> entries;
    for (const auto& src : sources) {
        const std::string stem = src.stem().string();
        AudioClip clip = load_wav(src);
        if (clip.channels != 1) {
            diag_add(diag, "build_manifest", Diagnostic::Severity::warning,
                     "skipped " + stem + ": not mono");
            continue;
        }
        if (gate_silence(clip, config.silence_gate_db).empty()) {
            diag_add(diag, "build_manifest", Diagnostic::Severity::info,
                     "skipped " + stem + ": silent");
            continue;
        }

        const std::uint64_t item_seed =
            detail::fnv1a64(stem.data(), stem.size()) ^ config.seed;
        const SampleParams params = sample_params(item_seed, config.distribution);
        detail::Rng len_rng(item_seed ^ 0xA5A5A5A5A5A5A5A5ULL);
        const double target_s = len_rng.uniform(config.target_min_s, config.target_max_s);

        BuiltSample built = build_sample(clip, params, target_s, config.wet_ratio);
        const std::string caption = caption_for(stem, params);

        if (config.similarity) {
            const double score = config.similarity(built.stereo, caption);
            if (score < config.similarity_threshold) {
                diag_add(diag, "build_manifest", Diagnostic::Severity::info,
                         "skipped " + stem + ": similarity " + std::to_string(score) +
                             " below threshold");
                continue;
            }
        }

        const fs::path rendered = out_dir / (stem + ".wav");
        save_wav(built.stereo, rendered, WavEncoding::float32, diag);
        if (config.qa_dry_render) {
            SampleParams dry_params = params;
            BuiltSample dry = build_sample(clip, dry_params, target_s, 0.0);
            save_wav(dry.stereo, out_dir / (stem + "_dry.wav"), WavEncoding::float32, diag);
        }

        ManifestEntry e;
        e.sample_id = stem;
        e.source_path = src.string();
        e.rendered_path = rendered.string();
        e.params = params;
        e.caption = caption;
        e.events = built.events;
        e.duration_s = built.stereo.duration_s();
        entries.push_back(std::move(e));
    }

    std::ofstream manifest(out_dir / "manifest.jsonl");
    if (!manifest)
        throw Error(ErrorCode::io_error, "cannot write manifest under " + out_dir.string());
    for (const auto& e : entries) manifest << jsonio::manifest_entry_to_json(e).dump() << "\n";
    return entries;
}

} // namespace foleylab
