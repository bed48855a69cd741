#include "foleylab.h"

#include <cstring>
#include <string>

#include "foleylab/evaluate.hpp"
#include "foleylab/json_io.hpp"
#include "foleylab/pipeline.hpp"

using namespace foleylab;

struct foley_clip {
    AudioClip clip;
};

namespace {

thread_local std::string g_last_error;

foley_status map_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return FOLEY_E_INVALID_ARGUMENT;
    case ErrorCode::io_error: return FOLEY_E_IO;
    case ErrorCode::format_error: return FOLEY_E_FORMAT;
    case ErrorCode::unsupported: return FOLEY_E_UNSUPPORTED;
    case ErrorCode::estimation_error: return FOLEY_E_ESTIMATION;
    case ErrorCode::agent_error: return FOLEY_E_AGENT;
    case ErrorCode::internal: return FOLEY_E_INTERNAL;
    }
    return FOLEY_E_INTERNAL;
}

template <typename F>
foley_status guarded(F&& body) noexcept {
    try {
        body();
        g_last_error.clear();
        return FOLEY_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FOLEY_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FOLEY_E_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require_arg(const void* p, const char* name) {
    if (p == nullptr) throw_invalid(std::string(name) + " must not be null");
}

jsonio::json parse_arg(const char* text, const char* what) {
    require_arg(text, what);
    return jsonio::parse(text, what);
}

} // namespace

extern "C" {

const char* foley_version(void) { return "0.1.0"; }

const char* foley_last_error(void) { return g_last_error.c_str(); }

const char* foley_status_name(foley_status status) {
    switch (status) {
    case FOLEY_OK: return "ok";
    case FOLEY_E_INVALID_ARGUMENT: return "invalid_argument";
    case FOLEY_E_IO: return "io_error";
    case FOLEY_E_FORMAT: return "format_error";
    case FOLEY_E_UNSUPPORTED: return "unsupported";
    case FOLEY_E_ESTIMATION: return "estimation_error";
    case FOLEY_E_AGENT: return "agent_error";
    case FOLEY_E_INTERNAL: return "internal";
    }
    return "internal";
}

void foley_string_free(char* s) { delete[] s; }

/* -------------------------------------------------------------------------- */

foley_status foley_clip_load_wav(const char* path, foley_clip** out) {
    return guarded([&] {
        require_arg(path, "path");
        require_arg(out, "out");
        *out = new foley_clip{load_wav(path)};
    });
}

foley_status foley_clip_save_wav(const foley_clip* clip, const char* path,
                                 foley_encoding encoding, int64_t* clipped_out) {
    return guarded([&] {
        require_arg(clip, "clip");
        require_arg(path, "path");
        Diagnostics diag;
        save_wav(clip->clip, path,
                 encoding == FOLEY_WAV_FLOAT32 ? WavEncoding::float32 : WavEncoding::pcm16, &diag);
        if (clipped_out != nullptr) {
            *clipped_out = 0;
            for (const auto& d : diag)
                if (d.operation == "save_wav") *clipped_out += d.value;
        }
    });
}

foley_status foley_clip_create(int sample_rate, int channels, const float* samples,
                               size_t sample_count, foley_clip** out) {
    return guarded([&] {
        require_arg(out, "out");
        if (sample_count > 0) require_arg(samples, "samples");
        AudioClip clip(sample_rate, channels,
                       std::vector<float>(samples, samples + sample_count));
        clip.validate();
        *out = new foley_clip{std::move(clip)};
    });
}

void foley_clip_free(foley_clip* clip) { delete clip; }

int foley_clip_sample_rate(const foley_clip* clip) {
    return clip != nullptr ? clip->clip.sample_rate : 0;
}
int foley_clip_channels(const foley_clip* clip) {
    return clip != nullptr ? clip->clip.channels : 0;
}
size_t foley_clip_frames(const foley_clip* clip) {
    return clip != nullptr ? clip->clip.frames() : 0;
}

foley_status foley_clip_read(const foley_clip* clip, float* buffer, size_t count) {
    return guarded([&] {
        require_arg(clip, "clip");
        require_arg(buffer, "buffer");
        const size_t n = std::min(count, clip->clip.samples.size());
        std::memcpy(buffer, clip->clip.samples.data(), n * sizeof(float));
    });
}

/* -------------------------------------------------------------------------- */

foley_status foley_render_event(const foley_clip* mono, const char* trajectory_json,
                                const char* room_json, foley_clip** out) {
    return guarded([&] {
        require_arg(mono, "mono");
        require_arg(out, "out");
        const Trajectory traj = jsonio::trajectory_from_json(parse_arg(trajectory_json, "trajectory"));
        const RoomSpec room = jsonio::room_from_json(parse_arg(room_json, "room"));
        *out = new foley_clip{render_event(mono->clip, traj, room)};
    });
}

foley_status foley_upmix_51(const foley_clip* stereo, foley_clip** out) {
    return guarded([&] {
        require_arg(stereo, "stereo");
        require_arg(out, "out");
        *out = new foley_clip{upmix_51(stereo->clip)};
    });
}

foley_status foley_annotate(const foley_clip* clip, double fps, char** annotation_json_out) {
    return guarded([&] {
        require_arg(clip, "clip");
        require_arg(annotation_json_out, "annotation_json_out");
        const auto spans = detect_onsets(clip->clip);
        const auto frames =
            static_cast<std::size_t>(std::max(1.0, std::ceil(clip->clip.duration_s() * fps)));
        const auto activation = activation_vector(spans, fps, frames);
        *annotation_json_out = dup_string(jsonio::annotation_to_json(spans, fps, activation).dump(2));
    });
}

foley_status foley_mix_session(const foley_clip* const* tracks, size_t n_tracks,
                               const char* script_json, const char* scene_json,
                               foley_clip** mix_out, char** plan_json_out) {
    return guarded([&] {
        require_arg(tracks, "tracks");
        require_arg(mix_out, "mix_out");
        const FoleyScript script = jsonio::script_from_json(parse_arg(script_json, "script"));
        const SceneContext scene = jsonio::scene_from_json(parse_arg(scene_json, "scene"));

        std::vector<AudioClip> clips;
        std::vector<double> offsets;
        std::vector<TrackAnalysis> analyses;
        if (n_tracks != script.events.size())
            throw_invalid("mix session: track count must match script event count");
        for (size_t i = 0; i < n_tracks; ++i) {
            require_arg(tracks[i], "tracks[i]");
            clips.push_back(tracks[i]->clip);
            offsets.push_back(script.events[i].start_s);
            analyses.push_back(analyze_track(clips.back(), script.events[i].description,
                                             static_cast<int>(i)));
        }

        const MixingPlan plan = plan_mix(analyses, scene, script);
        const auto refined = execute_plan(clips, plan, script);
        *mix_out = new foley_clip{mix_tracks(refined, offsets)};
        if (plan_json_out != nullptr)
            *plan_json_out = dup_string(jsonio::plan_to_json(plan).dump(2));
    });
}

foley_status foley_script_search(const char* context_json, const char* tot_config_json,
                                 uint64_t seed, char** script_json_out, char** trace_json_out) {
    return guarded([&] {
        require_arg(script_json_out, "script_json_out");
        const ScriptContext ctx = jsonio::context_from_json(parse_arg(context_json, "context"));
        TotConfig cfg;
        if (tot_config_json != nullptr)
            cfg = jsonio::tot_config_from_json(jsonio::parse(tot_config_json, "tot config"));
        const TotResult result = tot_search(default_ports(seed), ctx, cfg);
        *script_json_out = dup_string(jsonio::script_to_json(result.script).dump(2));
        if (trace_json_out != nullptr)
            *trace_json_out = dup_string(jsonio::trace_to_json(result).dump(2));
    });
}

foley_status foley_dataset_build(const char* sources_dir, const char* config_json,
                                 const char* out_dir, char** summary_json_out) {
    return guarded([&] {
        require_arg(sources_dir, "sources_dir");
        require_arg(out_dir, "out_dir");
        DatasetConfig cfg;
        if (config_json != nullptr) {
            const auto j = jsonio::parse(config_json, "dataset config");
            cfg.seed = j.value("seed", cfg.seed);
            cfg.target_min_s = j.value("target_min_s", cfg.target_min_s);
            cfg.target_max_s = j.value("target_max_s", cfg.target_max_s);
            cfg.wet_ratio = j.value("wet_ratio", cfg.wet_ratio);
            cfg.silence_gate_db = j.value("silence_gate_db", cfg.silence_gate_db);
            cfg.qa_dry_render = j.value("qa", cfg.qa_dry_render);
            cfg.similarity_threshold = j.value("similarity_threshold", cfg.similarity_threshold);
            if (j.contains("distribution")) {
                const auto& d = j.at("distribution");
                cfg.distribution.dynamic_fraction =
                    d.value("dynamic_fraction", cfg.distribution.dynamic_fraction);
                if (d.contains("azimuth_weights"))
                    cfg.distribution.azimuth_weights = d.at("azimuth_weights");
                if (d.contains("depth_weights"))
                    cfg.distribution.depth_weights = d.at("depth_weights");
                if (d.contains("reverb_weights"))
                    cfg.distribution.reverb_weights = d.at("reverb_weights");
            }
        }
        Diagnostics diag;
        const auto entries = build_manifest(sources_dir, cfg, out_dir, &diag);
        if (summary_json_out != nullptr) {
            jsonio::json skipped = jsonio::json::array();
            for (const auto& d : diag)
                if (d.message.rfind("skipped", 0) == 0) skipped.push_back(d.message);
            const jsonio::json summary{
                {"schema_version", jsonio::kSchemaVersion},
                {"count", entries.size()},
                {"manifest_path", (std::filesystem::path(out_dir) / "manifest.jsonl").string()},
                {"skipped", skipped}};
            *summary_json_out = dup_string(summary.dump(2));
        }
    });
}

foley_status foley_evaluate(const char* pred_dir, const char* manifest_path,
                            char** report_json_out) {
    return guarded([&] {
        require_arg(pred_dir, "pred_dir");
        require_arg(manifest_path, "manifest_path");
        require_arg(report_json_out, "report_json_out");
        const MetricReport report = evaluate_predictions(pred_dir, manifest_path);
        *report_json_out = dup_string(jsonio::report_to_json(report).dump(2));
    });
}

foley_status foley_pipeline_run(const char* config_json, const char* out_dir,
                                char** summary_json_out) {
    return guarded([&] {
        require_arg(out_dir, "out_dir");
        const auto j = parse_arg(config_json, "pipeline config");
        PipelineConfig cfg;
        if (!j.contains("seed"))
            throw Error(ErrorCode::format_error, "pipeline config: 'seed' is mandatory");
        cfg.seed = j.at("seed").get<uint64_t>();
        cfg.fps = j.value("fps", cfg.fps);
        if (j.contains("scene")) cfg.scene = jsonio::scene_from_json(j.at("scene"));
        if (j.contains("room")) cfg.room = jsonio::room_from_json(j.at("room"));
        if (j.contains("tot")) cfg.tot = jsonio::tot_config_from_json(j.at("tot"));
        cfg.context = jsonio::context_from_json(j.at("context"));
        if (j.contains("sources"))
            cfg.sources = j.at("sources").get<std::map<std::string, std::string>>();

        const PipelineOutputs out = run_pipeline(cfg, out_dir);
        if (summary_json_out != nullptr) {
            const jsonio::json summary{{"schema_version", jsonio::kSchemaVersion},
                                       {"script", out.script_json.string()},
                                       {"trace", out.trace_json.string()},
                                       {"plan", out.plan_json.string()},
                                       {"mix", out.mix_wav.string()},
                                       {"surround", out.surround_wav.string()}};
            *summary_json_out = dup_string(summary.dump(2));
        }
    });
}

/* -------------------------------------------------------------------------- */

foley_status foley_gcc_phat_azimuth(const foley_clip* stereo, double interaural_m,
                                    double* out_deg) {
    return guarded([&] {
        require_arg(stereo, "stereo");
        require_arg(out_deg, "out_deg");
        *out_deg = gcc_phat_azimuth(stereo->clip,
                                    interaural_m > 0.0 ? interaural_m : kDefaultInterauralM);
    });
}

foley_status foley_integrated_lufs(const foley_clip* clip, double* out_lufs) {
    return guarded([&] {
        require_arg(clip, "clip");
        require_arg(out_lufs, "out_lufs");
        *out_lufs = integrated_lufs(clip->clip);
    });
}

foley_status foley_rt60(const foley_clip* clip, double* out_s) {
    return guarded([&] {
        require_arg(clip, "clip");
        require_arg(out_s, "out_s");
        *out_s = schroeder_rt60(clip->clip);
    });
}

foley_status foley_itd_of(double azimuth_deg, double interaural_m, double* out_s) {
    return guarded([&] {
        require_arg(out_s, "out_s");
        *out_s = itd_of(azimuth_deg, interaural_m > 0.0 ? interaural_m : kDefaultInterauralM);
    });
}

} // extern "C"
