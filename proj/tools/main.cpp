// foleylab command-line front end. Everything functional goes through the
// shared-library C API; this file only parses arguments, shuttles files and
// reports errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "foleylab.h"

namespace {

using nlohmann::json;

int g_log_level = 1; // 0 quiet, 1 warnings, 2 info

void log_info(const std::string& msg) {
    if (g_log_level >= 2) std::cerr << "[foleylab] " << msg << "\n";
}

struct ClipHandle {
    foley_clip* p = nullptr;
    ClipHandle() = default;
    ClipHandle(const ClipHandle&) = delete;
    ClipHandle& operator=(const ClipHandle&) = delete;
    ~ClipHandle() { foley_clip_free(p); }
};

struct OwnedString {
    char* p = nullptr;
    OwnedString() = default;
    OwnedString(const OwnedString&) = delete;
    OwnedString& operator=(const OwnedString&) = delete;
    ~OwnedString() { foley_string_free(p); }
    std::string str() const { return p != nullptr ? std::string(p) : std::string(); }
};

int fail(foley_status st) {
    const json err{{"error",
                    {{"code", static_cast<int>(st)},
                     {"name", foley_status_name(st)},
                     {"message", foley_last_error()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
}

int fail_msg(foley_status st, const std::string& message) {
    const json err{{"error",
                    {{"code", static_cast<int>(st)},
                     {"name", foley_status_name(st)},
                     {"message", message}}}};
    std::cerr << err.dump() << "\n";
    return 1;
}

#define CHECK(call)                                                                              \
    do {                                                                                         \
        const foley_status st_ = (call);                                                         \
        if (st_ != FOLEY_OK) return fail(st_);                                                   \
    } while (0)

bool read_file(const std::string& path, std::string& out) {
    std::ifstream f(path);
    if (!f) return false;
    std::ostringstream ss;
    ss << f.rdbuf();
    out = ss.str();
    return true;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) return false;
    f << text;
    if (!text.empty() && text.back() != '\n') f << "\n";
    return static_cast<bool>(f);
}

int load_clip(const std::string& path, ClipHandle& clip) {
    const foley_status st = foley_clip_load_wav(path.c_str(), &clip.p);
    return st == FOLEY_OK ? 0 : fail(st);
}

int save_clip(const ClipHandle& clip, const std::string& path, bool pcm16 = false) {
    int64_t clipped = 0;
    CHECK(foley_clip_save_wav(clip.p, path.c_str(),
                              pcm16 ? FOLEY_WAV_PCM16 : FOLEY_WAV_FLOAT32, &clipped));
    if (clipped > 0 && g_log_level >= 1)
        std::cerr << "[foleylab] warning: " << clipped << " samples clipped writing " << path
                  << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* lvl = std::getenv("FOLEY_LOG")) {
        const std::string s(lvl);
        if (s == "quiet") g_log_level = 0;
        else if (s == "info" || s == "debug") g_log_level = 2;
    }

    CLI::App app{"foleylab: spatial Foley rendering, mixing and dataset toolkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // render
    std::string mono_path, traj_path, room_path, out_path;
    auto* render = app.add_subcommand("render", "Render a mono event to stereo along a trajectory");
    render->add_option("--mono", mono_path, "Mono source WAV")->required();
    render->add_option("--traj", traj_path, "Trajectory JSON")->required();
    render->add_option("--room", room_path, "Room JSON")->required();
    render->add_option("--out", out_path, "Output stereo WAV")->required();

    // mix
    std::vector<std::string> track_paths;
    std::string script_path, scene_path, surround_path, plan_out_path;
    auto* mix = app.add_subcommand("mix", "Analyze, refine and mix Foley tracks");
    mix->add_option("--tracks", track_paths, "Stereo track WAVs (one per script event)")
        ->required()
        ->expected(-1);
    mix->add_option("--script", script_path, "Foley script JSON")->required();
    mix->add_option("--scene", scene_path, "Scene context JSON")->required();
    mix->add_option("--out", out_path, "Output mix WAV")->required();
    mix->add_option("--surround", surround_path, "Optional 5.1 output WAV");
    mix->add_option("--plan-out", plan_out_path, "Optional mixing-plan JSON output");

    // upmix
    std::string upmix_in, upmix_out;
    auto* upmix = app.add_subcommand("upmix", "Upmix stereo to 5.1 (FL,FR,C,LFE,SL,SR)");
    upmix->add_option("input", upmix_in, "Stereo WAV")->required();
    upmix->add_option("output", upmix_out, "6-channel WAV")->required();

    // annotate
    std::string ann_in, ann_out;
    double ann_fps = 25.0;
    auto* annotate = app.add_subcommand("annotate", "Detect sound events and emit annotation JSON");
    annotate->add_option("input", ann_in, "Input WAV")->required();
    annotate->add_option("--fps", ann_fps, "Video frame rate for the activation vector");
    annotate->add_option("--out", ann_out, "Annotation JSON path")->required();

    // dataset
    std::string ds_sources, ds_config, ds_out;
    bool ds_qa = false;
    std::uint64_t ds_seed = 0;
    bool ds_seed_set = false;
    auto* dataset = app.add_subcommand("dataset", "Regenerate a spatial Foley dataset");
    dataset->add_option("--sources", ds_sources, "Directory of mono WAV sources")->required();
    dataset->add_option("--config", ds_config, "Dataset config JSON");
    dataset->add_option("--out", ds_out, "Output directory")->required();
    dataset->add_flag("--qa", ds_qa, "Also write dry renders for QA checks");
    dataset->add_option("--seed", ds_seed, "Override the config seed")
        ->each([&](const std::string&) { ds_seed_set = true; });

    // eval
    std::string eval_pred, eval_truth, eval_report;
    auto* eval = app.add_subcommand("eval", "Evaluate rendered predictions against a manifest");
    eval->add_option("--pred", eval_pred, "Directory of prediction WAVs")->required();
    eval->add_option("--truth", eval_truth, "Manifest JSON-lines file")->required();
    eval->add_option("--report", eval_report, "Report JSON path")->required();

    // script
    std::string ctx_path, tot_path, trace_path, script_out;
    std::uint64_t script_seed = 0;
    auto* script = app.add_subcommand("script", "Tree-of-thought Foley script search");
    script->add_option("--context", ctx_path, "Script context JSON")->required();
    script->add_option("--config", tot_path, "Search config JSON");
    script->add_option("--trace", trace_path, "Optional search-trace JSON output");
    script->add_option("--out", script_out, "Script JSON output")->required();
    script->add_option("--seed", script_seed, "Agent seed");

    // pipeline
    std::string pipe_config, pipe_out;
    std::uint64_t pipe_seed = 0;
    bool pipe_seed_set = false;
    auto* pipeline = app.add_subcommand("pipeline", "Run script->render->mix->upmix end to end");
    pipeline->add_option("--config", pipe_config, "Pipeline config JSON")->required();
    pipeline->add_option("--out", pipe_out, "Output directory (default: config out_dir or 'out')");
    pipeline->add_option("--seed", pipe_seed, "Override the config seed")
        ->each([&](const std::string&) { pipe_seed_set = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (render->parsed()) {
        ClipHandle mono, stereo;
        if (int rc = load_clip(mono_path, mono)) return rc;
        std::string traj, room;
        if (!read_file(traj_path, traj)) return fail_msg(FOLEY_E_IO, "cannot read " + traj_path);
        if (!read_file(room_path, room)) return fail_msg(FOLEY_E_IO, "cannot read " + room_path);
        CHECK(foley_render_event(mono.p, traj.c_str(), room.c_str(), &stereo.p));
        log_info("rendered " + std::to_string(foley_clip_frames(stereo.p)) + " frames");
        return save_clip(stereo, out_path);
    }

    if (mix->parsed()) {
        std::vector<ClipHandle> tracks(track_paths.size());
        std::vector<const foley_clip*> raw;
        for (std::size_t i = 0; i < track_paths.size(); ++i) {
            if (int rc = load_clip(track_paths[i], tracks[i])) return rc;
            raw.push_back(tracks[i].p);
        }
        std::string script_text, scene_text;
        if (!read_file(script_path, script_text))
            return fail_msg(FOLEY_E_IO, "cannot read " + script_path);
        if (!read_file(scene_path, scene_text))
            return fail_msg(FOLEY_E_IO, "cannot read " + scene_path);

        ClipHandle mixed;
        OwnedString plan;
        CHECK(foley_mix_session(raw.data(), raw.size(), script_text.c_str(), scene_text.c_str(),
                                &mixed.p, &plan.p));
        if (int rc = save_clip(mixed, out_path)) return rc;
        if (!plan_out_path.empty() && !write_file(plan_out_path, plan.str()))
            return fail_msg(FOLEY_E_IO, "cannot write " + plan_out_path);
        if (!surround_path.empty()) {
            ClipHandle six;
            CHECK(foley_upmix_51(mixed.p, &six.p));
            if (int rc = save_clip(six, surround_path)) return rc;
        }
        return 0;
    }

    if (upmix->parsed()) {
        ClipHandle stereo, six;
        if (int rc = load_clip(upmix_in, stereo)) return rc;
        CHECK(foley_upmix_51(stereo.p, &six.p));
        return save_clip(six, upmix_out);
    }

    if (annotate->parsed()) {
        ClipHandle clip;
        if (int rc = load_clip(ann_in, clip)) return rc;
        OwnedString ann;
        CHECK(foley_annotate(clip.p, ann_fps, &ann.p));
        if (!write_file(ann_out, ann.str())) return fail_msg(FOLEY_E_IO, "cannot write " + ann_out);
        return 0;
    }

    if (dataset->parsed()) {
        json cfg = json::object();
        if (!ds_config.empty()) {
            std::string text;
            if (!read_file(ds_config, text)) return fail_msg(FOLEY_E_IO, "cannot read " + ds_config);
            cfg = json::parse(text, nullptr, false);
            if (cfg.is_discarded()) return fail_msg(FOLEY_E_FORMAT, "bad JSON in " + ds_config);
        }
        if (ds_seed_set) cfg["seed"] = ds_seed;
        if (ds_qa) cfg["qa"] = true;
        OwnedString summary;
        CHECK(foley_dataset_build(ds_sources.c_str(), cfg.dump().c_str(), ds_out.c_str(),
                                  &summary.p));
        std::cout << summary.str() << "\n";
        return 0;
    }

    if (eval->parsed()) {
        OwnedString report;
        CHECK(foley_evaluate(eval_pred.c_str(), eval_truth.c_str(), &report.p));
        if (!write_file(eval_report, report.str()))
            return fail_msg(FOLEY_E_IO, "cannot write " + eval_report);
        return 0;
    }

    if (script->parsed()) {
        std::string ctx_text, tot_text;
        if (!read_file(ctx_path, ctx_text)) return fail_msg(FOLEY_E_IO, "cannot read " + ctx_path);
        if (!tot_path.empty() && !read_file(tot_path, tot_text))
            return fail_msg(FOLEY_E_IO, "cannot read " + tot_path);
        OwnedString script_json, trace_json;
        CHECK(foley_script_search(ctx_text.c_str(), tot_text.empty() ? nullptr : tot_text.c_str(),
                                  script_seed, &script_json.p, &trace_json.p));
        if (!write_file(script_out, script_json.str()))
            return fail_msg(FOLEY_E_IO, "cannot write " + script_out);
        if (!trace_path.empty() && !write_file(trace_path, trace_json.str()))
            return fail_msg(FOLEY_E_IO, "cannot write " + trace_path);
        return 0;
    }

    if (pipeline->parsed()) {
        std::string text;
        if (!read_file(pipe_config, text)) return fail_msg(FOLEY_E_IO, "cannot read " + pipe_config);
        json cfg = json::parse(text, nullptr, false);
        if (cfg.is_discarded()) return fail_msg(FOLEY_E_FORMAT, "bad JSON in " + pipe_config);
        if (pipe_seed_set) cfg["seed"] = pipe_seed;
        std::string out_dir = pipe_out;
        if (out_dir.empty()) out_dir = cfg.value("out_dir", std::string("out"));
        OwnedString summary;
        CHECK(foley_pipeline_run(cfg.dump().c_str(), out_dir.c_str(), &summary.p));
        std::cout << summary.str() << "\n";
        return 0;
    }

    std::cerr << app.help() << "\n";
    return 2;
}
