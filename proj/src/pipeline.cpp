#include "foleylab/pipeline.hpp"

#include <cmath>
#include <fstream>

#include "foleylab/json_io.hpp"

namespace foleylab {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    f << text << "\n";
}

// Fits the source to the event span and renders it along a constant
// trajectory taken from the event's spatial hints.
AudioClip render_script_event(const FoleyEvent& ev, const AudioClip& source, double fps,
                              const RoomSpec& room) {
    if (source.channels != 1)
        throw_invalid("pipeline: source for '" + ev.description + "' must be mono");
    const double span_s = ev.end_s - ev.start_s;
    const auto span_frames =
        static_cast<std::size_t>(std::lround(span_s * source.sample_rate));

    AudioClip mono = source;
    if (mono.frames() > span_frames)
        mono.samples.resize(span_frames);
    else if (mono.frames() < span_frames)
        mono = loop_pad(mono, span_s);

    Trajectory traj;
    traj.fps = fps;
    const auto total = static_cast<std::size_t>(std::ceil(mono.duration_s() * fps)) + 1;
    TrajectoryPoint pt;
    pt.azimuth_deg = ev.azimuth_hint_deg.value_or(90.0);
    pt.depth_m = ev.depth_hint_m.value_or(1.0);
    pt.active = 1;
    traj.points.assign(total, pt);

    return render_event(mono, traj, room);
}

} // namespace

PipelineOutputs run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                             Diagnostics* diag) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const TotResult tot = tot_search(default_ports(config.seed), config.context, config.tot);
    const FoleyScript& script = tot.script;
    script.validate(config.context.duration_s);

    std::vector<AudioClip> tracks;
    std::vector<double> offsets;
    std::vector<TrackAnalysis> analyses;
    for (std::size_t i = 0; i < script.events.size(); ++i) {
        const FoleyEvent& ev = script.events[i];
        const auto it = config.sources.find(ev.description);
        if (it == config.sources.end())
            throw Error(ErrorCode::invalid_argument,
                        "pipeline: no source mapped for event '" + ev.description + "'");
        const AudioClip source = load_wav(it->second);
        tracks.push_back(render_script_event(ev, source, config.fps, config.room));
        offsets.push_back(ev.start_s);
        analyses.push_back(analyze_track(tracks.back(), ev.description, static_cast<int>(i), diag));
    }

    const MixingPlan plan = plan_mix(analyses, config.scene, script);
    const std::vector<AudioClip> refined = execute_plan(tracks, plan, script, diag);
    const AudioClip mix = mix_tracks(refined, offsets);
    const AudioClip surround = upmix_51(mix);

    PipelineOutputs out;
    out.script_json = out_dir / "script.json";
    out.trace_json = out_dir / "trace.json";
    out.plan_json = out_dir / "plan.json";
    out.mix_wav = out_dir / "mix.wav";
    out.surround_wav = out_dir / "surround.wav";

    write_text(out.script_json, jsonio::script_to_json(script).dump(2));
    write_text(out.trace_json, jsonio::trace_to_json(tot).dump(2));
    write_text(out.plan_json, jsonio::plan_to_json(plan).dump(2));
    save_wav(mix, out.mix_wav, WavEncoding::float32, diag);
    save_wav(surround, out.surround_wav, WavEncoding::float32, diag);
    return out;
}

} // namespace foleylab
