#include "foleylab/json_io.hpp"

namespace foleylab::jsonio {

json parse(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::format_error, what + ": " + e.what());
    }
}

namespace {

template <typename T>
T require(const json& j, const char* key, const char* what) {
    if (!j.contains(key))
        throw Error(ErrorCode::format_error, std::string(what) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format_error,
                    std::string(what) + ": bad field '" + key + "': " + e.what());
    }
}

template <typename T>
T optional_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

} // namespace

// ---------------------------------------------------------------------------

json trajectory_to_json(const Trajectory& traj) {
    // Dumps the derived per-frame form; loadable through the "points" branch.
    json pts = json::array();
    for (const auto& p : traj.points)
        pts.push_back(json{{"depth_m", p.depth_m}, {"azimuth_deg", p.azimuth_deg}, {"active", p.active}});
    return json{{"schema_version", kSchemaVersion}, {"fps", traj.fps}, {"points", pts}};
}

Trajectory trajectory_from_json(const json& j) {
    const char* what = "trajectory";
    const double fps = require<double>(j, "fps", what);

    if (j.contains("points")) {
        Trajectory traj;
        traj.fps = fps;
        for (const auto& p : j.at("points")) {
            TrajectoryPoint tp;
            tp.depth_m = require<double>(p, "depth_m", what);
            tp.azimuth_deg = require<double>(p, "azimuth_deg", what);
            tp.active = optional_or<int>(p, "active", 1);
            traj.points.push_back(tp);
        }
        if (traj.points.empty()) throw Error(ErrorCode::format_error, "trajectory: no points");
        return traj;
    }

    // Cue form: interpolate keyframes, then mask with the activation vector.
    const auto activation = require<std::vector<int>>(j, "activation", what);
    if (activation.empty()) throw Error(ErrorCode::format_error, "trajectory: empty activation");
    std::vector<VisualCue> cues;
    for (const auto& c : j.at("cues")) {
        VisualCue cue;
        cue.frame_index = require<std::size_t>(c, "frame", what);
        cue.box_center_x = require<double>(c, "x", what);
        cue.frame_width = require<double>(c, "width", what);
        cue.frame_height = optional_or<double>(c, "height", 0.0);
        cue.depth_m = require<double>(c, "depth_m", what);
        cues.push_back(cue);
    }
    const double default_ppm = cues.empty() ? 480.0 : cues.front().frame_width / 4.0;
    const double ppm = optional_or<double>(j, "ppm", default_ppm);
    Trajectory traj = interpolate_trajectory(cues, fps, activation.size(), ppm);
    return apply_activation(traj, activation);
}

json fourier_config_to_json(const FourierConfig& cfg) {
    return json{{"schema_version", kSchemaVersion},
                {"m", cfg.bands},
                {"sigma", cfg.sigma},
                {"seed", cfg.seed}};
}

FourierConfig fourier_config_from_json(const json& j) {
    FourierConfig cfg;
    cfg.bands = require<std::size_t>(j, "m", "fourier config");
    cfg.sigma = require<double>(j, "sigma", "fourier config");
    cfg.seed = require<std::uint64_t>(j, "seed", "fourier config"); // mandatory: reproducibility
    return cfg;
}

json room_to_json(const RoomSpec& room) {
    return json{{"schema_version", kSchemaVersion},
                {"preset", preset_name(room.preset)},
                {"rt60_s", room.rt60_s},
                {"wet_ratio", room.wet_ratio},
                {"interaural_m", room.interaural_m}};
}

RoomSpec room_from_json(const json& j) {
    RoomSpec room;
    if (j.contains("preset")) {
        room = RoomSpec::from_preset(j.at("preset").get<std::string>());
    } else if (j.contains("rt60_s")) {
        room.preset = RoomSpec::Preset::custom;
        room.rt60_s = j.at("rt60_s").get<double>();
    } else {
        throw Error(ErrorCode::format_error, "room: need 'preset' or 'rt60_s'");
    }
    if (j.contains("rt60_s")) room.rt60_s = j.at("rt60_s").get<double>();
    room.wet_ratio = optional_or<double>(j, "wet_ratio", room.preset == RoomSpec::Preset::dry ? 0.0 : 0.25);
    room.interaural_m = optional_or<double>(j, "interaural_m", kDefaultInterauralM);
    room.validate();
    return room;
}

json scene_to_json(const SceneContext& scene) {
    return json{{"schema_version", kSchemaVersion},
                {"environment", scene.environment},
                {"target_rt60_s", scene.target_rt60_s},
                {"fg_lufs", scene.fg_lufs},
                {"bg_lufs", scene.bg_lufs}};
}

SceneContext scene_from_json(const json& j) {
    SceneContext s;
    s.environment = optional_or<std::string>(j, "environment", "room");
    s.target_rt60_s = require<double>(j, "target_rt60_s", "scene");
    s.fg_lufs = require<double>(j, "fg_lufs", "scene");
    s.bg_lufs = require<double>(j, "bg_lufs", "scene");
    return s;
}

// ---------------------------------------------------------------------------

namespace {

json event_to_json(const FoleyEvent& e) {
    json out{{"id", e.id},
             {"description", e.description},
             {"layer", layer_name(e.layer)},
             {"start_s", e.start_s},
             {"end_s", e.end_s}};
    if (e.azimuth_hint_deg) out["azimuth_hint_deg"] = *e.azimuth_hint_deg;
    if (e.depth_hint_m) out["depth_hint_m"] = *e.depth_hint_m;
    return out;
}

FoleyEvent event_from_json(const json& j) {
    FoleyEvent e;
    e.id = require<int>(j, "id", "script event");
    e.description = require<std::string>(j, "description", "script event");
    e.layer = layer_from_name(require<std::string>(j, "layer", "script event"));
    e.start_s = require<double>(j, "start_s", "script event");
    e.end_s = require<double>(j, "end_s", "script event");
    if (j.contains("azimuth_hint_deg") && !j.at("azimuth_hint_deg").is_null())
        e.azimuth_hint_deg = j.at("azimuth_hint_deg").get<double>();
    if (j.contains("depth_hint_m") && !j.at("depth_hint_m").is_null())
        e.depth_hint_m = j.at("depth_hint_m").get<double>();
    return e;
}

} // namespace

json script_to_json(const FoleyScript& script) {
    json events = json::array();
    for (const auto& e : script.events) events.push_back(event_to_json(e));
    return json{{"schema_version", kSchemaVersion},
                {"scene_tone", script.scene_tone},
                {"events", events}};
}

FoleyScript script_from_json(const json& j) {
    FoleyScript s;
    s.scene_tone = optional_or<std::string>(j, "scene_tone", "");
    for (const auto& e : j.at("events")) s.events.push_back(event_from_json(e));
    s.validate();
    return s;
}

json events_to_json(const std::vector<EventSpan>& spans) {
    json out = json::array();
    for (const auto& s : spans)
        out.push_back(json{{"start_s", s.start_s}, {"end_s", s.end_s}, {"peak_db", s.peak_db}});
    return out;
}

std::vector<EventSpan> events_from_json(const json& j) {
    std::vector<EventSpan> spans;
    for (const auto& e : j) {
        EventSpan s;
        s.start_s = require<double>(e, "start_s", "event span");
        s.end_s = require<double>(e, "end_s", "event span");
        s.peak_db = optional_or<double>(e, "peak_db", 0.0);
        spans.push_back(s);
    }
    return spans;
}

json annotation_to_json(const std::vector<EventSpan>& spans, double fps,
                        const std::vector<int>& activation) {
    return json{{"schema_version", kSchemaVersion},
                {"fps", fps},
                {"events", events_to_json(spans)},
                {"activation", activation}};
}

// ---------------------------------------------------------------------------

namespace {

const char* op_name(MixOp op) {
    switch (op) {
    case MixOp::reverb: return "reverb";
    case MixOp::eq: return "eq";
    case MixOp::dyn: return "dyn";
    }
    return "reverb";
}

MixOp op_from_name(const std::string& s) {
    if (s == "reverb") return MixOp::reverb;
    if (s == "eq") return MixOp::eq;
    if (s == "dyn") return MixOp::dyn;
    throw Error(ErrorCode::format_error, "plan: unknown operation '" + s + "'");
}

} // namespace

json plan_to_json(const MixingPlan& plan) {
    json entries = json::array();
    for (const auto& e : plan.entries) {
        json ops = json::array();
        for (MixOp op : e.operations) ops.push_back(op_name(op));
        json entry{{"track_id", e.track_id}, {"operations", ops}};
        if (e.theta_rev)
            entry["theta_rev"] =
                json{{"rt60_s", e.theta_rev->rt60_s}, {"wet_ratio", e.theta_rev->wet_ratio}};
        if (e.theta_eq)
            entry["theta_eq"] = json{{"low_db", e.theta_eq->low_db},
                                     {"mid_db", e.theta_eq->mid_db},
                                     {"high_db", e.theta_eq->high_db}};
        if (e.theta_dyn)
            entry["theta_dyn"] = json{{"gain_db", e.theta_dyn->gain_db},
                                      {"limiter_ceiling_dbfs", e.theta_dyn->limiter_ceiling_dbfs}};
        entries.push_back(std::move(entry));
    }
    return json{{"schema_version", kSchemaVersion},
                {"scene", scene_to_json(plan.scene)},
                {"entries", entries}};
}

MixingPlan plan_from_json(const json& j) {
    MixingPlan plan;
    plan.scene = scene_from_json(j.at("scene"));
    for (const auto& e : j.at("entries")) {
        PlanEntry entry;
        entry.track_id = require<int>(e, "track_id", "plan entry");
        for (const auto& op : e.at("operations")) entry.operations.insert(op_from_name(op));
        if (e.contains("theta_rev"))
            entry.theta_rev = ReverbParams{e.at("theta_rev").at("rt60_s").get<double>(),
                                           e.at("theta_rev").at("wet_ratio").get<double>()};
        if (e.contains("theta_eq"))
            entry.theta_eq = EqParams{e.at("theta_eq").at("low_db").get<double>(),
                                      e.at("theta_eq").at("mid_db").get<double>(),
                                      e.at("theta_eq").at("high_db").get<double>()};
        if (e.contains("theta_dyn"))
            entry.theta_dyn =
                DynParams{e.at("theta_dyn").at("gain_db").get<double>(),
                          e.at("theta_dyn").at("limiter_ceiling_dbfs").get<double>()};
        // Operations must carry their parameter blocks.
        if (entry.operations.count(MixOp::reverb) && !entry.theta_rev)
            throw Error(ErrorCode::format_error, "plan: reverb without theta_rev");
        if (entry.operations.count(MixOp::eq) && !entry.theta_eq)
            throw Error(ErrorCode::format_error, "plan: eq without theta_eq");
        if (entry.operations.count(MixOp::dyn) && !entry.theta_dyn)
            throw Error(ErrorCode::format_error, "plan: dyn without theta_dyn");
        plan.entries.push_back(std::move(entry));
    }
    return plan;
}

// ---------------------------------------------------------------------------

namespace {

json sample_point_to_json(const SamplePoint& p) {
    return json{{"azimuth_offset_deg", p.azimuth_offset_deg},
                {"depth_zone", depth_zone_name(p.zone)},
                {"depth_m", p.depth_m}};
}

SamplePoint sample_point_from_json(const json& j) {
    SamplePoint p;
    p.azimuth_offset_deg = require<int>(j, "azimuth_offset_deg", "sample point");
    p.zone = depth_zone_from_name(require<std::string>(j, "depth_zone", "sample point"));
    p.depth_m = require<double>(j, "depth_m", "sample point");
    return p;
}

} // namespace

json sample_params_to_json(const SampleParams& p) {
    json out{{"start", sample_point_to_json(p.start)},
             {"motion", p.dynamic ? "dynamic" : "static"},
             {"reverb_preset", preset_name(p.reverb)},
             {"seed", p.seed}};
    if (p.end) out["end"] = sample_point_to_json(*p.end);
    return out;
}

SampleParams sample_params_from_json(const json& j) {
    SampleParams p;
    p.start = sample_point_from_json(j.at("start"));
    p.dynamic = require<std::string>(j, "motion", "sample params") == "dynamic";
    p.reverb = RoomSpec::from_preset(require<std::string>(j, "reverb_preset", "sample params")).preset;
    p.seed = require<std::uint64_t>(j, "seed", "sample params");
    if (j.contains("end")) p.end = sample_point_from_json(j.at("end"));
    p.validate();
    return p;
}

json manifest_entry_to_json(const ManifestEntry& e) {
    return json{{"schema_version", kSchemaVersion},
                {"sample_id", e.sample_id},
                {"source_path", e.source_path},
                {"rendered_path", e.rendered_path},
                {"params", sample_params_to_json(e.params)},
                {"caption", e.caption},
                {"events", events_to_json(e.events)},
                {"duration_s", e.duration_s}};
}

ManifestEntry manifest_entry_from_json(const json& j) {
    ManifestEntry e;
    e.sample_id = require<std::string>(j, "sample_id", "manifest entry");
    e.source_path = require<std::string>(j, "source_path", "manifest entry");
    e.rendered_path = require<std::string>(j, "rendered_path", "manifest entry");
    e.params = sample_params_from_json(j.at("params"));
    e.caption = require<std::string>(j, "caption", "manifest entry");
    e.events = events_from_json(j.at("events"));
    e.duration_s = require<double>(j, "duration_s", "manifest entry");
    return e;
}

json report_to_json(const MetricReport& r) {
    json items = json::array();
    for (const auto& it : r.items)
        items.push_back(json{{"id", it.id},
                             {"azimuth_est_deg", it.azimuth_est_deg},
                             {"azimuth_truth_deg", it.azimuth_truth_deg},
                             {"iou", it.iou},
                             {"loudness_error_lu", it.loudness_error_lu},
                             {"lsd_db", it.lsd_db},
                             {"rt60_error_s", it.rt60_error_s}});
    return json{{"schema_version", kSchemaVersion},
                {"gcc_mae_deg", r.gcc_mae_deg},
                {"iou", r.iou},
                {"loudness_error_lu", r.loudness_error_lu},
                {"lsd_db", r.lsd_db},
                {"rt60_error_s", r.rt60_error_s},
                {"items", items}};
}

// ---------------------------------------------------------------------------

json context_to_json(const ScriptContext& ctx) {
    json refs = json::array();
    for (const auto& e : ctx.reference_events) refs.push_back(event_to_json(e));
    return json{{"schema_version", kSchemaVersion},
                {"duration_s", ctx.duration_s},
                {"tone", ctx.tone},
                {"reference_events", refs},
                {"extra", ctx.extra}};
}

ScriptContext context_from_json(const json& j) {
    ScriptContext ctx;
    ctx.duration_s = require<double>(j, "duration_s", "context");
    ctx.tone = optional_or<std::string>(j, "tone", "");
    if (j.contains("reference_events"))
        for (const auto& e : j.at("reference_events")) ctx.reference_events.push_back(event_from_json(e));
    ctx.extra = optional_or<std::string>(j, "extra", "");
    return ctx;
}

json tot_config_to_json(const TotConfig& cfg) {
    return json{{"schema_version", kSchemaVersion},
                {"k", cfg.branching},
                {"b", cfg.beam},
                {"d_max", cfg.max_depth},
                {"tau", cfg.tau},
                {"weights", {cfg.weights.w_align, cfg.weights.w_layer, cfg.weights.w_emotion}},
                {"budget", cfg.budget}};
}

TotConfig tot_config_from_json(const json& j) {
    TotConfig cfg;
    cfg.branching = optional_or<int>(j, "k", cfg.branching);
    cfg.beam = optional_or<int>(j, "b", cfg.beam);
    cfg.max_depth = optional_or<int>(j, "d_max", cfg.max_depth);
    cfg.tau = optional_or<double>(j, "tau", cfg.tau);
    cfg.budget = optional_or<int>(j, "budget", cfg.budget);
    if (j.contains("weights")) {
        const auto w = j.at("weights").get<std::vector<double>>();
        if (w.size() != 3) throw Error(ErrorCode::format_error, "tot config: weights must have 3 entries");
        cfg.weights = TotWeights{w[0], w[1], w[2]};
    }
    return cfg;
}

json trace_to_json(const TotResult& result) {
    json nodes = json::array();
    for (const auto& n : result.nodes)
        nodes.push_back(json{{"id", n.id},
                             {"parent", n.parent},
                             {"depth", n.depth},
                             {"origin", origin_name(n.origin)},
                             {"score", n.score},
                             {"subscores", {n.subscores.align, n.subscores.layer, n.subscores.emotion}},
                             {"retained", n.retained}});
    return json{{"schema_version", kSchemaVersion},
                {"result_id", result.result_id},
                {"expansions", result.expansions},
                {"nodes", nodes}};
}

} // namespace foleylab::jsonio
