#pragma once

#include <json.hpp>

#include "foleylab/annotator.hpp"
#include "foleylab/dataset.hpp"
#include "foleylab/metrics.hpp"
#include "foleylab/mix.hpp"
#include "foleylab/script.hpp"
#include "foleylab/spatializer.hpp"
#include "foleylab/trajectory.hpp"

namespace foleylab::jsonio {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Trajectory files carry visual cues plus the activation vector; the
// trajectory itself is derived (interpolation + masking).
json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const json& j);

json fourier_config_to_json(const FourierConfig& cfg);
FourierConfig fourier_config_from_json(const json& j);

json room_to_json(const RoomSpec& room);
RoomSpec room_from_json(const json& j);

json scene_to_json(const SceneContext& scene);
SceneContext scene_from_json(const json& j);

json script_to_json(const FoleyScript& script);
FoleyScript script_from_json(const json& j);

json events_to_json(const std::vector<EventSpan>& spans);
std::vector<EventSpan> events_from_json(const json& j);

json annotation_to_json(const std::vector<EventSpan>& spans, double fps,
                        const std::vector<int>& activation);

json plan_to_json(const MixingPlan& plan);
MixingPlan plan_from_json(const json& j);

json sample_params_to_json(const SampleParams& p);
SampleParams sample_params_from_json(const json& j);

json manifest_entry_to_json(const ManifestEntry& e);
ManifestEntry manifest_entry_from_json(const json& j);

json report_to_json(const MetricReport& r);

json context_to_json(const ScriptContext& ctx);
ScriptContext context_from_json(const json& j);

json tot_config_to_json(const TotConfig& cfg);
TotConfig tot_config_from_json(const json& j);

json trace_to_json(const TotResult& result);

/// Parses text, throwing a format error with `what` context on bad JSON.
json parse(const std::string& text, const std::string& what);

} // namespace foleylab::jsonio
