#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "foleylab/dataset.hpp"
#include "foleylab/mix.hpp"
#include "foleylab/script.hpp"
#include "foleylab/spatializer.hpp"

namespace foleylab {

/// One config drives the whole chain: script search, per-event rendering,
/// rule-based refinement, mixdown, surround.
struct PipelineConfig {
    std::uint64_t seed = 0;
    double fps = 25.0;
    SceneContext scene;
    RoomSpec room;
    TotConfig tot;
    ScriptContext context;
    std::map<std::string, std::string> sources; // event description -> mono wav path
};

struct PipelineOutputs {
    std::filesystem::path script_json;
    std::filesystem::path trace_json;
    std::filesystem::path plan_json;
    std::filesystem::path mix_wav;
    std::filesystem::path surround_wav;
};

/// script -> render-per-event -> analyze/plan/refine -> mix -> upmix.
/// Deterministic: identical config and seed produce byte-identical outputs.
PipelineOutputs run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                             Diagnostics* diag = nullptr);

} // namespace foleylab
