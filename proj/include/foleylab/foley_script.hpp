#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foleylab/error.hpp"

namespace foleylab {

enum class Layer { fg, bg };

inline const char* layer_name(Layer l) { return l == Layer::fg ? "fg" : "bg"; }
inline Layer layer_from_name(const std::string& s) {
    if (s == "fg") return Layer::fg;
    if (s == "bg") return Layer::bg;
    throw_invalid("layer must be 'fg' or 'bg', got '" + s + "'");
}

/// One planned sound event: what it is, which mix layer it belongs to, when
/// it happens, and optional spatial hints for the renderer.
struct FoleyEvent {
    int id = 0;
    std::string description;
    Layer layer = Layer::fg;
    double start_s = 0.0;
    double end_s = 0.0;
    std::optional<double> azimuth_hint_deg;
    std::optional<double> depth_hint_m;
};

struct FoleyScript {
    std::vector<FoleyEvent> events;
    std::string scene_tone;

    /// Structural checks: unique ids, positive spans, spans within
    /// `duration_s` when given (pass 0 to skip the duration check).
    void validate(double duration_s = 0.0) const;
};

inline void FoleyScript::validate(double duration_s) const {
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        if (e.end_s <= e.start_s || e.start_s < 0.0)
            throw_invalid("FoleyScript: event " + std::to_string(e.id) + " has an invalid span");
        if (duration_s > 0.0 && e.end_s > duration_s + 1e-9)
            throw_invalid("FoleyScript: event " + std::to_string(e.id) + " extends past the clip");
        for (std::size_t j = i + 1; j < events.size(); ++j)
            if (events[j].id == e.id)
                throw_invalid("FoleyScript: duplicate event id " + std::to_string(e.id));
    }
}

} // namespace foleylab
