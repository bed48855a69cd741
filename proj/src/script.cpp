#include "foleylab/script.hpp"

#include <algorithm>
#include <cmath>

#include "foleylab/annotator.hpp"
#include "foleylab/metrics.hpp"
#include "rng.hpp"

namespace foleylab {

const char* origin_name(SearchNode::Origin o) {
    switch (o) {
    case SearchNode::Origin::root: return "root";
    case SearchNode::Origin::refinement: return "refinement";
    case SearchNode::Origin::regeneration: return "regeneration";
    }
    return "root";
}

namespace {

double total_score(const SubScores& s, const TotWeights& w) {
    return w.w_align * s.align + w.w_layer * s.layer + w.w_emotion * s.emotion;
}

template <typename F, typename... Args>
auto call_port(const char* name, int iteration, F&& f, Args&&... args) {
    try {
        return std::forward<F>(f)(std::forward<Args>(args)...);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::agent_error, std::string(name) + " port failed at iteration " +
                                                std::to_string(iteration) + ": " + e.what());
    }
}

} // namespace

RefineResult refine_loop(const AgentPorts& ports, const ScriptContext& context, int max_iters) {
    if (max_iters < 1) throw_invalid("refine_loop: max_iters must be >= 1");
    if (!ports.generator || !ports.validator)
        throw_invalid("refine_loop: generator and validator ports required");

    RefineResult result;
    std::string feedback;
    for (int k = 0; k < max_iters; ++k) {
        const std::string* fb = k == 0 ? nullptr : &feedback;
        result.script = call_port("generator", k, ports.generator, context, fb);
        auto [ok, notes] = call_port("validator", k, ports.validator, result.script, context);
        result.iterations = k + 1;
        result.last_feedback = notes;
        if (ok) {
            result.converged = true;
            return result;
        }
        feedback = std::move(notes);
    }
    result.converged = false;
    return result;
}

// ---------------------------------------------------------------------------

TotResult tot_search(const AgentPorts& ports, const ScriptContext& context, const TotConfig& cfg) {
    if (cfg.branching < 1) throw_invalid("tot_search: branching must be >= 1");
    if (cfg.beam < 1) throw_invalid("tot_search: beam must be >= 1");
    if (cfg.max_depth < 0) throw_invalid("tot_search: max_depth must be >= 0");
    if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw_invalid("tot_search: tau must be in (0, 1]");
    const double wsum = cfg.weights.w_align + cfg.weights.w_layer + cfg.weights.w_emotion;
    if (std::abs(wsum - 1.0) > 1e-9) throw_invalid("tot_search: weights must sum to 1");
    if (!ports.generator || !ports.expander || !ports.scorer)
        throw_invalid("tot_search: generator, expander and scorer ports required");

    std::vector<SearchNode> nodes;
    auto add_node = [&](FoleyScript script, int parent, int depth, SearchNode::Origin origin) {
        SearchNode n;
        n.id = static_cast<int>(nodes.size());
        n.parent = parent;
        n.depth = depth;
        n.origin = origin;
        n.subscores = call_port("scorer", depth, ports.scorer, script, context);
        n.score = total_score(n.subscores, cfg.weights);
        n.script = std::move(script);
        nodes.push_back(std::move(n));
        return nodes.back().id;
    };

    const int root = add_node(call_port("generator", 0, ports.generator, context, nullptr), -1, 0,
                              SearchNode::Origin::root);
    nodes[root].retained = true;

    std::vector<int> beam{root};
    int best = root;
    int expansions = 0;
    int depth = 0;

    while (depth < cfg.max_depth && nodes[best].score < cfg.tau && expansions < cfg.budget) {
        std::vector<int> children;
        for (int node_id : beam) {
            if (expansions >= cfg.budget) break;
            auto kids = call_port("expander", depth, ports.expander, nodes[node_id], context,
                                  cfg.branching);
            ++expansions;
            for (auto& kid : kids) {
                const int id =
                    add_node(std::move(kid.script), node_id, nodes[node_id].depth + 1, kid.origin);
                // Strictly-greater keeps the lowest id on ties.
                if (nodes[id].score > nodes[best].score) best = id;
                children.push_back(id);
            }
        }
        if (children.empty()) break; // every beam node is a leaf

        std::sort(children.begin(), children.end(), [&](int a, int b) {
            if (nodes[a].score != nodes[b].score) return nodes[a].score > nodes[b].score;
            return a < b;
        });
        if (static_cast<int>(children.size()) > cfg.beam) children.resize(cfg.beam);
        // The incumbent best always survives pruning; monotonicity of the
        // best retained score holds by construction.
        if (std::find(children.begin(), children.end(), best) == children.end())
            children.push_back(best);
        for (int id : children) nodes[id].retained = true;
        beam = std::move(children);
        ++depth;
    }

    TotResult result;
    result.script = nodes[best].script;
    result.score = nodes[best].score;
    result.subscores = nodes[best].subscores;
    result.result_id = best;
    result.expansions = expansions;
    result.nodes = std::move(nodes);
    return result;
}

// ---------------------------------------------------------------------------
// Default deterministic agents

namespace {

std::vector<EventSpan> spans_of(const std::vector<FoleyEvent>& events) {
    std::vector<EventSpan> spans;
    spans.reserve(events.size());
    for (const auto& e : events) spans.push_back({e.start_s, e.end_s, 0.0});
    // Merge overlaps so temporal_iou's disjointness precondition holds.
    std::sort(spans.begin(), spans.end(),
              [](const EventSpan& a, const EventSpan& b) { return a.start_s < b.start_s; });
    return merge_intervals(std::move(spans), 0.0);
}

} // namespace

SubScores default_scorer(const FoleyScript& script, const ScriptContext& context) {
    if (context.reference_events.empty())
        throw_invalid("default_scorer: context carries no reference annotation");

    SubScores s;
    s.align = temporal_iou(spans_of(script.events), spans_of(context.reference_events));

    std::size_t pairs = 0, distinct = 0;
    for (std::size_t i = 0; i < script.events.size(); ++i) {
        for (std::size_t j = i + 1; j < script.events.size(); ++j) {
            const auto& a = script.events[i];
            const auto& b = script.events[j];
            if (a.start_s < b.end_s && b.start_s < a.end_s) {
                ++pairs;
                if (a.layer != b.layer) ++distinct;
            }
        }
    }
    s.layer = pairs == 0 ? 1.0 : static_cast<double>(distinct) / static_cast<double>(pairs);
    s.emotion = script.scene_tone == context.tone ? 1.0 : 0.0;
    return s;
}

namespace {

FoleyScript reference_script(const ScriptContext& ctx) {
    FoleyScript s;
    s.events = ctx.reference_events;
    s.scene_tone = ctx.tone;
    return s;
}

// Intentionally imperfect first draft: spans snapped to a 0.5 s grid, every
// event foreground, neutral tone. Gives the loop and the search something to
// repair.
FoleyScript coarse_script(const ScriptContext& ctx) {
    FoleyScript s;
    s.scene_tone = "neutral";
    s.events = ctx.reference_events;
    for (auto& e : s.events) {
        e.layer = Layer::fg;
        e.start_s = std::floor(e.start_s / 0.5) * 0.5;
        e.end_s = std::ceil(e.end_s / 0.5) * 0.5;
        if (ctx.duration_s > 0.0) e.end_s = std::min(e.end_s, ctx.duration_s);
        if (e.end_s <= e.start_s) e.end_s = e.start_s + 0.1;
    }
    return s;
}

void repair(FoleyScript& s, const ScriptContext& ctx, bool spans, bool layers, bool tone) {
    const auto& ref = ctx.reference_events;
    for (std::size_t i = 0; i < s.events.size() && i < ref.size(); ++i) {
        if (spans) {
            s.events[i].start_s = ref[i].start_s;
            s.events[i].end_s = ref[i].end_s;
        }
        if (layers) s.events[i].layer = ref[i].layer;
    }
    if (tone) s.scene_tone = ctx.tone;
}

} // namespace

AgentPorts default_ports(std::uint64_t seed) {
    AgentPorts ports;

    ports.generator = [](const ScriptContext& ctx, const std::string* feedback) -> FoleyScript {
        if (ctx.reference_events.empty()) {
            FoleyScript s;
            s.scene_tone = ctx.tone.empty() ? "neutral" : ctx.tone;
            FoleyEvent e;
            e.id = 0;
            e.description = "ambience";
            e.layer = Layer::bg;
            e.start_s = 0.0;
            e.end_s = std::max(0.1, ctx.duration_s);
            s.events.push_back(e);
            return s;
        }
        FoleyScript s = coarse_script(ctx);
        if (feedback != nullptr) {
            repair(s, ctx, feedback->find("fix:spans") != std::string::npos,
                   feedback->find("fix:layers") != std::string::npos,
                   feedback->find("fix:tone") != std::string::npos);
        }
        return s;
    };

    ports.validator = [](const FoleyScript& script,
                         const ScriptContext& ctx) -> std::pair<bool, std::string> {
        try {
            script.validate(ctx.duration_s);
        } catch (const Error& e) {
            return {false, std::string("fix:structure ") + e.what()};
        }
        if (ctx.reference_events.empty()) return {true, ""};
        const SubScores s = default_scorer(script, ctx);
        std::string fb;
        if (s.align < 0.999) fb += "fix:spans ";
        if (s.layer < 0.999) fb += "fix:layers ";
        if (s.emotion < 0.999) fb += "fix:tone ";
        return {fb.empty(), fb};
    };

    ports.expander = [seed](const SearchNode& node, const ScriptContext& ctx,
                            int k) -> std::vector<Expansion> {
        if (ctx.reference_events.empty()) return {};
        const SubScores& s = node.subscores;
        if (s.align >= 0.999 && s.layer >= 0.999 && s.emotion >= 0.999) return {};

        // Node diagnostics pick the strategy: tonal problems are fundamental
        // (regenerate), span/layer problems are correctable (refine).
        const bool tone_weakest = s.emotion <= s.align && s.emotion <= s.layer;
        detail::Rng rng(seed ^ (static_cast<std::uint64_t>(node.id) * 0x9e3779b97f4a7c15ULL));

        std::vector<Expansion> out;
        for (int c = 0; c < k; ++c) {
            Expansion ex;
            ex.script = node.script;
            if (tone_weakest && c == 0) {
                ex.origin = SearchNode::Origin::regeneration;
                ex.script = coarse_script(ctx);
                ex.script.scene_tone = ctx.tone;
            } else {
                ex.origin = SearchNode::Origin::refinement;
                const auto& ref = ctx.reference_events;
                // Each child commits a different partial repair; halfway span
                // nudges keep intermediate scores strictly between parent and
                // reference.
                const int mode = (c + (tone_weakest ? 1 : 0)) % 3;
                for (std::size_t i = 0; i < ex.script.events.size() && i < ref.size(); ++i) {
                    auto& e = ex.script.events[i];
                    if (mode == 0) {
                        e.start_s = 0.5 * (e.start_s + ref[i].start_s);
                        e.end_s = 0.5 * (e.end_s + ref[i].end_s);
                    } else if (mode == 1) {
                        e.start_s = ref[i].start_s;
                        e.end_s = ref[i].end_s;
                    } else {
                        e.layer = ref[i].layer;
                    }
                }
                if (mode == 2 && rng.next_double() < 0.5) ex.script.scene_tone = ctx.tone;
            }
            out.push_back(std::move(ex));
        }
        return out;
    };

    ports.scorer = default_scorer;
    return ports;
}

} // namespace foleylab
