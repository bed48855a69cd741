#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "foleylab/foley_script.hpp"

namespace foleylab {

/// Everything the agents get to see: clip duration, the film's tonal tag and
/// a reference annotation used by the deterministic default agents for
/// scoring. `extra` is an opaque pass-through blob (e.g. the film script) for
/// external agent backends.
struct ScriptContext {
    double duration_s = 0.0;
    std::string tone;
    std::vector<FoleyEvent> reference_events;
    std::string extra;
};

struct SubScores {
    double align = 0.0;   // visual-audio correspondence
    double layer = 0.0;   // foreground/background separation
    double emotion = 0.0; // tone consistency
};

struct TotWeights {
    double w_align = 1.0 / 3.0;
    double w_layer = 1.0 / 3.0;
    double w_emotion = 1.0 / 3.0;
};

struct SearchNode {
    enum class Origin { root, refinement, regeneration };

    int id = 0;
    int parent = -1;
    int depth = 0;
    Origin origin = Origin::root;
    FoleyScript script;
    SubScores subscores;
    double score = 0.0;
    bool retained = false; // survived pruning at its level
};

const char* origin_name(SearchNode::Origin o);

/// Candidate script with the strategy that produced it.
struct Expansion {
    FoleyScript script;
    SearchNode::Origin origin = SearchNode::Origin::refinement;
};

/// Pluggable agent surface. Default implementations are deterministic given
/// a seed; LLM-backed agents mount behind the same signatures.
struct AgentPorts {
    // context + optional feedback from the validator -> script
    std::function<FoleyScript(const ScriptContext&, const std::string* feedback)> generator;
    // script + context -> (accepted, feedback)
    std::function<std::pair<bool, std::string>(const FoleyScript&, const ScriptContext&)> validator;
    // node + context + branching factor -> up to k candidate scripts
    std::function<std::vector<Expansion>(const SearchNode&, const ScriptContext&, int)> expander;
    // script + context -> subscores in [0,1]
    std::function<SubScores(const FoleyScript&, const ScriptContext&)> scorer;
};

struct RefineResult {
    FoleyScript script;
    int iterations = 0;
    bool converged = false;
    std::string last_feedback;
};

/// Generate-validate loop: each iteration regenerates from the validator's
/// feedback, stopping on acceptance or after max_iters (non-convergence is
/// reported, not fatal). Port exceptions surface as agent errors tagged with
/// the iteration index.
RefineResult refine_loop(const AgentPorts& ports, const ScriptContext& context, int max_iters);

struct TotConfig {
    int branching = 3;  // k children per expanded node
    int beam = 2;       // b nodes retained per level
    int max_depth = 4;  // d_max
    double tau = 0.8;   // early-termination score
    TotWeights weights;
    int budget = 64;    // total expander invocations allowed
};

struct TotResult {
    FoleyScript script;
    double score = 0.0;
    SubScores subscores;
    int result_id = 0;
    int expansions = 0;
    std::vector<SearchNode> nodes; // full search trace in creation order
};

/// Breadth-wise beam search: expand every beam node into k children, score,
/// prune to the top b (ties broken by lower node id) plus the incumbent
/// best, while depth < d_max, best score < tau and the expansion budget
/// holds. Returns the best-scoring retained node's script; never worse than
/// the root.
TotResult tot_search(const AgentPorts& ports, const ScriptContext& context, const TotConfig& cfg);

/// Deterministic rule scorer for harness use: s_align is the interval IoU
/// against the context's reference spans, s_layer the fraction of
/// simultaneously active event pairs on distinct layers, s_emotion an exact
/// tone match. Requires a reference annotation.
SubScores default_scorer(const FoleyScript& script, const ScriptContext& context);

/// Deterministic default agents built around the context's reference
/// annotation: the generator starts from a coarsened script and repairs what
/// feedback names; the expander picks refinement or regeneration from the
/// weakest subscore.
AgentPorts default_ports(std::uint64_t seed = 0);

} // namespace foleylab
