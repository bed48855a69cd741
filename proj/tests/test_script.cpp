#include <doctest.h>

#include <algorithm>
#include <map>
#include <stdexcept>

#include "foleylab/script.hpp"
#include "rng.hpp"

using namespace foleylab;

namespace {

FoleyEvent make_event(int id, double start, double end, Layer layer, const char* desc = "evt") {
    FoleyEvent e;
    e.id = id;
    e.description = desc;
    e.layer = layer;
    e.start_s = start;
    e.end_s = end;
    return e;
}

ScriptContext reference_context() {
    ScriptContext ctx;
    ctx.duration_s = 6.0;
    ctx.tone = "tense";
    ctx.reference_events = {make_event(0, 0.4, 1.7, Layer::fg, "impact"),
                            make_event(1, 1.2, 4.9, Layer::bg, "rain"),
                            make_event(2, 3.1, 3.8, Layer::fg, "glass")};
    return ctx;
}

// Scripted tree harness: node labels carried in scene_tone, children and
// scores from lookup tables. Lets tests enumerate the exact search space.
struct ScriptedTree {
    std::map<std::string, std::vector<std::string>> children;
    std::map<std::string, double> scores;

    AgentPorts ports() const {
        AgentPorts p;
        p.generator = [](const ScriptContext&, const std::string*) {
            FoleyScript s;
            s.scene_tone = "root";
            return s;
        };
        p.validator = [](const FoleyScript&, const ScriptContext&) {
            return std::pair<bool, std::string>{true, ""};
        };
        p.expander = [this](const SearchNode& node, const ScriptContext&, int k) {
            std::vector<Expansion> out;
            const auto it = children.find(node.script.scene_tone);
            if (it == children.end()) return out;
            for (int i = 0; i < k && i < static_cast<int>(it->second.size()); ++i) {
                Expansion ex;
                ex.script.scene_tone = it->second[static_cast<std::size_t>(i)];
                ex.origin = SearchNode::Origin::refinement;
                out.push_back(std::move(ex));
            }
            return out;
        };
        p.scorer = [this](const FoleyScript& s, const ScriptContext&) {
            const double v = scores.at(s.scene_tone);
            return SubScores{v, v, v}; // total == v with weights summing to 1
        };
        return p;
    }

    double exhaustive_max(const std::string& label, int depth_left) const {
        double best = scores.at(label);
        if (depth_left == 0) return best;
        const auto it = children.find(label);
        if (it == children.end()) return best;
        for (const auto& c : it->second)
            best = std::max(best, exhaustive_max(c, depth_left - 1));
        return best;
    }
};

} // namespace

// ---------------------------------------------------------------------------

TEST_CASE("refine_loop: immediate acceptance is one iteration") {
    AgentPorts ports = default_ports();
    ports.validator = [](const FoleyScript&, const ScriptContext&) {
        return std::pair<bool, std::string>{true, ""};
    };
    const RefineResult r = refine_loop(ports, reference_context(), 10);
    CHECK(r.iterations == 1);
    CHECK(r.converged);
}

TEST_CASE("refine_loop: scripted validator accepting at k=3 takes 4 iterations") {
    int calls = 0;
    AgentPorts ports = default_ports();
    ports.validator = [&calls](const FoleyScript&, const ScriptContext&) {
        const bool ok = calls == 3;
        ++calls;
        return std::pair<bool, std::string>{ok, ok ? "" : "try again"};
    };
    const RefineResult r = refine_loop(ports, reference_context(), 10);
    CHECK(r.iterations == 4);
    CHECK(r.converged);
}

TEST_CASE("refine_loop: never-accepting validator caps and flags") {
    AgentPorts ports = default_ports();
    ports.validator = [](const FoleyScript&, const ScriptContext&) {
        return std::pair<bool, std::string>{false, "no"};
    };
    const RefineResult r = refine_loop(ports, reference_context(), 5);
    CHECK(r.iterations == 5);
    CHECK(!r.converged);
}

TEST_CASE("refine_loop: default agents converge on the reference") {
    const RefineResult r = refine_loop(default_ports(), reference_context(), 10);
    CHECK(r.converged);
    const SubScores s = default_scorer(r.script, reference_context());
    CHECK(s.align == doctest::Approx(1.0));
    CHECK(s.emotion == 1.0);
}

TEST_CASE("refine_loop: port failure surfaces as an agent error with the iteration") {
    AgentPorts ports = default_ports();
    ports.generator = [](const ScriptContext&, const std::string*) -> FoleyScript {
        throw std::runtime_error("backend unavailable");
    };
    try {
        refine_loop(ports, reference_context(), 3);
        FAIL("expected agent error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::agent_error);
        CHECK(std::string(e.what()).find("iteration 0") != std::string::npos);
    }
}

// ---------------------------------------------------------------------------

TEST_CASE("default_scorer: reference self-score and penalties") {
    const ScriptContext ctx = reference_context();
    FoleyScript ref;
    ref.events = ctx.reference_events;
    ref.scene_tone = ctx.tone;

    const SubScores self = default_scorer(ref, ctx);
    CHECK(self.align == doctest::Approx(1.0));
    CHECK(self.emotion == 1.0);

    // Two fully overlapping fg events: zero layer separation.
    FoleyScript collided;
    collided.events = {make_event(0, 1.0, 2.0, Layer::fg), make_event(1, 1.0, 2.0, Layer::fg)};
    collided.scene_tone = ctx.tone;
    CHECK(default_scorer(collided, ctx).layer == 0.0);

    // Disjoint spans score zero alignment.
    FoleyScript off;
    off.events = {make_event(0, 5.5, 5.9, Layer::fg)};
    off.scene_tone = "wrong";
    const SubScores s = default_scorer(off, ctx);
    CHECK(s.align == 0.0);
    CHECK(s.emotion == 0.0);

    CHECK_THROWS_AS(default_scorer(ref, ScriptContext{}), Error);
}

// ---------------------------------------------------------------------------

TEST_CASE("tot_search: root above tau returns immediately") {
    ScriptedTree tree;
    tree.children["root"] = {"a", "b"};
    tree.scores = {{"root", 0.95}, {"a", 0.2}, {"b", 0.3}};

    TotConfig cfg;
    cfg.tau = 0.8;
    const TotResult r = tot_search(tree.ports(), ScriptContext{}, cfg);
    CHECK(r.script.scene_tone == "root");
    CHECK(r.expansions == 0);
    CHECK(r.nodes.size() == 1);
}

TEST_CASE("tot_search: zero depth returns the root regardless of score") {
    ScriptedTree tree;
    tree.children["root"] = {"a"};
    tree.scores = {{"root", 0.1}, {"a", 0.99}};

    TotConfig cfg;
    cfg.max_depth = 0;
    const TotResult r = tot_search(tree.ports(), ScriptContext{}, cfg);
    CHECK(r.script.scene_tone == "root");
    CHECK(r.expansions == 0);
}

TEST_CASE("tot_search: beam search finds the scripted maximum") {
    // Depth-3 binary tree; best leaf deliberately NOT under the best child.
    ScriptedTree tree;
    tree.scores["root"] = 0.10;
    tree.children["root"] = {"l", "r"};
    tree.scores["l"] = 0.40;
    tree.scores["r"] = 0.30;
    tree.children["l"] = {"ll", "lr"};
    tree.children["r"] = {"rl", "rr"};
    tree.scores["ll"] = 0.45;
    tree.scores["lr"] = 0.35;
    tree.scores["rl"] = 0.70; // the prize sits under the weaker branch
    tree.scores["rr"] = 0.20;
    tree.children["rl"] = {"rlx"};
    tree.scores["rlx"] = 0.75;

    TotConfig cfg;
    cfg.branching = 2;
    cfg.beam = 4; // >= total branching: beam equals exhaustive search
    cfg.max_depth = 3;
    cfg.tau = 0.99;
    cfg.budget = 1000;

    const TotResult r = tot_search(tree.ports(), ScriptContext{}, cfg);
    CHECK(r.score == doctest::Approx(tree.exhaustive_max("root", 3)));
    CHECK(r.script.scene_tone == "rlx");

    // A beam of 1 prunes the weaker branch and misses it.
    cfg.beam = 1;
    const TotResult narrow = tot_search(tree.ports(), ScriptContext{}, cfg);
    CHECK(narrow.score == doctest::Approx(0.45));
    CHECK(narrow.score >= tree.scores["root"]); // never worse than the root
}

TEST_CASE("tot_search: randomized trees, wide beam equals exhaustive argmax") {
    detail::Rng rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        ScriptedTree tree;
        int next_label = 0;
        // Random tree: 3 levels, branching 2..3, scores in [0, 0.9).
        std::vector<std::string> level{"root"};
        tree.scores["root"] = rng.uniform(0.0, 0.5);
        for (int d = 0; d < 3; ++d) {
            std::vector<std::string> next;
            for (const auto& label : level) {
                const int kids = 2 + static_cast<int>(rng.next_below(2));
                for (int c = 0; c < kids; ++c) {
                    std::string name = "n" + std::to_string(next_label++);
                    tree.children[label].push_back(name);
                    tree.scores[name] = rng.uniform(0.0, 0.9);
                    next.push_back(name);
                }
            }
            level = next;
        }

        TotConfig cfg;
        cfg.branching = 3;
        cfg.beam = 64;
        cfg.max_depth = 3;
        cfg.tau = 1.0;
        cfg.budget = 10000;
        const TotResult r = tot_search(tree.ports(), ScriptContext{}, cfg);
        CHECK(r.score == doctest::Approx(tree.exhaustive_max("root", 3)));
    }
}

TEST_CASE("tot_search: determinism and monotone incumbent") {
    const ScriptContext ctx = reference_context();
    TotConfig cfg;
    cfg.tau = 0.999;
    const TotResult a = tot_search(default_ports(11), ctx, cfg);
    const TotResult b = tot_search(default_ports(11), ctx, cfg);
    REQUIRE(a.nodes.size() == b.nodes.size());
    CHECK(a.result_id == b.result_id);
    CHECK(a.script.scene_tone == b.script.scene_tone);
    CHECK(a.score >= a.nodes[0].score);

    // Best retained score is non-decreasing across depth levels.
    double best_at_depth = -1.0;
    for (int d = 0;; ++d) {
        double best = -1.0;
        bool any = false;
        for (const auto& n : a.nodes)
            if (n.depth == d && n.retained) {
                best = std::max(best, n.score);
                any = true;
            }
        if (!any) break;
        CHECK(best >= best_at_depth);
        best_at_depth = best;
    }
}

TEST_CASE("tot_search: default agents climb to the reference") {
    const ScriptContext ctx = reference_context();
    TotConfig cfg;
    cfg.tau = 0.95;
    const TotResult r = tot_search(default_ports(3), ctx, cfg);
    CHECK(r.score >= 0.95);
    CHECK(r.script.scene_tone == ctx.tone);
}

TEST_CASE("tot_search: budget and leaf edge cases") {
    ScriptedTree tree;
    tree.scores["root"] = 0.2;
    // Root has no children at all: one query, then the all-leaf exit.
    TotConfig cfg;
    cfg.budget = 100;
    const TotResult r = tot_search(tree.ports(), ScriptContext{}, cfg);
    CHECK(r.script.scene_tone == "root");
    CHECK(r.expansions == 1);

    // Zero budget: no expansions at all.
    cfg.budget = 0;
    const TotResult zero = tot_search(tree.ports(), ScriptContext{}, cfg);
    CHECK(zero.expansions == 0);

    TotConfig bad;
    bad.tau = 0.0;
    CHECK_THROWS_AS(tot_search(tree.ports(), ScriptContext{}, bad), Error);
    bad = TotConfig{};
    bad.weights = TotWeights{0.5, 0.2, 0.2};
    CHECK_THROWS_AS(tot_search(tree.ports(), ScriptContext{}, bad), Error);
}

TEST_CASE("FoleyScript: structural validation") {
    FoleyScript s;
    s.events = {make_event(0, 1.0, 0.5, Layer::fg)};
    CHECK_THROWS_AS(s.validate(), Error);
    s.events = {make_event(0, 0.0, 1.0, Layer::fg), make_event(0, 2.0, 3.0, Layer::bg)};
    CHECK_THROWS_AS(s.validate(), Error);
    s.events = {make_event(0, 0.0, 5.0, Layer::fg)};
    CHECK_THROWS_AS(s.validate(4.0), Error);
    s.validate(6.0);
}
