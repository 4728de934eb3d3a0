#pragma once

#include <string>
#include <vector>

#include "kpplab/diagnostics.hpp"
#include "kpplab/json_io.hpp"

namespace kpplab {

// One machine-checkable predicate outcome.
struct CheckResult {
    std::string name;
    std::string verdict;  // PASS | FAIL | INCONCLUSIVE | INFO
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ScenarioOutcome {
    std::string id;
    DiagnosticsReport report;
    std::vector<CheckResult> checks;
    double doubling_gap = 0.0;  // measured ROI disagreement of the doubled-domain rerun

    bool pass() const {
        for (const auto& c : checks)
            if (c.verdict == "FAIL" || c.verdict == "INCONCLUSIVE") return false;
        return true;
    }
    json to_json() const;
};

// A named, versioned experiment preset binding geometry + solver +
// diagnostics to a claim, with a machine-checkable plan.
struct Scenario {
    std::string id;
    std::string claim;
    json descriptor;
    json grid;      // {"lo": [...], "hi": [...], "h": ...}
    json solver;    // {"dt", "scheme", "boundary", "snapshot_every", "horizon"}
    std::string reaction = "logistic";
    json roi;       // box the doubling check compares on
    json plan;      // list of {op, schedule, predicate} entries
    uint64_t seed = 42;

    static Scenario from_json(const json& j);
    json to_json() const;
};

std::vector<Scenario> builtin_catalog();
Scenario catalog_scenario(const std::string& id);

struct ScenarioRunOptions {
    int threads = 0;            // 0: resolve KPPLAB_THREADS
    bool with_doubling = true;  // domain-doubling no-contamination check
};

// Executes the plan and evaluates every predicate. Throws ScenarioError with
// the measured contamination if the doubling check exceeds 1e-6 on the ROI.
ScenarioOutcome run_scenario(const Scenario& s, const ScenarioRunOptions& opts = {});

// Helpers shared with the CLI and the acceptance suite.
GridSpec gridspec_from_json(const json& j);
SolverConfig solvercfg_from_json(const json& j);
Box box_from_json(const json& j);

}  // namespace kpplab
