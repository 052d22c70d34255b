#ifndef PIFREE_EXPERIMENT_HPP
#define PIFREE_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pifree/generate.hpp"
#include "pifree/outcome.hpp"
#include "pifree/tester.hpp"

namespace pifree {

struct TrialResult {
    std::size_t trial = 0;
    std::uint64_t instance_seed = 0;
    std::uint64_t tester_seed = 0;
    OutcomeKind kind = OutcomeKind::NotFound;
    std::uint64_t queries = 0;
    int depth_max = 0;
    bool witness_valid = true;  // re-verified against a fresh oracle
};

struct ExperimentReport {
    InstanceSpec spec;
    TesterConfig cfg;
    std::size_t trials = 0;
    std::size_t rejections = 0;          // verified "found" outcomes
    double rejection_rate = 0.0;
    double mean_queries = 0.0;
    std::uint64_t max_queries = 0;
    std::size_t budget_exceeded = 0;
    std::size_t soundness_violations = 0;  // invalid witnesses (must stay 0)
    std::vector<TrialResult> per_trial;

    nlohmann::json to_json() const;
    std::string to_table() const;
};

/// Independent seeded trials of the tester on instances drawn from the
/// spec. Every witness is re-verified against a fresh oracle before a
/// rejection is counted. Deterministic given (spec.seed, cfg.seed, trials).
ExperimentReport run_experiment(const InstanceSpec& spec, const TesterConfig& cfg,
                                std::size_t trials);

nlohmann::json outcome_to_json(const TestOutcome& outcome);  // 1-based witness indices
nlohmann::json config_to_json(const TesterConfig& cfg);
nlohmann::json spec_to_json(const InstanceSpec& spec);

/// Per-n CSV rows for query-growth curves: n,trials,rejection_rate,
/// mean_queries,max_queries,queries_per_n.
std::string reports_to_csv(const std::vector<ExperimentReport>& reports);

}  // namespace pifree

#endif
