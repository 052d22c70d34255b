#include "pifree/experiment.hpp"

#include <algorithm>
#include <sstream>

#include "pifree/rng.hpp"

namespace pifree {

ExperimentReport run_experiment(const InstanceSpec& spec, const TesterConfig& cfg,
                                std::size_t trials) {
    if (trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
    ExperimentReport report;
    report.spec = spec;
    report.cfg = cfg;
    report.trials = trials;

    std::uint64_t total_queries = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        InstanceSpec trial_spec = spec;
        trial_spec.seed = derive_seed(spec.seed, t);
        const Sequence data = build_instance(trial_spec);

        TesterConfig trial_cfg = cfg;
        trial_cfg.seed = derive_seed(cfg.seed, t ^ 0x5eedULL);

        SequenceOracle oracle(data, trial_spec.seed);
        TesterStats stats;
        const TestOutcome outcome = test_pi_freeness(oracle, trial_cfg, &stats);

        TrialResult trial;
        trial.trial = t;
        trial.instance_seed = trial_spec.seed;
        trial.tester_seed = trial_cfg.seed;
        trial.kind = outcome.kind;
        trial.queries = outcome.queries_used;
        trial.depth_max = outcome.depth_max;

        if (outcome.kind == OutcomeKind::FoundPi) {
            SequenceOracle fresh(data);
            trial.witness_valid = verify_witness(fresh, outcome.witness, cfg.pattern);
            if (trial.witness_valid)
                ++report.rejections;
            else
                ++report.soundness_violations;
        } else if (outcome.kind == OutcomeKind::BudgetExceeded) {
            ++report.budget_exceeded;
        }

        total_queries += outcome.queries_used;
        report.max_queries = std::max(report.max_queries, outcome.queries_used);
        report.per_trial.push_back(trial);
    }
    report.mean_queries = static_cast<double>(total_queries) / static_cast<double>(trials);
    report.rejection_rate =
        static_cast<double>(report.rejections) / static_cast<double>(trials);
    return report;
}

nlohmann::json outcome_to_json(const TestOutcome& outcome) {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& [index, value] : outcome.witness)
        witness.push_back({index + 1, value});  // 1-based for output
    return {{"outcome", to_string(outcome.kind)},
            {"witness", witness},
            {"queries", outcome.queries_used},
            {"depth_max", outcome.depth_max},
            {"eps_floor_hits", outcome.eps_floor_hits}};
}

nlohmann::json config_to_json(const TesterConfig& cfg) {
    nlohmann::json j{{"pattern", cfg.pattern.to_string()},
                     {"epsilon", cfg.epsilon},
                     {"m", cfg.m},
                     {"kappa", cfg.kappa()},
                     {"seed", cfg.seed},
                     {"eps_floor", cfg.eps_floor},
                     {"loop_exponent_extra", cfg.loop_exponent_extra}};
    if (cfg.eta) j["eta"] = *cfg.eta;
    if (cfg.kappa_override) j["kappa_override"] = *cfg.kappa_override;
    if (cfg.query_budget) j["query_budget"] = *cfg.query_budget;
    if (cfg.amplification) j["amplification"] = *cfg.amplification;
    return j;
}

nlohmann::json spec_to_json(const InstanceSpec& spec) {
    nlohmann::json j{{"n", spec.n},
                     {"pattern", spec.pattern.to_string()},
                     {"kind", to_string(spec.kind)},
                     {"erasure_fraction", spec.erasure_fraction},
                     {"seed", spec.seed}};
    if (spec.kind == InstanceKind::PlantedFar) j["epsilon"] = spec.epsilon;
    if (spec.kind == InstanceKind::FromFile) j["path"] = spec.path;
    return j;
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json trials_json = nlohmann::json::array();
    for (const TrialResult& t : per_trial) {
        trials_json.push_back({{"trial", t.trial},
                               {"instance_seed", t.instance_seed},
                               {"tester_seed", t.tester_seed},
                               {"outcome", to_string(t.kind)},
                               {"queries", t.queries},
                               {"depth_max", t.depth_max},
                               {"witness_valid", t.witness_valid}});
    }
    return {{"spec", spec_to_json(spec)},
            {"config", config_to_json(cfg)},
            {"trials", trials},
            {"rejections", rejections},
            {"rejection_rate", rejection_rate},
            {"mean_queries", mean_queries},
            {"max_queries", max_queries},
            {"budget_exceeded", budget_exceeded},
            {"soundness_violations", soundness_violations},
            {"per_trial", trials_json}};
}

std::string ExperimentReport::to_table() const {
    std::ostringstream os;
    os << "pattern=" << cfg.pattern.to_string() << "  kind=" << to_string(spec.kind)
       << "  n=" << spec.n << "  trials=" << trials << '\n';
    os << "  rejections        " << rejections << " (" << rejection_rate * 100.0 << "%)\n";
    os << "  mean queries      " << mean_queries << '\n';
    os << "  max queries       " << max_queries << '\n';
    os << "  queries / n       "
       << (spec.n ? mean_queries / static_cast<double>(spec.n) : 0.0) << '\n';
    if (budget_exceeded) os << "  budget exceeded   " << budget_exceeded << '\n';
    if (soundness_violations) os << "  SOUNDNESS VIOLATIONS " << soundness_violations << '\n';
    return os.str();
}

std::string reports_to_csv(const std::vector<ExperimentReport>& reports) {
    std::ostringstream os;
    os << "n,trials,rejection_rate,mean_queries,max_queries,queries_per_n\n";
    for (const ExperimentReport& r : reports) {
        os << r.spec.n << ',' << r.trials << ',' << r.rejection_rate << ',' << r.mean_queries
           << ',' << r.max_queries << ','
           << (r.spec.n ? r.mean_queries / static_cast<double>(r.spec.n) : 0.0) << '\n';
    }
    return os.str();
}

}  // namespace pifree
