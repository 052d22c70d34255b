// pifree: test numeric sequences for forbidden order patterns.
//
// Subcommands:
//   test    run the sublinear tester on one sequence
//   oracle  exact brute-force reference algorithms (small n)
//   grid    dump a gridding decomposition for inspection
//   bench   seeded multi-trial experiments with query statistics

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pifree/bruteforce.hpp"
#include "pifree/experiment.hpp"
#include "pifree/generate.hpp"
#include "pifree/gridding.hpp"
#include "pifree/io.hpp"
#include "pifree/rng.hpp"
#include "pifree/tester.hpp"

namespace {

using nlohmann::json;

pifree::InstanceKind parse_kind(const std::string& name) {
    if (name == "free") return pifree::InstanceKind::Free;
    if (name == "planted") return pifree::InstanceKind::PlantedFar;
    if (name == "random") return pifree::InstanceKind::Random;
    throw CLI::ValidationError("--generate must be one of free|planted|random");
}

json index_tuple_json(const pifree::IndexTuple& tuple) {
    json out = json::array();
    for (std::size_t i : tuple) out.push_back(i + 1);  // 1-based
    return out;
}

json region_json(const pifree::BoxRegion& region) {
    json idx = json::array();
    for (const auto& iv : region.indices.intervals()) idx.push_back({iv.lo + 1, iv.hi});
    json val = json::array();
    for (const auto& vv : region.values.intervals()) val.push_back({vv.lo, vv.hi});
    return {{"indices", idx}, {"values", val}};
}

int run_test(const std::string& pattern_text, const std::string& input, int csv_column,
             const std::string& generate, std::size_t n, double gen_epsilon, double alpha,
             double epsilon, std::optional<double> eta, std::size_t m,
             std::optional<double> kappa_override, std::uint64_t seed,
             std::optional<std::uint64_t> budget, bool as_json) {
    const pifree::Pattern pattern = pifree::Pattern::parse(pattern_text);

    pifree::InstanceSpec spec;
    spec.pattern = pattern;
    spec.seed = seed;
    spec.erasure_fraction = alpha;
    if (!input.empty()) {
        spec.kind = pifree::InstanceKind::FromFile;
        spec.path = input;
        spec.csv_column = csv_column;
    } else {
        spec.kind = parse_kind(generate);
        spec.n = n;
        spec.epsilon = gen_epsilon;
    }
    const pifree::Sequence data = pifree::build_instance(spec);

    pifree::TesterConfig cfg;
    cfg.pattern = pattern;
    cfg.epsilon = epsilon;
    cfg.m = m;
    cfg.eta = eta;
    cfg.kappa_override = kappa_override;
    cfg.seed = pifree::derive_seed(seed, 0x7e57);
    cfg.query_budget = budget;

    pifree::SequenceOracle oracle(data, seed);
    pifree::TesterStats stats;
    const pifree::TestOutcome outcome = pifree::test_pi_freeness(oracle, cfg, &stats);

    bool witness_ok = true;
    if (outcome.found()) {
        pifree::SequenceOracle fresh(data);
        witness_ok = pifree::verify_witness(fresh, outcome.witness, pattern);
    }

    if (as_json) {
        json out = pifree::outcome_to_json(outcome);
        out["seed"] = seed;
        out["config"] = pifree::config_to_json(cfg);
        out["witness_valid"] = witness_ok;
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << "outcome:  " << pifree::to_string(outcome.kind) << '\n';
        if (outcome.found()) {
            std::cout << "witness: ";
            for (const auto& [idx, val] : outcome.witness)
                std::cout << " (" << idx + 1 << ", " << val << ")";
            std::cout << (witness_ok ? "  [verified]" : "  [INVALID]") << '\n';
        }
        std::cout << "queries:  " << outcome.queries_used << '\n';
        std::cout << "depth:    " << outcome.depth_max << '\n';
    }
    return witness_ok ? 0 : 2;
}

int run_oracle(const std::string& pattern_text, const std::string& input, int csv_column,
               const std::string& op) {
    const pifree::Pattern pattern = pifree::Pattern::parse(pattern_text);
    const pifree::Sequence data = pifree::read_sequence_file(input, csv_column);
    json out{{"op", op}, {"pattern", pattern.to_string()}, {"n", data.size()}};

    if (op == "find") {
        const auto w = pifree::find_appearance_bruteforce(data, pattern);
        out["result"] = w.has_value() ? "found" : "absent";
        if (w) out["witness"] = index_tuple_json(*w);
    } else if (op == "generalized") {
        const auto w = pifree::find_generalized_appearance(data, pattern);
        out["result"] = w.has_value() ? "found" : "absent";
        if (w) out["witness"] = index_tuple_json(*w);
    } else if (op == "distance") {
        const auto report = pifree::distance_report(data, pattern);
        out["result"] = "ok";
        out["distance"] = {{"deletion", report.deletion_distance},
                           {"hamming", report.hamming_distance},
                           {"deletion_set", index_tuple_json(report.deletion_set)}};
        json repaired = json::array();
        for (const auto& e : report.repaired_function)
            e ? repaired.push_back(*e) : repaired.push_back(nullptr);
        out["distance"]["repaired_function"] = repaired;
    } else if (op == "matching") {
        const auto matching = pifree::greedy_matching(data, pattern);
        out["result"] = "ok";
        json tuples = json::array();
        for (const auto& t : matching) tuples.push_back(index_tuple_json(t));
        out["matching"] = tuples;
        out["matching_size"] = matching.size();
    } else {
        throw CLI::ValidationError("--op must be one of find|distance|matching|generalized");
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_grid(const std::string& pattern_text, const std::string& input, int csv_column,
             std::size_t m, double beta, std::uint64_t seed) {
    const pifree::Pattern pattern = pifree::Pattern::parse(pattern_text);
    (void)pattern;  // the dump is pattern-independent; flag kept for symmetry
    const pifree::Sequence data = pifree::read_sequence_file(input, csv_column);
    pifree::SequenceOracle oracle(data, seed);
    pifree::BudgetedOracle budgeted(oracle);
    pifree::Rng rng(seed);
    const pifree::BoxRegion whole{pifree::IndexSet::single(0, data.size()),
                                  pifree::ValueSet::all()};
    const pifree::GridDecomposition grid = pifree::gridding(budgeted, whole, m, beta, rng);

    json out{{"n", data.size()},       {"m", m},
             {"beta", beta},           {"seed", seed},
             {"m_prime", grid.side()}, {"queries", oracle.query_count()}};
    json stripes = json::array();
    for (const auto& s : grid.stripes) {
        json iv = json::array();
        for (const auto& i : s.intervals()) iv.push_back({i.lo + 1, i.hi});
        stripes.push_back(iv);
    }
    out["stripes"] = stripes;
    json layers = json::array();
    for (std::size_t l = 0; l < grid.partition.layer_count(); ++l) {
        const auto& vs = grid.partition.layers[l];
        layers.push_back({{"lo", vs.intervals().front().lo},
                          {"hi", vs.intervals().front().hi},
                          {"single_valued", grid.partition.single_valued[l] != 0},
                          {"est_density", grid.partition.est_density[l]}});
    }
    out["layers"] = layers;
    json cells = json::array();
    for (std::size_t s = 0; s < grid.side(); ++s) {
        for (std::size_t l = 0; l < grid.side(); ++l) {
            const pifree::CellCoord c{s, l};
            if (grid.tag(c) == pifree::CellTag::Unmarked) continue;
            cells.push_back({{"stripe", s + 1},
                             {"layer", l + 1},
                             {"tag", grid.tag(c) == pifree::CellTag::Dense ? "dense" : "marked"},
                             {"est_density", grid.density(c)}});
        }
    }
    out["cells"] = cells;
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_bench(const std::string& pattern_text, const std::string& n_list,
              const std::string& kind_name, double gen_epsilon, double alpha, double epsilon,
              std::optional<double> eta, std::size_t m, std::optional<double> kappa_override,
              std::size_t trials, std::uint64_t seed, const std::string& out_path,
              const std::string& csv_path) {
    const pifree::Pattern pattern = pifree::Pattern::parse(pattern_text);
    std::vector<std::size_t> sizes;
    {
        std::istringstream in(n_list);
        std::string tok;
        while (std::getline(in, tok, ',')) sizes.push_back(std::stoull(tok));
        if (sizes.empty()) throw CLI::ValidationError("--n-list is empty");
    }

    std::vector<pifree::ExperimentReport> reports;
    bool sound = true;
    for (std::size_t n : sizes) {
        pifree::InstanceSpec spec;
        spec.n = n;
        spec.pattern = pattern;
        spec.kind = parse_kind(kind_name);
        spec.epsilon = gen_epsilon;
        spec.erasure_fraction = alpha;
        spec.seed = pifree::derive_seed(seed, n);

        pifree::TesterConfig cfg;
        cfg.pattern = pattern;
        cfg.epsilon = epsilon;
        cfg.m = m;
        cfg.eta = eta;
        cfg.kappa_override = kappa_override;
        cfg.seed = pifree::derive_seed(seed, n ^ 0xbe9cULL);

        pifree::ExperimentReport report = pifree::run_experiment(spec, cfg, trials);
        if (report.soundness_violations > 0) sound = false;
        if (spec.kind == pifree::InstanceKind::Free && report.rejections > 0)
            sound = false;  // a free instance can never be rejected
        std::cout << report.to_table() << '\n';
        reports.push_back(std::move(report));
    }

    if (!out_path.empty()) {
        json all = json::array();
        for (const auto& r : reports) all.push_back(r.to_json());
        std::ofstream out(out_path);
        out << all.dump(2) << '\n';
    }
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        csv << pifree::reports_to_csv(reports);
    }
    if (!sound) {
        std::cerr << "soundness violation detected\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forbidden order-pattern testing toolkit"};
    app.require_subcommand(1);

    // test
    auto* test = app.add_subcommand("test", "run the sublinear tester on one sequence");
    std::string t_pattern = "3,2,1,4", t_input, t_generate = "planted";
    std::size_t t_n = 4096, t_m = 64;
    double t_gen_eps = 0.2, t_alpha = 0.0, t_eps = 0.2;
    std::uint64_t t_seed = 1;
    bool t_json = false;
    int t_csv_column = -1;
    std::optional<double> t_eta, t_kappa;
    std::optional<std::uint64_t> t_budget;
    test->add_option("--pattern", t_pattern, "pattern, e.g. \"3,2,1,4\"");
    test->add_option("--input", t_input, "sequence file (one value per line, * = erased)");
    test->add_option("--csv-column", t_csv_column, "read this 0-based CSV column of --input");
    test->add_option("--generate", t_generate, "free|planted|random (when no --input)");
    test->add_option("--n", t_n, "generated length");
    test->add_option("--gen-epsilon", t_gen_eps, "planted-far distance parameter");
    test->add_option("--alpha", t_alpha, "erasure fraction");
    test->add_option("--epsilon", t_eps, "tester distance parameter");
    test->add_option("--eta", t_eta, "grid exponent (m = ceil(n^eta))");
    test->add_option("--m", t_m, "grid parameter (when no --eta)");
    test->add_option("--kappa-override", t_kappa, "override the Marcus-Tardos constant");
    test->add_option("--seed", t_seed, "seed");
    test->add_option("--budget", t_budget, "hard query cap");
    test->add_flag("--json", t_json, "JSON output");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact brute-force reference (small n)");
    std::string o_pattern = "2,1", o_input, o_op = "find";
    int o_csv_column = -1;
    oracle->add_option("--pattern", o_pattern, "pattern")->required();
    oracle->add_option("--input", o_input, "sequence file")->required();
    oracle->add_option("--csv-column", o_csv_column, "read this 0-based CSV column");
    oracle->add_option("--op", o_op, "find|distance|matching|generalized");

    // grid
    auto* grid = app.add_subcommand("grid", "dump a gridding decomposition");
    std::string g_pattern = "2,1", g_input;
    std::size_t g_m = 8;
    double g_beta = 0.05;
    std::uint64_t g_seed = 1;
    int g_csv_column = -1;
    grid->add_option("--pattern", g_pattern, "pattern");
    grid->add_option("--input", g_input, "sequence file")->required();
    grid->add_option("--csv-column", g_csv_column, "read this 0-based CSV column");
    grid->add_option("--m", g_m, "grid parameter");
    grid->add_option("--beta", g_beta, "density threshold");
    grid->add_option("--seed", g_seed, "seed");

    // bench
    auto* bench = app.add_subcommand("bench", "multi-trial experiments");
    std::string b_pattern = "3,2,1,4", b_nlist = "1024,4096,16384", b_kind = "planted";
    std::string b_out, b_csv;
    std::size_t b_m = 64, b_trials = 50;
    double b_gen_eps = 0.2, b_alpha = 0.0, b_eps = 0.2;
    std::uint64_t b_seed = 1;
    std::optional<double> b_eta, b_kappa;
    bench->add_option("--pattern", b_pattern, "pattern");
    bench->add_option("--n-list", b_nlist, "comma-separated sequence lengths");
    bench->add_option("--kind", b_kind, "free|planted|random");
    bench->add_option("--gen-epsilon", b_gen_eps, "planted-far distance parameter");
    bench->add_option("--alpha", b_alpha, "erasure fraction");
    bench->add_option("--epsilon", b_eps, "tester distance parameter");
    bench->add_option("--eta", b_eta, "grid exponent");
    bench->add_option("--m", b_m, "grid parameter (when no --eta)");
    bench->add_option("--kappa-override", b_kappa, "override the Marcus-Tardos constant");
    bench->add_option("--trials", b_trials, "trials per n");
    bench->add_option("--seed", b_seed, "seed");
    bench->add_option("--out", b_out, "write JSON report");
    bench->add_option("--csv", b_csv, "write per-n CSV curves");

    CLI11_PARSE(app, argc, argv);

    try {
        if (test->parsed())
            return run_test(t_pattern, t_input, t_csv_column, t_generate, t_n, t_gen_eps,
                            t_alpha, t_eps, t_eta, t_m, t_kappa, t_seed, t_budget, t_json);
        if (oracle->parsed()) return run_oracle(o_pattern, o_input, o_csv_column, o_op);
        if (grid->parsed())
            return run_grid(g_pattern, g_input, g_csv_column, g_m, g_beta, g_seed);
        if (bench->parsed())
            return run_bench(b_pattern, b_nlist, b_kind, b_gen_eps, b_alpha, b_eps, b_eta, b_m,
                             b_kappa, b_trials, b_seed, b_out, b_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
