// Acceptance suite: every release-gating property, one pass/fail line
// each. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pifree/bruteforce.hpp"
#include "pifree/configurations.hpp"
#include "pifree/experiment.hpp"
#include "pifree/generate.hpp"
#include "pifree/gridding.hpp"
#include "pifree/layering.hpp"
#include "pifree/tester.hpp"

using namespace pifree;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << " (" << name
              << "): " << detail << "  [" << seconds << "s]" << std::endl;
    if (!pass) ++failures;
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<Pattern> all_s3() {
    return {Pattern({1, 2, 3}), Pattern({1, 3, 2}), Pattern({2, 1, 3}),
            Pattern({2, 3, 1}), Pattern({3, 1, 2}), Pattern({3, 2, 1})};
}

// dense-rank order type of an integer tuple, packed into a key
std::uint64_t order_type_key(const std::vector<int>& digits) {
    std::vector<int> sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::uint64_t key = 0;
    for (int d : digits) {
        const auto rank = std::lower_bound(sorted.begin(), sorted.end(), d) - sorted.begin();
        key = key * 8 + static_cast<std::uint64_t>(rank);
    }
    return key;
}

TesterConfig desk_config(const Pattern& pi, std::uint64_t seed) {
    TesterConfig cfg;
    cfg.pattern = pi;
    cfg.epsilon = 0.2;
    cfg.m = 64;
    cfg.kappa_override = 8.0;
    cfg.seed = seed;
    return cfg;
}

// ---------------------------------------------------------------- 1
void criterion_one_sided() {
    Timer timer;
    const std::vector<Pattern> patterns{Pattern({1, 3, 2}), Pattern({3, 2, 1, 4}),
                                        Pattern({2, 4, 1, 3})};
    std::size_t rejections = 0, violations = 0, trials_total = 0;
    std::uint64_t stream = 0;
    for (const Pattern& pi : patterns) {
        for (double alpha : {0.0, 0.1}) {
            InstanceSpec spec;
            spec.n = 4096;
            spec.pattern = pi;
            spec.kind = InstanceKind::Free;
            spec.erasure_fraction = alpha;
            spec.seed = 1000 + stream;
            TesterConfig cfg = desk_config(pi, 2000 + stream);
            ++stream;
            const auto rep = run_experiment(spec, cfg, 500);
            rejections += rep.rejections;
            violations += rep.soundness_violations;
            trials_total += rep.trials;
        }
    }
    report(1, "one-sided error", rejections == 0 && violations == 0,
           std::to_string(rejections) + " rejections over " + std::to_string(trials_total) +
               " pattern-free trials",
           timer.seconds());
}

// ---------------------------------------------------------------- 2
void criterion_rejection() {
    Timer timer;
    InstanceSpec spec;
    spec.n = 4096;
    spec.pattern = Pattern({3, 2, 1, 4});
    spec.kind = InstanceKind::PlantedFar;
    spec.epsilon = 0.2;
    spec.seed = 77;
    TesterConfig cfg = desk_config(spec.pattern, 78);
    const auto rep = run_experiment(spec, cfg, 200);
    const bool pass = rep.rejection_rate >= 0.66 && rep.soundness_violations == 0;
    report(2, "rejection on far inputs", pass,
           "rate " + std::to_string(rep.rejection_rate) + ", every witness re-verified",
           timer.seconds());
}

// ---------------------------------------------------------------- 3+4
void criterion_distances_and_matching() {
    Timer timer;
    bool equal = true, matching_ok = true;
    // exhaustive f:[6] -> [6] for every 3-pattern, memoized by order type
    std::map<std::uint64_t, std::pair<std::size_t, std::size_t>> memo;
    std::map<std::uint64_t, bool> match_memo;
    const auto patterns3 = all_s3();
    std::vector<int> digits(6, 1);
    for (std::size_t p = 0; p < patterns3.size(); ++p) {
        const Pattern& pi = patterns3[p];
        std::fill(digits.begin(), digits.end(), 1);
        while (true) {
            const std::uint64_t key =
                order_type_key(digits) * 8 + static_cast<std::uint64_t>(p);
            auto it = memo.find(key);
            if (it == memo.end()) {
                std::vector<double> values(digits.begin(), digits.end());
                const Sequence f = to_sequence(values);
                const auto del = deletion_distance(f, pi);
                const auto ham = hamming_distance_exhaustive(f, pi);
                it = memo.emplace(key, std::make_pair(del.distance, ham)).first;
                match_memo[key] = greedy_matching(f, pi).size() * 3 >= del.distance;
            }
            if (it->second.first != it->second.second) equal = false;
            if (!match_memo[key]) matching_ok = false;
            // next function
            int pos = 0;
            while (pos < 6 && ++digits[static_cast<std::size_t>(pos)] == 7)
                digits[static_cast<std::size_t>(pos++)] = 1;
            if (pos == 6) break;
        }
    }
    // 10^4 random f:[8] -> [8] for two 4-patterns; Hamming from the
    // fill-in construction (distance_report verifies the repair)
    std::mt19937_64 rng(404);
    const std::vector<Pattern> patterns4{Pattern({3, 2, 1, 4}), Pattern({1, 3, 2, 4})};
    for (int t = 0; t < 10000; ++t) {
        std::vector<double> values(8);
        for (auto& v : values) v = static_cast<double>(1 + rng() % 8);
        const Sequence f = to_sequence(values);
        const Pattern& pi = patterns4[static_cast<std::size_t>(t) % 2];
        const auto rep = distance_report(f, pi);
        if (rep.deletion_distance != rep.hamming_distance) equal = false;
        if (greedy_matching(f, pi).size() * 4 < rep.deletion_distance) matching_ok = false;
    }
    report(3, "distance equality", equal,
           "deletion == Hamming on all exhaustive n=6 and 10^4 random n=8 instances",
           timer.seconds());
    report(4, "matching bound", matching_ok, "greedy matching * k >= deletion distance",
           0.0);
}

// ---------------------------------------------------------------- 5
void criterion_gridding() {
    Timer timer;
    const std::size_t n = 4096, m = 64;
    const double beta = 0.05;
    const double big_l = log2n(n);
    const double layering_cap = std::ceil(static_cast<double>(m) * big_l * big_l * big_l * big_l);
    int nice_ok = 0, dense_ok = 0, runs = 0;
    bool queries_ok = true;
    std::vector<double> values(n);
    std::iota(values.begin(), values.end(), 1.0);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        std::mt19937_64 shuffle_rng(seed);
        std::shuffle(values.begin(), values.end(), shuffle_rng);
        SequenceOracle oracle(to_sequence(values));
        BudgetedOracle guard(oracle);
        Rng rng(seed * 31 + 7);
        const auto grid =
            gridding(guard, {IndexSet::single(0, n), ValueSet::all()}, m, beta, rng);
        ++runs;
        if (static_cast<double>(grid.partition.queries) > layering_cap) queries_ok = false;

        // full-knowledge audit of the nice partition
        bool nice = grid.side() <= 2 * m && grid.side() >= 1;
        std::vector<std::size_t> layer_mass(grid.side(), 0);
        for (double v : values) {
            const auto l = grid.partition.layer_of(v);
            if (l) ++layer_mass[*l];
        }
        for (std::size_t l = 0; l < grid.side() && nice; ++l) {
            const double density = static_cast<double>(layer_mass[l]) / static_cast<double>(n);
            if (!grid.partition.single_valued[l] && !(density < 4.0 / static_cast<double>(m)))
                nice = false;
        }
        if (nice) ++nice_ok;

        // every cell of true density >= beta carries the dense tag
        bool dense_all = true;
        for (std::size_t s = 0; s < grid.side() && dense_all; ++s) {
            const auto& stripe = grid.stripes[s];
            std::vector<std::size_t> per_layer(grid.side(), 0);
            for (std::size_t t = 0; t < stripe.count(); ++t) {
                const auto l = grid.partition.layer_of(values[stripe.nth(t)]);
                if (l) ++per_layer[*l];
            }
            for (std::size_t l = 0; l < grid.side(); ++l) {
                const double density =
                    static_cast<double>(per_layer[l]) / static_cast<double>(stripe.count());
                if (density >= beta && grid.tag({s, l}) != CellTag::Dense) dense_all = false;
            }
        }
        if (dense_all) ++dense_ok;
    }
    const bool pass = nice_ok >= 990 && dense_ok >= 990 && queries_ok;
    report(5, "layering/gridding guarantees", pass,
           "nice partition " + std::to_string(nice_ok) + "/1000, dense tags " +
               std::to_string(dense_ok) + "/1000, layering queries within cap: " +
               (queries_ok ? "all" : "violated"),
           timer.seconds());
}

// ---------------------------------------------------------------- 6
bool cells_contain_pattern(const std::vector<CellCoord>& cells, const Pattern& pi,
                           std::vector<CellCoord> chosen = {}) {
    const int pos = static_cast<int>(chosen.size());
    if (pos == pi.length()) return true;
    for (const CellCoord& c : cells) {
        bool ok = true;
        for (int s = 0; s < pos && ok; ++s) {
            if (chosen[static_cast<std::size_t>(s)].stripe >= c.stripe) ok = false;
            const bool lt = pi.value_at(s + 1) < pi.value_at(pos + 1);
            if (ok && (lt ? chosen[static_cast<std::size_t>(s)].layer >= c.layer
                          : chosen[static_cast<std::size_t>(s)].layer <= c.layer))
                ok = false;
        }
        if (!ok) continue;
        chosen.push_back(c);
        if (cells_contain_pattern(cells, pi, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

GridDecomposition stub_grid(std::size_t side, const std::vector<CellCoord>& marks) {
    GridDecomposition g;
    g.n = side * 8;
    g.m = side;
    g.beta = 0.05;
    for (std::size_t i = 0; i < side; ++i) {
        g.stripes.push_back(IndexSet::single(i * 8, (i + 1) * 8));
        g.partition.layers.push_back(
            ValueSet::single(static_cast<double>(i), static_cast<double>(i + 1)));
        g.partition.est_density.push_back(1.0 / static_cast<double>(side));
        g.partition.single_valued.push_back(0);
    }
    g.region = BoxRegion{IndexSet::single(0, g.n), ValueSet::all()};
    g.tags.assign(side * side, CellTag::Unmarked);
    g.est_density.assign(side * side, 0.0);
    g.cell_point.assign(side * side, std::nullopt);
    for (const CellCoord& c : marks) {
        g.set_tag(c, CellTag::Marked);
        g.cell_point[c.stripe * side + c.layer] =
            Sample{c.stripe * 8 + (c.layer % 8), Entry{static_cast<double>(c.layer) + 0.5}};
    }
    return g;
}

void criterion_extraction() {
    Timer timer;
    std::vector<Pattern> patterns = all_s3();
    patterns.push_back(Pattern({3, 2, 1, 4}));
    const std::size_t side = 32;
    std::mt19937_64 rng(606);
    int found_all = 0, runs = 0, cross_checked = 0;
    for (int t = 0; t < 500; ++t) {
        const Pattern& pi = patterns[static_cast<std::size_t>(t) % patterns.size()];
        // the published kappa demands more marks than the grid has cells,
        // so the requirement saturates at a fully marked grid
        const double required = published_kappa(pi.length()) * static_cast<double>(side);
        const std::size_t marks =
            std::min<std::size_t>(static_cast<std::size_t>(
                                      std::min(required, 1.0e9)),
                                  side * side);
        std::vector<CellCoord> cells;
        cells.reserve(marks);
        for (std::size_t s = 0; s < side; ++s)
            for (std::size_t l = 0; l < side; ++l) cells.push_back({s, l});
        std::shuffle(cells.begin(), cells.end(), rng);
        cells.resize(marks);
        const auto grid = stub_grid(side, cells);
        const auto w = extract_pi_witness(grid, pi);
        ++runs;
        if (w.has_value()) ++found_all;
    }
    // independent validation on sparse random grids where presence is
    // genuinely uncertain: extraction agrees with the brute matcher
    bool agree = true;
    for (int t = 0; t < 500; ++t) {
        const Pattern& pi = patterns[static_cast<std::size_t>(t) % patterns.size()];
        std::vector<CellCoord> cells;
        const std::size_t count = 3 + rng() % 12;
        for (std::size_t i = 0; i < count; ++i) cells.push_back({rng() % 8, rng() % 8});
        const auto grid = stub_grid(8, cells);
        const bool via_extract = extract_pi_witness(grid, pi).has_value();
        const bool via_brute =
            cells_contain_pattern(grid.cells_with_tag(CellTag::Marked), pi);
        if (via_extract != via_brute) agree = false;
        ++cross_checked;
    }
    const bool pass = found_all == runs && agree;
    report(6, "witness extraction", pass,
           std::to_string(found_all) + "/" + std::to_string(runs) +
               " saturated grids, brute-force matcher agrees on " +
               std::to_string(cross_checked) + " sparse grids",
           timer.seconds());
}

// ---------------------------------------------------------------- 7
void criterion_sublinear() {
    Timer timer;
    const Pattern pi({3, 2, 1, 4});
    std::vector<double> ratios;
    for (std::size_t n : {std::size_t{1024}, std::size_t{4096}, std::size_t{16384}}) {
        InstanceSpec spec;
        spec.n = n;
        spec.pattern = pi;
        spec.kind = InstanceKind::PlantedFar;
        spec.epsilon = 0.25;
        spec.seed = 900 + n;
        TesterConfig cfg;
        cfg.pattern = pi;
        cfg.epsilon = 0.25;
        cfg.eta = 1.0 / 3.0;
        cfg.kappa_override = 8.0;
        cfg.seed = 901 + n;
        const auto rep = run_experiment(spec, cfg, 50);
        ratios.push_back(rep.mean_queries / static_cast<double>(n));
    }
    const bool pass = ratios[0] > ratios[1] && ratios[1] > ratios[2];
    report(7, "sublinear query growth", pass,
           "queries/n = " + std::to_string(ratios[0]) + " > " + std::to_string(ratios[1]) +
               " > " + std::to_string(ratios[2]),
           timer.seconds());
}

// ---------------------------------------------------------------- 8
void criterion_generalized() {
    Timer timer;
    bool equal = true;
    std::vector<Pattern> patterns = all_s3();
    patterns.push_back(Pattern({3, 2, 1, 4}));
    std::map<std::uint64_t, bool> memo;
    std::vector<int> digits(6, 1);
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        const Pattern& pi = patterns[p];
        std::fill(digits.begin(), digits.end(), 1);
        while (true) {
            const std::uint64_t key =
                order_type_key(digits) * 16 + static_cast<std::uint64_t>(p);
            auto it = memo.find(key);
            if (it == memo.end()) {
                std::vector<double> values(digits.begin(), digits.end());
                const Sequence f = to_sequence(values);
                const auto del = deletion_distance(f, pi, kDeletionCap, Semantics::Weak);
                const auto ham =
                    hamming_distance_exhaustive(f, pi, kRepairCap, Semantics::Weak);
                it = memo.emplace(key, del.distance == ham).first;
            }
            if (!it->second) equal = false;
            int pos = 0;
            while (pos < 6 && ++digits[static_cast<std::size_t>(pos)] == 7)
                digits[static_cast<std::size_t>(pos++)] = 1;
            if (pos == 6) break;
        }
    }
    report(8, "generalized-freeness distance equality", equal,
           "weak-semantics deletion == Hamming over all f:[6]->[6], S3 plus (3,2,1,4)",
           timer.seconds());
}

// ---------------------------------------------------------------- 9
void criterion_oracle_consistency() {
    Timer timer;
    std::mt19937_64 rng(909);
    std::vector<Pattern> patterns = all_s3();
    patterns.push_back(Pattern({2, 1}));
    patterns.push_back(Pattern({1, 2}));
    patterns.push_back(Pattern({3, 2, 1, 4}));
    patterns.push_back(Pattern({2, 4, 1, 3}));
    bool consistent = true, fill_free = true;
    for (int t = 0; t < 100000; ++t) {
        const std::size_t n = 4 + rng() % 9;  // up to 12
        std::vector<double> values(n);
        for (auto& v : values) v = static_cast<double>(1 + rng() % n);
        const Sequence f = to_sequence(values);
        const Pattern& pi = patterns[rng() % patterns.size()];
        const auto fs = max_pattern_free_subsequence(f, pi);
        const bool absent = !find_appearance_bruteforce(f, pi).has_value();
        if (absent != (fs.size == n)) consistent = false;
        if (fs.size < n) {
            IndexTuple deletion;
            std::size_t next = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (next < fs.kept.size() && fs.kept[next] == i)
                    ++next;
                else
                    deletion.push_back(i);
            }
            const Sequence repaired = fill_deletion_set(f, deletion, pi);
            if (find_appearance_bruteforce(repaired, pi).has_value()) fill_free = false;
        }
    }
    report(9, "oracle self-consistency", consistent && fill_free,
           "10^5 fuzzed instances, freeness <=> full-size free subsequence, repairs free",
           timer.seconds());
}

}  // namespace

int main() {
    criterion_one_sided();
    criterion_rejection();
    criterion_distances_and_matching();
    criterion_gridding();
    criterion_extraction();
    criterion_sublinear();
    criterion_generalized();
    criterion_oracle_consistency();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: ")
              << (failures == 0 ? "" : std::to_string(failures)) << std::endl;
    return failures;
}
