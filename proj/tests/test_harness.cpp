#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "pifree/bruteforce.hpp"
#include "pifree/experiment.hpp"
#include "pifree/generate.hpp"
#include "pifree/io.hpp"

using namespace pifree;

TEST_CASE("generate_free produces verified pattern-free sequences") {
    // non-identity pattern: increasing backbone
    const Sequence inc = generate_free(5, Pattern({2, 1}), 1);
    for (std::size_t i = 1; i < inc.size(); ++i) CHECK(*inc[i - 1] < *inc[i]);
    // identity pattern: decreasing backbone
    const Sequence dec = generate_free(5, Pattern({1, 2}), 1);
    for (std::size_t i = 1; i < dec.size(); ++i) CHECK(*dec[i - 1] > *dec[i]);
    // jittered mid-size output re-verified by the oracle
    const Sequence f = generate_free(12, Pattern({1, 3, 2}), 7);
    CHECK_FALSE(find_appearance_bruteforce(f, Pattern({1, 3, 2})).has_value());
}

TEST_CASE("generate_planted_far plants a disjoint matching") {
    const Pattern inv({2, 1});
    const Sequence f = generate_planted_far(16, inv, 0.5, 3);
    // 0.5 * 16 / 2 = 4 windows; each forces one deletion
    const auto del = deletion_distance(f, inv);
    CHECK(del.distance >= 4);
    const auto matching = greedy_matching(f, inv);
    CHECK(matching.size() >= 4);

    const Pattern pi4({3, 2, 1, 4});
    const Sequence g = generate_planted_far(8, pi4, 0.5, 5);
    CHECK(find_appearance_bruteforce(g, pi4).has_value());

    CHECK_THROWS_AS(generate_planted_far(16, inv, 0.0, 1), std::invalid_argument);
}

TEST_CASE("planted matching meets the eps*n/k bound at brute-force scale") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Pattern pi({1, 3, 2});
        const std::size_t n = 24;
        const double eps = 0.25;
        const Sequence f = generate_planted_far(n, pi, eps, seed);
        const std::size_t want = static_cast<std::size_t>(
            std::ceil(eps * static_cast<double>(n) / pi.length()));
        CHECK(greedy_matching(f, pi).size() >= want);
    }
}

TEST_CASE("identity pattern planting keeps the decreasing backbone far") {
    const Pattern id({1, 2, 3});
    const Sequence f = generate_planted_far(18, id, 0.5, 11);
    const auto matching = greedy_matching(f, id);
    CHECK(matching.size() >= 3);
}

TEST_CASE("erasure injection hits the requested fraction") {
    Sequence f = generate_free(200, Pattern({2, 1}), 2);
    inject_erasures(f, 0.25, 9);
    std::size_t erased = 0;
    for (const auto& e : f)
        if (!e) ++erased;
    CHECK(erased == 50);
    CHECK_THROWS_AS(inject_erasures(f, 1.0, 1), std::invalid_argument);
}

TEST_CASE("run_experiment: free spec never rejects") {
    InstanceSpec spec;
    spec.n = 512;
    spec.pattern = Pattern({1, 3, 2});
    spec.kind = InstanceKind::Free;
    spec.seed = 4;
    TesterConfig cfg;
    cfg.pattern = spec.pattern;
    cfg.epsilon = 0.3;
    cfg.m = 16;
    cfg.kappa_override = 8.0;
    cfg.seed = 10;
    const auto report = run_experiment(spec, cfg, 25);
    CHECK(report.rejections == 0);
    CHECK(report.rejection_rate == 0.0);
    CHECK(report.soundness_violations == 0);
}

TEST_CASE("run_experiment: planted spec rejects with verified witnesses") {
    InstanceSpec spec;
    spec.n = 1024;
    spec.pattern = Pattern({3, 2, 1, 4});
    spec.kind = InstanceKind::PlantedFar;
    spec.epsilon = 0.25;
    spec.seed = 21;
    TesterConfig cfg;
    cfg.pattern = spec.pattern;
    cfg.epsilon = 0.25;
    cfg.m = 32;
    cfg.kappa_override = 8.0;
    cfg.seed = 22;
    const auto report = run_experiment(spec, cfg, 15);
    CHECK(report.soundness_violations == 0);
    CHECK(report.rejection_rate >= 2.0 / 3.0);
    CHECK(report.max_queries >= report.mean_queries);
}

TEST_CASE("reports are byte-identical under identical seeds") {
    InstanceSpec spec;
    spec.n = 256;
    spec.pattern = Pattern({2, 1});
    spec.kind = InstanceKind::PlantedFar;
    spec.epsilon = 0.3;
    spec.erasure_fraction = 0.1;
    spec.seed = 33;
    TesterConfig cfg;
    cfg.pattern = spec.pattern;
    cfg.epsilon = 0.3;
    cfg.m = 16;
    cfg.kappa_override = 8.0;
    cfg.seed = 34;
    const auto a = run_experiment(spec, cfg, 10);
    const auto b = run_experiment(spec, cfg, 10);
    CHECK(a.to_json().dump() == b.to_json().dump());
    // and a different seed changes something
    cfg.seed = 35;
    const auto c = run_experiment(spec, cfg, 10);
    CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("erasures never cause false rejection on free instances") {
    for (double alpha : {0.0, 0.1, 0.25}) {
        InstanceSpec spec;
        spec.n = 512;
        spec.pattern = Pattern({3, 2, 1, 4});
        spec.kind = InstanceKind::Free;
        spec.erasure_fraction = alpha;
        spec.seed = 40;
        TesterConfig cfg;
        cfg.pattern = spec.pattern;
        cfg.epsilon = 0.2;
        cfg.m = 16;
        cfg.kappa_override = 8.0;
        cfg.seed = 41;
        const auto report = run_experiment(spec, cfg, 15);
        CHECK(report.rejections == 0);
    }
}

TEST_CASE("sequence files: one value per line with erasure tokens") {
    std::istringstream in("1\n2.5\n*\n-3\n\n7e2\n");
    const Sequence f = read_sequence(in);
    REQUIRE(f.size() == 5);
    CHECK(*f[0] == 1.0);
    CHECK(*f[1] == 2.5);
    CHECK_FALSE(f[2].has_value());
    CHECK(*f[3] == -3.0);
    CHECK(*f[4] == 700.0);
}

TEST_CASE("sequence files: CSV column selection and bad input") {
    std::istringstream in("a,1,x\nb,2,y\nc,*,z\n");
    const Sequence f = read_sequence(in, 1);
    REQUIRE(f.size() == 3);
    CHECK(*f[1] == 2.0);
    CHECK_FALSE(f[2].has_value());

    std::istringstream bad("1\nfoo\n");
    CHECK_THROWS_AS(read_sequence(bad), std::invalid_argument);
    std::istringstream nan_line("nan\n");
    CHECK_THROWS_AS(read_sequence(nan_line), std::invalid_argument);
}

TEST_CASE("sequence round-trip") {
    Sequence f = generate_free(20, Pattern({2, 1}), 8);
    f[3] = std::nullopt;
    std::ostringstream out;
    write_sequence(out, f);
    std::istringstream in(out.str());
    CHECK(read_sequence(in) == f);
}
