#ifndef PIFREE_TESTER_HPP
#define PIFREE_TESTER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pifree/grid.hpp"
#include "pifree/oracle.hpp"
#include "pifree/outcome.hpp"
#include "pifree/pattern.hpp"
#include "pifree/region.hpp"

namespace pifree {

/// The published Marcus-Tardos constant 2 k^4 C(k^2, k).
double published_kappa(int k);

struct TesterConfig {
    Pattern pattern = Pattern({1});       // pi, fixed for the whole recursion
    double epsilon = 0.2;                 // distance parameter in (0,1)
    std::size_t m = 64;                   // grid parameter ...
    std::optional<double> eta;            // ... or m = ceil(n^eta) when set
    std::optional<double> kappa_override; // desk-scale kappa, e.g. 8
    std::optional<std::uint64_t> query_budget;
    std::optional<std::uint64_t> amplification;  // repetitions per recursive call,
                                                 // default ceil(log^2 n)
    std::uint64_t seed = 0;
    double eps_floor = 9.5367431640625e-07;  // 2^-20; below it we only warn
    int loop_exponent_extra = 0;  // one-component loop count log^3(n)/eps^(r+extra)

    double kappa() const;
    std::size_t grid_m(std::size_t n) const;
};

/// A restricted testing instance: find a phi-legged nu-appearance inside
/// the component D = {boxes}, or any unrestricted pi-appearance.
struct RestrictedInstance {
    Pattern nu = Pattern({1});
    std::vector<BoxRegion> boxes;      // one connected component, t <= r boxes
    std::vector<int> phi;              // leg (0-based) -> box index, surjective
    double epsilon = 0.2;
    int depth = 0;
    std::vector<Sample> known_points;  // already-queried indices relevant to the boxes
};

/// Statistics beyond the outcome itself (for reports and assertions).
struct TesterStats {
    int depth_max = 0;
    std::uint64_t eps_floor_hits = 0;
    std::uint64_t recursive_calls = 0;
    std::uint64_t depth_cap_hits = 0;
};

/// The recursive generalized tester. One-sided: a "found" outcome always
/// carries a concrete witness checked against the sampled values.
TestOutcome algtest(SequenceOracle& oracle, const RestrictedInstance& instance,
                    const TesterConfig& cfg, TesterStats* stats = nullptr);

/// Whole-sequence pi-freeness test: the trivial instance with one box
/// covering everything, nu = pi. FoundRestrictedNu folds into FoundPi.
TestOutcome test_pi_freeness(SequenceOracle& oracle, const TesterConfig& cfg,
                             TesterStats* stats = nullptr);

/// Finds k marked cells arranged like the pattern and returns one stored
/// sample point per cell. nullopt when no arrangement exists (possible
/// only when the marked count guarantee is run with an undersized kappa).
std::optional<Witness> extract_pi_witness(const GridDecomposition& grid,
                                          const Pattern& pattern);

}  // namespace pifree

#endif
