#ifndef PIFREE_LAYERING_HPP
#define PIFREE_LAYERING_HPP

#include <cstddef>

#include "pifree/grid.hpp"
#include "pifree/oracle.hpp"
#include "pifree/region.hpp"
#include "pifree/rng.hpp"

namespace pifree {

/// log2(n) clamped below at 1 so polylog sample counts never vanish.
double log2n(std::size_t n);

/// Procedure Layering on bx(S, I): samples up to m*log^4(n) indices of S,
/// aiming for m*log^2(n) in-region points; when even querying the whole
/// region cannot reach that target, it queries every index once instead.
/// Sorted sampled values are chunked greedily (chunk weight < 2u/m, or a
/// lone value of weight > u/m, which makes a single-valued layer); chunk
/// boundaries become layer intervals (b_{j-1}, b_j] intersected with I.
/// Layers straddling disjoint pieces of I are dropped.
///
/// Zero in-region samples yield an empty partition: the caller treats
/// the region as negligible.
NicePartition layering(BudgetedOracle& oracle, const BoxRegion& region, std::size_t m,
                       Rng& rng);

/// Weighted value with its sampled multiplicity.
struct WeightedValue {
    double value = 0.0;
    std::size_t weight = 0;
};

/// Partition construction from an already-collected sample; exposed so
/// tests can inject a full sample and trace the chunking by hand.
NicePartition build_nice_partition(std::vector<WeightedValue> weighted_values, std::size_t u,
                                   std::size_t m, const ValueSet& region_values);

}  // namespace pifree

#endif
