#ifndef PIFREE_GRIDDING_HPP
#define PIFREE_GRIDDING_HPP

#include <cstddef>

#include "pifree/grid.hpp"
#include "pifree/layering.hpp"
#include "pifree/oracle.hpp"
#include "pifree/region.hpp"
#include "pifree/rng.hpp"

namespace pifree {

/// Procedure Gridding on bx(S, I): layering for the value intervals,
/// then S split into m' equal contiguous stripes, then per-stripe
/// sampling of ceil(log^4(n) / (50 beta^2)) indices (capped at the
/// stripe length, in which case the whole stripe is queried). A cell is
/// marked when a sample lands in it and dense when it receives at least
/// 3*beta/4 of its stripe's draws. All sample points are retained.
GridDecomposition gridding(BudgetedOracle& oracle, const BoxRegion& region, std::size_t m,
                           double beta, Rng& rng);

/// AlgTest's sparsification: unmark every cell in a stripe with more
/// than d marked cells or in a multi-valued layer with more than d
/// marked cells (single-valued layers are exempt), then unmark all
/// non-dense cells. Makes no queries.
GridDecomposition sparsify(const GridDecomposition& grid, double d);

}  // namespace pifree

#endif
