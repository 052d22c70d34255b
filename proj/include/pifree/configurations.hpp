#ifndef PIFREE_CONFIGURATIONS_HPP
#define PIFREE_CONFIGURATIONS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pifree/grid.hpp"
#include "pifree/pattern.hpp"

namespace pifree {

/// A concrete placement of the r legs of a pattern onto grid cells
/// (legs may share a cell). Feasible means some appearance could have
/// its legs exactly there: stripes non-decreasing with leg position,
/// layers ordered like the pattern values, and no two legs inside one
/// single-valued layer.
struct LegPlacement {
    std::vector<CellCoord> leg_cell;  // one entry per leg, in position order
};

/// Enumerates feasible placements in deterministic order. `allowed[leg]`
/// lists the candidate cells per leg (already filtered for leg-mapping
/// consistency). Stops early when the visitor returns true. Throws
/// std::logic_error when more than `cap` placements are visited.
/// Returns true when a visitor accepted a placement.
bool for_each_feasible_placement(const Pattern& nu,
                                 const std::vector<std::vector<CellCoord>>& allowed,
                                 const std::vector<char>& layer_single_valued, double cap,
                                 const std::function<bool(const LegPlacement&)>& visit);

/// One connected component of a placement, with the induced sub-pattern.
struct ComponentSplit {
    std::vector<CellCoord> cells;        // distinct cells, sorted
    std::vector<int> legs;               // 0-based leg positions of nu, increasing
    Pattern sub_pattern = Pattern({1});  // nu restricted to those legs
    std::vector<int> leg_to_cell;        // per sub-pattern leg, an index into cells
};

std::vector<ComponentSplit> split_components(const Pattern& nu, const LegPlacement& placement);

/// Number of distinct abstract configurations (relative cell arrangement
/// plus leg split) that can host an appearance of nu.
std::size_t count_abstract_configurations(const Pattern& nu);

/// k marked cells arranged like the pattern: strictly increasing stripes,
/// layers ordered as the pattern values. Returns cells in stripe order.
std::optional<std::vector<CellCoord>> find_cell_arrangement(const std::vector<CellCoord>& cells,
                                                            const Pattern& pattern);

}  // namespace pifree

#endif
