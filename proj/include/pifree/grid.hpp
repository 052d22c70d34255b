#ifndef PIFREE_GRID_HPP
#define PIFREE_GRID_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "pifree/oracle.hpp"
#include "pifree/region.hpp"

namespace pifree {

/// (stripe, layer) coordinates of a cell inside a grid decomposition.
struct CellCoord {
    std::size_t stripe = 0;
    std::size_t layer = 0;
    friend bool operator==(const CellCoord&, const CellCoord&) = default;
    friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

enum class CellTag : unsigned char { Unmarked, Marked, Dense };

/// One queried point; value empty when the query hit an erasure.
struct Sample {
    std::size_t index = 0;
    Entry value;
};

/// Output of Layering: value intervals that slice a region into layers.
struct NicePartition {
    std::vector<ValueSet> layers;          // increasing, pairwise disjoint
    std::vector<double> est_density;       // per layer, sampled weight / u
    std::vector<char> single_valued;       // per layer
    std::size_t u = 0;                     // achieved in-region sample size
    std::size_t queries = 0;               // index draws spent
    bool exhaustive = false;               // every index of the region was queried
    std::vector<Sample> samples;           // everything queried, in draw order

    std::size_t layer_count() const { return layers.size(); }
    /// Layer containing value v, or nullopt (dropped layers leave gaps).
    std::optional<std::size_t> layer_of(double v) const;
};

/// An m' x m' grid of boxes over a region, with marked/dense tags and
/// the sample points that produced them.
struct GridDecomposition {
    BoxRegion region;                      // the decomposed box bx(S, I)
    std::size_t n = 0;                     // oracle length (drives the polylog terms)
    std::size_t m = 0;                     // requested grid parameter
    double beta = 0.0;                     // density threshold
    std::vector<IndexSet> stripes;         // m' contiguous slices of S
    NicePartition partition;               // the m' layers
    std::vector<CellTag> tags;             // m' * m', stripe-major
    std::vector<double> est_density;       // per cell, fraction of its stripe's draws
    std::vector<Sample> samples;           // all queried points (layering + stripes)
    std::vector<std::optional<Sample>> cell_point;  // one stored point per marked cell
    bool stripes_exhaustive = false;       // every stripe was fully queried

    std::size_t side() const { return stripes.size(); }
    bool empty() const { return stripes.empty(); }

    CellTag tag(CellCoord c) const { return tags[c.stripe * side() + c.layer]; }
    void set_tag(CellCoord c, CellTag t) { tags[c.stripe * side() + c.layer] = t; }
    double density(CellCoord c) const { return est_density[c.stripe * side() + c.layer]; }

    std::optional<std::size_t> stripe_of(std::size_t index) const;
    std::optional<CellCoord> cell_of(std::size_t index, double value) const;

    /// The box region of one cell.
    BoxRegion cell_region(CellCoord c) const;

    std::vector<CellCoord> cells_with_tag(CellTag at_least) const;
    std::size_t marked_count() const { return cells_with_tag(CellTag::Marked).size(); }
};

/// Partition of cells into maximal components of the connected relation
/// (sharing a layer or a stripe, transitively). Output order does not
/// depend on the input order: components are sorted by smallest cell.
std::vector<std::vector<CellCoord>> detect_components(const std::vector<CellCoord>& cells);

}  // namespace pifree

#endif
