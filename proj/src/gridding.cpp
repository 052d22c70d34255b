#include "pifree/gridding.hpp"

#include <cmath>
#include <stdexcept>

namespace pifree {

GridDecomposition gridding(BudgetedOracle& oracle, const BoxRegion& region, std::size_t m,
                           double beta, Rng& rng) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("gridding: beta not in (0,1)");
    GridDecomposition grid;
    grid.region = region;
    grid.n = oracle.length();
    grid.m = m;
    grid.beta = beta;

    grid.partition = layering(oracle, region, m, rng);
    grid.samples = grid.partition.samples;
    const std::size_t side = grid.partition.layer_count();
    if (side == 0) return grid;  // negligible region

    // m' equal contiguous stripes (first remainder stripes one longer)
    const std::size_t total = region.indices.count();
    const std::size_t base = total / side;
    const std::size_t rem = total % side;
    std::size_t at = 0;
    for (std::size_t i = 0; i < side; ++i) {
        const std::size_t len = base + (i < rem ? 1 : 0);
        grid.stripes.push_back(region.indices.slice(at, at + len));
        at += len;
    }

    grid.tags.assign(side * side, CellTag::Unmarked);
    grid.est_density.assign(side * side, 0.0);
    grid.cell_point.assign(side * side, std::nullopt);

    const double big_l = log2n(grid.n);
    const double requested = std::ceil(big_l * big_l * big_l * big_l / (50.0 * beta * beta));
    grid.stripes_exhaustive = true;

    const std::uint64_t stripe_seed = rng();
    for (std::size_t i = 0; i < side; ++i) {
        const IndexSet& stripe = grid.stripes[i];
        const std::size_t len = stripe.count();
        const bool exhaustive = requested >= static_cast<double>(len);
        if (!exhaustive) grid.stripes_exhaustive = false;
        const std::size_t draws = exhaustive ? len : static_cast<std::size_t>(requested);
        Rng stripe_rng(derive_seed(stripe_seed, i));
        std::vector<std::size_t> hits(side, 0);
        for (std::size_t t = 0; t < draws; ++t) {
            const std::size_t idx = exhaustive ? stripe.nth(t)
                                               : stripe.nth(uniform_below(stripe_rng, len));
            const Entry e = oracle.value_at(idx);
            grid.samples.push_back({idx, e});
            if (!e) continue;
            const auto layer = grid.partition.layer_of(*e);
            if (!layer) continue;  // outside every retained layer
            const std::size_t cell = i * side + *layer;
            ++hits[*layer];
            if (grid.tags[cell] == CellTag::Unmarked) grid.tags[cell] = CellTag::Marked;
            if (!grid.cell_point[cell]) grid.cell_point[cell] = Sample{idx, e};
        }
        for (std::size_t l = 0; l < side; ++l) {
            const std::size_t cell = i * side + l;
            grid.est_density[cell] =
                draws == 0 ? 0.0 : static_cast<double>(hits[l]) / static_cast<double>(draws);
            if (hits[l] > 0 && grid.est_density[cell] >= 0.75 * beta)
                grid.tags[cell] = CellTag::Dense;
        }
    }
    return grid;
}

GridDecomposition sparsify(const GridDecomposition& grid, double d) {
    GridDecomposition out = grid;
    const std::size_t side = grid.side();
    if (side == 0) return out;

    std::vector<std::size_t> per_stripe(side, 0), per_layer(side, 0);
    for (std::size_t s = 0; s < side; ++s) {
        for (std::size_t l = 0; l < side; ++l) {
            if (grid.tags[s * side + l] >= CellTag::Marked) {
                ++per_stripe[s];
                ++per_layer[l];
            }
        }
    }
    for (std::size_t s = 0; s < side; ++s) {
        for (std::size_t l = 0; l < side; ++l) {
            const std::size_t cell = s * side + l;
            if (grid.tags[cell] == CellTag::Unmarked) continue;
            const bool stripe_ok = static_cast<double>(per_stripe[s]) <= d;
            const bool layer_ok = grid.partition.single_valued[l] != 0 ||
                                  static_cast<double>(per_layer[l]) <= d;
            const bool keep = grid.tags[cell] == CellTag::Dense && stripe_ok && layer_ok;
            out.tags[cell] = keep ? CellTag::Dense : CellTag::Unmarked;
        }
    }
    return out;
}

}  // namespace pifree
