#include "pifree/layering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace pifree {

double log2n(std::size_t n) { return std::max(1.0, std::log2(static_cast<double>(n))); }

namespace {

std::size_t ceil_to_size(double x) {
    if (x >= 1e18) return static_cast<std::size_t>(1e18);
    return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

NicePartition build_nice_partition(std::vector<WeightedValue> weighted_values, std::size_t u,
                                   std::size_t m, const ValueSet& region_values) {
    NicePartition out;
    out.u = u;
    if (weighted_values.empty()) return out;
    std::sort(weighted_values.begin(), weighted_values.end(),
              [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });

    // greedy chunking: a lone weight w with w*m > u forms a single-valued
    // chunk; otherwise extend while (sum + next)*m < 2u
    struct Chunk {
        std::size_t first = 0, last = 0;  // positions into weighted_values
        std::size_t weight = 0;
        bool single = false;
    };
    std::vector<Chunk> chunks;
    std::size_t i = 0;
    const std::size_t q = weighted_values.size();
    while (i < q) {
        if (weighted_values[i].weight * m > u) {
            chunks.push_back({i, i, weighted_values[i].weight, true});
            ++i;
            continue;
        }
        Chunk c{i, i, weighted_values[i].weight, false};
        ++i;
        while (i < q && (c.weight + weighted_values[i].weight) * m < 2 * u) {
            c.weight += weighted_values[i].weight;
            c.last = i;
            ++i;
        }
        chunks.push_back(c);
    }

    double prev_boundary = region_values.intervals().empty()
                               ? -std::numeric_limits<double>::infinity()
                               : region_values.intervals().front().lo;
    for (const Chunk& c : chunks) {
        const double boundary = weighted_values[c.last].value;
        const ValueSet layer = region_values.intersect({prev_boundary, boundary});
        prev_boundary = boundary;
        // a layer straddling disjoint pieces of I is dropped
        if (layer.intervals().size() != 1) continue;
        out.layers.push_back(layer);
        out.est_density.push_back(static_cast<double>(c.weight) / static_cast<double>(u));
        out.single_valued.push_back(c.single ? 1 : 0);
    }
    return out;
}

NicePartition layering(BudgetedOracle& oracle, const BoxRegion& region, std::size_t m,
                       Rng& rng) {
    if (m == 0) throw std::invalid_argument("layering: m must be positive");
    const double big_l = log2n(oracle.length());
    const std::size_t budget = ceil_to_size(static_cast<double>(m) * big_l * big_l * big_l * big_l);
    const std::size_t target_u = ceil_to_size(static_cast<double>(m) * big_l * big_l);
    const IndexSet& indices = region.indices;

    std::vector<Sample> samples;
    std::map<double, std::size_t> multiset;  // in-region value -> multiplicity
    std::size_t u = 0;
    std::size_t queries = 0;
    const bool exhaustive = target_u >= indices.count();

    if (indices.empty()) return NicePartition{};

    const auto absorb = [&](std::size_t idx) {
        const Entry e = oracle.value_at(idx);
        ++queries;
        samples.push_back({idx, e});
        if (e && region.values.contains(*e)) {
            ++multiset[*e];
            ++u;
        }
    };

    if (exhaustive) {
        for (std::size_t t = 0; t < indices.count(); ++t) absorb(indices.nth(t));
    } else {
        while (queries < budget && u < target_u) absorb(indices.nth(uniform_below(rng, indices.count())));
    }

    std::vector<WeightedValue> weighted;
    weighted.reserve(multiset.size());
    for (const auto& [v, w] : multiset) weighted.push_back({v, w});

    NicePartition out = build_nice_partition(std::move(weighted), u, m, region.values);
    out.queries = queries;
    out.exhaustive = exhaustive;
    out.samples = std::move(samples);
    return out;
}

}  // namespace pifree
