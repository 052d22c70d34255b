#include "pifree/grid.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace pifree {

std::optional<std::size_t> NicePartition::layer_of(double v) const {
    for (std::size_t j = 0; j < layers.size(); ++j) {
        if (layers[j].contains(v)) return j;
    }
    return std::nullopt;
}

std::optional<std::size_t> GridDecomposition::stripe_of(std::size_t index) const {
    for (std::size_t i = 0; i < stripes.size(); ++i) {
        if (stripes[i].contains(index)) return i;
    }
    return std::nullopt;
}

std::optional<CellCoord> GridDecomposition::cell_of(std::size_t index, double value) const {
    const auto s = stripe_of(index);
    if (!s) return std::nullopt;
    const auto l = partition.layer_of(value);
    if (!l) return std::nullopt;
    return CellCoord{*s, *l};
}

BoxRegion GridDecomposition::cell_region(CellCoord c) const {
    return BoxRegion{stripes[c.stripe], partition.layers[c.layer]};
}

std::vector<CellCoord> GridDecomposition::cells_with_tag(CellTag at_least) const {
    std::vector<CellCoord> out;
    for (std::size_t s = 0; s < side(); ++s) {
        for (std::size_t l = 0; l < side(); ++l) {
            if (tags[s * side() + l] >= at_least) out.push_back({s, l});
        }
    }
    return out;
}

std::vector<std::vector<CellCoord>> detect_components(const std::vector<CellCoord>& cells) {
    std::vector<CellCoord> sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    // union-find over cells, merging along shared stripes and layers
    std::vector<std::size_t> parent(sorted.size());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    std::map<std::size_t, std::size_t> by_stripe, by_layer;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (auto [it, fresh] = by_stripe.try_emplace(sorted[i].stripe, i); !fresh)
            unite(i, it->second);
        if (auto [it, fresh] = by_layer.try_emplace(sorted[i].layer, i); !fresh)
            unite(i, it->second);
    }

    std::map<std::size_t, std::vector<CellCoord>> groups;
    for (std::size_t i = 0; i < sorted.size(); ++i) groups[find(i)].push_back(sorted[i]);
    std::vector<std::vector<CellCoord>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace pifree
