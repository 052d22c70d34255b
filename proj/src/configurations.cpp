#include "pifree/configurations.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace pifree {

namespace {

// Leg pos can sit in cell c given cells already fixed for legs 0..pos-1.
bool placement_compatible(const Pattern& nu, const std::vector<CellCoord>& chosen,
                          const std::vector<char>& single_valued, int pos, CellCoord c) {
    for (int s = 0; s < pos; ++s) {
        const CellCoord prev = chosen[static_cast<std::size_t>(s)];
        if (prev.stripe > c.stripe) return false;  // index order would be impossible
        const bool pat_less = nu.value_at(s + 1) < nu.value_at(pos + 1);
        if (pat_less ? prev.layer > c.layer : prev.layer < c.layer) return false;
        if (prev.layer == c.layer && single_valued[prev.layer])
            return false;  // two legs cannot share a single-valued layer
    }
    return true;
}

struct PlacementSearch {
    const Pattern& nu;
    const std::vector<std::vector<CellCoord>>& allowed;
    const std::vector<char>& single_valued;
    const std::function<bool(const LegPlacement&)>& visit;
    double cap;
    double visited = 0;
    LegPlacement current;

    bool dfs(int pos) {
        if (pos == nu.length()) {
            if (++visited > cap)
                throw std::logic_error("placement enumeration exceeded the copy-count bound");
            return visit(current);
        }
        for (const CellCoord& c : allowed[static_cast<std::size_t>(pos)]) {
            if (!placement_compatible(nu, current.leg_cell, single_valued, pos, c)) continue;
            current.leg_cell.push_back(c);
            if (dfs(pos + 1)) return true;
            current.leg_cell.pop_back();
        }
        return false;
    }
};

}  // namespace

bool for_each_feasible_placement(const Pattern& nu,
                                 const std::vector<std::vector<CellCoord>>& allowed,
                                 const std::vector<char>& layer_single_valued, double cap,
                                 const std::function<bool(const LegPlacement&)>& visit) {
    if (allowed.size() != static_cast<std::size_t>(nu.length()))
        throw std::invalid_argument("for_each_feasible_placement: one cell list per leg");
    PlacementSearch search{nu, allowed, layer_single_valued, visit, cap, 0.0, {}};
    search.current.leg_cell.reserve(static_cast<std::size_t>(nu.length()));
    return search.dfs(0);
}

std::vector<ComponentSplit> split_components(const Pattern& nu, const LegPlacement& placement) {
    std::vector<CellCoord> distinct = placement.leg_cell;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const auto components = detect_components(distinct);

    std::vector<ComponentSplit> out;
    out.reserve(components.size());
    for (const auto& cells : components) {
        ComponentSplit split;
        split.cells = cells;
        for (int leg = 0; leg < nu.length(); ++leg) {
            const CellCoord c = placement.leg_cell[static_cast<std::size_t>(leg)];
            if (std::binary_search(cells.begin(), cells.end(), c)) split.legs.push_back(leg);
        }
        split.sub_pattern = nu.subpattern(split.legs);
        for (int leg : split.legs) {
            const CellCoord c = placement.leg_cell[static_cast<std::size_t>(leg)];
            const auto it = std::lower_bound(cells.begin(), cells.end(), c);
            split.leg_to_cell.push_back(static_cast<int>(it - cells.begin()));
        }
        out.push_back(std::move(split));
    }
    return out;
}

std::size_t count_abstract_configurations(const Pattern& nu) {
    // Relative stripe ranks are any non-decreasing grouping of consecutive
    // leg positions; relative layer ranks any non-decreasing grouping of
    // consecutive pattern values. Each pair of groupings is realizable and
    // distinct, so enumerate both sides and count exact signatures.
    const int r = nu.length();
    std::set<std::pair<std::vector<int>, std::vector<int>>> signatures;
    const int splits = 1 << (r - 1);
    for (int sm = 0; sm < splits; ++sm) {
        std::vector<int> stripe_rank(static_cast<std::size_t>(r), 0);
        for (int i = 1; i < r; ++i)
            stripe_rank[static_cast<std::size_t>(i)] =
                stripe_rank[static_cast<std::size_t>(i - 1)] + ((sm >> (i - 1)) & 1);
        for (int lm = 0; lm < splits; ++lm) {
            std::vector<int> value_rank(static_cast<std::size_t>(r), 0);
            for (int v = 1; v < r; ++v)
                value_rank[static_cast<std::size_t>(v)] =
                    value_rank[static_cast<std::size_t>(v - 1)] + ((lm >> (v - 1)) & 1);
            std::vector<int> layer_rank(static_cast<std::size_t>(r), 0);
            for (int leg = 0; leg < r; ++leg)
                layer_rank[static_cast<std::size_t>(leg)] =
                    value_rank[static_cast<std::size_t>(nu.value_at(leg + 1) - 1)];
            signatures.emplace(stripe_rank, layer_rank);
        }
    }
    return signatures.size();
}

std::optional<std::vector<CellCoord>> find_cell_arrangement(const std::vector<CellCoord>& cells,
                                                            const Pattern& pattern) {
    std::vector<CellCoord> sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    const int k = pattern.length();
    std::vector<CellCoord> chosen;
    chosen.reserve(static_cast<std::size_t>(k));

    const std::function<bool(int, std::size_t)> dfs = [&](int pos, std::size_t from) {
        if (pos == k) return true;
        for (std::size_t i = from; i < sorted.size(); ++i) {
            const CellCoord c = sorted[i];
            bool ok = true;
            for (int s = 0; s < pos && ok; ++s) {
                if (chosen[static_cast<std::size_t>(s)].stripe >= c.stripe) ok = false;
                const bool pat_less = pattern.value_at(s + 1) < pattern.value_at(pos + 1);
                if (ok && (pat_less ? chosen[static_cast<std::size_t>(s)].layer >= c.layer
                                    : chosen[static_cast<std::size_t>(s)].layer <= c.layer))
                    ok = false;
            }
            if (!ok) continue;
            chosen.push_back(c);
            if (dfs(pos + 1, i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (dfs(0, 0)) return chosen;
    return std::nullopt;
}

}  // namespace pifree
