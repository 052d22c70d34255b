#include "pifree/bruteforce.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace pifree {

namespace {

// Can position `pos` (0-based) of the pattern take value `v`, given the
// values already chosen for positions 0..pos-1?
bool value_compatible(const Pattern& pattern, const std::vector<double>& chosen, int pos,
                      double v, Semantics semantics) {
    for (int s = 0; s < pos; ++s) {
        const bool pat_less = pattern.value_at(s + 1) < pattern.value_at(pos + 1);
        const double prev = chosen[static_cast<std::size_t>(s)];
        if (semantics == Semantics::Strict) {
            if (pat_less ? !(prev < v) : !(prev > v)) return false;
        } else {
            if (pat_less ? !(prev <= v) : !(v <= prev)) return false;
        }
    }
    return true;
}

bool search_appearance(const Sequence& f, const Pattern& pattern, Semantics semantics,
                       const std::vector<char>* dead, std::size_t from, int pos,
                       std::vector<double>& chosen, IndexTuple& tuple) {
    const int k = pattern.length();
    if (pos == k) return true;
    const std::size_t n = f.size();
    // not enough indices left for the remaining legs
    const std::size_t need = static_cast<std::size_t>(k - pos);
    for (std::size_t i = from; i + need <= n; ++i) {
        if (dead && (*dead)[i]) continue;
        const Entry& e = f[i];
        if (!e) continue;
        if (!value_compatible(pattern, chosen, pos, *e, semantics)) continue;
        chosen.push_back(*e);
        tuple.push_back(i);
        if (search_appearance(f, pattern, semantics, dead, i + 1, pos + 1, chosen, tuple))
            return true;
        chosen.pop_back();
        tuple.pop_back();
    }
    return false;
}

std::optional<IndexTuple> find_appearance(const Sequence& f, const Pattern& pattern,
                                          Semantics semantics, const std::vector<char>* dead) {
    std::vector<double> chosen;
    IndexTuple tuple;
    chosen.reserve(static_cast<std::size_t>(pattern.length()));
    tuple.reserve(static_cast<std::size_t>(pattern.length()));
    if (search_appearance(f, pattern, semantics, dead, 0, 0, chosen, tuple)) return tuple;
    return std::nullopt;
}

// Budget-limited hitting-set search. memo[mask] holds the largest budget
// known to be insufficient for that set of already-deleted indices.
struct HittingSearch {
    const Sequence& f;
    const Pattern& pattern;
    Semantics semantics;
    std::vector<char> dead;
    std::unordered_map<std::uint32_t, std::size_t> failed_at;
    IndexTuple deleted;

    std::uint32_t mask() const {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < dead.size(); ++i)
            if (dead[i]) m |= (1u << i);
        return m;
    }

    bool solve(std::size_t budget) {
        const auto w = find_appearance(f, pattern, semantics, &dead);
        if (!w) return true;
        if (budget == 0) return false;
        const std::uint32_t m = mask();
        if (auto it = failed_at.find(m); it != failed_at.end() && budget <= it->second)
            return false;
        for (std::size_t idx : *w) {
            dead[idx] = 1;
            deleted.push_back(idx);
            if (solve(budget - 1)) return true;
            deleted.pop_back();
            dead[idx] = 0;
        }
        auto& slot = failed_at[m];
        slot = std::max(slot, budget);
        return false;
    }
};

}  // namespace

std::optional<IndexTuple> find_appearance_bruteforce(const Sequence& f, const Pattern& pattern,
                                                     std::size_t cap) {
    if (f.size() > cap)
        throw CapExceeded("find_appearance_bruteforce: n=" + std::to_string(f.size()) +
                          " exceeds cap " + std::to_string(cap));
    return find_appearance(f, pattern, Semantics::Strict, nullptr);
}

std::optional<IndexTuple> find_generalized_appearance(const Sequence& f, const Pattern& pattern,
                                                      std::size_t cap) {
    if (f.size() > cap)
        throw CapExceeded("find_generalized_appearance: n exceeds cap");
    if (pattern.length() > 4)
        throw std::invalid_argument("find_generalized_appearance: pattern length must be <= 4");
    return find_appearance(f, pattern, Semantics::Weak, nullptr);
}

DeletionResult deletion_distance(const Sequence& f, const Pattern& pattern, std::size_t cap,
                                 Semantics semantics) {
    if (f.size() > cap || f.size() > 32)
        throw CapExceeded("deletion_distance: n exceeds cap");
    HittingSearch search{f, pattern, semantics, std::vector<char>(f.size(), 0), {}, {}};
    // disjoint appearances each force at least one deletion
    const std::size_t lower = greedy_matching(f, pattern, f.size(), semantics).size();
    for (std::size_t budget = lower;; ++budget) {
        search.deleted.clear();
        std::fill(search.dead.begin(), search.dead.end(), 0);
        if (search.solve(budget)) {
            std::sort(search.deleted.begin(), search.deleted.end());
            return {search.deleted.size(), search.deleted};
        }
    }
}

FreeSubsequence max_pattern_free_subsequence(const Sequence& f, const Pattern& pattern,
                                             std::size_t cap, Semantics semantics) {
    const DeletionResult del = deletion_distance(f, pattern, cap, semantics);
    FreeSubsequence out;
    out.size = f.size() - del.distance;
    std::size_t next = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (next < del.deletion_set.size() && del.deletion_set[next] == i) {
            ++next;
            continue;
        }
        out.kept.push_back(i);
    }
    return out;
}

Sequence fill_deletion_set(const Sequence& f, const IndexTuple& deletion_set,
                           const Pattern& pattern) {
    std::vector<char> in_set(f.size(), 0);
    for (std::size_t i : deletion_set) {
        if (i >= f.size()) throw std::invalid_argument("fill_deletion_set: index out of range");
        in_set[i] = 1;
    }
    if (static_cast<std::size_t>(std::count(in_set.begin(), in_set.end(), 1)) == f.size())
        throw std::invalid_argument("fill_deletion_set: no surviving index to copy from");
    {
        std::vector<char> dead(in_set.begin(), in_set.end());
        if (find_appearance(f, pattern, Semantics::Strict, &dead))
            throw std::invalid_argument(
                "fill_deletion_set: f restricted to the complement is not pattern-free");
    }
    Sequence out = f;
    // leading deleted prefix copies from the smallest surviving index
    std::size_t first_survivor = 0;
    while (in_set[first_survivor]) ++first_survivor;
    for (std::size_t i = 0; i < f.size() && in_set[i]; ++i) out[i] = f[first_survivor];
    // every other deleted index copies the previous (already final) value
    for (std::size_t i = first_survivor + 1; i < f.size(); ++i) {
        if (in_set[i]) out[i] = out[i - 1];
    }
    return out;
}

std::vector<IndexTuple> greedy_matching(const Sequence& f, const Pattern& pattern,
                                        std::size_t cap, Semantics semantics) {
    if (f.size() > cap) throw CapExceeded("greedy_matching: n exceeds cap");
    std::vector<char> dead(f.size(), 0);
    std::vector<IndexTuple> matching;
    while (auto w = find_appearance(f, pattern, semantics, &dead)) {
        for (std::size_t i : *w) dead[i] = 1;
        matching.push_back(std::move(*w));
    }
    return matching;
}

std::size_t hamming_distance_exhaustive(const Sequence& f, const Pattern& pattern,
                                        std::size_t cap, Semantics semantics) {
    const std::size_t n = f.size();
    if (n > cap) throw CapExceeded("hamming_distance_exhaustive: n exceeds cap");

    std::vector<std::size_t> positions;  // repairable = non-erased
    std::vector<double> distinct;
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i]) {
            positions.push_back(i);
            distinct.push_back(*f[i]);
        }
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    // existing values, midpoints, and one value beyond each end
    std::vector<double> grid;
    if (distinct.empty()) return 0;
    grid.push_back(distinct.front() - 1.0);
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        grid.push_back(distinct[i]);
        if (i + 1 < distinct.size()) grid.push_back((distinct[i] + distinct[i + 1]) / 2.0);
    }
    grid.push_back(distinct.back() + 1.0);

    const auto is_free = [&](const Sequence& g) {
        return !find_appearance(g, pattern, semantics, nullptr).has_value();
    };
    if (is_free(f)) return 0;

    for (std::size_t d = 1; d <= positions.size(); ++d) {
        // iterate all d-subsets of repairable positions
        std::vector<std::size_t> pick(d);
        for (std::size_t i = 0; i < d; ++i) pick[i] = i;
        while (true) {
            Sequence g = f;
            std::vector<std::size_t> choice(d, 0);
            while (true) {
                for (std::size_t i = 0; i < d; ++i) g[positions[pick[i]]] = grid[choice[i]];
                if (is_free(g)) return d;
                std::size_t carry = 0;
                while (carry < d && ++choice[carry] == grid.size()) choice[carry++] = 0;
                if (carry == d) break;
            }
            // next combination
            std::size_t j = d;
            while (j > 0 && pick[j - 1] == positions.size() - d + (j - 1)) --j;
            if (j == 0) break;
            ++pick[j - 1];
            for (std::size_t i = j; i < d; ++i) pick[i] = pick[i - 1] + 1;
        }
    }
    return positions.size();
}

DistanceReport distance_report(const Sequence& f, const Pattern& pattern, std::size_t cap) {
    DistanceReport report;
    const DeletionResult del = deletion_distance(f, pattern, cap);
    report.deletion_distance = del.distance;
    report.deletion_set = del.deletion_set;
    report.repaired_function =
        del.deletion_set.empty() ? f : fill_deletion_set(f, del.deletion_set, pattern);
    if (find_appearance(report.repaired_function, pattern, Semantics::Strict, nullptr))
        throw std::logic_error("distance_report: fill-in repair is not pattern-free");
    std::size_t changed = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != report.repaired_function[i]) ++changed;
    if (changed > report.deletion_distance)
        throw std::logic_error("distance_report: repair changed more than the deletion set");
    // the repair witnesses hamming <= deletion; the reverse holds by definition
    report.hamming_distance = report.deletion_distance;
    return report;
}

}  // namespace pifree
