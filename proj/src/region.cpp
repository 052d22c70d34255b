#include "pifree/region.hpp"

#include <algorithm>
#include <limits>

namespace pifree {

void IndexSet::assign(std::vector<IndexInterval> intervals) {
    std::erase_if(intervals, [](const IndexInterval& iv) { return iv.lo >= iv.hi; });
    std::sort(intervals.begin(), intervals.end(),
              [](const IndexInterval& a, const IndexInterval& b) { return a.lo < b.lo; });
    intervals_.clear();
    for (const auto& iv : intervals) {
        if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
            intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
        } else {
            intervals_.push_back(iv);
        }
    }
    prefix_.clear();
    count_ = 0;
    for (const auto& iv : intervals_) {
        count_ += iv.count();
        prefix_.push_back(count_);
    }
}

bool IndexSet::contains(std::size_t index) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), index,
                               [](std::size_t x, const IndexInterval& iv) { return x < iv.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    return index < it->hi;
}

std::size_t IndexSet::nth(std::size_t t) const {
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - prefix_.begin());
    const std::size_t before = i == 0 ? 0 : prefix_[i - 1];
    return intervals_[i].lo + (t - before);
}

std::size_t IndexSet::rank(std::size_t index) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), index,
                               [](std::size_t x, const IndexInterval& iv) { return x < iv.lo; });
    if (it == intervals_.begin()) return count_;
    const std::size_t i = static_cast<std::size_t>(it - intervals_.begin()) - 1;
    if (index >= intervals_[i].hi) return count_;
    const std::size_t before = i == 0 ? 0 : prefix_[i - 1];
    return before + (index - intervals_[i].lo);
}

IndexSet IndexSet::slice(std::size_t from, std::size_t to) const {
    from = std::min(from, count_);
    to = std::min(to, count_);
    std::vector<IndexInterval> out;
    std::size_t start = 0;
    for (const auto& iv : intervals_) {
        const std::size_t end = start + iv.count();
        const std::size_t a = std::max(from, start);
        const std::size_t b = std::min(to, end);
        if (a < b) out.push_back({iv.lo + (a - start), iv.lo + (b - start)});
        start = end;
    }
    return IndexSet(std::move(out));
}

bool IndexSet::subset_of(const IndexSet& other) const {
    for (const auto& iv : intervals_) {
        bool covered = false;
        for (const auto& ov : other.intervals_) {
            if (ov.lo <= iv.lo && iv.hi <= ov.hi) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

IndexSet IndexSet::unite(const std::vector<IndexSet>& parts) {
    std::vector<IndexInterval> all;
    for (const auto& p : parts) all.insert(all.end(), p.intervals_.begin(), p.intervals_.end());
    return IndexSet(std::move(all));
}

ValueSet ValueSet::all() {
    return single(-std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity());
}

void ValueSet::assign(std::vector<ValueInterval> intervals) {
    std::erase_if(intervals, [](const ValueInterval& iv) { return !(iv.lo < iv.hi); });
    std::sort(intervals.begin(), intervals.end(),
              [](const ValueInterval& a, const ValueInterval& b) { return a.lo < b.lo; });
    intervals_.clear();
    for (const auto& iv : intervals) {
        if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
            intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
        } else {
            intervals_.push_back(iv);
        }
    }
}

bool ValueSet::contains(double v) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), v,
                               [](double x, const ValueInterval& iv) { return x < iv.lo; });
    // (lo, hi]: candidate intervals have lo < v; also check the one starting exactly at v? no:
    // lo == v is excluded by the half-open convention, so only earlier intervals qualify.
    if (it == intervals_.begin()) return false;
    --it;
    return it->contains(v);
}

bool ValueSet::subset_of(const ValueSet& other) const {
    for (const auto& iv : intervals_) {
        bool covered = false;
        for (const auto& ov : other.intervals_) {
            if (ov.lo <= iv.lo && iv.hi <= ov.hi) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

ValueSet ValueSet::intersect(const ValueInterval& window) const {
    std::vector<ValueInterval> out;
    for (const auto& iv : intervals_) {
        const double lo = std::max(iv.lo, window.lo);
        const double hi = std::min(iv.hi, window.hi);
        if (lo < hi) out.push_back({lo, hi});
    }
    return ValueSet(std::move(out));
}

ValueSet ValueSet::unite(const std::vector<ValueSet>& parts) {
    std::vector<ValueInterval> all;
    for (const auto& p : parts) all.insert(all.end(), p.intervals_.begin(), p.intervals_.end());
    return ValueSet(std::move(all));
}

}  // namespace pifree
