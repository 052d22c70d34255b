#ifndef PIFREE_REGION_HPP
#define PIFREE_REGION_HPP

#include <cstddef>
#include <vector>

namespace pifree {

/// Closed-open index interval [lo, hi).
struct IndexInterval {
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::size_t count() const { return hi - lo; }
    friend bool operator==(const IndexInterval&, const IndexInterval&) = default;
};

/// Half-open value interval (lo, hi]. lo may be -inf, hi may be +inf.
struct ValueInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return lo < v && v <= hi; }
    friend bool operator==(const ValueInterval&, const ValueInterval&) = default;
};

/// An ordered union of pairwise-disjoint, non-adjacent index intervals.
class IndexSet {
public:
    IndexSet() = default;
    explicit IndexSet(std::vector<IndexInterval> intervals) { assign(std::move(intervals)); }
    static IndexSet single(std::size_t lo, std::size_t hi) { return IndexSet({{lo, hi}}); }

    /// Sorts, drops empties, merges overlapping/adjacent intervals.
    void assign(std::vector<IndexInterval> intervals);

    const std::vector<IndexInterval>& intervals() const { return intervals_; }
    std::size_t count() const { return count_; }
    bool empty() const { return count_ == 0; }
    bool contains(std::size_t index) const;

    /// t-th index of the set in increasing order, t in [0, count).
    std::size_t nth(std::size_t t) const;

    /// Position of `index` in the flattened order, count() if absent.
    std::size_t rank(std::size_t index) const;

    /// Sub-set of the flattened positions [from, to).
    IndexSet slice(std::size_t from, std::size_t to) const;

    bool subset_of(const IndexSet& other) const;

    static IndexSet unite(const std::vector<IndexSet>& parts);

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<IndexInterval> intervals_;
    std::vector<std::size_t> prefix_;  // cumulative counts, one per interval
    std::size_t count_ = 0;
};

/// An ordered union of pairwise-disjoint value intervals (lo, hi].
class ValueSet {
public:
    ValueSet() = default;
    explicit ValueSet(std::vector<ValueInterval> intervals) { assign(std::move(intervals)); }
    static ValueSet single(double lo, double hi) { return ValueSet({{lo, hi}}); }
    static ValueSet all();  // (-inf, +inf]

    void assign(std::vector<ValueInterval> intervals);

    const std::vector<ValueInterval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    bool contains(double v) const;
    bool subset_of(const ValueSet& other) const;

    /// Geometric intersection with a single interval.
    ValueSet intersect(const ValueInterval& window) const;

    static ValueSet unite(const std::vector<ValueSet>& parts);

    friend bool operator==(const ValueSet&, const ValueSet&) = default;

private:
    std::vector<ValueInterval> intervals_;
};

/// A box bx(S, I): the product of an index set and a value set.
struct BoxRegion {
    IndexSet indices;
    ValueSet values;

    std::size_t length() const { return indices.count(); }
    bool contains(std::size_t index, double value) const {
        return indices.contains(index) && values.contains(value);
    }
    friend bool operator==(const BoxRegion&, const BoxRegion&) = default;
};

}  // namespace pifree

#endif
