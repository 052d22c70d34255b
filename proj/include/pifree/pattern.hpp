#ifndef PIFREE_PATTERN_HPP
#define PIFREE_PATTERN_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pifree {

inline constexpr int kMaxPatternLength = 6;

/// A forbidden order pattern: a permutation of {1..k} given by its values.
class Pattern {
public:
    explicit Pattern(std::vector<int> values, int max_length = kMaxPatternLength);

    /// Parses "3,2,1,4" (also accepts spaces as separators).
    static Pattern parse(const std::string& text, int max_length = kMaxPatternLength);

    int length() const { return static_cast<int>(values_.size()); }

    /// Value at 1-based position i, i.e. pi(i).
    int value_at(int pos) const { return values_[static_cast<std::size_t>(pos - 1)]; }

    /// 1-based position of value v (the v-leg of the pattern).
    int position_of(int value) const { return positions_[static_cast<std::size_t>(value - 1)]; }

    const std::vector<int>& values() const { return values_; }

    bool is_identity() const;    // (1,2,...,k)
    bool is_decreasing() const;  // (k,k-1,...,1)

    /// Sub-pattern induced by a set of 0-based positions (must be increasing).
    Pattern subpattern(std::span<const int> positions) const;

    std::string to_string() const;

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    std::vector<int> values_;
    std::vector<int> positions_;
};

/// True iff the strict order type of `values` equals `pattern`.
/// Ties never match (strict inequalities on both sides).
bool order_isomorphic(std::span<const double> values, const Pattern& pattern);

/// Weak-inequality variant: for every pair of legs s,t with
/// pattern(s) < pattern(t), requires values[s] <= values[t].
bool weak_order_isomorphic(std::span<const double> values, const Pattern& pattern);

}  // namespace pifree

#endif
