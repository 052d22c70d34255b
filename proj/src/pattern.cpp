#include "pifree/pattern.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pifree {

Pattern::Pattern(std::vector<int> values, int max_length) : values_(std::move(values)) {
    const int k = static_cast<int>(values_.size());
    if (k < 1 || k > max_length) {
        throw std::invalid_argument("pattern length must be in [1, " +
                                    std::to_string(max_length) + "]");
    }
    positions_.assign(values_.size(), 0);
    std::vector<bool> seen(values_.size(), false);
    for (int pos = 1; pos <= k; ++pos) {
        const int v = values_[static_cast<std::size_t>(pos - 1)];
        if (v < 1 || v > k || seen[static_cast<std::size_t>(v - 1)]) {
            throw std::invalid_argument("pattern must be a permutation of {1.." +
                                        std::to_string(k) + "}");
        }
        seen[static_cast<std::size_t>(v - 1)] = true;
        positions_[static_cast<std::size_t>(v - 1)] = pos;
    }
}

Pattern Pattern::parse(const std::string& text, int max_length) {
    std::vector<int> values;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::istringstream field(token);
        int v = 0;
        if (!(field >> v)) throw std::invalid_argument("bad pattern token: '" + token + "'");
        values.push_back(v);
        // allow space-separated values inside a comma field
        while (field >> v) values.push_back(v);
    }
    return Pattern(std::move(values), max_length);
}

bool Pattern::is_identity() const {
    for (int i = 1; i <= length(); ++i)
        if (value_at(i) != i) return false;
    return true;
}

bool Pattern::is_decreasing() const {
    for (int i = 1; i <= length(); ++i)
        if (value_at(i) != length() - i + 1) return false;
    return true;
}

Pattern Pattern::subpattern(std::span<const int> positions) const {
    std::vector<int> picked;
    picked.reserve(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (j > 0 && positions[j] <= positions[j - 1])
            throw std::invalid_argument("subpattern positions must be strictly increasing");
        picked.push_back(values_[static_cast<std::size_t>(positions[j])]);
    }
    // compress values to ranks 1..q
    std::vector<int> sorted = picked;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> ranks;
    ranks.reserve(picked.size());
    for (int v : picked) {
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
        ranks.push_back(static_cast<int>(it - sorted.begin()) + 1);
    }
    return Pattern(std::move(ranks));
}

std::string Pattern::to_string() const {
    std::string out;
    for (int i = 1; i <= length(); ++i) {
        if (i > 1) out += ',';
        out += std::to_string(value_at(i));
    }
    return out;
}

bool order_isomorphic(std::span<const double> values, const Pattern& pattern) {
    if (static_cast<int>(values.size()) != pattern.length())
        throw std::invalid_argument("order_isomorphic: length mismatch");
    const int k = pattern.length();
    for (int s = 0; s < k; ++s) {
        for (int t = s + 1; t < k; ++t) {
            const bool value_less = values[static_cast<std::size_t>(s)] <
                                    values[static_cast<std::size_t>(t)];
            const bool value_greater = values[static_cast<std::size_t>(s)] >
                                       values[static_cast<std::size_t>(t)];
            const bool pat_less = pattern.value_at(s + 1) < pattern.value_at(t + 1);
            if (pat_less ? !value_less : !value_greater) return false;
        }
    }
    return true;
}

bool weak_order_isomorphic(std::span<const double> values, const Pattern& pattern) {
    if (static_cast<int>(values.size()) != pattern.length())
        throw std::invalid_argument("weak_order_isomorphic: length mismatch");
    const int k = pattern.length();
    for (int s = 0; s < k; ++s) {
        for (int t = 0; t < k; ++t) {
            if (s == t) continue;
            if (pattern.value_at(s + 1) < pattern.value_at(t + 1) &&
                !(values[static_cast<std::size_t>(s)] <= values[static_cast<std::size_t>(t)]))
                return false;
        }
    }
    return true;
}

}  // namespace pifree
