#ifndef PIFREE_ORACLE_HPP
#define PIFREE_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pifree {

/// A sequence entry: a finite value, or empty when erased.
using Entry = std::optional<double>;
using Sequence = std::vector<Entry>;

inline Sequence to_sequence(const std::vector<double>& plain) {
    Sequence out;
    out.reserve(plain.size());
    for (double v : plain) out.emplace_back(v);
    return out;
}

/// Query-counted access to f:[n] -> values. The only route to the data
/// for every randomized component. Every value_at call bumps the counter,
/// including calls that hit erased entries.
class SequenceOracle {
public:
    explicit SequenceOracle(Sequence values, std::uint64_t rng_seed = 0)
        : values_(std::move(values)), rng_seed_(rng_seed) {
        if (values_.empty()) throw std::invalid_argument("oracle: empty sequence");
        for (const Entry& e : values_) {
            if (e && !std::isfinite(*e))
                throw std::invalid_argument("oracle: values must be finite");
        }
    }

    std::size_t length() const { return values_.size(); }

    Entry value_at(std::size_t index) {
        if (index >= values_.size()) throw std::out_of_range("oracle: index out of range");
        ++query_count_;
        return values_[index];
    }

    std::uint64_t query_count() const { return query_count_; }
    std::uint64_t rng_seed() const { return rng_seed_; }

    std::size_t erased_count() const {
        std::size_t n = 0;
        for (const Entry& e : values_)
            if (!e) ++n;
        return n;
    }

private:
    Sequence values_;
    std::uint64_t rng_seed_ = 0;
    std::uint64_t query_count_ = 0;
};

/// Thrown when a hard query cap is hit mid-run; surfaces as the
/// BudgetExceeded outcome rather than a NotFound.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Oracle handle with an optional hard cap on total queries.
class BudgetedOracle {
public:
    explicit BudgetedOracle(SequenceOracle& inner,
                            std::uint64_t budget = static_cast<std::uint64_t>(-1))
        : inner_(inner), budget_(budget) {}

    Entry value_at(std::size_t index) {
        if (inner_.query_count() >= budget_) throw BudgetExhausted("query budget exhausted");
        return inner_.value_at(index);
    }

    std::size_t length() const { return inner_.length(); }
    std::uint64_t query_count() const { return inner_.query_count(); }

private:
    SequenceOracle& inner_;
    std::uint64_t budget_;
};

}  // namespace pifree

#endif
