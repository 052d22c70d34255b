#include "pifree/outcome.hpp"

namespace pifree {

std::string to_string(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::FoundPi: return "found_pi";
        case OutcomeKind::FoundRestrictedNu: return "found_restricted_nu";
        case OutcomeKind::NotFound: return "not_found";
        case OutcomeKind::BudgetExceeded: return "budget_exceeded";
    }
    return "unknown";
}

namespace {

template <typename Fetch>
bool check_witness(Fetch&& fetch, const Witness& witness, const Pattern& pattern) {
    if (static_cast<int>(witness.size()) != pattern.length()) return false;
    std::vector<double> values;
    values.reserve(witness.size());
    for (std::size_t j = 0; j < witness.size(); ++j) {
        if (j > 0 && witness[j].first <= witness[j - 1].first) return false;
        const Entry e = fetch(witness[j].first);
        if (!e || *e != witness[j].second) return false;
        values.push_back(*e);
    }
    return order_isomorphic(values, pattern);
}

}  // namespace

bool verify_witness(SequenceOracle& oracle, const Witness& witness, const Pattern& pattern) {
    return check_witness([&](std::size_t i) { return oracle.value_at(i); }, witness, pattern);
}

bool verify_witness(const Sequence& values, const Witness& witness, const Pattern& pattern) {
    return check_witness(
        [&](std::size_t i) { return i < values.size() ? values[i] : Entry{}; }, witness,
        pattern);
}

}  // namespace pifree
