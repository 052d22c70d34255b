#ifndef PIFREE_OUTCOME_HPP
#define PIFREE_OUTCOME_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pifree/oracle.hpp"
#include "pifree/pattern.hpp"

namespace pifree {

/// A concrete appearance: (index, value) per leg, indices strictly increasing.
using Witness = std::vector<std::pair<std::size_t, double>>;

enum class OutcomeKind { FoundPi, FoundRestrictedNu, NotFound, BudgetExceeded };

std::string to_string(OutcomeKind kind);

struct TestOutcome {
    OutcomeKind kind = OutcomeKind::NotFound;
    Witness witness;
    std::uint64_t queries_used = 0;
    int depth_max = 0;
    std::uint64_t eps_floor_hits = 0;  // recursions that ran below the epsilon floor

    bool found() const {
        return kind == OutcomeKind::FoundPi || kind == OutcomeKind::FoundRestrictedNu;
    }
};

/// Re-queries the oracle at the witness indices and checks the strict
/// order type. Every "found" outcome in the system must survive this.
bool verify_witness(SequenceOracle& oracle, const Witness& witness, const Pattern& pattern);

/// Same check against raw values, without an oracle.
bool verify_witness(const Sequence& values, const Witness& witness, const Pattern& pattern);

}  // namespace pifree

#endif
