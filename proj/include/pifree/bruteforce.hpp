#ifndef PIFREE_BRUTEFORCE_HPP
#define PIFREE_BRUTEFORCE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pifree/oracle.hpp"
#include "pifree/pattern.hpp"

namespace pifree {

/// Thrown when an exact routine is asked to run beyond its size cap.
/// Callers must not silently degrade to an approximation.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kBruteForceCap = 64;
inline constexpr std::size_t kDeletionCap = 30;
inline constexpr std::size_t kRepairCap = 6;

/// Strict appearances, or the weak-inequality relaxation where ties
/// count toward the pattern order.
enum class Semantics { Strict, Weak };

using IndexTuple = std::vector<std::size_t>;

/// First appearance of `pattern` in f (lexicographic by index tuple),
/// or nullopt when f is pattern-free. Erased positions are skipped.
std::optional<IndexTuple> find_appearance_bruteforce(const Sequence& f, const Pattern& pattern,
                                                     std::size_t cap = kBruteForceCap);

/// Weak-inequality variant (pattern length at most 4).
std::optional<IndexTuple> find_generalized_appearance(const Sequence& f, const Pattern& pattern,
                                                      std::size_t cap = kBruteForceCap);

/// Largest index subset whose induced subsequence is pattern-free.
/// deletion distance == f.size() - size.
struct FreeSubsequence {
    std::size_t size = 0;
    IndexTuple kept;
};
FreeSubsequence max_pattern_free_subsequence(const Sequence& f, const Pattern& pattern,
                                             std::size_t cap = kDeletionCap,
                                             Semantics semantics = Semantics::Strict);

/// Exact deletion distance with an optimal deletion set, via
/// branch-and-bound over appearance hitting sets.
struct DeletionResult {
    std::size_t distance = 0;
    IndexTuple deletion_set;
};
DeletionResult deletion_distance(const Sequence& f, const Pattern& pattern,
                                 std::size_t cap = kDeletionCap,
                                 Semantics semantics = Semantics::Strict);

/// The fill-in construction: each deleted index takes the value of the
/// closest surviving index below it (the first index copies from the
/// smallest surviving index). Output differs from f only on S and is
/// pattern-free whenever f restricted to the complement of S is.
Sequence fill_deletion_set(const Sequence& f, const IndexTuple& deletion_set,
                           const Pattern& pattern);

/// Maximal set of index-disjoint appearances, greedy left-to-right.
/// Its size is at least deletion_distance / k.
std::vector<IndexTuple> greedy_matching(const Sequence& f, const Pattern& pattern,
                                        std::size_t cap = kBruteForceCap,
                                        Semantics semantics = Semantics::Strict);

/// Minimum number of value changes making f pattern-free, by exhaustive
/// search over repair positions and a value grid (existing values plus
/// midpoints); exact because freeness depends only on the order type.
std::size_t hamming_distance_exhaustive(const Sequence& f, const Pattern& pattern,
                                        std::size_t cap = kRepairCap,
                                        Semantics semantics = Semantics::Strict);

struct DistanceReport {
    std::size_t deletion_distance = 0;
    std::size_t hamming_distance = 0;
    IndexTuple deletion_set;
    Sequence repaired_function;
};

/// Deletion side from branch-and-bound, Hamming side witnessed by the
/// fill-in construction (verified pattern-free before reporting).
DistanceReport distance_report(const Sequence& f, const Pattern& pattern,
                               std::size_t cap = kDeletionCap);

}  // namespace pifree

#endif
