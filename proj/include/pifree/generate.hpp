#ifndef PIFREE_GENERATE_HPP
#define PIFREE_GENERATE_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "pifree/oracle.hpp"
#include "pifree/pattern.hpp"

namespace pifree {

enum class InstanceKind { Free, PlantedFar, Random, FromFile };

std::string to_string(InstanceKind kind);

struct InstanceSpec {
    std::size_t n = 0;
    Pattern pattern = Pattern({1});
    InstanceKind kind = InstanceKind::Free;
    double epsilon = 0.0;          // PlantedFar distance parameter
    double erasure_fraction = 0.0; // alpha in [0,1)
    std::uint64_t seed = 0;
    std::string path;              // FromFile
    int csv_column = -1;           // FromFile: read this CSV column when >= 0
};

/// A sequence with no appearance of the pattern, by construction: an
/// increasing backbone (decreasing when the pattern is the identity),
/// with order-preserving jitter. At n <= 20 the output is additionally
/// re-verified free by the brute-force oracle.
Sequence generate_free(std::size_t n, const Pattern& pattern, std::uint64_t seed,
                       bool jitter = true);

/// A sequence with ceil(eps*n/k) index-disjoint planted appearances over
/// the backbone; each window realizes the pattern inside its own value
/// band, so the windows form a matching and the deletion distance is at
/// least their count.
Sequence generate_planted_far(std::size_t n, const Pattern& pattern, double epsilon,
                              std::uint64_t seed);

/// Uniform random values in [0, 1).
Sequence generate_random(std::size_t n, std::uint64_t seed);

/// Erases floor(alpha*n) positions chosen uniformly at random.
void inject_erasures(Sequence& f, double alpha, std::uint64_t seed);

/// Builds the instance a spec describes (reads the file for FromFile).
Sequence build_instance(const InstanceSpec& spec);

}  // namespace pifree

#endif
