#include "pifree/generate.hpp"

#include <algorithm>
#include <stdexcept>

#include "pifree/bruteforce.hpp"
#include "pifree/io.hpp"
#include "pifree/rng.hpp"

namespace pifree {

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::Free: return "free";
        case InstanceKind::PlantedFar: return "planted_far";
        case InstanceKind::Random: return "random";
        case InstanceKind::FromFile: return "from_file";
    }
    return "unknown";
}

namespace {

// Increasing backbone value at index i; decreasing mirrors it. Jitter
// stays below 1/2 so the backbone order survives.
std::vector<double> backbone(std::size_t n, bool decreasing, bool jitter, Rng& rng) {
    std::uniform_real_distribution<double> noise(0.0, 0.49);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double base = decreasing ? static_cast<double>(n - i) : static_cast<double>(i + 1);
        out[i] = base + (jitter ? noise(rng) : 0.0);
    }
    return out;
}

}  // namespace

Sequence generate_free(std::size_t n, const Pattern& pattern, std::uint64_t seed, bool jitter) {
    if (n == 0) throw std::invalid_argument("generate_free: n must be positive");
    Rng rng(seed);
    // monotone sequences of the opposite direction carry no appearance of
    // any non-singleton pattern; identity patterns get the decreasing one
    const bool decreasing = pattern.is_identity() && pattern.length() >= 2;
    std::vector<double> values = backbone(n, decreasing, jitter, rng);
    Sequence out = to_sequence(values);
    if (n <= 20 && pattern.length() >= 2) {
        if (find_appearance_bruteforce(out, pattern).has_value())
            throw std::logic_error("generate_free: constructed sequence is not pattern-free");
    }
    return out;
}

Sequence generate_planted_far(std::size_t n, const Pattern& pattern, double epsilon,
                              std::uint64_t seed) {
    const std::size_t k = static_cast<std::size_t>(pattern.length());
    const double want = epsilon * static_cast<double>(n) / static_cast<double>(k);
    if (!(want >= 1.0))
        throw std::invalid_argument("generate_planted_far: eps*n/k must be at least 1");
    const std::size_t windows = static_cast<std::size_t>(std::ceil(want));
    if (windows * k > n)
        throw std::invalid_argument("generate_planted_far: too many windows for n");

    Rng rng(seed);
    const bool decreasing = pattern.is_identity() && pattern.length() >= 2;
    std::vector<double> values = backbone(n, decreasing, /*jitter=*/false, rng);

    // window starts: w sorted draws from the slack space, spaced k apart
    std::vector<std::size_t> starts(windows);
    const std::size_t slack = n - windows * k;
    for (auto& s : starts) s = std::uniform_int_distribution<std::size_t>(0, slack)(rng);
    std::sort(starts.begin(), starts.end());
    for (std::size_t w = 0; w < windows; ++w) starts[w] += w * k;

    for (std::size_t start : starts) {
        // rewrite the window inside its local value band; bands of distinct
        // windows are disjoint, so the appearances stay index- and
        // value-isolated and form a matching by construction
        for (std::size_t j = 0; j < k; ++j) {
            const double rank = static_cast<double>(pattern.value_at(static_cast<int>(j) + 1));
            const double offset = rank - 0.5;
            values[start + j] = decreasing
                                    ? static_cast<double>(n - (start + k - 1)) + offset
                                    : static_cast<double>(start) + offset;
        }
    }
    return to_sequence(values);
}

Sequence generate_random(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(n);
    for (auto& v : values) v = dist(rng);
    return to_sequence(values);
}

void inject_erasures(Sequence& f, double alpha, std::uint64_t seed) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("inject_erasures: alpha must lie in [0,1)");
    const std::size_t erase = static_cast<std::size_t>(alpha * static_cast<double>(f.size()));
    if (erase == 0) return;
    Rng rng(seed);
    std::vector<std::size_t> order(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < erase; ++i) {
        const std::size_t j =
            i + std::uniform_int_distribution<std::size_t>(0, f.size() - 1 - i)(rng);
        std::swap(order[i], order[j]);
        f[order[i]] = std::nullopt;
    }
}

Sequence build_instance(const InstanceSpec& spec) {
    Sequence out;
    switch (spec.kind) {
        case InstanceKind::Free:
            out = generate_free(spec.n, spec.pattern, spec.seed);
            break;
        case InstanceKind::PlantedFar:
            out = generate_planted_far(spec.n, spec.pattern, spec.epsilon, spec.seed);
            break;
        case InstanceKind::Random:
            out = generate_random(spec.n, spec.seed);
            break;
        case InstanceKind::FromFile:
            out = read_sequence_file(spec.path, spec.csv_column);
            break;
    }
    if (spec.erasure_fraction > 0.0)
        inject_erasures(out, spec.erasure_fraction, derive_seed(spec.seed, 0x45524153));
    return out;
}

}  // namespace pifree
