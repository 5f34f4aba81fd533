#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dawin {

// Deterministic random stream. Every random draw in the library goes through
// this type so results do not depend on the standard library's distribution
// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent substream derived from a root seed and a stable name,
    // e.g. Rng::substream(seed, "suite/means").
    static Rng substream(std::uint64_t root_seed, std::string_view name);

    std::uint64_t next_u64() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer on [0, n).
    std::size_t index(std::size_t n);
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace dawin
