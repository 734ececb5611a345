#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace advgen {

/// Seeded generator with platform-independent derived draws.
///
/// The standard distributions are implementation-defined, so uniform reals and
/// bounded integers are derived here directly from the mt19937_64 stream. The
/// same seed produces the same draws on every conforming toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive.
    std::size_t uniform_index(std::size_t n);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Independent child stream, e.g. one per generation job.
    Rng fork(std::uint64_t stream);

private:
    std::mt19937_64 engine_;
};

}  // namespace advgen
