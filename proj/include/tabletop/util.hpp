#ifndef TABLETOP_UTIL_HPP
#define TABLETOP_UTIL_HPP

#include <chrono>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace tabletop {

/// Rejection sampling ran out of attempts.
struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An exact method was asked to handle more than it is sized for.
struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Simple-cycle enumeration exceeded its cap; use a cycle-free method.
struct CycleCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic RNG wrapper. The standard distributions are
/// implementation-defined, so the mappings from raw engine output to
/// uniform values are spelled out here and produce identical streams on
/// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) via rejection-free modulo over a wide range;
    /// the bias for n far below 2^64 is negligible and, more importantly,
    /// platform-independent.
    int below(int n) {
        return static_cast<int>(next() % static_cast<std::uint64_t>(n));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = below(i + 1);
            std::swap(v[i], v[static_cast<size_t>(j)]);
        }
    }

private:
    std::mt19937_64 eng_;
};

/// splitmix64, used to derive independent per-task seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace tabletop

#endif
