#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace explogi {

/// splitmix64 finalizer; derives independent stream seeds from (seed, stream)
/// so chains and imputation replicas get decorrelated generators.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded generator with pinned draw algorithms. The transformations from
/// raw 64-bit words to doubles are spelled out here (rather than taken from
/// <random>'s distributions) so a given seed produces the same stream on any
/// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// uniform on (0, 1]
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double lambda) { return -std::log(uniform_pos()) / lambda; }

    /// standard normal via Box-Muller; the second value of each pair is cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double t = 2.0 * kPi * uniform();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace explogi
