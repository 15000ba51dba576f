#ifndef DNSIM_RNG_HPP
#define DNSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace dnsim {

// Counter-based Gaussian generation. Every increment is a pure function of
// (seed, path, step, mode), so trajectories are reproducible regardless of
// worker count or evaluation order.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t key4(std::uint64_t seed, std::uint64_t path,
                          std::uint64_t step, std::uint64_t mode) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ path);
    k = mix64(k ^ step);
    k = mix64(k ^ mode);
    return k;
}

/// Uniform in the open interval (0,1), never exactly 0 or 1.
inline double unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw keyed by (seed, path, step, mode); Box-Muller.
inline double keyed_normal(std::uint64_t seed, std::uint64_t path,
                           std::uint64_t step, std::uint64_t mode) {
    const std::uint64_t k = key4(seed, path, step, mode);
    const double u1 = unit_open(mix64(k ^ 0xA5A5A5A5A5A5A5A5ull));
    const double u2 = unit_open(mix64(k ^ 0x5A5A5A5A5A5A5A5Aull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Specification of one truncated Wiener path.
struct WienerPathSpec {
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    double dt = 1.0;
    int modes = 0;
};

/// Increment of mode j over step k: Normal(0, dt), i.i.d. across (k, j).
inline double wiener_increment(const WienerPathSpec& w, std::uint64_t step, int mode) {
    return keyed_normal(w.seed, w.path_index, step, static_cast<std::uint64_t>(mode)) *
           std::sqrt(w.dt);
}

/// Full increment table, n_steps rows of m entries each.
inline std::vector<std::vector<double>> sample_increments(const WienerPathSpec& w,
                                                          std::size_t n_steps) {
    std::vector<std::vector<double>> table(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        table[k].resize(static_cast<std::size_t>(w.modes));
        for (int j = 0; j < w.modes; ++j) table[k][j] = wiener_increment(w, k, j);
    }
    return table;
}

/// Deterministic uniform stream for property tests and self-checks.
class KeyedUniform {
public:
    explicit KeyedUniform(std::uint64_t seed) : seed_(seed) {}
    double next() { return unit_open(mix64(key4(seed_, 0, counter_++, 0))); }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace dnsim

#endif
