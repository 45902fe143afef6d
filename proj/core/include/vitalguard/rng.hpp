#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vitalguard {

// Deterministic random source. The raw engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the mappings to doubles are done here with
// plain arithmetic because the std distributions are implementation-defined.
// Same seed, same draw order, same numbers on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // [0, n), n > 0
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

    // standard normal via Box-Muller, one spare cached
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace vitalguard
