#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace efw {

/// Seeded normal variates with a fully specified algorithm (mt19937_64 +
/// Box-Muller), so the same seed gives the same stream on every platform.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    NormalStream(std::initializer_list<std::uint32_t> seeds) {
        std::seed_seq seq(seeds);
        engine_.seed(seq);
    }

    double uniform() {
        // 53 random bits in (0, 1].
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace efw
