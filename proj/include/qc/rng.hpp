#pragma once

#include <cstdint>
#include <random>

#include "qc/mobius.hpp"

namespace qc {

/// Low-discrepancy angles: golden-ratio sequence with a seeded offset.
class GoldenAngles {
public:
    explicit GoldenAngles(std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        offset_ = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    double operator()(std::size_t j) const {
        double v = offset_ + kInvPhi * static_cast<double>(j + 1);
        return 2 * kPi * (v - std::floor(v));
    }

private:
    static constexpr double kInvPhi = 0.6180339887498948482;
    double offset_;
};

}  // namespace qc
