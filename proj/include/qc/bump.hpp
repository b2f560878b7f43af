#pragma once

#include <cmath>

#include "qc/errors.hpp"

namespace qc {

/// C^2 radial bump: 1 on [0, r1], 0 on [r2, inf), quintic smoothstep of
/// (r2 - s)/(r2 - r1) in between.  Closed-form derivatives and global
/// derivative bounds (used for rigorous curvature bounds).
class BumpProfile {
public:
    BumpProfile(double r1, double r2) : r1_(r1), r2_(r2) {
        if (!(0 < r1 && r1 < r2))
            throw InvalidArgument("BumpProfile: need 0 < r1 < r2");
        inv_dr_ = 1.0 / (r2_ - r1_);
    }

    double r1() const { return r1_; }
    double r2() const { return r2_; }

    double value(double s) const {
        if (s <= r1_) return 1.0;
        if (s >= r2_) return 0.0;
        double t = (r2_ - s) * inv_dr_;
        return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    }

    double d1(double s) const {
        if (s <= r1_ || s >= r2_) return 0.0;
        double t = (r2_ - s) * inv_dr_;
        double u = t - 1.0;
        return -30.0 * t * t * u * u * inv_dr_;
    }

    double d2(double s) const {
        if (s <= r1_ || s >= r2_) return 0.0;
        double t = (r2_ - s) * inv_dr_;
        return 60.0 * t * (2.0 * t - 1.0) * (t - 1.0) * inv_dr_ * inv_dr_;
    }

    // sup-norm bounds: |rho'| <= 15/8 / dr, |rho''| <= 10*sqrt(3)/3 / dr^2,
    // |rho'''| <= 60 / dr^3  (extrema of the quintic smoothstep)
    double d1_bound() const { return 1.875 * inv_dr_; }
    double d2_bound() const { return (10.0 * std::sqrt(3.0) / 3.0) * inv_dr_ * inv_dr_; }
    double d3_bound() const { return 60.0 * inv_dr_ * inv_dr_ * inv_dr_; }

private:
    double r1_, r2_, inv_dr_;
};

}  // namespace qc
