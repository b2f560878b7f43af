#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qc/bump.hpp"
#include "qc/fuchsian.hpp"

namespace qc {

/// Gamma-periodic conformal metric g_t = e^{2 u_t} g_0 on the disk, with
/// u_t = sum_i t_i rho(d_0(x, Gamma p_i)); g_0 is the constant-curvature
/// kappa0 metric.  Immutable after construction.  All distances and radii
/// in the interface are base-metric (curvature kappa0) units.
class ConformalMetric {
public:
    ConformalMetric(std::shared_ptr<const FuchsianGroup> group,
                    std::vector<Complex> centers, BumpProfile profile,
                    std::vector<double> t);

    /// Centers for k+2 bumps: k=0 -> octagon center + vertex; k=1 -> + side
    /// midpoint (max-min separation); k>=2 -> center + ring at 0.55*inradius.
    static std::vector<Complex> default_centers(const FuchsianGroup& g, int k);

    /// Default radii: r2 = 0.4 * min(half min pairwise orbit distance,
    /// half systole); r1 from Area(B(r1)) = (4/5) Area(B(r2)).
    static BumpProfile default_profile(const FuchsianGroup& g,
                                       const std::vector<Complex>& centers);

    /// Convenience: default k+2 bump metric at parameter t.
    static ConformalMetric standard(std::shared_ptr<const FuchsianGroup> group,
                                    int k, std::vector<double> t);

    const FuchsianGroup& group() const { return *group_; }
    std::shared_ptr<const FuchsianGroup> group_ptr() const { return group_; }
    double kappa0() const { return group_->kappa0(); }
    double k() const { return group_->conformal_scale(); }
    const std::vector<Complex>& centers() const { return centers_; }
    const BumpProfile& profile() const { return profile_; }
    const std::vector<double>& t() const { return t_; }
    double max_abs_t() const;
    bool is_flat() const;  // t == 0

    /// Same bumps, different parameter vector.
    ConformalMetric with_t(std::vector<double> t) const;

    /// Meshed region bound (base units); distance queries beyond raise.
    double mesh_range() const { return 14.0; }

    /// Conformal exponent u_t(x); Gamma-invariant.
    double u(Complex x) const;

    /// u for a point already inside (or within 1e-9 of) the closed domain.
    double u_in_domain(Complex z) const;

    /// Per-bump profile values rho(d_0(x, Gamma p_i)) for a domain point.
    void bump_values_in_domain(Complex z, double* out) const;

    /// Base-metric Laplacian of u_t at x (analytic radial formula).
    double laplacian0_u(Complex x) const;

    /// Gauss curvature of g_t at x: e^{-2u} (kappa0 - Lap_0 u).
    double curvature_at(Complex x) const;

    /// Certified sup of curvature over the surface: radial 1-D scan per bump
    /// plus a Lipschitz remainder from the profile's derivative bounds.
    double curvature_bound() const;

    /// Largest eps such that every |t_i| <= eps keeps (a) curvature <= -1 and
    /// (b) Area(V_i; g_t) >= (3/4) Area(U_j; g_s) at the box corners.
    /// Found by bisection on the certified bounds; depends only on the shape.
    double certified_epsilon_box() const;

    /// Area of the surface: integral of e^{2 u_t} over the fundamental
    /// octagon, adaptive quadrature, relative error <= 1e-6.
    double surface_area() const;

    /// Fixed-rule area (deterministic smooth function of t; used for
    /// numerical derivatives and root finding along metric families).
    double surface_area_fixed(const std::vector<double>& t) const;

    /// Per-bump integral J = int_M rho(d_0(x, p_i)) dA_0 (equal for all i).
    double bump_area_integral() const;

    /// {"kappa0":..., "centers":..., "r1":..., "r2":..., "t":...}
    std::string to_json() const;

    /// Lifts of center i relevant for points in the closed domain.
    const std::vector<Complex>& lifts(std::size_t i) const { return lifts_[i]; }

private:
    std::shared_ptr<const FuchsianGroup> group_;
    std::vector<Complex> centers_;
    BumpProfile profile_;
    std::vector<double> t_;
    std::vector<std::vector<Complex>> lifts_;  // per center, hyperbolic disk pts
    double min_center_separation_;             // base units, over orbits
};

/// u_t evaluator with a warm-started domain representative; fast for
/// sequences of nearby points (quadrature along paths).
class ConformalFactorWalker {
public:
    explicit ConformalFactorWalker(const ConformalMetric& m) : m_(&m) {}

    /// Domain representative of x (warm-started greedy reduction).
    Complex representative(Complex x);

    double u(Complex x) { return m_->u_in_domain(representative(x)); }

private:
    const ConformalMetric* m_;
    MobiusTransform g_;
    bool warm_ = false;
};

}  // namespace qc
