#pragma once

#include <cstdint>
#include <vector>

#include "qc/distance.hpp"
#include "qc/metric.hpp"

namespace qc {

/// Point of the boundary circle, canonical angle in [0, 2pi).
struct BoundaryPoint {
    double theta;
    explicit BoundaryPoint(double t) : theta(std::fmod(t, 2 * kPi)) {
        if (theta < 0) theta += 2 * kPi;
    }
};

enum class VisualVariant { GromovProduct, GeodesicDistance };

struct GromovProductResult {
    double value = 0;             // (x_T | y_T)_w, base units
    double certification_gap = 0; // |value(T) - value(T/2)|
    bool certified = false;       // gap < 10 e^{-k T / 2}
};

/// Visual-metric context: basepoint w = 0, ray depth T (base units), and the
/// metric variant.  Boundary circle of the perturbed metric is identified
/// with the base circle by angle (the perturbation is compactly supported
/// per fundamental domain and bi-Lipschitz).
class VisualMetricContext {
public:
    VisualMetricContext(const ConformalMetric& metric, double T, VisualVariant variant);

    const ConformalMetric& metric() const { return *m_; }
    double ray_depth() const { return T_; }
    VisualVariant variant() const { return variant_; }
    double k() const { return m_->k(); }

    /// Gromov product (x_T | y_T)_w along base-metric rays, perturbed-metric
    /// distances, with T vs T/2 Cauchy certification.
    GromovProductResult gromov_product(BoundaryPoint x, BoundaryPoint y) const;

    /// e^{-gromov product} or e^{-d(w, geodesic)}, by variant; 0 when x = y.
    double visual_distance(BoundaryPoint x, BoundaryPoint y) const;

    /// Bulk evaluator: closed form at t = 0; first-order conformal-length
    /// proxy otherwise (O(t^2 L) bias, audited against the honest operator).
    double visual_fast(double theta1, double theta2) const;

    /// d(w, eta(theta1, theta2)) used by the d-hat variant (same dispatch).
    double dhat_exponent_fast(double theta1, double theta2) const;

    /// Honest distance_to_geodesic through the mesh engine.
    std::pair<double, Complex> foot_of_perpendicular(double theta1, double theta2,
                                                     double tol = 1e-3) const;

    /// Residual statistics of the fast proxy vs the honest operator over
    /// n sampled pairs (for diagnostics; empty at t = 0).
    std::vector<double> audit_fast_proxy(std::size_t n, std::uint64_t seed) const;

private:
    const ConformalMetric* m_;
    double T_;
    VisualVariant variant_;
    PerturbedDistance engine_;
};

struct BoxCountResult {
    double dimension = 0;
    double stderr_ = 0;
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    std::vector<double> residuals;

    std::string to_csv() const;   // "scale,count"
    std::string to_json() const;  // {"dimension":..., "stderr":...}
};

/// Greedy covering numbers of the boundary circle at dyadic scales,
/// regressed: log count vs -log scale.
BoxCountResult boxcount_dimension(const VisualMetricContext& ctx, std::size_t m,
                                  const std::vector<double>& scales,
                                  std::uint64_t seed);

struct RegularityResult {
    std::vector<double> ratios;  // mu(B(x,r)) / r^s over centers x radii
    double spread = 0;           // max/min
    std::vector<double> radii;
    std::vector<double> per_radius_min, per_radius_max;
};

/// Empirical Ahlfors regularity: normalized counting measure of balls over
/// random centers and dyadic radii, divided by r^s.
RegularityResult regularity_ratios(const VisualMetricContext& ctx, double s,
                                   std::size_t n_sample, std::size_t n_centers,
                                   const std::vector<double>& radii,
                                   std::uint64_t seed);

struct Arc {
    double theta1, theta2;
};

struct ExpansionResult {
    std::vector<double> normalized_factors;  // r * dhat(gx,gy)/dhat(x,y)
    MobiusTransform gamma;
    double R = 0;  // d(w, eta)
    double r = 0;  // dhat-diameter of the arc
};

/// One arc of the quasicircle expansion check (Prop 3.2 realized):
/// project w onto the geodesic joining the arc endpoints, map the foot into
/// the fundamental domain, and measure normalized expansion factors over
/// sampled pairs (the first pair is the endpoints themselves).
ExpansionResult expansion_check(const VisualMetricContext& ctx, Arc N,
                                std::size_t pairs, double r0, std::uint64_t seed);

struct BandScaleStats {
    double scale = 0;
    double min = 0, max = 0;
    std::size_t count = 0;
};

struct ExpansionBandReport {
    double band_lo = 0, band_hi = 0;  // fitted band with safety margin
    std::vector<BandScaleStats> fit_scales;
    BandScaleStats holdout;
    std::size_t holdout_violations = 0;
    double holdout_fraction_in = 0;

    std::string to_json() const;  // {"r":..., "band":[a,b], "violations":n}
};

/// Fit a scale-independent band on the fit scales, then hold out one scale
/// and measure containment.
ExpansionBandReport expansion_band_experiment(const VisualMetricContext& ctx,
                                              const std::vector<double>& fit_scales,
                                              double holdout_scale,
                                              std::size_t arcs_per_scale,
                                              std::size_t pairs_per_arc, double r0,
                                              std::uint64_t seed,
                                              double safety_margin = 0.15);

/// Angular half-width of an arc of given dhat-diameter (closed form at
/// t = 0, bisection on the fast evaluator otherwise).
double arc_halfwidth_for_diameter(const VisualMetricContext& ctx, double diam);

}  // namespace qc
