#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qc/distance.hpp"
#include "qc/metric.hpp"

namespace qc {

/// Radius-indexed orbit counts N(R) for one metric.
struct OrbitCensus {
    std::vector<double> radii;       // base-metric units, increasing
    std::vector<std::size_t> counts;
    std::string metric_json;
    Complex basepoint{0, 0};

    std::string to_csv() const;  // header "R,N"
};

struct EntropyEstimate {
    double value = 0;
    double stderr_ = 0;
    double window_lo = 0, window_hi = 0;
    std::vector<double> residuals;  // over the fitted window
    std::string diagnostics;

    std::string to_json() const;  // {"s":..., "stderr":..., "window":[lo,hi]}
};

/// Cached orbit enumeration with per-point bump line integrals; censuses for
/// any parameter vector t of the same bump layout are re-thresholdings.
/// First-order model d_t = d_0 + sum_i t_i I_i, optionally bias-corrected
/// against the honest mesh distance when max|t| is large enough to matter.
class CensusKernel {
public:
    /// threads: parallelism for the integral pass (deterministic output).
    /// t_hint bounds max|t_i| of later census_for calls (enumeration radius
    /// is inflated by e^{t_hint}).
    CensusKernel(const ConformalMetric& metric, double R_max, double step,
                 double margin_h = 2.5, int threads = 1, double t_hint = 0.06,
                 std::size_t budget = 20'000'000, bool skip_integrals = false);

    const ConformalMetric& base_metric() const { return *metric_; }
    double R_max() const { return R_max_; }
    double step() const { return step_; }

    /// Perturbed distances for parameter vector t (base units).
    std::vector<double> distances_for(const std::vector<double>& t) const;

    /// Census on the grid {step, 2*step, ..., R_max} (grid_offset shifts the
    /// grid for independent re-estimates).
    OrbitCensus census_for(const std::vector<double>& t,
                           double grid_offset = 0.0) const;

    /// Entropy estimate at parameter t (auto window).
    EntropyEstimate entropy_at(const std::vector<double>& t,
                               double grid_offset = 0.0) const;

    /// Calibration diagnostics (empty unless a correction was fitted).
    const std::string& calibration_note() const { return calib_note_; }

    std::size_t orbit_size() const { return d0_.size(); }

private:
    const ConformalMetric* metric_;
    double R_max_, step_, t_hint_;
    std::vector<double> d0_;                 // base distances, sorted
    std::vector<Complex> points_;            // matching orbit points
    std::vector<std::vector<double>> bumpI_;  // [point][bump]
    // bias correction Delta(d) = c0 + c1 d, fitted vs mesh distances
    mutable double calib_c0_ = 0, calib_c1_ = 0;
    mutable std::vector<double> calib_t_;
    mutable std::string calib_note_;
    void maybe_calibrate(const std::vector<double>& t) const;
};

/// Exact count census against a metric (uses the kernel machinery).
OrbitCensus orbit_census(const ConformalMetric& metric, double R_max, double step,
                         double margin_h = 2.5, int threads = 1);

/// Least-squares slope of log N(R) over an admissible window.
/// Window selection: largest suffix window with span >= 3 (base units),
/// >= 4 points, and max |residual| < 0.05.  Pass `window` (index pair) to
/// fix the window explicitly (the scaling identity is exact then).
EntropyEstimate entropy_estimate(const OrbitCensus& census,
                                 std::optional<std::pair<std::size_t, std::size_t>>
                                     window = std::nullopt);

/// First-variation derivative of entropy at t = 0 along direction e:
/// -h(g0) * sum_i e_i * (int u_i dA0) / Area(M, g0); h(g0) = sqrt(|kappa0|).
double entropy_derivative(const ConformalMetric& metric_at_zero,
                          const std::vector<double>& direction);

/// Gradient at t = 0: all components equal and negative.
std::vector<double> entropy_gradient(const ConformalMetric& metric_at_zero);

}  // namespace qc
