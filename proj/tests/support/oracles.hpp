#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <vector>

#include "qc/fuchsian.hpp"
#include "qc/metric.hpp"

namespace qc::oracles {

/// Exhaustive reduced-word enumeration up to word length L (no distance
/// pruning), deduplicated by orbit point.  Returns base distances of the
/// distinct orbit points found.
std::vector<double> brute_force_orbit_distances(const FuchsianGroup& g, int max_len);

/// Perturbed distance by geodesic shooting: integrate the conformal-metric
/// geodesic ODE z'' = -2 (dphi/dz) z'^2 with bisection on the initial angle.
/// Valid for moderate lengths; completely independent of the mesh method.
double shooting_distance(const ConformalMetric& m, Complex x, Complex y,
                         double step_h = 2e-3);

/// Fixed-grid Riemann sum for the perturbed area over the octagon at a
/// given resolution (polar grid, midpoint rule).
double riemann_area(const ConformalMetric& m, int n_theta, int n_r);

/// Distance from the origin to the geodesic (theta1, theta2) by direct
/// golden-section minimization of the closed-form distance along the
/// closed-form geodesic (t = 0 oracle for distance_to_geodesic).
double origin_geodesic_distance_minimization(double theta1, double theta2);

}  // namespace qc::oracles
