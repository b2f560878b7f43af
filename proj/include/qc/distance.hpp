#pragma once

#include <vector>

#include "qc/metric.hpp"

namespace qc {

/// Tube mesh statistics per refinement level (exportable as CSV).
struct MeshLevel {
    int level = 0;
    std::size_t vertex_count = 0;
    double max_edge_base = 0;
    double length = 0;  // shortest-path estimate at this level, base units
};

/// Shortest-path result in the perturbed metric.
struct PathResult {
    double length = 0;        // base-metric units
    double achieved_tol = 0;  // relative, from the last two levels
    std::vector<Complex> nodes;
    std::vector<MeshLevel> levels;
};

/// Raised when refinement hits the level budget; carries best estimate.
class MeshBudgetError : public NumericalError {
public:
    MeshBudgetError(const std::string& what, double best, double achieved)
        : NumericalError(what), best_estimate(best), achieved_tol(achieved) {}
    double best_estimate;
    double achieved_tol;
};

/// Structured Fermi-coordinate tube mesh between two disk points, with
/// perturbed edge weights (base hyperbolic edge length x e^{u(midpoint)}).
struct DistanceMesh {
    std::vector<Complex> vertices;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<double> weights;  // base units
    int cols = 0, rows = 0;       // structured grid shape
    int level = 0;

    double max_edge() const {
        double m = 0;
        for (double w : weights) m = std::max(m, w);
        return m;
    }
};

/// Distance engine for one ConformalMetric.  Queries are pure; the object
/// is immutable and shareable.
class PerturbedDistance {
public:
    struct Options {
        double h0 = 0.25;          // initial grid spacing, curvature -1 units
        double halfwidth = 2.5;    // tube half-width, curvature -1 units
        int max_levels = 8;
        int sweeps = 2;
        bool force_mesh = false;   // run the mesh path even when t == 0
    };

    explicit PerturbedDistance(const ConformalMetric& m, Options opt = {})
        : m_(&m), opt_(opt) {}

    /// Perturbed distance within relative tolerance tol; symmetric in (x,y)
    /// by canonical argument ordering.
    double distance(Complex x, Complex y, double tol) const;

    PathResult shortest_path(Complex x, Complex y, double tol) const;

    /// Min over the geodesic eta(th1, th2) of distance(w, .) and the
    /// minimizing point.  Closed form for t = 0; otherwise eta is realized
    /// as a straightened path between deep points along the two rays.
    std::pair<double, Complex> distance_to_geodesic(Complex w, double theta1,
                                                    double theta2, double tol) const;

    /// Tube mesh between x and y at a given level (inspection / export).
    DistanceMesh build_mesh(Complex x, Complex y, int level) const;

    const ConformalMetric& metric() const { return *m_; }

private:
    PathResult refine_path(std::vector<Complex> nodes, double h, double tol) const;
    void check_range(Complex z) const;

    const ConformalMetric* m_;
    Options opt_;
};

/// Per-bump line integrals I_i = int rho(d0(x, Gamma p_i)) ds0 along the
/// base geodesic [x, y] (base-metric arclength).  First-order change of
/// d_t(x,y) in t is sum_i t_i I_i.
std::vector<double> bump_line_integrals(const ConformalMetric& m, Complex x, Complex y,
                                        double tol = 1e-9);

/// Exact perturbed length of the base geodesic segment [x, y]:
/// int e^{u_t} ds0.  Upper bound for d_t(x,y); first-order exact.
double conformal_segment_length(const ConformalMetric& m, Complex x, Complex y,
                                double tol = 1e-10);

}  // namespace qc
