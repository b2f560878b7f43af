#pragma once

#include <string>
#include <vector>

#include "qc/entropy.hpp"

namespace qc {

/// Point on the equal-entropy locus in parameter space.
struct FamilyPoint {
    std::vector<double> t;
    EntropyEstimate entropy;
    double area = 0;
    std::vector<double> curvature_multiset;  // kappa0 e^{-2 t_i}
    double curvature_bound = 0;
};

enum class CertificateOutcome { CertifiedNonisometric, Inconclusive };

struct NonisometryCertificate {
    CertificateOutcome outcome;
    double max_multiset_gap = 0;  // max slot gap of the sorted multisets
};

struct GapReport {
    double s1 = 0, s2 = 0;      // s1 <= s2
    double epsilon = 0;         // s2/s1 - 1
    double lambda1 = 0, lambda2 = 0;

    std::string to_json() const;
};

/// Level-set tracking and slicing for one bump layout.  The census kernel is
/// shared across all entropy evaluations (common enumeration).
class FamilyTracker {
public:
    /// tol_F <= 0 means auto: twice the estimator's standard error at t = 0.
    FamilyTracker(const ConformalMetric& metric0, const CensusKernel& kernel,
                  double tol_F = 0.0, double tol_A_rel = 1e-4);

    double tol_F() const { return tol_F_; }
    double eps_box() const { return eps_box_; }
    double reference_entropy() const { return F0_; }

    /// Predictor along v (sum v_i = 0, pairwise distinct), corrector along
    /// <1,...,1>.  Returns [t=0, p_1, ..., p_steps]; every point with index
    /// >= 1 has pairwise-distinct nonzero coordinates, curvature bound <= -1,
    /// and |F - F(0)| < tol_F certified by an independent re-estimate.
    std::vector<FamilyPoint> track_level_set(const std::vector<double>& v, int steps,
                                             double step_size) const;

    /// Move each point within the entropy level set until |A - r| <= tol_A r,
    /// verifying local monotonicity of A along the chosen direction.
    std::vector<FamilyPoint> equal_area_slice(const std::vector<FamilyPoint>& points,
                                              double target_area) const;

    FamilyPoint make_point(const std::vector<double>& t) const;

private:
    const ConformalMetric* metric0_;
    const CensusKernel* kernel_;
    double tol_F_;
    double tol_A_rel_;
    double eps_box_;
    double F0_;
};

/// Lemma 4.2 as a certificate: distinct sorted curvature multisets (beyond
/// match_tol) certify non-isometric lifts; equal multisets are inconclusive.
NonisometryCertificate nonisometry_certificate(const FamilyPoint& p,
                                               const FamilyPoint& q, double eps_box,
                                               double match_tol = 1e-6);

/// (lambda1, lambda2) with max = 1 and s1/lambda1 = s2/lambda2.
std::pair<double, double> rescale_to_common_dimension(double s1, double s2);

/// Quasi-isometry gap: any (C, K)-quasi-isometry needs C >= 1 + epsilon.
GapReport gap_bound(double s1, double s2);

/// Family export: [{"t":..., "entropy":..., "area":..., ...}, ...] plus the
/// certified pair list.
std::string family_to_json(const std::vector<FamilyPoint>& points,
                           const std::vector<std::pair<std::size_t, std::size_t>>&
                               certified_pairs);

}  // namespace qc
