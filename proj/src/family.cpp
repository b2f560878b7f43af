#include "qc/family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qc {

FamilyTracker::FamilyTracker(const ConformalMetric& metric0, const CensusKernel& kernel,
                             double tol_F, double tol_A_rel)
    : metric0_(&metric0), kernel_(&kernel), tol_A_rel_(tol_A_rel) {
    if (!metric0.is_flat())
        throw InvalidArgument("FamilyTracker: reference metric must have t = 0");
    eps_box_ = metric0.certified_epsilon_box();
    std::vector<double> zero(metric0.centers().size(), 0.0);
    EntropyEstimate ref = kernel_->entropy_at(zero);
    F0_ = ref.value;
    tol_F_ = tol_F > 0 ? tol_F : 2.0 * ref.stderr_;
    if (tol_F_ <= 0)
        throw InvalidArgument("FamilyTracker: tol_F must end up positive");
}

FamilyPoint FamilyTracker::make_point(const std::vector<double>& t) const {
    FamilyPoint p;
    p.t = t;
    p.entropy = kernel_->entropy_at(t);
    ConformalMetric mt = metric0_->with_t(t);
    p.area = mt.surface_area();
    p.curvature_bound = mt.curvature_bound();
    double k0 = metric0_->kappa0();
    for (double ti : t) p.curvature_multiset.push_back(k0 * std::exp(-2 * ti));
    return p;
}

std::vector<FamilyPoint> FamilyTracker::track_level_set(const std::vector<double>& v,
                                                        int steps,
                                                        double step_size) const {
    std::size_t n = metric0_->centers().size();
    if (v.size() != n)
        throw InvalidArgument("track_level_set: tangent has wrong length");
    double sum = 0, maxv = 0;
    for (double vi : v) {
        sum += vi;
        maxv = std::max(maxv, std::abs(vi));
    }
    if (std::abs(sum) > 1e-12 * std::max(1.0, maxv))
        throw InvalidArgument("track_level_set: tangent must satisfy sum v_i = 0");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(v[i] - v[j]) < 1e-12)
                throw InvalidArgument("track_level_set: tangent components must be pairwise distinct");
    if (steps < 0) throw InvalidArgument("track_level_set: steps must be >= 0");

    // corrector headroom: one |alpha| <= step_size excursion along <1,..,1>
    double reach = std::abs(steps * step_size) * maxv + std::abs(step_size);
    if (reach > eps_box_)
        throw BoxExceeded("track_level_set: path exceeds the certified curvature box",
                          "reduce steps x step size or the tangent norm");

    std::vector<FamilyPoint> out;
    std::vector<double> t(n, 0.0);
    out.push_back(make_point(t));

    double rn = 1.0 / std::sqrt(static_cast<double>(n));
    for (int s = 1; s <= steps; ++s) {
        std::vector<double> tp(n);
        for (std::size_t i = 0; i < n; ++i) tp[i] = t[i] + step_size * v[i];

        auto F = [&](double alpha) {
            std::vector<double> tt(n);
            for (std::size_t i = 0; i < n; ++i) tt[i] = tp[i] + alpha * rn;
            return kernel_->entropy_at(tt).value - F0_;
        };

        double alpha = 0.0;
        double g0 = F(0.0);
        if (std::abs(g0) > tol_F_ / 2) {
            // bracket the zero along the gradient direction
            double h = step_size;
            double a = 0.0, b = g0 > 0 ? h : -h;  // F decreases along +<1,..,1>... sign probed
            double gb = F(b);
            int guard = 0;
            while (g0 * gb > 0 && std::abs(gb) > tol_F_ / 2) {
                if (std::abs(gb) > std::abs(g0)) {
                    b = -b;  // wrong direction
                    gb = F(b);
                    if (g0 * gb <= 0 || std::abs(gb) <= tol_F_ / 2) break;
                }
                b *= 2;
                gb = F(b);
                if (++guard > 8)
                    throw TrackingError("track_level_set: corrector failed to bracket",
                                        "step " + std::to_string(s));
            }
            if (std::abs(gb) <= tol_F_ / 2) {
                alpha = b;
            } else {
                double ga = g0;
                for (int it = 0; it < 60; ++it) {
                    double mid = (a + b) / 2;
                    double gm = F(mid);
                    if (std::abs(gm) <= tol_F_ / 2 || std::abs(b - a) < 1e-9) {
                        alpha = mid;
                        ga = gm;
                        break;
                    }
                    if (ga * gm <= 0) {
                        b = mid;
                    } else {
                        a = mid;
                        ga = gm;
                    }
                    alpha = (a + b) / 2;
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) t[i] = tp[i] + alpha * rn;

        if (std::abs(F(0.0) * 0.0 + kernel_->entropy_at(t).value - F0_) > tol_F_)
            throw TrackingError("track_level_set: corrector did not converge",
                                "step " + std::to_string(s));

        // independent re-estimate: shifted census grid
        EntropyEstimate indep = kernel_->entropy_at(t, kernel_->step() / 3.0);
        if (std::abs(indep.value - F0_) > tol_F_)
            throw TrackingError("track_level_set: independent re-estimate off level",
                                "step " + std::to_string(s));

        FamilyPoint p = make_point(t);
        if (p.curvature_bound > -1.0)
            throw BoxExceeded("track_level_set: curvature certification failed",
                              "step " + std::to_string(s));
        for (std::size_t i = 0; i < n; ++i) {
            if (t[i] == 0.0)
                throw TrackingError("track_level_set: zero coordinate on the curve",
                                    "step " + std::to_string(s));
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(t[i] - t[j]) < 1e-12)
                    throw TrackingError("track_level_set: coordinates not distinct",
                                        "step " + std::to_string(s));
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<FamilyPoint> FamilyTracker::equal_area_slice(
    const std::vector<FamilyPoint>& points, double target_area) const {
    if (points.empty()) return {};
    double tol_abs = tol_A_rel_ * target_area;

    double mn = 1e300, mx = -1e300;
    for (const auto& p : points) {
        mn = std::min(mn, p.area);
        mx = std::max(mx, p.area);
    }
    bool all_at_target = true;
    for (const auto& p : points)
        if (std::abs(p.area - target_area) > tol_abs) all_at_target = false;
    if (all_at_target) return points;
    if (target_area < mn - tol_abs || target_area > mx + tol_abs)
        throw SliceError("equal_area_slice: target outside the attained area range");

    std::size_t n = metric0_->centers().size();
    std::vector<FamilyPoint> out;
    for (const auto& p : points) {
        if (std::abs(p.area - target_area) <= tol_abs) {
            out.push_back(p);
            continue;
        }
        // in-level-set direction maximizing area change: projected gradient
        // of the fixed-rule area (FD), minus its mean
        const double fd = 1e-5;
        std::vector<double> grad(n);
        double base = metric0_->surface_area_fixed(p.t);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> tt = p.t;
            tt[i] += fd;
            grad[i] = (metric0_->surface_area_fixed(tt) - base) / fd;
        }
        double mean = 0;
        for (double g : grad) mean += g;
        mean /= n;
        double norm = 0;
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] -= mean;
            norm += grad[i] * grad[i];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-14)
            throw SliceError("equal_area_slice: degenerate in-level-set area gradient");
        for (double& g : grad) g /= norm;

        auto area_at = [&](double alpha) {
            std::vector<double> tt = p.t;
            for (std::size_t i = 0; i < n; ++i) tt[i] += alpha * grad[i];
            return metric0_->surface_area_fixed(tt);
        };
        // local monotonicity of A along the direction (Sard-step replacement)
        double probe = 1e-6;
        double d_minus = area_at(0.0) - area_at(-probe);
        double d_plus = area_at(probe) - area_at(0.0);
        if (d_minus * d_plus <= 0)
            throw SliceError("equal_area_slice: area not locally monotone along slice direction");

        double g0 = area_at(0.0) - target_area;
        double hstep = probe;
        double slope = d_plus / probe;
        double guess = -g0 / slope;
        double a = 0.0, b = guess;
        double ga = g0, gb = area_at(b) - target_area;
        int guard = 0;
        while (ga * gb > 0) {
            b += guess;
            gb = area_at(b) - target_area;
            if (++guard > 20)
                throw SliceError("equal_area_slice: root bracketing failed");
        }
        (void)hstep;
        double alpha = b;
        for (int it = 0; it < 80; ++it) {
            double mid = (a + b) / 2;
            double gm = area_at(mid) - target_area;
            if (std::abs(gm) <= tol_abs / 2) {
                alpha = mid;
                break;
            }
            if (ga * gm <= 0) {
                b = mid;
                gb = gm;
            } else {
                a = mid;
                ga = gm;
            }
            alpha = (a + b) / 2;
        }

        std::vector<double> tt = p.t;
        for (std::size_t i = 0; i < n; ++i) tt[i] += alpha * grad[i];

        // re-certify the entropy level
        EntropyEstimate e = kernel_->entropy_at(tt);
        if (std::abs(e.value - F0_) > tol_F_)
            throw SliceError("equal_area_slice: entropy re-certification failed");
        FamilyPoint q = make_point(tt);
        if (q.curvature_bound > -1.0)
            throw SliceError("equal_area_slice: curvature certification failed");
        out.push_back(std::move(q));
    }
    return out;
}

NonisometryCertificate nonisometry_certificate(const FamilyPoint& p,
                                               const FamilyPoint& q, double eps_box,
                                               double match_tol) {
    for (const auto* fp : {&p, &q}) {
        for (double ti : fp->t) {
            if (std::abs(ti) >= eps_box)
                throw BoxExceeded("nonisometry_certificate: parameter outside the eps box",
                                  "lemma hypotheses violated");
            if (ti == 0.0)
                throw BoxExceeded("nonisometry_certificate: zero parameter",
                                  "lemma hypotheses require all parameters nonzero");
        }
    }
    if (p.t.size() != q.t.size())
        throw InvalidArgument("nonisometry_certificate: parameter length mismatch");

    std::vector<double> a = p.curvature_multiset, b = q.curvature_multiset;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double gap = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        gap = std::max(gap, std::abs(a[i] - b[i]));
    NonisometryCertificate cert;
    cert.max_multiset_gap = gap;
    cert.outcome = gap > match_tol ? CertificateOutcome::CertifiedNonisometric
                                   : CertificateOutcome::Inconclusive;
    return cert;
}

std::pair<double, double> rescale_to_common_dimension(double s1, double s2) {
    if (!(s1 > 0) || !(s2 > 0))
        throw InvalidArgument("rescale_to_common_dimension: dimensions must be positive");
    if (s1 <= s2) return {s1 / s2, 1.0};
    return {1.0, s2 / s1};
}

GapReport gap_bound(double s1, double s2) {
    if (!(s1 > 0) || !(s2 > 0))
        throw InvalidArgument("gap_bound: dimensions must be positive");
    if (s1 == s2)
        throw InvalidArgument("gap_bound: not applicable, equal dimensions (no gap)");
    GapReport r;
    r.s1 = std::min(s1, s2);
    r.s2 = std::max(s1, s2);
    r.epsilon = r.s2 / r.s1 - 1.0;
    auto [l1, l2] = rescale_to_common_dimension(r.s1, r.s2);
    r.lambda1 = l1;
    r.lambda2 = l2;
    return r;
}

std::string GapReport::to_json() const {
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "{\"s1\": %.17g, \"s2\": %.17g, \"epsilon\": %.17g, "
                  "\"lambda1\": %.17g, \"lambda2\": %.17g, "
                  "\"note\": \"any (C,K)-quasi-isometry satisfies C >= 1 + epsilon\"}",
                  s1, s2, epsilon, lambda1, lambda2);
    return buf;
}

std::string family_to_json(const std::vector<FamilyPoint>& points,
                           const std::vector<std::pair<std::size_t, std::size_t>>&
                               certified_pairs) {
    std::string s = "{\"points\": [";
    char buf[128];
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        s += "{\"t\": [";
        for (std::size_t j = 0; j < p.t.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", p.t[j]);
            s += buf;
            if (j + 1 < p.t.size()) s += ", ";
        }
        s += "], \"entropy\": ";
        s += p.entropy.to_json();
        std::snprintf(buf, sizeof buf, ", \"area\": %.17g, \"curvature_bound\": %.17g",
                      p.area, p.curvature_bound);
        s += buf;
        s += ", \"curvature_multiset\": [";
        for (std::size_t j = 0; j < p.curvature_multiset.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", p.curvature_multiset[j]);
            s += buf;
            if (j + 1 < p.curvature_multiset.size()) s += ", ";
        }
        s += "]}";
        if (i + 1 < points.size()) s += ", ";
    }
    s += "], \"certified_pairs\": [";
    for (std::size_t i = 0; i < certified_pairs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "[%zu, %zu]", certified_pairs[i].first,
                      certified_pairs[i].second);
        s += buf;
        if (i + 1 < certified_pairs.size()) s += ", ";
    }
    s += "]}";
    return s;
}

}  // namespace qc
