#include "qc/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "qc/rng.hpp"

namespace qc {

VisualMetricContext::VisualMetricContext(const ConformalMetric& metric, double T,
                                         VisualVariant variant)
    : m_(&metric), T_(T), variant_(variant), engine_(metric) {
    if (!(T > 0) || T > metric.mesh_range())
        throw InvalidArgument("VisualMetricContext: need 0 < T <= meshed radius");
}

GromovProductResult VisualMetricContext::gromov_product(BoundaryPoint x,
                                                        BoundaryPoint y) const {
    if (angular_distance(x.theta, y.theta) < 1e-14)
        throw InvalidArgument("gromov_product: undefined for equal boundary points");
    double k = m_->k();
    auto product_at = [&](double Tbase) {
        Complex xt = ray_point(x.theta, Tbase * k);
        Complex yt = ray_point(y.theta, Tbase * k);
        double dwx = engine_.distance(Complex(0, 0), xt, 1e-4);
        double dwy = engine_.distance(Complex(0, 0), yt, 1e-4);
        double dxy = engine_.distance(xt, yt, 1e-4);
        return 0.5 * (dwx + dwy - dxy);
    };
    GromovProductResult out;
    out.value = product_at(T_);
    double half = product_at(T_ / 2);
    out.certification_gap = std::abs(out.value - half);
    out.certified = out.certification_gap < 10.0 * std::exp(-k * T_ / 2);
    return out;
}

double VisualMetricContext::visual_distance(BoundaryPoint x, BoundaryPoint y) const {
    if (angular_distance(x.theta, y.theta) < 1e-14) return 0.0;
    if (variant_ == VisualVariant::GromovProduct)
        return std::exp(-gromov_product(x, y).value);
    auto [R, foot] = engine_.distance_to_geodesic(Complex(0, 0), x.theta, y.theta, 1e-3);
    return std::exp(-R);
}

double VisualMetricContext::dhat_exponent_fast(double theta1, double theta2) const {
    double dth = angular_distance(theta1, theta2);
    if (dth < 1e-15)
        throw InvalidArgument("dhat_exponent_fast: equal boundary points");
    double k = m_->k();
    double Rh = origin_to_geodesic_h(theta1, theta2);
    if (m_->is_flat()) return Rh / k;
    // first-order proxy: perturbed length of the base segment [w, foot]
    Complex foot = origin_foot(theta1, theta2);
    return conformal_segment_length(*m_, Complex(0, 0), foot);
}

double VisualMetricContext::visual_fast(double theta1, double theta2) const {
    double dth = angular_distance(theta1, theta2);
    if (dth < 1e-15) return 0.0;
    double k = m_->k();
    if (variant_ == VisualVariant::GeodesicDistance)
        return std::exp(-dhat_exponent_fast(theta1, theta2));
    if (m_->is_flat())
        return std::pow(std::sin(dth / 2), 1.0 / k);  // e^{-(x|y)} = sin(dth/2)^(1/k)
    // finite-T product with first-order segment lengths
    Complex xt = ray_point(theta1, T_ * k);
    Complex yt = ray_point(theta2, T_ * k);
    double dwx = conformal_segment_length(*m_, Complex(0, 0), xt);
    double dwy = conformal_segment_length(*m_, Complex(0, 0), yt);
    double dxy = conformal_segment_length(*m_, xt, yt);
    return std::exp(-0.5 * (dwx + dwy - dxy));
}

std::pair<double, Complex> VisualMetricContext::foot_of_perpendicular(double theta1,
                                                                      double theta2,
                                                                      double tol) const {
    return engine_.distance_to_geodesic(Complex(0, 0), theta1, theta2, tol);
}

std::vector<double> VisualMetricContext::audit_fast_proxy(std::size_t n,
                                                          std::uint64_t seed) const {
    std::vector<double> residuals;
    if (m_->is_flat()) return residuals;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uang(0.0, 2 * kPi);
    std::uniform_real_distribution<double> usep(0.15, kPi);
    for (std::size_t i = 0; i < n; ++i) {
        double a = uang(rng);
        double b = a + usep(rng);
        double fast = dhat_exponent_fast(a, b);
        auto [honest, foot] = engine_.distance_to_geodesic(Complex(0, 0), a, b, 1e-3);
        residuals.push_back(fast - honest);
    }
    return residuals;
}

std::string BoxCountResult::to_csv() const {
    std::string s = "scale,count\n";
    char buf[64];
    for (std::size_t i = 0; i < scales.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%zu\n", scales[i], counts[i]);
        s += buf;
    }
    return s;
}

std::string BoxCountResult::to_json() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "{\"dimension\": %.17g, \"stderr\": %.17g}",
                  dimension, stderr_);
    return buf;
}

namespace {

// samples sorted ascending; greedy net: ball centered at the first uncovered
// sample, advanced by binary search under angular monotonicity of d
std::size_t cover_count(const VisualMetricContext& ctx, const std::vector<double>& th,
                        double delta) {
    std::size_t m = th.size();
    std::size_t count = 0;
    std::size_t i = 0;
    double first_center = -1, first_reach = 0;
    while (i < m) {
        double c = th[i];
        if (count > 0 && first_center >= 0) {
            // wrapped coverage by the first ball
            if (ctx.visual_fast(c, first_center) <= delta &&
                angular_distance(c, first_center) <= first_reach)
                break;
        }
        // find the last j with d(c, th[j]) <= delta
        std::size_t lo = i, hi = m - 1;
        if (ctx.visual_fast(c, th[hi]) <= delta) {
            i = m;
        } else {
            while (hi - lo > 1) {
                std::size_t mid = (lo + hi) / 2;
                if (ctx.visual_fast(c, th[mid]) <= delta)
                    lo = mid;
                else
                    hi = mid;
            }
            i = hi;
        }
        if (count == 0) {
            first_center = c;
            first_reach = angular_distance(c, th[std::min(i, m - 1)]);
        }
        ++count;
    }
    return count;
}

}  // namespace

BoxCountResult boxcount_dimension(const VisualMetricContext& ctx, std::size_t m,
                                  const std::vector<double>& scales,
                                  std::uint64_t seed) {
    if (m < 1000) throw InvalidArgument("boxcount_dimension: need m >= 1000");
    double resolution = std::exp(-ctx.k() * ctx.ray_depth());
    for (double s : scales)
        if (s < resolution)
            throw InvalidArgument("boxcount_dimension: scale below e^{-kT} resolution");

    GoldenAngles gen(seed);
    std::vector<double> th(m);
    for (std::size_t j = 0; j < m; ++j) th[j] = gen(j);
    std::sort(th.begin(), th.end());

    BoxCountResult out;
    out.scales = scales;
    for (double delta : scales) out.counts.push_back(cover_count(ctx, th, delta));

    std::size_t n = scales.size();
    if (n < 3) throw FitFailure("boxcount_dimension: need >= 3 scales");
    double sx = 0, sy = 0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = -std::log(scales[i]);
        ys[i] = std::log(static_cast<double>(out.counts[i]));
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx < 1e-12) throw FitFailure("boxcount_dimension: degenerate scales");
    out.dimension = sxy / sxx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ys[i] - (my + out.dimension * (xs[i] - mx));
        out.residuals.push_back(r);
        ss += r * r;
    }
    if (n > 2) out.stderr_ = std::sqrt(ss / (n - 2) / sxx);
    return out;
}

RegularityResult regularity_ratios(const VisualMetricContext& ctx, double s,
                                   std::size_t n_sample, std::size_t n_centers,
                                   const std::vector<double>& radii,
                                   std::uint64_t seed) {
    GoldenAngles gen(seed);
    std::vector<double> th(n_sample);
    for (std::size_t j = 0; j < n_sample; ++j) th[j] = gen(j);
    std::sort(th.begin(), th.end());

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> uang(0.0, 2 * kPi);

    RegularityResult out;
    out.radii = radii;
    out.per_radius_min.assign(radii.size(), 1e300);
    out.per_radius_max.assign(radii.size(), -1e300);

    // count samples within visual distance r of angle c: the ball is an
    // angular interval around c (monotone d), found by binary search
    auto ball_count = [&](double c, double r) -> std::size_t {
        // half-width by bisection on angular separation
        double lo = 0, hi = kPi;
        if (ctx.visual_fast(c, c + hi) <= r) {
            lo = hi;
        } else {
            for (int it = 0; it < 60; ++it) {
                double mid = (lo + hi) / 2;
                if (ctx.visual_fast(c, c + mid) <= r)
                    lo = mid;
                else
                    hi = mid;
            }
        }
        double halfw = lo;
        // count angles in [c - halfw, c + halfw] mod 2pi
        auto count_leq = [&](double a, double b) -> std::size_t {
            // count th in [a, b], 0 <= a <= b <= 2pi
            auto i1 = std::lower_bound(th.begin(), th.end(), a);
            auto i2 = std::upper_bound(th.begin(), th.end(), b);
            return static_cast<std::size_t>(i2 - i1);
        };
        double a = c - halfw, b = c + halfw;
        if (halfw >= kPi) return th.size();
        if (a < 0)
            return count_leq(0, b) + count_leq(a + 2 * kPi, 2 * kPi);
        if (b > 2 * kPi)
            return count_leq(a, 2 * kPi) + count_leq(0, b - 2 * kPi);
        return count_leq(a, b);
    };

    for (std::size_t ci = 0; ci < n_centers; ++ci) {
        double c = uang(rng);
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            double r = radii[ri];
            double mu = static_cast<double>(ball_count(c, r)) / n_sample;
            double ratio = mu / std::pow(r, s);
            out.ratios.push_back(ratio);
            out.per_radius_min[ri] = std::min(out.per_radius_min[ri], ratio);
            out.per_radius_max[ri] = std::max(out.per_radius_max[ri], ratio);
        }
    }
    double mn = 1e300, mx = -1e300;
    for (double v : out.ratios) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    out.spread = mn > 0 ? mx / mn : std::numeric_limits<double>::infinity();
    return out;
}

double arc_halfwidth_for_diameter(const VisualMetricContext& ctx, double diam) {
    double k = ctx.k();
    if (ctx.metric().is_flat()) {
        // dhat = tan(dtheta/4)^{1/k}
        return 2.0 * std::atan(std::pow(diam, k));
    }
    double lo = 0, hi = kPi / 2;
    for (int it = 0; it < 60; ++it) {
        double mid = (lo + hi) / 2;
        if (ctx.visual_fast(0.0, 2 * mid) < diam)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

ExpansionResult expansion_check(const VisualMetricContext& ctx, Arc N,
                                std::size_t pairs, double r0, std::uint64_t seed) {
    if (ctx.variant() != VisualVariant::GeodesicDistance)
        throw InvalidArgument("expansion_check: requires the d-hat variant");
    double r = ctx.visual_fast(N.theta1, N.theta2);
    if (!(r > 0) || r >= r0)
        throw InvalidArgument("expansion_check: arc diameter must be in (0, r0)");

    const ConformalMetric& m = ctx.metric();
    double R = ctx.dhat_exponent_fast(N.theta1, N.theta2);
    Complex foot = origin_foot(N.theta1, N.theta2);
    auto [gamma, inW] = m.group().locate_in_domain(foot);

    ExpansionResult out;
    out.gamma = gamma;
    out.R = R;
    out.r = r;

    std::mt19937_64 rng(seed);
    double lo = N.theta1, span = N.theta2 - N.theta1;
    // canonical short-arc parameterization
    if (std::abs(span) > kPi) span += span > 0 ? -2 * kPi : 2 * kPi;
    std::uniform_real_distribution<double> upos(0.0, 1.0);

    auto factor = [&](double x, double y) {
        double gx = gamma.act_angle(x), gy = gamma.act_angle(y);
        return r * ctx.visual_fast(gx, gy) / ctx.visual_fast(x, y);
    };
    out.normalized_factors.push_back(factor(N.theta1, N.theta2));  // endpoints
    for (std::size_t i = 1; i < pairs; ++i) {
        double x = lo + span * upos(rng);
        double y = lo + span * upos(rng);
        if (angular_distance(x, y) < 1e-10) continue;  // degenerate, excluded
        out.normalized_factors.push_back(factor(x, y));
    }
    return out;
}

std::string ExpansionBandReport::to_json() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"band\": [%.17g, %.17g], \"violations\": %zu, "
                  "\"holdout_fraction_in\": %.17g}",
                  band_lo, band_hi, holdout_violations, holdout_fraction_in);
    return buf;
}

ExpansionBandReport expansion_band_experiment(const VisualMetricContext& ctx,
                                              const std::vector<double>& fit_scales,
                                              double holdout_scale,
                                              std::size_t arcs_per_scale,
                                              std::size_t pairs_per_arc, double r0,
                                              std::uint64_t seed,
                                              double safety_margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uang(0.0, 2 * kPi);

    auto run_scale = [&](double scale, std::vector<double>& factors) {
        BandScaleStats st;
        st.scale = scale;
        st.min = 1e300;
        st.max = -1e300;
        double halfw = arc_halfwidth_for_diameter(ctx, scale);
        for (std::size_t a = 0; a < arcs_per_scale; ++a) {
            double c = uang(rng);
            Arc N{c - halfw, c + halfw};
            ExpansionResult res = expansion_check(ctx, N, pairs_per_arc, r0, rng());
            for (double f : res.normalized_factors) {
                factors.push_back(f);
                st.min = std::min(st.min, f);
                st.max = std::max(st.max, f);
            }
        }
        st.count = factors.size();
        return st;
    };

    ExpansionBandReport report;
    double lo = 1e300, hi = -1e300;
    for (double s : fit_scales) {
        std::vector<double> fs;
        BandScaleStats st = run_scale(s, fs);
        report.fit_scales.push_back(st);
        lo = std::min(lo, st.min);
        hi = std::max(hi, st.max);
    }
    report.band_lo = lo * std::exp(-safety_margin);
    report.band_hi = hi * std::exp(safety_margin);

    std::vector<double> held;
    report.holdout = run_scale(holdout_scale, held);
    std::size_t in = 0;
    for (double f : held)
        if (f >= report.band_lo && f <= report.band_hi) ++in;
    report.holdout_violations = held.size() - in;
    report.holdout_fraction_in =
        held.empty() ? 0.0 : static_cast<double>(in) / held.size();
    return report;
}

}  // namespace qc
