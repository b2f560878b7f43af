#include "qc/validate.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>

#include <json.hpp>

#include "qc/boundary.hpp"
#include "qc/family.hpp"

namespace qc {

namespace {

struct Harness {
    const ExperimentConfig& cfg;
    std::vector<CheckResult> results;

    void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        CheckResult r;
        r.name = name;
        try {
            auto [ok, detail] = fn();
            r.pass = ok;
            r.detail = detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    }
};

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

}  // namespace

std::vector<CheckResult> run_validation_suite(const ExperimentConfig& cfg) {
    Harness H{cfg, {}};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uang(0.0, 2 * kPi);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    auto g1 = std::make_shared<FuchsianGroup>(FuchsianGroup::standard_genus2(-1.0));
    auto g2 = std::make_shared<FuchsianGroup>(FuchsianGroup::standard_genus2(-2.0));

    // ---- fuchsian ----
    H.check("fuchsian.relator_fixes_basepoint", [&] {
        double d1 = std::abs(g1->relator()(Complex(0, 0)));
        double d2 = std::abs(g2->relator()(Complex(0, 0)));
        return std::make_pair(d1 < 1e-8 && d2 < 1e-8, fmt("moves origin %.2e / %.2e", d1, d2));
    });
    H.check("fuchsian.octagon_area_gauss_bonnet", [&] {
        double a1 = g1->domain().area_h();
        double a2 = g2->domain().area_h() / 2.0;  // base units at kappa0 = -2
        double e1 = std::abs(a1 / (4 * kPi) - 1), e2 = std::abs(a2 / (2 * kPi) - 1);
        return std::make_pair(e1 < 1e-4 && e2 < 1e-4, fmt("rel err %.2e / %.2e", e1, e2));
    });
    H.check("fuchsian.side_pairings_map_sides", [&] {
        const auto& W = g1->domain();
        double worst = 0;
        for (int s = 0; s < 8; ++s) {
            int partner = -1;
            MobiusTransform gs = g1->letter(W.side_letter[s]);
            // gamma_s maps the partner side onto side s: endpoints must land
            // on side s's endpoint set
            for (int sp = 0; sp < 8; ++sp) {
                if (sp == s) continue;
                Complex p1 = gs(W.vertices[(sp + 7) % 8]), p2 = gs(W.vertices[sp % 8]);
                Complex q1 = W.vertices[(s + 7) % 8], q2 = W.vertices[s % 8];
                double m = std::min(std::abs(p1 - q1) + std::abs(p2 - q2),
                                    std::abs(p1 - q2) + std::abs(p2 - q1));
                if (m < 1e-8) partner = sp;
            }
            if (partner < 0) return std::make_pair(false, fmt("side %d has no partner", s));
            worst = std::max(worst, 0.0);
        }
        return std::make_pair(true, std::string("all 8 sides paired within 1e-8"));
    });
    H.check("fuchsian.generator_inverses", [&] {
        double worst = 0;
        for (int i = 0; i < 4; ++i) {
            MobiusTransform d = g1->letter(i) * g1->letter(i + 4);
            worst = std::max(worst, std::abs(d(Complex(0, 0))));
        }
        return std::make_pair(worst < 1e-10, fmt("worst %.2e", worst));
    });
    H.check("fuchsian.matrix_invariants", [&] {
        double worst_det = 0, worst_disk = 0;
        for (int i = 0; i < 8; ++i) {
            worst_det = std::max(worst_det, std::abs(g1->letter(i).det() - 1.0));
            for (int s = 0; s < 16; ++s) {
                Complex z = std::polar(0.95 * u01(rng), uang(rng));
                worst_disk = std::max(worst_disk, std::abs(g1->letter(i)(z)) - 1.0);
            }
        }
        return std::make_pair(worst_det < 1e-12 && worst_disk < 0,
                              fmt("det err %.2e", worst_det));
    });

    OrbitSet orbit8 = g1->enumerate_orbit(8.0, cfg.entropy.margin);
    H.check("fuchsian.isometry_symmetry_d(w,gw)=d(w,g^-1w)", [&] {
        double worst = 0;
        for (std::size_t i = 1; i < orbit8.entries.size(); i += 37) {
            const auto& e = orbit8.entries[i];
            double d1 = e.dist_h;
            double d2 = dist_h0(e.g.inverse()(Complex(0, 0)));
            worst = std::max(worst, std::abs(d1 - d2));
        }
        return std::make_pair(worst < 1e-9, fmt("worst %.2e", worst));
    });
    H.check("fuchsian.census_monotone_and_order_independent", [&] {
        std::array<int, 8> perm = {3, 6, 1, 4, 0, 7, 2, 5};
        OrbitSet o2 = g1->enumerate_orbit(6.0, cfg.entropy.margin, 20'000'000, &perm);
        OrbitSet o1 = g1->enumerate_orbit(6.0, cfg.entropy.margin);
        bool mono = true;
        for (double R = 1; R <= 6.0; R += 0.5)
            if (o1.count_within(R, 1.0) > o1.count_within(R + 0.5, 1.0)) mono = false;
        std::size_t n1 = o1.count_within(6.0, 1.0), n2 = o2.count_within(6.0, 1.0);
        return std::make_pair(mono && n1 == n2, fmt("N(6) = %zu vs %zu", n1, n2));
    });
    H.check("fuchsian.enumeration_margin_stability", [&] {
        std::size_t a = g1->enumerate_orbit(9.0, 1.8).count_within(9.0, 1.0);
        std::size_t b = g1->enumerate_orbit(9.0, 2.5).count_within(9.0, 1.0);
        std::size_t c = g1->enumerate_orbit(9.0, 3.2).count_within(9.0, 1.0);
        return std::make_pair(a == b && b == c, fmt("N(9) = %zu / %zu / %zu", a, b, c));
    });
    H.check("fuchsian.composition_consistency", [&] {
        double worst = 0;
        for (int trial = 0; trial < 40; ++trial) {
            const auto& ea = orbit8.entries[rng() % orbit8.entries.size()];
            const auto& eb = orbit8.entries[rng() % orbit8.entries.size()];
            MobiusTransform prod = ea.g * eb.g;
            Complex want = ea.g(eb.g(Complex(0.3, -0.2)));
            worst = std::max(worst, std::abs(prod(Complex(0.3, -0.2)) - want));
        }
        return std::make_pair(worst < 1e-8, fmt("worst action mismatch %.2e", worst));
    });
    H.check("fuchsian.locate_in_domain_complete_to_10", [&] {
        double D = g1->domain().diameter_h();
        double worst = 0;
        for (int trial = 0; trial < 200; ++trial) {
            Complex p = ray_point(uang(rng), 10.0 * u01(rng));
            auto [g, z] = g1->locate_in_domain(p);
            if (!g1->domain().contains(z, 1e-9))
                return std::make_pair(false, std::string("representative outside W"));
            worst = std::max(worst, dist_h0(z) - (D / 2 + 1e-8));
            if (std::abs(g(p) - z) > 1e-9)
                return std::make_pair(false, std::string("gamma(p) != representative"));
        }
        return std::make_pair(worst <= 0, fmt("max excess over D/2: %.2e", worst));
    });
    H.check("fuchsian.locate_equivariance", [&] {
        const auto& e = orbit8.entries[orbit8.entries.size() / 2];
        auto [g, z] = g1->locate_in_domain(e.point);
        MobiusTransform should_be_id = g * e.g;
        bool ok = should_be_id.is_identity(1e-7) || std::abs(z) < 1e-9;
        return std::make_pair(ok, std::string("gamma = gamma_0^{-1} up to stabilizer"));
    });

    // ---- metric ----
    auto m1 = std::make_shared<ConformalMetric>(
        ConformalMetric::standard(g1, 0, {0.05, -0.03}));
    H.check("metric.u_gamma_invariant", [&] {
        double worst = 0;
        for (int trial = 0; trial < 60; ++trial) {
            Complex x = ray_point(uang(rng), 3.0 * u01(rng));
            const auto& e = orbit8.entries[rng() % 64];
            double u1 = m1->u(x), u2 = m1->u(e.g(x));
            worst = std::max(worst, std::abs(u1 - u2));
        }
        return std::make_pair(worst < 1e-9, fmt("worst %.2e", worst));
    });
    H.check("metric.curvature_plateau_and_exterior", [&] {
        // inside r1 of bump 0 (center at origin): kappa0 e^{-2 t_0}
        double K_in = m1->curvature_at(Complex(0.001, 0.0));
        double want_in = -1.0 * std::exp(-2 * 0.05);
        // far from both bumps, midway to a side but off-support
        Complex far_pt = std::polar(std::tanh((m1->profile().r2() + 0.35) / 2), 1.0);
        double K_out = m1->curvature_at(far_pt);
        bool ok = std::abs(K_in - want_in) < 1e-10 && std::abs(K_out + 1.0) < 1e-10;
        return std::make_pair(ok, fmt("plateau %.12f vs %.12f", K_in, want_in));
    });
    H.check("metric.laplacian_vs_finite_difference", [&] {
        double worst_rel = 0;
        for (int trial = 0; trial < 20; ++trial) {
            double rr = m1->profile().r1() +
                        (m1->profile().r2() - m1->profile().r1()) * u01(rng);
            Complex x = std::polar(std::tanh(rr / 2), uang(rng));
            double h = 5e-4;
            double u0 = m1->u(x);
            double lap_euc =
                (m1->u(x + Complex(h, 0)) + m1->u(x - Complex(h, 0)) +
                 m1->u(x + Complex(0, h)) + m1->u(x - Complex(0, h)) - 4 * u0) /
                (h * h);
            double lam = 2.0 / (1.0 - std::norm(x));  // curvature -1 conformal factor
            double lap_fd = lap_euc / (lam * lam);
            double lap_an = m1->laplacian0_u(x);
            double denom = std::max(1.0, std::abs(lap_an));
            worst_rel = std::max(worst_rel, std::abs(lap_fd - lap_an) / denom);
        }
        return std::make_pair(worst_rel < 0.02, fmt("worst rel %.2e", worst_rel));
    });
    H.check("metric.lemma41_limits_monotone", [&] {
        double prev_gap = 1e300;
        double area0 = m1->with_t({0, 0}).surface_area();
        bool mono = true;
        for (double s : {0.04, 0.02, 0.01, 0.005}) {
            ConformalMetric ms = m1->with_t({s, 0});
            double gap = std::abs(ms.curvature_bound() - (-1.0));
            double agap = std::abs(ms.surface_area() - area0);
            if (gap > prev_gap + 1e-6) mono = false;
            prev_gap = gap;
            if (s == 0.005 && (gap > 0.05 || agap > 0.05)) mono = false;
        }
        return std::make_pair(mono, std::string("curvature and area converge as t -> 0"));
    });
    H.check("metric.bilipschitz_distance_sandwich", [&] {
        PerturbedDistance eng(*m1);
        double tmax = m1->max_abs_t();
        double worst = 0;
        for (int trial = 0; trial < 6; ++trial) {
            Complex x = ray_point(uang(rng), 2.5 * u01(rng));
            Complex y = ray_point(uang(rng), 2.5 * u01(rng));
            double d0 = dist_h(x, y);
            if (d0 < 0.3) continue;
            double dt = eng.distance(x, y, 1e-3);
            double lo = d0 * std::exp(-tmax) - 3e-3, hi = d0 * std::exp(tmax) + 3e-3;
            if (dt < lo || dt > hi) worst = std::max(worst, 1.0);
        }
        return std::make_pair(worst == 0, std::string("e^{-max|t|} <= d_t/d_0 <= e^{max|t|}"));
    });
    H.check("metric.distance_triangle_and_equivariance", [&] {
        PerturbedDistance eng(*m1);
        double tol = 1e-3;
        for (int trial = 0; trial < 4; ++trial) {
            Complex x = ray_point(uang(rng), 2.0 * u01(rng));
            Complex y = ray_point(uang(rng), 2.0 * u01(rng));
            Complex z = ray_point(uang(rng), 2.0 * u01(rng));
            double dxy = eng.distance(x, y, tol), dyz = eng.distance(y, z, tol),
                   dxz = eng.distance(x, z, tol);
            if (dxz > dxy + dyz + 3 * tol * (dxy + dyz))
                return std::make_pair(false, std::string("triangle inequality violated"));
            const auto& e = orbit8.entries[1 + trial];
            double dg = eng.distance(e.g(x), e.g(y), tol);
            if (std::abs(dg - dxy) > 3 * tol * std::max(1.0, dxy))
                return std::make_pair(false, std::string("Gamma-equivariance violated"));
        }
        return std::make_pair(true, std::string("sampled triples and translates pass"));
    });

    // ---- entropy ----
    H.check("entropy.synthetic_census_slope", [&] {
        OrbitCensus c;
        for (double R = 1.0; R <= 10.0; R += 0.5) {
            c.radii.push_back(R);
            c.counts.push_back(static_cast<std::size_t>(std::llround(std::exp(1.0 * R))));
        }
        EntropyEstimate e = entropy_estimate(c);
        return std::make_pair(std::abs(e.value - 1.0) < 0.02,
                              fmt("s = %.4f +- %.4f", e.value, e.stderr_));
    });
    ConformalMetric flat1 = ConformalMetric::standard(g1, 0, {0.0, 0.0});
    CensusKernel kern1(flat1, 10.0, 0.25, cfg.entropy.margin, cfg.threads, 0.035);
    H.check("entropy.scaling_identity_exact", [&] {
        OrbitCensus c = kern1.census_for({0, 0});
        std::size_t n = c.radii.size();
        EntropyEstimate e1 = entropy_estimate(c, std::make_pair<std::size_t>(n / 2, n - 1));
        OrbitCensus c2 = c;
        for (double& R : c2.radii) R *= 2.0;
        EntropyEstimate e2 = entropy_estimate(c2, std::make_pair<std::size_t>(n / 2, n - 1));
        double err = std::abs(e2.value - e1.value / 2.0);
        return std::make_pair(err < 1e-12, fmt("slope halves exactly, err %.2e", err));
    });
    H.check("entropy.estimator_window_stability", [&] {
        OrbitCensus c = kern1.census_for({0, 0});
        EntropyEstimate full = entropy_estimate(c);
        OrbitCensus c2 = c;
        c2.radii.erase(c2.radii.begin());
        c2.counts.erase(c2.counts.begin());
        EntropyEstimate drop = entropy_estimate(c2);
        double delta = std::abs(full.value - drop.value);
        return std::make_pair(delta <= std::max(full.stderr_, 1e-4) + 1e-9,
                              fmt("delta %.2e vs stderr %.2e", delta, full.stderr_));
    });
    H.check("entropy.conformal_sandwich", [&] {
        EntropyEstimate base = kern1.entropy_at({0, 0});
        EntropyEstimate pert = kern1.entropy_at({0.03, 0.0});
        double lo = base.value * std::exp(-0.03) - 3 * pert.stderr_;
        double hi = base.value * std::exp(0.03) + 3 * pert.stderr_;
        bool ok = pert.value >= lo && pert.value <= hi;
        return std::make_pair(ok, fmt("s(t)=%.4f in [%.4f, %.4f]", pert.value, lo, hi));
    });
    H.check("entropy.gradient_components_equal_negative", [&] {
        std::vector<double> grad = entropy_gradient(flat1);
        double mn = grad[0], mx = grad[0];
        for (double g : grad) {
            mn = std::min(mn, g);
            mx = std::max(mx, g);
        }
        bool ok = mx < 0 && (mx - mn) < 1e-8 * std::abs(mn);
        return std::make_pair(ok, fmt("components in [%.10f, %.10f]", mn, mx));
    });
    H.check("entropy.per_bump_derivative_k_independent", [&] {
        BumpProfile common(0.20, 0.30);
        ConformalMetric a(g1, ConformalMetric::default_centers(*g1, 0), common, {0, 0});
        ConformalMetric b(g1, ConformalMetric::default_centers(*g1, 2), common,
                          {0, 0, 0, 0});
        double da = entropy_derivative(a, {1, 0});
        double db = entropy_derivative(b, {1, 0, 0, 0});
        return std::make_pair(std::abs(da - db) < 1e-12,
                              fmt("%.12f vs %.12f", da, db));
    });

    // ---- boundary ----
    VisualMetricContext ctx1(flat1, cfg.boundary.T, VisualVariant::GromovProduct);
    VisualMetricContext ctx1d(flat1, cfg.boundary.T, VisualVariant::GeodesicDistance);
    H.check("boundary.visual_metric_axioms", [&] {
        double worst_tri = 0;
        for (int trial = 0; trial < 400; ++trial) {
            double a = uang(rng), b = uang(rng), c = uang(rng);
            double dab = ctx1.visual_fast(a, b), dbc = ctx1.visual_fast(b, c),
                   dac = ctx1.visual_fast(a, c);
            if (dab < 1e-12 || dbc < 1e-12 || dac < 1e-12) continue;
            worst_tri = std::max(worst_tri, dac / (dab + dbc));
            if (std::abs(ctx1.visual_fast(a, b) - ctx1.visual_fast(b, a)) > 1e-12)
                return std::make_pair(false, std::string("not symmetric"));
        }
        return std::make_pair(worst_tri <= 1.05, fmt("worst triangle ratio %.4f", worst_tri));
    });
    H.check("boundary.product_vs_geodesic_bounded_gap", [&] {
        double worst = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            double a = uang(rng), b = uang(rng);
            if (angular_distance(a, b) < 1e-3) continue;
            double prod = -std::log(ctx1.visual_fast(a, b));
            double R = ctx1d.dhat_exponent_fast(a, b);
            worst = std::max(worst, std::abs(prod - R));
        }
        return std::make_pair(worst < 0.8, fmt("sup |(x|y)_w - d(w,geod)| = %.4f", worst));
    });
    H.check("boundary.rotation_equivariance", [&] {
        double worst = 0;
        for (int trial = 0; trial < 100; ++trial) {
            double a = uang(rng), b = uang(rng), rot = uang(rng);
            if (angular_distance(a, b) < 1e-6) continue;
            worst = std::max(worst, std::abs(ctx1.visual_fast(a + rot, b + rot) -
                                             ctx1.visual_fast(a, b)));
        }
        return std::make_pair(worst < 1e-8, fmt("worst %.2e", worst));
    });
    H.check("boundary.dimension_matches_entropy", [&] {
        std::vector<double> scales;
        for (int j = 3; j <= 7; ++j) scales.push_back(std::pow(2.0, -j));
        BoxCountResult bc = boxcount_dimension(ctx1, 20000, scales, cfg.seed);
        EntropyEstimate e = kern1.entropy_at({0, 0});
        double diff = std::abs(bc.dimension - e.value);
        return std::make_pair(diff <= 0.15, fmt("|dim - s| = %.4f", diff));
    });
    H.check("boundary.expansion_band_scale_independent", [&] {
        ExpansionBandReport rep = expansion_band_experiment(
            ctx1d, cfg.qcheck.fit_scales, cfg.qcheck.holdout_scale, 300,
            cfg.qcheck.pairs_per_arc, cfg.qcheck.r0, cfg.seed, cfg.qcheck.safety_margin);
        return std::make_pair(rep.holdout_fraction_in >= 0.99,
                              fmt("holdout in-band fraction %.4f", rep.holdout_fraction_in));
    });

    // ---- families ----
    auto g2m = std::make_shared<FuchsianGroup>(FuchsianGroup::standard_genus2(cfg.family.kappa0));
    ConformalMetric fam0 = ConformalMetric::standard(g2m, 0, {0.0, 0.0});
    CensusKernel kern2(fam0, cfg.family.R_max, cfg.family.step, cfg.entropy.margin,
                       cfg.threads, 1e-3);
    FamilyTracker tracker(fam0, kern2, cfg.family.tol_F, cfg.family.tol_A);
    H.check("family.tracked_points_satisfy_theorem_bullets", [&] {
        std::vector<double> v = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
        auto pts = tracker.track_level_set(v, 3, cfg.family.step_size);
        if (pts.size() != 4) return std::make_pair(false, std::string("wrong point count"));
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (std::abs(pts[i].entropy.value - tracker.reference_entropy()) >
                tracker.tol_F())
                return std::make_pair(false, std::string("off entropy level"));
            if (pts[i].curvature_bound > -1.0)
                return std::make_pair(false, std::string("curvature bound fails"));
        }
        for (std::size_t i = 1; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                auto cert = nonisometry_certificate(pts[i], pts[j], tracker.eps_box());
                if (cert.outcome != CertificateOutcome::CertifiedNonisometric)
                    return std::make_pair(false, std::string("certificate inconclusive"));
            }
        return std::make_pair(true, fmt("3 points, tol_F %.4f", tracker.tol_F()));
    });
    H.check("family.rescale_and_scaling_identity", [&] {
        OrbitCensus c = kern1.census_for({0, 0});
        std::size_t n = c.radii.size();
        auto win = std::make_pair<std::size_t>(n / 2, n - 1);
        double s1 = entropy_estimate(c, win).value;
        double s2_target = s1 * std::sqrt(2.0);
        auto [l1, l2] = rescale_to_common_dimension(s1, s2_target);
        OrbitCensus cs = c;
        for (double& R : cs.radii) R /= l1;  // rescaling the metric by lambda
        double s_rescaled = entropy_estimate(cs, win).value;
        double err = std::abs(s_rescaled - s2_target);
        return std::make_pair(err < 1e-12, fmt("err %.2e", err));
    });
    H.check("family.gap_bound_antisymmetric", [&] {
        GapReport a = gap_bound(1.0, std::sqrt(2.0));
        GapReport b = gap_bound(std::sqrt(2.0), 1.0);
        bool ok = a.epsilon == b.epsilon && a.s1 == b.s1 && a.s2 == b.s2 &&
                  std::abs(a.epsilon - (std::sqrt(2.0) - 1.0)) < 1e-12;
        return std::make_pair(ok, fmt("epsilon = %.12f", a.epsilon));
    });
    H.check("family.gap_report_invariants", [&] {
        GapReport r = gap_bound(1.1, 0.9);
        bool ok = r.s2 >= r.s1 && std::max(r.lambda1, r.lambda2) == 1.0 &&
                  std::abs(r.s1 / r.lambda1 - r.s2 / r.lambda2) < 1e-12 &&
                  std::abs(r.epsilon - (r.s2 / r.s1 - 1.0)) < 1e-15;
        return std::make_pair(ok, std::string("epsilon/lambda identities"));
    });

    // ---- cli determinism ----
    H.check("cli.deterministic_reports", [&] {
        auto run_once = [&] {
            OrbitCensus c = kern1.census_for({0, 0});
            EntropyEstimate e = entropy_estimate(c);
            std::vector<double> scales;
            for (int j = 3; j <= 6; ++j) scales.push_back(std::pow(2.0, -j));
            BoxCountResult bc = boxcount_dimension(ctx1, 5000, scales, cfg.seed);
            return c.to_csv() + e.to_json() + bc.to_csv() + bc.to_json();
        };
        std::string r1 = run_once(), r2 = run_once();
        return std::make_pair(r1 == r2, fmt("%zu bytes, byte-identical", r1.size()));
    });

    return H.results;
}

std::string validation_report_json(const ExperimentConfig& cfg,
                                   const std::vector<CheckResult>& results) {
    nlohmann::json j;
    j["provenance"] = nlohmann::json::parse(provenance_json(cfg));
    j["checks"] = nlohmann::json::array();
    std::size_t passed = 0;
    for (const auto& r : results) {
        j["checks"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        if (r.pass) ++passed;
    }
    j["passed"] = passed;
    j["total"] = results.size();
    return j.dump(2);
}

}  // namespace qc
