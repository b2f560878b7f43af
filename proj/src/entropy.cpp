#include "qc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qc/parallel.hpp"

namespace qc {

namespace {

struct LineFit {
    double slope = 0, intercept = 0, stderr_slope = 0, max_resid = 0;
    std::vector<double> residuals;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys,
                 std::size_t lo, std::size_t hi) {
    LineFit f;
    std::size_t n = hi - lo + 1;
    double sx = 0, sy = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    f.residuals.reserve(n);
    for (std::size_t i = lo; i <= hi; ++i) {
        double r = ys[i] - (f.intercept + f.slope * xs[i]);
        f.residuals.push_back(r);
        f.max_resid = std::max(f.max_resid, std::abs(r));
        ss += r * r;
    }
    if (n > 2) f.stderr_slope = std::sqrt(ss / (n - 2) / sxx);
    return f;
}

}  // namespace

std::string OrbitCensus::to_csv() const {
    std::string s = "R,N\n";
    char buf[64];
    for (std::size_t i = 0; i < radii.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%zu\n", radii[i], counts[i]);
        s += buf;
    }
    return s;
}

std::string EntropyEstimate::to_json() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"s\": %.17g, \"stderr\": %.17g, \"window\": [%.17g, %.17g]}",
                  value, stderr_, window_lo, window_hi);
    return buf;
}

CensusKernel::CensusKernel(const ConformalMetric& metric, double R_max, double step,
                           double margin_h, int threads, double t_hint,
                           std::size_t budget, bool skip_integrals)
    : metric_(&metric), R_max_(R_max), step_(step), t_hint_(t_hint) {
    if (!(step > 0)) throw InvalidArgument("orbit_census: step must be positive");
    if (R_max > metric.mesh_range())
        throw InvalidArgument("orbit_census: R_max exceeds the meshed region");

    double R_enum = R_max * std::exp(t_hint_);
    OrbitSet orbit = metric.group().enumerate_orbit(R_enum, margin_h, budget);
    double k = metric.k();
    double cut_h = R_enum * k + 1e-12;
    for (const auto& e : orbit.entries) {
        if (e.dist_h > cut_h) break;  // sorted
        d0_.push_back(e.dist_h / k);
        points_.push_back(e.point);
    }

    if (!skip_integrals && metric.centers().size() > 0) {
        bumpI_.assign(d0_.size(), {});
        bumpI_[0].assign(metric.centers().size(), 0.0);  // identity: zero length
        parallel_for(d0_.size() - 1, threads, [&](std::size_t j) {
            std::size_t i = j + 1;
            bumpI_[i] = bump_line_integrals(*metric_, Complex(0, 0), points_[i]);
        });
    }
}

void CensusKernel::maybe_calibrate(const std::vector<double>& t) const {
    double maxt = 0;
    for (double v : t) maxt = std::max(maxt, std::abs(v));
    if (maxt <= 0.01) {
        calib_c0_ = calib_c1_ = 0;
        calib_t_ = t;
        calib_note_.clear();
        return;
    }
    if (calib_t_ == t) return;

    // stratified subsample over depth; honest mesh distances
    ConformalMetric pm = metric_->with_t(t);
    PerturbedDistance engine(pm);
    std::vector<double> xs, ys;
    std::size_t n = d0_.size();
    const int samples = 12;
    for (int s = 0; s < samples; ++s) {
        double target = 2.0 + (std::min(R_max_, 11.0) - 2.0) * s / (samples - 1);
        auto it = std::lower_bound(d0_.begin(), d0_.end(), target);
        std::size_t i = std::min<std::size_t>(it - d0_.begin(), n - 1);
        if (i == 0) continue;
        double approx = d0_[i];
        for (std::size_t b = 0; b < t.size(); ++b) approx += t[b] * bumpI_[i][b];
        double honest = engine.distance(Complex(0, 0), points_[i], 5e-4);
        xs.push_back(d0_[i]);
        ys.push_back(honest - approx);
    }
    // least squares Delta = c0 + c1 d
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = xs.size();
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double det = m * sxx - sx * sx;
    calib_c1_ = (m * sxy - sx * sy) / det;
    calib_c0_ = (sy - calib_c1_ * sx) / m;
    double rms = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = ys[i] - (calib_c0_ + calib_c1_ * xs[i]);
        rms += r * r;
    }
    rms = std::sqrt(rms / m);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "second-order bias correction %.3g + %.3g d (rms residual %.2g) "
                  "fitted on %zu mesh distances",
                  calib_c0_, calib_c1_, rms, m);
    calib_note_ = buf;
    calib_t_ = t;
}

std::vector<double> CensusKernel::distances_for(const std::vector<double>& t) const {
    if (t.size() != metric_->centers().size())
        throw InvalidArgument("census: parameter vector has wrong length");
    double maxt = 0;
    for (double v : t) maxt = std::max(maxt, std::abs(v));
    if (maxt > t_hint_ + 1e-12)
        throw InvalidArgument("census: |t| exceeds the kernel's enumeration hint");

    std::vector<double> d(d0_.size());
    bool flat = maxt == 0.0;
    if (flat) {
        d = d0_;
        return d;
    }
    if (bumpI_.empty())
        throw InvalidArgument("census: kernel built without bump integrals");
    maybe_calibrate(t);
    for (std::size_t i = 0; i < d0_.size(); ++i) {
        double v = d0_[i];
        for (std::size_t b = 0; b < t.size(); ++b) v += t[b] * bumpI_[i][b];
        if (i > 0) v += calib_c0_ + calib_c1_ * d0_[i];
        d[i] = v;
    }
    return d;
}

OrbitCensus CensusKernel::census_for(const std::vector<double>& t,
                                     double grid_offset) const {
    std::vector<double> d = distances_for(t);
    std::sort(d.begin(), d.end());

    OrbitCensus c;
    c.metric_json = metric_->with_t(t).to_json();
    for (int j = 1;; ++j) {
        double R = step_ * j + grid_offset;
        if (R > R_max_ + 1e-12) break;
        if (R <= 0) continue;
        auto it = std::upper_bound(d.begin(), d.end(), R + 1e-12);
        c.radii.push_back(R);
        c.counts.push_back(static_cast<std::size_t>(it - d.begin()));
    }
    return c;
}

EntropyEstimate CensusKernel::entropy_at(const std::vector<double>& t,
                                         double grid_offset) const {
    return entropy_estimate(census_for(t, grid_offset));
}

OrbitCensus orbit_census(const ConformalMetric& metric, double R_max, double step,
                         double margin_h, int threads) {
    bool flat = metric.is_flat();
    CensusKernel kernel(metric, R_max, step, margin_h, threads,
                        flat ? 0.0 : metric.max_abs_t() + 1e-9, 20'000'000, flat);
    return kernel.census_for(metric.t());
}

EntropyEstimate entropy_estimate(const OrbitCensus& census,
                                 std::optional<std::pair<std::size_t, std::size_t>> window) {
    std::size_t n = census.radii.size();
    if (n < 6)
        throw InvalidArgument("entropy_estimate: census needs >= 6 radii");
    if (census.counts.back() < 10)
        throw InvalidArgument("entropy_estimate: need N >= 10 at the top radius");
    for (std::size_t i = 1; i < n; ++i)
        if (census.counts[i] < census.counts[i - 1])
            throw InvalidArgument("entropy_estimate: counts must be nondecreasing");

    std::vector<double> logN(n);
    for (std::size_t i = 0; i < n; ++i)
        logN[i] = std::log(static_cast<double>(std::max<std::size_t>(census.counts[i], 1)));

    EntropyEstimate est;
    est.diagnostics =
        "slope of log N(R); limsup of Bourdon(i) taken as a limit (cocompact)";

    if (window) {
        auto [lo, hi] = *window;
        if (hi >= n || lo + 3 > hi)
            throw InvalidArgument("entropy_estimate: bad explicit window");
        LineFit f = fit_line(census.radii, logN, lo, hi);
        est.value = f.slope;
        est.stderr_ = f.stderr_slope;
        est.window_lo = census.radii[lo];
        est.window_hi = census.radii[hi];
        est.residuals = f.residuals;
        est.diagnostics += "; explicit window";
        return est;
    }

    // largest suffix window with span >= 3 and max |residual| < 0.05
    double best_maxres = 1e300;
    for (std::size_t lo = 0; lo + 3 < n; ++lo) {
        if (census.radii[n - 1] - census.radii[lo] < 3.0 - 1e-12) break;
        LineFit f = fit_line(census.radii, logN, lo, n - 1);
        best_maxres = std::min(best_maxres, f.max_resid);
        if (f.max_resid < 0.05) {
            est.value = f.slope;
            est.stderr_ = f.stderr_slope;
            est.window_lo = census.radii[lo];
            est.window_hi = census.radii[n - 1];
            est.residuals = f.residuals;
            char buf[96];
            std::snprintf(buf, sizeof buf, "; auto window, max residual %.3g",
                          f.max_resid);
            est.diagnostics += buf;
            return est;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "no admissible window: best max residual %.3g (threshold 0.05)",
                  best_maxres);
    throw FitFailure("entropy_estimate: fit failure", buf);
}

double entropy_derivative(const ConformalMetric& metric_at_zero,
                          const std::vector<double>& direction) {
    if (!metric_at_zero.is_flat())
        throw InvalidArgument("entropy_derivative: evaluated at t = 0 only");
    if (direction.size() != metric_at_zero.centers().size())
        throw InvalidArgument("entropy_derivative: direction has wrong length");
    double k = metric_at_zero.k();
    double J = metric_at_zero.bump_area_integral();
    double area0 = 4 * kPi / (k * k);  // Gauss-Bonnet, genus 2
    double sum = 0;
    for (double e : direction) sum += e;
    return -k * J / area0 * sum;
}

std::vector<double> entropy_gradient(const ConformalMetric& metric_at_zero) {
    std::vector<double> e(metric_at_zero.centers().size(), 0.0);
    std::vector<double> g(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        e.assign(e.size(), 0.0);
        e[i] = 1.0;
        g[i] = entropy_derivative(metric_at_zero, e);
    }
    return g;
}

}  // namespace qc
