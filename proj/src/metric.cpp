#include "qc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace qc {

namespace {

// adaptive Simpson, absolute tolerance
double adapt_simpson(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double tol, int depth) {
    double m = (a + b) / 2;
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15;
    return adapt_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           adapt_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int depth = 22) {
    if (!(b > a)) return 0.0;
    double m = (a + b) / 2;
    return adapt_simpson(f, a, b, f(a), f(m), f(b), tol, depth);
}

}  // namespace

ConformalMetric::ConformalMetric(std::shared_ptr<const FuchsianGroup> group,
                                 std::vector<Complex> centers, BumpProfile profile,
                                 std::vector<double> t)
    : group_(std::move(group)),
      centers_(std::move(centers)),
      profile_(profile),
      t_(std::move(t)) {
    if (centers_.empty()) throw InvalidArgument("ConformalMetric: no centers");
    if (t_.size() != centers_.size())
        throw InvalidArgument("ConformalMetric: t and centers length mismatch");
    double k = group_->conformal_scale();

    // lifts of each center within reach of the closed fundamental domain
    double reach_h = group_->domain().circumradius_h + profile_.r2() * k + 0.25;
    OrbitSet ball = group_->enumerate_orbit((reach_h + group_->domain().circumradius_h) / k, 1.5);
    lifts_.resize(centers_.size());
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        for (const auto& e : ball.entries) {
            Complex q = e.g(centers_[i]);
            if (dist_h0(q) <= reach_h) lifts_[i].push_back(q);
        }
    }

    // minimal separation between distinct lifted supports (base units)
    double min_sep_h = 1e300;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        for (const auto& e : ball.entries) {
            for (std::size_t j = 0; j < centers_.size(); ++j) {
                Complex q = e.g(centers_[j]);
                double d = dist_h(centers_[i], q);
                if (i == j && d < 1e-9) continue;  // same lift
                min_sep_h = std::min(min_sep_h, d);
            }
        }
    }
    min_center_separation_ = min_sep_h / k;
    if (2 * profile_.r2() >= min_center_separation_)
        throw InvalidArgument("ConformalMetric: bump supports overlap (2 r2 >= min separation)");
    if (2 * profile_.r2() >= group_->systole())
        throw InvalidArgument("ConformalMetric: r2 must be below half the systole");
}

std::vector<Complex> ConformalMetric::default_centers(const FuchsianGroup& g, int k) {
    if (k < 0) throw InvalidArgument("default_centers: k must be >= 0");
    const FundamentalDomain& W = g.domain();
    std::vector<Complex> c = {Complex(0, 0)};
    if (k <= 1) {
        c.push_back(W.vertices[0]);
        if (k == 1) c.push_back(Complex(std::tanh(W.inradius_h / 2), 0.0));  // side-0 midpoint
    } else {
        double ring = 0.55 * W.inradius_h;
        for (int j = 0; j <= k; ++j)
            c.push_back(std::polar(std::tanh(ring / 2), 2 * kPi * j / (k + 1)));
    }
    return c;
}

BumpProfile ConformalMetric::default_profile(const FuchsianGroup& g,
                                             const std::vector<Complex>& centers) {
    double k = g.conformal_scale();
    OrbitSet ball = g.enumerate_orbit((2 * g.domain().circumradius_h + 1.0) / k, 1.5);
    double min_h = g.systole_h();
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (const auto& e : ball.entries)
            for (std::size_t j = 0; j < centers.size(); ++j) {
                Complex q = e.g(centers[j]);
                double d = dist_h(centers[i], q);
                if (i == j && d < 1e-9) continue;
                min_h = std::min(min_h, d);
            }
    double r2 = 0.4 * std::min(min_h / k, g.systole()) / 2.0;
    // Area(B(r1)) = 0.8 Area(B(r2)): cosh(k r1) - 1 = 0.8 (cosh(k r2) - 1)
    double r1 = std::acosh(1.0 + 0.8 * (std::cosh(k * r2) - 1.0)) / k;
    return BumpProfile(r1, r2);
}

ConformalMetric ConformalMetric::standard(std::shared_ptr<const FuchsianGroup> group,
                                          int k, std::vector<double> t) {
    auto centers = default_centers(*group, k);
    auto prof = default_profile(*group, centers);
    return ConformalMetric(std::move(group), std::move(centers), prof, std::move(t));
}

double ConformalMetric::max_abs_t() const {
    double m = 0;
    for (double v : t_) m = std::max(m, std::abs(v));
    return m;
}

bool ConformalMetric::is_flat() const { return max_abs_t() == 0.0; }

ConformalMetric ConformalMetric::with_t(std::vector<double> t) const {
    ConformalMetric m = *this;
    if (t.size() != t_.size())
        throw InvalidArgument("with_t: wrong parameter length");
    m.t_ = std::move(t);
    return m;
}

double ConformalMetric::u_in_domain(Complex z) const {
    double k = group_->conformal_scale();
    double acc = 0.0;
    double r2h = profile_.r2() * k;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        if (t_[i] == 0.0) continue;
        for (Complex q : lifts_[i]) {
            double dh = dist_h(z, q);
            if (dh < r2h) {
                acc += t_[i] * profile_.value(dh / k);
                break;  // supports of distinct lifts are disjoint
            }
        }
    }
    return acc;
}

void ConformalMetric::bump_values_in_domain(Complex z, double* out) const {
    double k = group_->conformal_scale();
    double r2h = profile_.r2() * k;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        out[i] = 0.0;
        for (Complex q : lifts_[i]) {
            double dh = dist_h(z, q);
            if (dh < r2h) {
                out[i] = profile_.value(dh / k);
                break;
            }
        }
    }
}

double ConformalMetric::u(Complex x) const {
    if (is_flat()) return 0.0;
    auto [g, z] = group_->locate_in_domain(x);
    return u_in_domain(z);
}

double ConformalMetric::laplacian0_u(Complex x) const {
    if (std::norm(x) >= 1.0)
        throw InvalidArgument("laplacian0_u: point outside the open disk");
    if (is_flat()) return 0.0;
    auto [g, z] = group_->locate_in_domain(x);
    double k = group_->conformal_scale();
    double r2h = profile_.r2() * k;
    double acc = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        if (t_[i] == 0.0) continue;
        for (Complex q : lifts_[i]) {
            double dh = dist_h(z, q);
            if (dh < r2h) {
                double r = dh / k;  // base radial distance
                double d1 = profile_.d1(r);
                double d2 = profile_.d2(r);
                // radial Laplace-Beltrami at curvature -k^2:
                // f'' + k coth(k r) f'
                double lap = d2 + (r > 0 ? k / std::tanh(k * r) * d1 : 0.0);
                acc += t_[i] * lap;
                break;
            }
        }
    }
    return acc;
}

double ConformalMetric::curvature_at(Complex x) const {
    if (std::norm(x) >= 1.0)
        throw InvalidArgument("curvature_at: point outside the open disk");
    if (is_flat()) return kappa0();
    auto [g, z] = group_->locate_in_domain(x);
    double k = group_->conformal_scale();
    double r2h = profile_.r2() * k;
    double uval = 0.0, lap = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        if (t_[i] == 0.0) continue;
        for (Complex q : lifts_[i]) {
            double dh = dist_h(z, q);
            if (dh < r2h) {
                double r = dh / k;
                uval += t_[i] * profile_.value(r);
                lap += t_[i] * (profile_.d2(r) +
                                (r > 0 ? k / std::tanh(k * r) * profile_.d1(r) : 0.0));
                break;
            }
        }
    }
    return std::exp(-2.0 * uval) * (kappa0() - lap);
}

namespace {

// sup over r in [r1, r2] and t in [-eps, eps] of e^{-2 t rho}(kappa0 - t Lap rho),
// certified by a Lipschitz remainder in r; the plateau and exterior are exact.
double shell_curvature_sup(const BumpProfile& p, double k, double kappa0, double ti,
                           int n = 4000) {
    double r1 = p.r1(), r2 = p.r2();
    double h = (r2 - r1) / n;
    double sup = -1e300;
    for (int i = 0; i <= n; ++i) {
        double r = r1 + i * h;
        double rho = p.value(r);
        double lap = p.d2(r) + k / std::tanh(k * r) * p.d1(r);
        sup = std::max(sup, std::exp(-2 * ti * rho) * (kappa0 - ti * lap));
    }
    // Lipschitz constant of K(r) in r
    double at = std::abs(ti);
    double lapmax = p.d2_bound() + k / std::tanh(k * r1) * p.d1_bound();
    double csch = 1.0 / std::sinh(k * r1);
    double dlapmax = p.d3_bound() + k / std::tanh(k * r1) * p.d2_bound() +
                     k * k * csch * csch * p.d1_bound();
    double lip = std::exp(2 * at) *
                 (2 * at * p.d1_bound() * (std::abs(kappa0) + at * lapmax) + at * dlapmax);
    return sup + lip * h / 2;
}

}  // namespace

double ConformalMetric::curvature_bound() const {
    double k0 = kappa0();
    if (is_flat()) return k0;
    double k = group_->conformal_scale();
    double sup = k0;  // off-support value
    for (double ti : t_) {
        if (ti == 0.0) continue;
        sup = std::max(sup, k0 * std::exp(-2 * ti));               // plateau
        sup = std::max(sup, shell_curvature_sup(profile_, k, k0, ti));  // shell
    }
    return sup;
}

double ConformalMetric::certified_epsilon_box() const {
    double k = group_->conformal_scale();
    double k0 = kappa0();

    auto curvature_ok = [&](double eps) {
        if (k0 * std::exp(-2 * eps) > -1.0) return false;
        // worst case over the sign/size of t on a single bump: scan t grid
        for (int j = -8; j <= 8; ++j) {
            double ti = eps * j / 8.0;
            if (ti == 0.0) continue;
            if (shell_curvature_sup(profile_, k, k0, ti) > -1.0) return false;
        }
        return true;
    };
    // Lemma-4.2 area condition at the box corners:
    // e^{-2 eps} Area0(V) >= (3/4) int_U e^{2 eps rho} dA0
    double r1 = profile_.r1(), r2 = profile_.r2();
    auto ball_area = [&](double r) { return 2 * kPi * (std::cosh(k * r) - 1) / (k * k); };
    auto area_ok = [&](double eps) {
        double lhs = std::exp(-2 * eps) * ball_area(r1);
        double rhs = 2 * kPi *
                     integrate(
                         [&](double r) {
                             return std::exp(2 * eps * profile_.value(r)) * std::sinh(k * r) / k;
                         },
                         0.0, r2, 1e-12);
        return lhs >= 0.75 * rhs;
    };

    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-7) {
        double mid = (lo + hi) / 2;
        if (curvature_ok(mid) && area_ok(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double ConformalMetric::surface_area_fixed(const std::vector<double>& t) const {
    if (t.size() != t_.size())
        throw InvalidArgument("surface_area_fixed: wrong parameter length");
    const FundamentalDomain& W = group_->domain();
    double k = group_->conformal_scale();
    double r2h = profile_.r2() * k;

    auto u_at = [&](Complex z) {
        double acc = 0.0;
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            if (t[i] == 0.0) continue;
            for (Complex q : lifts_[i]) {
                double dh = dist_h(z, q);
                if (dh < r2h) {
                    acc += t[i] * profile_.value(dh / k);
                    break;
                }
            }
        }
        return acc;
    };

    // composite Gauss-Legendre 4 in theta (per pi/4 wedge) and radius
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374539, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374539};
    const int nth = 24, nr = 48;
    double total = 0.0;
    for (int wedge = 0; wedge < 8; ++wedge) {
        double th0 = wedge * kPi / 4 - kPi / 8;
        for (int a = 0; a < nth; ++a) {
            double ta = th0 + (kPi / 4) * a / nth;
            double tb = th0 + (kPi / 4) * (a + 1) / nth;
            for (int ga = 0; ga < 4; ++ga) {
                double th = (ta + tb) / 2 + gx[ga] * (tb - ta) / 2;
                double wth = gw[ga] * (tb - ta) / 2;
                double rmax = W.boundary_radius_h(th);
                for (int b = 0; b < nr; ++b) {
                    double ra = rmax * b / nr, rb = rmax * (b + 1) / nr;
                    for (int gb = 0; gb < 4; ++gb) {
                        double rh = (ra + rb) / 2 + gx[gb] * (rb - ra) / 2;
                        double wr = gw[gb] * (rb - ra) / 2;
                        Complex z = std::polar(std::tanh(rh / 2), th);
                        total += wth * wr * std::exp(2 * u_at(z)) * std::sinh(rh);
                    }
                }
            }
        }
    }
    return total / (k * k);
}

double ConformalMetric::surface_area() const {
    const FundamentalDomain& W = group_->domain();
    double k = group_->conformal_scale();
    if (is_flat()) return W.area_h() / (k * k);

    // nested adaptive quadrature in polar coordinates over W
    auto radial = [&](double th) {
        double rmax = W.boundary_radius_h(th);
        return integrate(
            [&](double rh) {
                Complex z = std::polar(std::tanh(rh / 2), th);
                return std::exp(2 * u_in_domain(z)) * std::sinh(rh);
            },
            0.0, rmax, 2e-10);
    };
    double total = 0.0;
    for (int wedge = 0; wedge < 8; ++wedge) {
        double th0 = wedge * kPi / 4 - kPi / 8;
        total += integrate(radial, th0, th0 + kPi / 4, 4e-9);
    }
    return total / (k * k);
}

double ConformalMetric::bump_area_integral() const {
    double k = group_->conformal_scale();
    // 2 pi int rho(r) sinh(k r)/k dr, base area element
    return 2 * kPi *
           integrate([&](double r) { return profile_.value(r) * std::sinh(k * r) / k; },
                     0.0, profile_.r2(), 1e-13);
}

std::string ConformalMetric::to_json() const {
    char buf[64];
    std::string s = "{\"kappa0\": ";
    std::snprintf(buf, sizeof buf, "%.17g", kappa0());
    s += buf;
    s += ", \"centers\": [";
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", centers_[i].real(),
                      centers_[i].imag());
        s += buf;
        if (i + 1 < centers_.size()) s += ", ";
    }
    s += "], \"r1\": ";
    std::snprintf(buf, sizeof buf, "%.17g", profile_.r1());
    s += buf;
    s += ", \"r2\": ";
    std::snprintf(buf, sizeof buf, "%.17g", profile_.r2());
    s += buf;
    s += ", \"t\": [";
    for (std::size_t i = 0; i < t_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", t_[i]);
        s += buf;
        if (i + 1 < t_.size()) s += ", ";
    }
    s += "]}";
    return s;
}

Complex ConformalFactorWalker::representative(Complex x) {
    const FuchsianGroup& G = m_->group();
    if (!warm_) {
        g_ = MobiusTransform();
        warm_ = true;
    }
    Complex z = g_(x);
    int guard = 0;
    while (true) {
        int s = G.domain().worst_side(z, 1e-13);
        if (s < 0) break;
        int li = inverse_letter(G.domain().side_letter[s]);
        g_ = G.letter(li) * g_;
        z = G.letter(li)(z);
        if (++guard > 4096)
            throw NumericalError("ConformalFactorWalker: relocation failed");
    }
    g_.renormalize();
    return z;
}

}  // namespace qc
