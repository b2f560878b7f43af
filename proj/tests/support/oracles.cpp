#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace qc::oracles {

std::vector<double> brute_force_orbit_distances(const FuchsianGroup& g, int max_len) {
    std::vector<Complex> points = {Complex(0, 0)};
    std::vector<double> dists = {0.0};
    auto seen = [&](Complex z) {
        for (Complex p : points)
            if (std::abs(p - z) < 1e-9) return true;
        return false;
    };
    struct Node {
        MobiusTransform m;
        int last;
    };
    std::vector<Node> frontier = {{MobiusTransform(), -1}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Node> next;
        for (const auto& node : frontier) {
            for (int li = 0; li < 8; ++li) {
                if (node.last >= 0 && li == inverse_letter(node.last)) continue;
                Node n2{node.m * g.letter(li), li};
                n2.m.renormalize();
                Complex z = n2.m(Complex(0, 0));
                if (!seen(z)) {
                    points.push_back(z);
                    dists.push_back(dist_h0(z) / g.conformal_scale());
                }
                next.push_back(std::move(n2));
            }
        }
        frontier = std::move(next);
    }
    std::sort(dists.begin(), dists.end());
    return dists;
}

namespace {

// conformal exponent of the full metric vs the euclidean one:
// e^{2 phi} |dz|^2 with phi = u + log 2 - log k - log(1 - |z|^2)
double phi(const ConformalMetric& m, Complex z) {
    return m.u(z) + std::log(2.0) - std::log(m.k()) - std::log1p(-std::norm(z));
}

Complex dphi_dz(const ConformalMetric& m, Complex z) {
    const double h = 1e-6;
    double px = phi(m, z + Complex(h, 0)) - phi(m, z - Complex(h, 0));
    double py = phi(m, z + Complex(0, h)) - phi(m, z - Complex(0, h));
    return Complex(px / (2 * h), -py / (2 * h)) * 0.5;
}

struct Shot {
    double closest_arclen = 0;  // perturbed arclength at closest approach
    double miss = 1e300;        // euclidean miss distance
};

Shot shoot(const ConformalMetric& m, Complex x, Complex y, double psi, double cap,
           double h) {
    // unit-speed: |z'| = e^{-phi}; z'' = -2 phi_z z'^2
    Complex z = x;
    Complex v = std::polar(std::exp(-phi(m, x)), psi);
    Shot best;
    double s = 0;
    while (s < cap) {
        double miss = std::abs(z - y);
        if (miss < best.miss) {
            best.miss = miss;
            best.closest_arclen = s;
        }
        auto acc = [&](Complex zz, Complex vv) { return -2.0 * dphi_dz(m, zz) * vv * vv; };
        Complex k1v = acc(z, v), k1z = v;
        Complex k2v = acc(z + 0.5 * h * k1z, v + 0.5 * h * k1v), k2z = v + 0.5 * h * k1v;
        Complex k3v = acc(z + 0.5 * h * k2z, v + 0.5 * h * k2v), k3z = v + 0.5 * h * k2v;
        Complex k4v = acc(z + h * k3z, v + h * k3v), k4z = v + h * k3v;
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (std::norm(z) >= 1.0) break;
        v *= std::exp(-phi(m, z)) / std::abs(v);  // re-normalize unit speed
        s += h;
    }
    return best;
}

}  // namespace

double shooting_distance(const ConformalMetric& m, Complex x, Complex y, double step_h) {
    double base = dist_h(x, y) / m.k();
    double cap = base * std::exp(m.max_abs_t()) * 1.3 + 0.5;
    MobiusTransform T = translate_to(x);
    double psi0 = std::arg(T.inverse()(y));

    // golden-section on the miss distance over a bracket around psi0
    double halfw = 0.6;
    auto miss_at = [&](double psi) { return shoot(m, x, y, psi, cap, step_h); };
    double a = psi0 - halfw, b = psi0 + halfw;
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    Shot sc = miss_at(c), sd = miss_at(d);
    for (int it = 0; it < 48; ++it) {
        if (sc.miss < sd.miss) {
            b = d;
            d = c;
            sd = sc;
            c = b - gr * (b - a);
            sc = miss_at(c);
        } else {
            a = c;
            c = d;
            sc = sd;
            d = a + gr * (b - a);
            sd = miss_at(d);
        }
    }
    Shot final = sc.miss < sd.miss ? sc : sd;
    return final.closest_arclen;
}

double riemann_area(const ConformalMetric& m, int n_theta, int n_r) {
    const FundamentalDomain& W = m.group().domain();
    double k = m.k();
    double acc = 0;
    for (int a = 0; a < n_theta; ++a) {
        double th = 2 * kPi * (a + 0.5) / n_theta;
        double rmax = W.boundary_radius_h(th);
        for (int b = 0; b < n_r; ++b) {
            double rh = rmax * (b + 0.5) / n_r;
            Complex z = std::polar(std::tanh(rh / 2), th);
            acc += std::exp(2 * m.u_in_domain(z)) * std::sinh(rh) * (rmax / n_r) *
                   (2 * kPi / n_theta);
        }
    }
    return acc / (k * k);
}

double origin_geodesic_distance_minimization(double theta1, double theta2) {
    // geodesic = circle orthogonal to the unit circle through the endpoints;
    // parameterize points by euclidean straight interpolation + projection
    Complex e1 = std::polar(1.0, theta1), e2 = std::polar(1.0, theta2);
    // center of the orthogonal circle: c = (e1 + e2) / (1 + Re(e1 conj(e2)))
    Complex c = (e1 + e2) / (1.0 + (e1 * std::conj(e2)).real());
    double rho = std::sqrt(std::norm(c) - 1.0);
    // minimize d(0, c + rho e^{i s}) over s (golden section)
    auto f = [&](double s) {
        Complex z = c + std::polar(rho, s);
        if (std::norm(z) >= 1.0) return 1e300;
        return dist_h0(z);
    };
    double a = 0, b = 2 * kPi;
    // coarse scan then golden
    double bs = 0, bv = 1e300;
    for (int i = 0; i < 720; ++i) {
        double s = a + (b - a) * i / 720;
        double v = f(s);
        if (v < bv) {
            bv = v;
            bs = s;
        }
    }
    a = bs - 0.02;
    b = bs + 0.02;
    const double gr = 0.6180339887498949;
    double cc = b - gr * (b - a), dd = a + gr * (b - a);
    double fc = f(cc), fd = f(dd);
    for (int it = 0; it < 60; ++it) {
        if (fc < fd) {
            b = dd;
            dd = cc;
            fd = fc;
            cc = b - gr * (b - a);
            fc = f(cc);
        } else {
            a = cc;
            cc = dd;
            fc = fd;
            dd = a + gr * (b - a);
            fd = f(dd);
        }
    }
    return std::min(fc, fd);
}

}  // namespace qc::oracles
