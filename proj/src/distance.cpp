#include "qc/distance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace qc {

namespace {

struct Frame {
    MobiusTransform to_axis;    // x -> 0, y -> positive x-axis
    MobiusTransform from_axis;
    double length_h = 0;
};

Frame axis_frame(Complex x, Complex y) {
    Frame f;
    MobiusTransform T = translate_to(x);
    Complex z = T.inverse()(y);
    double phi = std::arg(z);
    f.to_axis = rotation(-phi) * T.inverse();
    f.from_axis = T * rotation(phi);
    f.length_h = dist_h0(z);
    return f;
}

// Fermi grid point: arclength s along the axis, signed normal offset n.
Complex fermi_point(const Frame& f, double s, double n) {
    Complex base(std::tanh(s / 2), 0.0);
    MobiusTransform T = translate_to(base);
    Complex off(0.0, std::tanh(n / 2));
    return f.from_axis(T(off));
}

// perturbed length of the segment [p, q]: composite midpoint rule with
// pieces of hyperbolic length <= quad_h
double segment_length(const ConformalMetric& m, ConformalFactorWalker& walker,
                      Complex p, Complex q, double quad_h) {
    double dh = dist_h(p, q);
    double k = m.k();
    if (m.is_flat()) return dh / k;
    if (dh < 1e-14) return 0.0;
    int n = std::max(1, static_cast<int>(std::ceil(dh / quad_h)));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double smid = dh * (i + 0.5) / n;
        Complex zm = geodesic_point(p, q, smid);
        acc += std::exp(walker.u(zm)) * (dh / n);
    }
    return acc / k;
}

}  // namespace

void PerturbedDistance::check_range(Complex z) const {
    if (std::norm(z) >= 1.0)
        throw InvalidArgument("distance: point outside the open disk");
    if (dist_h0(z) / m_->k() > m_->mesh_range())
        throw OutOfMeshRange("distance: point outside the meshed region",
                             "base radius > R_max = 14");
}

DistanceMesh PerturbedDistance::build_mesh(Complex x, Complex y, int level) const {
    Frame f = axis_frame(x, y);
    double h = opt_.h0 / std::pow(2.0, level);
    int ns = std::max(2, static_cast<int>(std::ceil(f.length_h / h)));
    int nn = std::max(1, static_cast<int>(std::ceil(opt_.halfwidth / h)));

    DistanceMesh mesh;
    mesh.level = level;
    mesh.cols = ns + 1;
    mesh.rows = 2 * nn + 1;
    mesh.vertices.resize(static_cast<std::size_t>(mesh.cols) * mesh.rows);
    for (int i = 0; i <= ns; ++i) {
        double s = f.length_h * i / ns;
        for (int j = -nn; j <= nn; ++j) {
            double n = opt_.halfwidth * j / nn;
            mesh.vertices[static_cast<std::size_t>(i) * mesh.rows + (j + nn)] =
                fermi_point(f, s, n);
        }
    }

    // neighbor offsets: 8 directions + knight moves for angular resolution
    static const int offs[8][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1},
                                   {2, 1}, {2, -1}, {1, 2}, {1, -2}};
    ConformalFactorWalker walker(*m_);
    auto vid = [&](int i, int j) {
        return static_cast<std::uint32_t>(i * mesh.rows + (j + nn));
    };
    for (int i = 0; i <= ns; ++i) {
        for (int j = -nn; j <= nn; ++j) {
            Complex p = mesh.vertices[vid(i, j)];
            for (auto& o : offs) {
                int i2 = i + o[0], j2 = j + o[1];
                if (i2 < 0 || i2 > ns || j2 < -nn || j2 > nn) continue;
                Complex q = mesh.vertices[vid(i2, j2)];
                double dh = dist_h(p, q);
                double w = dh / m_->k();
                if (!m_->is_flat()) w *= std::exp(walker.u(midpoint_h(p, q)));
                mesh.edges.emplace_back(vid(i, j), vid(i2, j2));
                mesh.weights.push_back(w);
            }
        }
    }
    return mesh;
}

PathResult PerturbedDistance::refine_path(std::vector<Complex> nodes, double h,
                                          double tol) const {
    ConformalFactorWalker walker(*m_);
    PathResult out;
    double prev = -1.0;
    for (int level = 0; level < opt_.max_levels; ++level) {
        double quad_h = h / 2;
        // local improvement sweeps (monotone: only improving moves accepted)
        for (int sweep = 0; sweep < opt_.sweeps; ++sweep) {
            for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
                Complex zp = nodes[i - 1], zc = nodes[i], zn = nodes[i + 1];
                auto len2 = [&](Complex z) {
                    return segment_length(*m_, walker, zp, z, quad_h) +
                           segment_length(*m_, walker, z, zn, quad_h);
                };
                double f0 = len2(zc);
                double step = h / 4 * (1 - std::norm(zc)) / 2;  // euclidean scale
                for (int round = 0; round < 3; ++round) {
                    Complex best = zc;
                    double fb = f0;
                    const Complex dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                    for (auto d : dirs) {
                        Complex zt = zc + step * d;
                        if (std::norm(zt) >= 1.0) continue;
                        double ft = len2(zt);
                        if (ft < fb) {
                            fb = ft;
                            best = zt;
                        }
                    }
                    if (fb < f0) {
                        zc = best;
                        f0 = fb;
                    } else {
                        step /= 4;
                    }
                }
                nodes[i] = zc;
            }
        }
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            total += segment_length(*m_, walker, nodes[i], nodes[i + 1], quad_h);

        MeshLevel ml;
        ml.level = level;
        ml.vertex_count = nodes.size();
        ml.max_edge_base = h / m_->k();
        ml.length = total;
        out.levels.push_back(ml);

        if (prev > 0) {
            double diff = std::abs(total - prev);
            out.achieved_tol = diff / std::max(total, 1e-300);
            if (diff < tol * total / 2) {
                out.length = total;
                out.nodes = std::move(nodes);
                return out;
            }
        }
        prev = total;

        // subdivide: insert hyperbolic midpoints
        std::vector<Complex> finer;
        finer.reserve(nodes.size() * 2);
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            finer.push_back(nodes[i]);
            finer.push_back(midpoint_h(nodes[i], nodes[i + 1]));
        }
        finer.push_back(nodes.back());
        nodes = std::move(finer);
        h /= 2;
    }
    throw MeshBudgetError("distance: refinement budget exceeded", prev,
                          out.levels.size() >= 2
                              ? std::abs(out.levels.back().length -
                                         out.levels[out.levels.size() - 2].length) /
                                    std::max(prev, 1e-300)
                              : 1.0);
}

PathResult PerturbedDistance::shortest_path(Complex x, Complex y, double tol) const {
    if (tol <= 0) throw InvalidArgument("distance: tol must be positive");
    check_range(x);
    check_range(y);
    // canonical order: makes the result exactly symmetric in (x, y)
    Complex a = x, b = y;
    if (std::make_pair(b.real(), b.imag()) < std::make_pair(a.real(), a.imag()))
        std::swap(a, b);

    double Lh = dist_h(a, b);
    PathResult out;
    if (Lh < 1e-14) {
        out.length = 0;
        out.nodes = {a, b};
        return out;
    }
    if (m_->is_flat() && !opt_.force_mesh) {
        out.length = Lh / m_->k();
        out.nodes = {a, b};
        return out;
    }

    std::vector<Complex> init;
    if (Lh <= 3 * opt_.h0) {
        init = {a, midpoint_h(a, b), b};
    } else {
        DistanceMesh mesh = build_mesh(a, b, 0);
        // Dijkstra on the tube
        std::size_t n = mesh.vertices.size();
        std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
        for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
            auto [u, v] = mesh.edges[e];
            adj[u].push_back({v, mesh.weights[e]});
            adj[v].push_back({u, mesh.weights[e]});
        }
        int nn = (mesh.rows - 1) / 2;
        std::uint32_t src = static_cast<std::uint32_t>(nn);  // (0, 0)
        std::uint32_t dst = static_cast<std::uint32_t>((mesh.cols - 1) * mesh.rows + nn);
        std::vector<double> dist(n, 1e300);
        std::vector<std::uint32_t> par(n, 0xffffffffu);
        using QE = std::pair<double, std::uint32_t>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
        dist[src] = 0;
        pq.push({0.0, src});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            if (u == dst) break;
            for (auto [v, w] : adj[u]) {
                if (dist[u] + w < dist[v]) {
                    dist[v] = dist[u] + w;
                    par[v] = u;
                    pq.push({dist[v], v});
                }
            }
        }
        if (par[dst] == 0xffffffffu && dst != src)
            throw NumericalError("distance: tube graph disconnected");
        std::vector<std::uint32_t> chain;
        for (std::uint32_t v = dst; v != 0xffffffffu; v = par[v]) {
            chain.push_back(v);
            if (v == src) break;
        }
        std::reverse(chain.begin(), chain.end());
        for (auto v : chain) init.push_back(mesh.vertices[v]);
    }
    return refine_path(std::move(init), opt_.h0, tol);
}

double PerturbedDistance::distance(Complex x, Complex y, double tol) const {
    return shortest_path(x, y, tol).length;
}

std::pair<double, Complex> PerturbedDistance::distance_to_geodesic(Complex w,
                                                                   double theta1,
                                                                   double theta2,
                                                                   double tol) const {
    if (angular_distance(theta1, theta2) < 1e-12)
        throw InvalidArgument("distance_to_geodesic: equal boundary angles");
    check_range(w);

    // closed form relative to w: move w to the origin
    MobiusTransform T = translate_to(w);
    double t1 = T.inverse().act_angle(theta1);
    double t2 = T.inverse().act_angle(theta2);
    double Rh = origin_to_geodesic_h(t1, t2);
    Complex foot = T(origin_foot(t1, t2));
    double k = m_->k();
    if (m_->is_flat()) return {Rh / k, foot};

    // realize eta as a straightened path between deep points on the rays
    double depth_h = std::min(Rh + 5.0, m_->mesh_range() * k * 0.98);
    Complex A = T(ray_point(t1, depth_h));
    Complex B = T(ray_point(t2, depth_h));
    PathResult eta = shortest_path(A, B, tol);

    // minimize d(w, .) over the polyline near the base foot
    const auto& nodes = eta.nodes;
    std::size_t best = 0;
    double bestbase = 1e300;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double d = dist_h(nodes[i], foot);
        if (d < bestbase) {
            bestbase = d;
            best = i;
        }
    }
    std::size_t lo = best >= 4 ? best - 4 : 0;
    std::size_t hi = std::min(best + 4, nodes.size() - 1);
    double bestd = 1e300;
    Complex bestp = nodes[best];
    for (std::size_t i = lo; i <= hi; ++i) {
        double d = distance(w, nodes[i], tol);
        if (d < bestd) {
            bestd = d;
            bestp = nodes[i];
            best = i;
        }
    }
    // parabolic refinement between neighbors of the best node
    if (best > 0 && best + 1 < nodes.size()) {
        Complex za = nodes[best - 1], zb = nodes[best], zc = nodes[best + 1];
        double fa = distance(w, za, tol), fb = bestd, fc = distance(w, zc, tol);
        double denom = (fa - 2 * fb + fc);
        if (std::abs(denom) > 1e-14) {
            double s = 0.5 * (fa - fc) / denom;  // in [-1, 1] node units
            s = std::clamp(s, -1.0, 1.0);
            Complex zs = s < 0 ? geodesic_point(zb, za, -s * dist_h(zb, za))
                               : geodesic_point(zb, zc, s * dist_h(zb, zc));
            double fs = distance(w, zs, tol);
            if (fs < bestd) {
                bestd = fs;
                bestp = zs;
            }
        }
    }
    return {bestd, bestp};
}

std::vector<double> bump_line_integrals(const ConformalMetric& m, Complex x, Complex y,
                                        double tol) {
    const std::size_t nb = m.centers().size();
    std::vector<double> out(nb, 0.0);
    double Lh = dist_h(x, y);
    if (Lh < 1e-14) return out;
    double k = m.k();
    ConformalFactorWalker walker(m);
    std::vector<double> vals(nb);

    // vector adaptive Simpson on sigma in [0, Lh] (hyperbolic arclength)
    struct Sample {
        std::vector<double> v;
    };
    std::function<void(double, Sample&)> eval = [&](double s, Sample& smp) {
        Complex zd = walker.representative(geodesic_point(x, y, s));
        smp.v.resize(nb);
        m.bump_values_in_domain(zd, smp.v.data());
    };

    std::function<void(double, double, const Sample&, const Sample&, const Sample&,
                       double, int, std::vector<double>&)>
        rec = [&](double a, double b, const Sample& fa, const Sample& fm,
                  const Sample& fb, double tol2, int depth, std::vector<double>& acc) {
            double mid = (a + b) / 2;
            double lm = (a + mid) / 2, rm = (mid + b) / 2;
            Sample flm, frm;
            eval(lm, flm);
            eval(rm, frm);
            double err = 0;
            std::vector<double> whole(nb), left(nb), right(nb);
            for (std::size_t i = 0; i < nb; ++i) {
                whole[i] = (b - a) / 6 * (fa.v[i] + 4 * fm.v[i] + fb.v[i]);
                left[i] = (mid - a) / 6 * (fa.v[i] + 4 * flm.v[i] + fm.v[i]);
                right[i] = (b - mid) / 6 * (fm.v[i] + 4 * frm.v[i] + fb.v[i]);
                err += std::abs(left[i] + right[i] - whole[i]);
            }
            if (depth <= 0 || err < 15 * tol2) {
                for (std::size_t i = 0; i < nb; ++i)
                    acc[i] += left[i] + right[i] + (left[i] + right[i] - whole[i]) / 15;
                return;
            }
            rec(a, mid, fa, flm, fm, tol2 / 2, depth - 1, acc);
            rec(mid, b, fm, frm, fb, tol2 / 2, depth - 1, acc);
        };

    Sample fa, fm, fb;
    eval(0.0, fa);
    eval(Lh / 2, fm);
    eval(Lh, fb);
    // seed subdivision at octagon scale so bump crossings are not missed
    int seed = std::max(4, static_cast<int>(std::ceil(Lh / 0.7)));
    std::vector<double> acc(nb, 0.0);
    Sample prev = fa;
    for (int i = 0; i < seed; ++i) {
        double a = Lh * i / seed, b = Lh * (i + 1) / seed;
        Sample fmid, fend;
        eval((a + b) / 2, fmid);
        if (i + 1 == seed)
            fend = fb;
        else
            eval(b, fend);
        rec(a, b, prev, fmid, fend, tol / seed, 18, acc);
        prev = fend;
    }
    for (std::size_t i = 0; i < nb; ++i) out[i] = acc[i] / k;  // base arclength
    return out;
}

double conformal_segment_length(const ConformalMetric& m, Complex x, Complex y,
                                double tol) {
    double Lh = dist_h(x, y);
    double k = m.k();
    if (m.is_flat() || Lh < 1e-14) return Lh / k;
    ConformalFactorWalker walker(m);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a, double b, double fa, double fm, double fb, double tol2,
            int depth) -> double {
        double mid = (a + b) / 2;
        double lm = (a + mid) / 2, rm = (mid + b) / 2;
        double flm = std::exp(walker.u(geodesic_point(x, y, lm)));
        double frm = std::exp(walker.u(geodesic_point(x, y, rm)));
        double whole = (b - a) / 6 * (fa + 4 * fm + fb);
        double left = (mid - a) / 6 * (fa + 4 * flm + fm);
        double right = (b - mid) / 6 * (fm + 4 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) < 15 * tol2)
            return left + right + (left + right - whole) / 15;
        return rec(a, mid, fa, flm, fm, tol2 / 2, depth - 1) +
               rec(mid, b, fm, frm, fb, tol2 / 2, depth - 1);
    };
    double acc = 0.0;
    int seed = std::max(4, static_cast<int>(std::ceil(Lh / 0.7)));
    double prev = std::exp(walker.u(geodesic_point(x, y, 0.0)));
    for (int i = 0; i < seed; ++i) {
        double a = Lh * i / seed, b = Lh * (i + 1) / seed;
        double fmid = std::exp(walker.u(geodesic_point(x, y, (a + b) / 2)));
        double fend = std::exp(walker.u(geodesic_point(x, y, b)));
        acc += rec(a, b, prev, fmid, fend, tol * (b - a) / Lh, 18);
        prev = fend;
    }
    return acc / k;
}

}  // namespace qc
