#include "qc/fuchsian.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "qc/errors.hpp"

namespace qc {

std::string letter_name(int i) {
    static const char* names[8] = {"a1", "b1", "a2", "b2", "a1'", "b1'", "a2'", "b2'"};
    return names[i];
}

double FundamentalDomain::boundary_radius_h(double theta) const {
    // polar equation of a hyperbolic line at distance w from the origin:
    // tanh(r) cos(t) = tanh(w), t = angle offset from the side center
    double t = std::fmod(theta, kPi / 4);
    if (t < 0) t += kPi / 4;
    if (t > kPi / 8) t = kPi / 4 - t;
    return std::atanh(std::tanh(inradius_h) / std::cos(t));
}

double FundamentalDomain::area_h() const {
    // area = int (cosh r_W(theta) - 1) dtheta; Simpson on one wedge x 16
    const int n = 4096;
    double h = (kPi / 8) / n;
    double tw = std::tanh(inradius_h);
    auto f = [&](double t) {
        double r = std::atanh(tw / std::cos(t));
        return std::cosh(r) - 1.0;
    };
    double s = f(0) + f(kPi / 8);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return 16.0 * (s * h / 3.0);
}

std::array<int, 8> FuchsianGroup::relator_letters() {
    // a1 b1 a1' b1' a2 b2 a2' b2'
    return {0, 1, 4, 5, 2, 3, 6, 7};
}

MobiusTransform FuchsianGroup::relator() const {
    MobiusTransform r;
    for (int i : relator_letters()) r = r * letters_[i];
    return r;
}

FuchsianGroup FuchsianGroup::standard_genus2(double kappa0) {
    if (!(kappa0 < 0))
        throw InvalidArgument("standard_genus2: curvature must be negative");

    FuchsianGroup G;
    G.kappa0_ = kappa0;
    G.k_ = std::sqrt(-kappa0);

    // Regular octagon with vertex angle pi/4: cosh(circumradius) = cot^2(pi/8),
    // cosh(inradius) = cot(pi/8).
    double cot8 = 1.0 / std::tan(kPi / 8);
    double circ = std::acosh(cot8 * cot8);
    double inr = std::acosh(cot8);
    double rv = std::sqrt((cot8 * cot8 - 1.0) / (cot8 * cot8 + 1.0));

    FundamentalDomain& W = G.domain_;
    W.inradius_h = inr;
    W.circumradius_h = circ;
    for (int j = 0; j < 8; ++j)
        W.vertices[j] = std::polar(rv, (2 * j + 1) * kPi / 8);

    double e = std::tanh(inr / 2);
    double Rc = (1 + e * e) / (2 * e);
    W.side_rho = (1 - e * e) / (2 * e);
    for (int s = 0; s < 8; ++s)
        W.side_centers[s] = std::polar(Rc, s * kPi / 4);

    // Side s spans vertices v_{s-1} -> v_s.  The across-gluing taking the
    // partner side onto side s sends the octagon center to the center of the
    // neighboring copy, at hyperbolic distance 2*inradius in direction
    // s*pi/4.  Pairs (0,2),(1,3),(4,6),(5,7); the letter assignment
    // a1 = gamma_0, b1 = gamma_3, a2 = gamma_4, b2 = gamma_7 satisfies the
    // commutator relator (the assignment b1 = gamma_1 does not).
    auto across = [&](int s, int sp) {
        Complex p1 = W.vertices[(sp + 7) % 8], p2 = W.vertices[sp % 8];
        Complex q1 = W.vertices[(s + 7) % 8], q2 = W.vertices[s % 8];
        Complex target = std::polar(std::tanh(inr), s * kPi / 4);
        MobiusTransform T = two_point_isometry(p1, p2, q2, q1);
        if (std::abs(T(Complex(0, 0)) - target) < 1e-9) return T;
        T = two_point_isometry(p1, p2, q1, q2);
        if (std::abs(T(Complex(0, 0)) - target) < 1e-9) return T;
        throw NumericalError("standard_genus2: side gluing failed");
    };

    std::array<MobiusTransform, 8> side_map;  // gamma_s, copy across side s
    const int pairs[4][2] = {{0, 2}, {1, 3}, {4, 6}, {5, 7}};
    for (auto& pr : pairs) {
        MobiusTransform T = across(pr[0], pr[1]);
        side_map[pr[0]] = T;
        side_map[pr[1]] = T.inverse();
    }

    G.letters_[0] = side_map[0];  // a1
    G.letters_[1] = side_map[3];  // b1
    G.letters_[2] = side_map[4];  // a2
    G.letters_[3] = side_map[7];  // b2
    for (int i = 0; i < 4; ++i) G.letters_[i + 4] = G.letters_[i].inverse();

    for (int s = 0; s < 8; ++s) {
        W.side_letter[s] = -1;
        for (int i = 0; i < 8; ++i) {
            MobiusTransform d = G.letters_[i].inverse() * side_map[s];
            if (d.is_identity(1e-9)) {
                W.side_letter[s] = i;
                break;
            }
        }
        if (W.side_letter[s] < 0)
            throw NumericalError("standard_genus2: side-letter table failed");
    }

    MobiusTransform rel = G.relator();
    if (std::abs(rel(Complex(0, 0))) > 1e-10)
        throw NumericalError("standard_genus2: relator does not fix the basepoint");

    G.systole_h_ = dist_h0(G.letters_[0](Complex(0, 0)));
    return G;
}

// ---- orbit enumeration ----

namespace {

// Dedup by grid-cell hash of euclidean coordinates.  Duplicate readings of
// one element agree to ~1e-12 while distinct orbit points stay >= ~1e-6
// apart euclidean out to depth ~16, so a chord tolerance of 1e-9 separates
// the two populations with wide margin.  3x3 neighbor cells catch straddles.
struct DedupSet {
    static constexpr double grid = 1e-7;
    static constexpr double match_tol = 1e-9;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
    const std::vector<OrbitEntry>* entries;

    static std::uint64_t key(long long qx, long long qy) {
        return (static_cast<std::uint64_t>(qx) << 32) ^
               (static_cast<std::uint64_t>(qy) & 0xffffffffULL);
    }

    bool contains(Complex z) const {
        long long qx = std::llround(z.real() / grid);
        long long qy = std::llround(z.imag() / grid);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = cells.find(key(qx + dx, qy + dy));
                if (it == cells.end()) continue;
                for (std::uint32_t idx : it->second)
                    if (std::abs((*entries)[idx].point - z) < match_tol) return true;
            }
        return false;
    }

    void insert(Complex z, std::uint32_t idx) {
        long long qx = std::llround(z.real() / grid);
        long long qy = std::llround(z.imag() / grid);
        cells[key(qx, qy)].push_back(idx);
    }
};

}  // namespace

OrbitSet FuchsianGroup::enumerate_orbit(double radius_base, double margin_h,
                                        std::size_t budget,
                                        const std::array<int, 8>* generator_order) const {
    if (radius_base < 0)
        throw InvalidArgument("enumerate_orbit: radius must be >= 0");
    std::array<int, 8> order = {0, 1, 2, 3, 4, 5, 6, 7};
    if (generator_order) order = *generator_order;

    double cutoff_h = radius_base * k_ + margin_h;

    OrbitSet out;
    out.radius_base = radius_base;
    out.margin_h = margin_h;
    out.entries.push_back(OrbitEntry{0, 0xff, MobiusTransform(), Complex(0, 0), 0.0});

    DedupSet seen;
    seen.entries = &out.entries;
    seen.insert(Complex(0, 0), 0);

    std::vector<std::uint32_t> frontier = {0}, next;
    while (!frontier.empty()) {
        next.clear();
        for (std::uint32_t fi : frontier) {
            const OrbitEntry cur = out.entries[fi];  // copy: push_back may realloc
            for (int oi = 0; oi < 8; ++oi) {
                int li = order[oi];
                if (cur.letter != 0xff && li == inverse_letter(cur.letter)) continue;
                MobiusTransform g2 = cur.g * letters_[li];
                g2.renormalize();
                Complex z2 = g2(Complex(0, 0));
                double d2 = dist_h0(z2);
                if (d2 > cutoff_h) continue;
                if (seen.contains(z2)) continue;
                if (out.entries.size() >= budget) {
                    std::sort(out.entries.begin(), out.entries.end(),
                              [](const OrbitEntry& a, const OrbitEntry& b) {
                                  return a.dist_h < b.dist_h;
                              });
                    throw EnumerationBudgetExceeded(
                        "enumerate_orbit: element budget exceeded", std::move(out));
                }
                std::uint32_t idx = static_cast<std::uint32_t>(out.entries.size());
                out.entries.push_back(OrbitEntry{fi, static_cast<std::uint8_t>(li), g2, z2, d2});
                seen.insert(z2, idx);
                next.push_back(idx);
            }
        }
        frontier.swap(next);
    }

    // sort by distance (stable: discovery order = BFS order breaks ties),
    // remapping parent links through the permutation
    std::vector<std::uint32_t> perm(out.entries.size());
    for (std::uint32_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        return out.entries[a].dist_h < out.entries[b].dist_h;
    });
    std::vector<std::uint32_t> inv(perm.size());
    for (std::uint32_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
    std::vector<OrbitEntry> sorted(out.entries.size());
    for (std::uint32_t i = 0; i < perm.size(); ++i) {
        sorted[i] = out.entries[perm[i]];
        sorted[i].parent = inv[sorted[i].parent];
    }
    out.entries = std::move(sorted);
    return out;
}

std::size_t OrbitSet::count_within(double base_dist, double k) const {
    double cut = base_dist * k + 1e-12;
    auto it = std::upper_bound(entries.begin(), entries.end(), cut,
                               [](double v, const OrbitEntry& e) { return v < e.dist_h; });
    return static_cast<std::size_t>(it - entries.begin());
}

std::vector<std::uint8_t> OrbitSet::word(std::size_t i) const {
    std::vector<std::uint8_t> w;
    while (entries[i].letter != 0xff) {
        w.push_back(entries[i].letter);
        i = entries[i].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

ReducedWord OrbitSet::reduced_word(std::size_t i) const {
    ReducedWord rw;
    rw.letters = word(i);
    rw.matrix = entries[i].g;
    rw.orbit_point = entries[i].point;
    return rw;
}

std::pair<MobiusTransform, Complex> FuchsianGroup::locate_in_domain(Complex p,
                                                                    int max_steps) const {
    if (std::norm(p) >= 1.0)
        throw InvalidArgument("locate_in_domain: point outside the open disk");

    // Greedy: while outside W, pull back across the most violated side.
    // Deterministic: worst-side selection uses strict comparison, so side
    // index order is the tie rule; afterwards redundant trailing steps are
    // cancelled, realizing the lowest-word-length preference.
    MobiusTransform g;
    Complex z = p;
    std::vector<std::uint8_t> steps;
    const FundamentalDomain& W = domain_;
    bool done = false;
    for (int it = 0; it < max_steps; ++it) {
        int s = W.worst_side(z, 1e-13);
        if (s < 0) {
            done = true;
            break;
        }
        int li = inverse_letter(W.side_letter[s]);
        g = letters_[li] * g;
        g.renormalize();
        z = letters_[li](z);
        steps.push_back(static_cast<std::uint8_t>(li));
    }
    if (!done)
        throw NumericalError("locate_in_domain: iteration budget exceeded",
                             "point too deep for the configured budget");

    while (!steps.empty()) {
        int last = steps.back();
        Complex z2 = letters_[inverse_letter(last)](z);
        if (!W.contains(z2, 1e-13)) break;
        steps.pop_back();
        g = letters_[inverse_letter(last)] * g;
        g.renormalize();
        z = z2;
    }
    return {g, z};
}

std::string FuchsianGroup::to_json() const {
    std::string s = "{\"curvature\": ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", kappa0_);
    s += buf;
    s += ", \"generators\": [";
    for (int i = 0; i < 4; ++i) {
        auto m = letters_[i].real_entries();
        s += "[";
        for (int j = 0; j < 4; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m[j]);
            s += buf;
            if (j < 3) s += ", ";
        }
        s += i < 3 ? "], " : "]";
    }
    s += "]}";
    return s;
}

}  // namespace qc
