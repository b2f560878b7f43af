#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qc/mobius.hpp"

namespace qc {

/// Letters 0..3 = a1, b1, a2, b2; 4..7 = their inverses.
inline int inverse_letter(int i) { return (i + 4) % 8; }
std::string letter_name(int i);

/// Reduced word in the generators: no letter is followed by its inverse.
struct ReducedWord {
    std::vector<std::uint8_t> letters;
    MobiusTransform matrix;   // cached product, left to right
    Complex orbit_point;      // image of the basepoint (origin)

    bool is_reduced() const {
        for (std::size_t i = 1; i < letters.size(); ++i)
            if (letters[i] == inverse_letter(letters[i - 1])) return false;
        return true;
    }
};

/// Regular hyperbolic octagon with vertex angles pi/4, the fundamental
/// domain of the genus-2 side-pairing group.  All stored lengths are in
/// curvature -1 units; callers divide by sqrt(|kappa0|) for base units.
struct FundamentalDomain {
    std::array<Complex, 8> vertices;       // v_j at angle (2j+1)pi/8
    std::array<int, 8> side_letter;        // side s |-> letter across s
    double inradius_h = 0;                 // hyperbolic, curvature -1
    double circumradius_h = 0;
    double interior_tol = 1e-12;

    // side s geodesic = euclidean circle |z - center_s| = rho; inside W
    // means outside every side circle
    std::array<Complex, 8> side_centers;
    double side_rho = 0;

    double diameter_h() const { return 2 * circumradius_h; }

    bool contains(Complex z, double tol) const {
        for (const auto& c : side_centers)
            if (std::abs(z - c) < side_rho - tol) return false;
        return true;
    }
    bool contains(Complex z) const { return contains(z, interior_tol); }

    /// Most violated side for a point outside W, or -1 if inside.
    int worst_side(Complex z, double tol) const {
        int best = -1;
        double worst = tol;
        for (int s = 0; s < 8; ++s) {
            double viol = side_rho - std::abs(z - side_centers[s]);
            if (viol > worst) {
                worst = viol;
                best = s;
            }
        }
        return best;
    }

    /// Hyperbolic area by radial quadrature (should equal 4*pi).
    double area_h() const;

    /// Polar equation of the boundary: hyperbolic radius of dW at angle theta.
    double boundary_radius_h(double theta) const;
};

struct OrbitEntry {
    std::uint32_t parent = 0;   // index into the enumeration array
    std::uint8_t letter = 0;    // last letter (0xff for identity)
    MobiusTransform g;
    Complex point;              // g(0)
    double dist_h = 0;          // hyperbolic distance to origin
};

/// Result of orbit enumeration: all visited elements (distance <= radius + margin),
/// sorted by distance; entry 0 is the identity.  Words are stored as
/// (parent, letter) links; `word(i)` reconstructs them.
struct OrbitSet {
    std::vector<OrbitEntry> entries;
    double radius_base = 0;        // requested radius, base-metric units
    double margin_h = 0;

    /// Number of orbit points with base-metric distance <= base_dist
    /// (k = sqrt(|kappa0|) converts to the stored curvature -1 units).
    std::size_t count_within(double base_dist, double k) const;

    std::vector<std::uint8_t> word(std::size_t i) const;
    ReducedWord reduced_word(std::size_t i) const;
};

/// Raised when enumeration would exceed the element budget; carries the
/// partial enumeration.
class EnumerationBudgetExceeded : public std::runtime_error {
public:
    EnumerationBudgetExceeded(std::string what, OrbitSet partial)
        : std::runtime_error(std::move(what)), partial_(std::move(partial)) {}
    const OrbitSet& partial() const { return partial_; }

private:
    OrbitSet partial_;
};

/// The genus-2 surface group acting on the Poincare disk, with the regular
/// octagon as fundamental domain.  Basepoint is the origin.
class FuchsianGroup {
public:
    /// Regular-octagon genus-2 group at constant curvature kappa0 < 0.
    static FuchsianGroup standard_genus2(double kappa0);

    double kappa0() const { return kappa0_; }
    double conformal_scale() const { return k_; }  // sqrt(|kappa0|)

    const std::array<MobiusTransform, 8>& letters() const { return letters_; }
    const MobiusTransform& letter(int i) const { return letters_[i]; }
    const FundamentalDomain& domain() const { return domain_; }

    /// Relator [a1,b1][a2,b2] as a letter sequence.
    static std::array<int, 8> relator_letters();
    MobiusTransform relator() const;

    /// Base-metric distance (curvature kappa0 units).
    double dist(Complex x, Complex y) const { return dist_h(x, y) / k_; }

    /// Minimal displacement of the basepoint over nontrivial elements
    /// (the systole of the surface), base units.
    double systole() const { return systole_h_ / k_; }
    double systole_h() const { return systole_h_; }

    /// One representative per distinct orbit point, visited out to base
    /// distance radius + margin/k; the prefix within `radius_base` is the
    /// exact ball (see count_within).  Deterministic; entries sorted by
    /// (distance, discovery order).  `generator_order` permutes the
    /// expansion order (order-independence oracle hook).
    OrbitSet enumerate_orbit(double radius_base, double margin_h = 2.5,
                             std::size_t budget = 20'000'000,
                             const std::array<int, 8>* generator_order = nullptr) const;

    /// gamma with gamma(p) in the closed fundamental domain.
    /// Ties on the boundary resolved toward lowest word length, then
    /// lexicographic letter order.
    std::pair<MobiusTransform, Complex> locate_in_domain(Complex p,
                                                         int max_steps = 4096) const;

    /// Group description as JSON text (17 significant digits).
    std::string to_json() const;

private:
    FuchsianGroup() = default;

    double kappa0_ = -1;
    double k_ = 1;
    std::array<MobiusTransform, 8> letters_;
    FundamentalDomain domain_;
    double systole_h_ = 0;
};

}  // namespace qc
