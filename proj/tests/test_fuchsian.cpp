#include <doctest.h>

#include <set>

#include "qc/errors.hpp"
#include "qc/fuchsian.hpp"
#include "support/oracles.hpp"

using namespace qc;

TEST_CASE("invalid curvature rejected") {
    CHECK_THROWS_AS(FuchsianGroup::standard_genus2(0.0), InvalidArgument);
    CHECK_THROWS_AS(FuchsianGroup::standard_genus2(1.0), InvalidArgument);
}

TEST_CASE("relator fixes the basepoint") {
    for (double kappa : {-1.0, -2.0, -0.5}) {
        FuchsianGroup g = FuchsianGroup::standard_genus2(kappa);
        CHECK(std::abs(g.relator()(Complex(0, 0))) < 1e-8);
    }
}

TEST_CASE("octagon area matches Gauss-Bonnet") {
    FuchsianGroup g1 = FuchsianGroup::standard_genus2(-1.0);
    CHECK(g1.domain().area_h() == doctest::Approx(4 * kPi).epsilon(1e-4));
    // base-unit area at kappa0 = -2 is area_h / 2
    FuchsianGroup g2 = FuchsianGroup::standard_genus2(-2.0);
    CHECK(g2.domain().area_h() / 2 == doctest::Approx(2 * kPi).epsilon(1e-4));
}

TEST_CASE("generators and inverses compose to identity") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    for (int i = 0; i < 4; ++i)
        CHECK((g.letter(i) * g.letter(i + 4)).is_identity(1e-10));
}

TEST_CASE("octagon vertex angles are pi/4") {
    // interior angle at a vertex: angle between the two side geodesics;
    // verified through the circumradius identity cosh(R_c) = cot^2(pi/8)
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    double cot8 = 1.0 / std::tan(kPi / 8);
    CHECK(std::cosh(g.domain().circumradius_h) == doctest::Approx(cot8 * cot8).epsilon(1e-12));
    // vertex angle sum = 2 pi <=> all eight vertices glue to one smooth point,
    // which the relator check certifies
}

TEST_CASE("enumerate_orbit small radii") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    OrbitSet o = g.enumerate_orbit(0.0);
    CHECK(o.count_within(0.0, 1.0) == 1);
    o = g.enumerate_orbit(1e-6);
    CHECK(o.count_within(1e-6, 1.0) == 1);
    // first shell: 8 letters at distance 2*inradius
    o = g.enumerate_orbit(3.1);
    CHECK(o.count_within(3.1, 1.0) == 9);
    CHECK(o.entries[1].dist_h == doctest::Approx(g.systole_h()).epsilon(1e-12));
}

TEST_CASE("brute force word enumeration agrees") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    // all reduced words of length <= 5; orbit points within distance 6 are
    // all reachable by such words (word length l moves the origin <= l * 2w)
    auto brute = oracles::brute_force_orbit_distances(g, 5);
    OrbitSet o = g.enumerate_orbit(6.0);
    std::size_t n_brute = 0;
    for (double d : brute)
        if (d <= 6.0) ++n_brute;
    CHECK(o.count_within(6.0, 1.0) == n_brute);
}

TEST_CASE("order independence oracle") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    std::array<int, 8> perm = {5, 2, 7, 0, 3, 6, 1, 4};
    OrbitSet a = g.enumerate_orbit(6.0);
    OrbitSet b = g.enumerate_orbit(6.0, 2.5, 20'000'000, &perm);
    CHECK(a.count_within(6.0, 1.0) == b.count_within(6.0, 1.0));
    // margin stability
    OrbitSet c = g.enumerate_orbit(6.0, 3.4);
    CHECK(a.count_within(6.0, 1.0) == c.count_within(6.0, 1.0));
}

TEST_CASE("isometry symmetry of displacement") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    OrbitSet o = g.enumerate_orbit(6.0);
    for (std::size_t i = 1; i < o.entries.size(); i += 11) {
        double d1 = o.entries[i].dist_h;
        double d2 = dist_h0(o.entries[i].g.inverse()(Complex(0, 0)));
        CHECK(std::abs(d1 - d2) < 1e-9);
    }
}

TEST_CASE("reduced words are reduced and consistent") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    OrbitSet o = g.enumerate_orbit(5.0);
    for (std::size_t i = 0; i < o.entries.size(); i += 7) {
        ReducedWord w = o.reduced_word(i);
        CHECK(w.is_reduced());
        MobiusTransform prod;
        for (auto li : w.letters) prod = prod * g.letter(li);
        CHECK(std::abs(prod(Complex(0, 0)) - w.orbit_point) < 1e-9);
    }
}

TEST_CASE("budget exceeded carries partial census") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    try {
        g.enumerate_orbit(10.0, 2.5, 100);
        FAIL("expected EnumerationBudgetExceeded");
    } catch (const EnumerationBudgetExceeded& e) {
        CHECK(e.partial().entries.size() >= 100);
    }
}

TEST_CASE("locate_in_domain basics") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    auto [gid, z0] = g.locate_in_domain(Complex(0, 0));
    CHECK(gid.is_identity(1e-12));
    CHECK(std::abs(z0) < 1e-12);

    CHECK_THROWS_AS(g.locate_in_domain(Complex(1.2, 0)), InvalidArgument);

    // equivariance: p = gamma_0(origin) -> returns gamma_0^{-1}
    OrbitSet o = g.enumerate_orbit(6.0);
    for (std::size_t i = 1; i < o.entries.size(); i += 53) {
        auto [gm, z] = g.locate_in_domain(o.entries[i].point);
        CHECK(std::abs(z) < 1e-9);  // orbit of the center maps back to the center
        CHECK((gm * o.entries[i].g).is_identity(1e-7));
    }
}

TEST_CASE("locate_in_domain depth-5 representative within D") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    double D = g.domain().diameter_h();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uang(0, 2 * kPi);
    for (int trial = 0; trial < 100; ++trial) {
        Complex p = ray_point(uang(rng), 5.0);
        auto [gm, z] = g.locate_in_domain(p);
        CHECK(g.domain().contains(z, 1e-9));
        CHECK(dist_h0(z) <= D / 2 + 1e-8);
        CHECK(std::abs(gm(p) - z) < 1e-9);
    }
}

TEST_CASE("group JSON serialization") {
    FuchsianGroup g = FuchsianGroup::standard_genus2(-1.0);
    std::string js = g.to_json();
    CHECK(js.find("\"curvature\": -1") != std::string::npos);
    CHECK(js.find("\"generators\"") != std::string::npos);
    // four generators, each with four 17-digit entries
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = js.find('[', pos)) != std::string::npos; ++pos)
        ++count;
    CHECK(count == 5);  // outer list + 4 matrices
}
