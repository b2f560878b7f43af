#include <doctest.h>

#include "qc/mobius.hpp"
#include "support/oracles.hpp"

using namespace qc;

TEST_CASE("determinant and inverse") {
    MobiusTransform t = translate_to(Complex(0.3, -0.4)) * rotation(0.7);
    CHECK(t.det() == doctest::Approx(1.0).epsilon(1e-12));
    MobiusTransform id = t * t.inverse();
    CHECK(id.is_identity(1e-12));
}

TEST_CASE("real matrix round trip") {
    MobiusTransform t = translate_to(Complex(-0.2, 0.55)) * rotation(-1.3);
    auto m = t.real_entries();
    CHECK(m[0] * m[3] - m[1] * m[2] == doctest::Approx(1.0).epsilon(1e-12));
    MobiusTransform back = MobiusTransform::from_real(m[0], m[1], m[2], m[3]);
    Complex z(0.17, 0.62);
    CHECK(std::abs(back(z) - t(z)) < 1e-13);
}

TEST_CASE("disk is preserved") {
    MobiusTransform t = translate_to(Complex(0.6, 0.1)) * rotation(2.1);
    for (double r : {0.1, 0.5, 0.9, 0.99}) {
        for (int i = 0; i < 8; ++i) {
            Complex z = std::polar(r, i * kPi / 4);
            CHECK(std::abs(t(z)) < 1.0);
        }
    }
}

TEST_CASE("distance closed forms") {
    CHECK(dist_h0(Complex(0.5, 0)) == doctest::Approx(2 * std::atanh(0.5)).epsilon(1e-14));
    // invariance under isometries
    MobiusTransform t = translate_to(Complex(0.35, 0.2)) * rotation(0.4);
    Complex x(0.1, -0.3), y(-0.45, 0.2);
    CHECK(dist_h(t(x), t(y)) == doctest::Approx(dist_h(x, y)).epsilon(1e-12));
}

TEST_CASE("two point isometry interpolates") {
    Complex p1(0.1, 0.1), p2(0.4, -0.2);
    Complex q1(-0.3, 0.25);
    // pick q2 at the same distance from q1
    Complex q2 = translate_to(q1)(std::polar(std::tanh(dist_h(p1, p2) / 2), 1.1));
    MobiusTransform t = two_point_isometry(p1, p2, q1, q2);
    CHECK(std::abs(t(p1) - q1) < 1e-12);
    CHECK(std::abs(t(p2) - q2) < 1e-12);
}

TEST_CASE("midpoint and geodesic point") {
    Complex x(0.2, 0.4), y(-0.5, -0.1);
    Complex mid = midpoint_h(x, y);
    CHECK(dist_h(x, mid) == doctest::Approx(dist_h(mid, y)).epsilon(1e-10));
    CHECK(dist_h(x, mid) + dist_h(mid, y) == doctest::Approx(dist_h(x, y)).epsilon(1e-10));
    Complex q = geodesic_point(x, y, 0.3 * dist_h(x, y));
    CHECK(dist_h(x, q) == doctest::Approx(0.3 * dist_h(x, y)).epsilon(1e-10));
}

TEST_CASE("origin to geodesic against minimization oracle") {
    for (auto [t1, t2] : {std::pair{0.0, kPi / 2}, {1.0, 2.2}, {-0.7, 0.9}, {3.0, 5.9}}) {
        double closed = origin_to_geodesic_h(t1, t2);
        double oracle = oracles::origin_geodesic_distance_minimization(t1, t2);
        CHECK(closed == doctest::Approx(oracle).epsilon(1e-8));
        // cosh R = 1 / sin(dtheta / 2)
        double dth = angular_distance(t1, t2);
        CHECK(std::cosh(closed) == doctest::Approx(1.0 / std::sin(dth / 2)).epsilon(1e-12));
    }
}

TEST_CASE("foot of perpendicular lies on the geodesic at distance R") {
    double t1 = 0.3, t2 = 2.0;
    Complex foot = origin_foot(t1, t2);
    CHECK(dist_h0(foot) == doctest::Approx(origin_to_geodesic_h(t1, t2)).epsilon(1e-12));
}

TEST_CASE("boundary angle action") {
    MobiusTransform t = translate_to(Complex(0.3, 0.3));
    double th = 1.234;
    // image of the boundary point is the limit of images of ray points
    Complex deep = t(std::polar(0.999999, th));
    CHECK(std::abs(std::arg(deep) - t.act_angle(th)) < 1e-4);
}
