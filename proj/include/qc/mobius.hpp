#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qc {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

/// Orientation-preserving isometry of the Poincare disk.
///
/// Stored in the SU(1,1) form  z -> (al*z + be) / (conj(be)*z + conj(al)),
/// |al|^2 - |be|^2 = 1.  The equivalent real SL(2,R) matrix (upper half-plane
/// picture, conjugated by the Cayley map) is exposed for serialization:
///   a+d = 2 Re al,  b-c = 2 Im al,  a-d = 2 Re be,  b+c = -2 Im be.
class MobiusTransform {
public:
    MobiusTransform() : al_(1.0, 0.0), be_(0.0, 0.0) {}
    MobiusTransform(Complex al, Complex be) : al_(al), be_(be) {}

    /// From real SL(2,R) entries (det must be 1 within 1e-12).
    static MobiusTransform from_real(double a, double b, double c, double d) {
        if (std::abs(a * d - b * c - 1.0) > 1e-12)
            throw std::invalid_argument("MobiusTransform: determinant must be 1");
        return MobiusTransform(Complex((a + d) / 2, (b - c) / 2),
                               Complex((a - d) / 2, -(b + c) / 2));
    }

    /// Real matrix entries (a, b, c, d), det = 1.
    std::array<double, 4> real_entries() const {
        double a = al_.real() + be_.real();
        double d = al_.real() - be_.real();
        double b = al_.imag() - be_.imag();
        double c = -al_.imag() - be_.imag();
        return {a, b, c, d};
    }

    Complex alpha() const { return al_; }
    Complex beta() const { return be_; }

    double det() const { return std::norm(al_) - std::norm(be_); }

    Complex operator()(Complex z) const {
        return (al_ * z + be_) / (std::conj(be_) * z + std::conj(al_));
    }

    /// Image of a boundary angle under the boundary extension.
    double act_angle(double theta) const {
        Complex z(std::cos(theta), std::sin(theta));
        Complex w = (al_ * z + be_) / (std::conj(be_) * z + std::conj(al_));
        return std::arg(w);
    }

    MobiusTransform operator*(const MobiusTransform& o) const {
        return MobiusTransform(al_ * o.al_ + be_ * std::conj(o.be_),
                               al_ * o.be_ + be_ * std::conj(o.al_));
    }

    MobiusTransform inverse() const {
        return MobiusTransform(std::conj(al_), -be_);
    }

    bool is_identity(double tol = 1e-9) const {
        return std::abs(be_) < tol && std::abs(al_.imag()) < tol &&
               std::abs(std::abs(al_.real()) - 1.0) < tol;
    }

    /// Renormalize det to 1 (drift control after long products).
    void renormalize() {
        double d = det();
        if (d <= 0) throw std::runtime_error("MobiusTransform: degenerate matrix");
        double s = 1.0 / std::sqrt(d);
        al_ *= s;
        be_ *= s;
    }

private:
    Complex al_, be_;
};

// ---- closed-form disk geometry, curvature -1 units ----

/// Hyperbolic distance between disk points (curvature -1).
inline double dist_h(Complex x, Complex y) {
    double num = 2.0 * std::norm(x - y);
    double den = (1.0 - std::norm(x)) * (1.0 - std::norm(y));
    return std::acosh(1.0 + num / den);
}

inline double dist_h0(Complex z) {
    double r = std::abs(z);
    return 2.0 * std::atanh(r);
}

/// Point at hyperbolic distance s from the origin in direction theta.
inline Complex ray_point(double theta, double s) {
    double r = std::tanh(s / 2);
    return Complex(r * std::cos(theta), r * std::sin(theta));
}

/// Isometry taking 0 -> p with no rotation at 0.
inline MobiusTransform translate_to(Complex p) {
    double n = std::norm(p);
    if (n >= 1.0) throw std::invalid_argument("translate_to: point outside disk");
    double s = 1.0 / std::sqrt(1.0 - n);
    return MobiusTransform(Complex(s, 0.0), s * p);
}

inline MobiusTransform rotation(double theta) {
    return MobiusTransform(std::polar(1.0, theta / 2), Complex(0.0, 0.0));
}

/// Orientation-preserving isometry with p1 -> q1, p2 -> q2.
/// Requires d(p1,p2) = d(q1,q2); checked to 1e-9.
inline MobiusTransform two_point_isometry(Complex p1, Complex p2, Complex q1, Complex q2) {
    if (std::abs(dist_h(p1, p2) - dist_h(q1, q2)) > 1e-9)
        throw std::invalid_argument("two_point_isometry: mismatched segment lengths");
    MobiusTransform A = translate_to(p1).inverse();
    MobiusTransform B = translate_to(q1).inverse();
    double phi = std::arg(B(q2)) - std::arg(A(p2));
    return B.inverse() * rotation(phi) * A;
}

/// Hyperbolic midpoint of [x, y].
inline Complex midpoint_h(Complex x, Complex y) {
    MobiusTransform T = translate_to(x);
    Complex z = T.inverse()(y);
    double r = std::abs(z);
    if (r < 1e-300) return x;
    double half = std::tanh(dist_h0(z) / 4);
    return T(z * (half / r));
}

/// Point at hyperbolic arclength s along the geodesic from x toward y.
inline Complex geodesic_point(Complex x, Complex y, double s) {
    MobiusTransform T = translate_to(x);
    Complex z = T.inverse()(y);
    double r = std::abs(z);
    if (r < 1e-300) return x;
    return T(z * (std::tanh(s / 2) / r));
}

/// Distance from the origin to the geodesic with ideal endpoints
/// exp(i t1), exp(i t2); curvature -1.  cosh R = 1 / sin(dtheta/2).
inline double origin_to_geodesic_h(double theta1, double theta2) {
    double d = std::fmod(std::abs(theta1 - theta2), 2 * kPi);
    if (d > kPi) d = 2 * kPi - d;
    if (d < 1e-15) throw std::invalid_argument("origin_to_geodesic_h: equal endpoints");
    return std::acosh(1.0 / std::sin(d / 2));
}

/// Foot of the perpendicular from the origin onto that geodesic.
inline Complex origin_foot(double theta1, double theta2) {
    double d = std::fmod(theta2 - theta1, 2 * kPi);
    if (d < 0) d += 2 * kPi;
    double mid;
    if (d > kPi)
        mid = theta2 + (2 * kPi - d) / 2;
    else
        mid = theta1 + d / 2;
    double R = origin_to_geodesic_h(theta1, theta2);
    return std::polar(std::tanh(R / 2), mid);
}

/// Angular distance on the circle, in [0, pi].
inline double angular_distance(double t1, double t2) {
    double d = std::fmod(std::abs(t1 - t2), 2 * kPi);
    return d > kPi ? 2 * kPi - d : d;
}

}  // namespace qc
