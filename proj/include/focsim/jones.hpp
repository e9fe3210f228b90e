/**
 * @file jones.hpp
 * @brief Jones calculus primitives: 2-vectors, 2x2 operators, Stokes
 *        parameters and ellipticity.
 *
 * Conventions (fixed for the whole library):
 *  - JonesMatrix is stored row-major: m[0]=a00, m[1]=a01, m[2]=a10, m[3]=a11.
 *  - Time dependence exp(-i*omega*t); a field [1, i]/sqrt(2) has s3 = +1 and
 *    is called right-handed here. s3 = -2 Im(ex * conj(ey)).
 *  - rotation(theta) = [[cos, -sin], [sin, cos]] rotates a field vector
 *    counter-clockwise by theta.
 *
 * Global phase is never removed implicitly. Use equal_up_to_phase() to
 * compare operators projectively.
 */

#pragma once

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace focsim {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

struct JonesVector {
    Complex ex{};
    Complex ey{};

    friend JonesVector operator+(const JonesVector& a, const JonesVector& b) {
        return {a.ex + b.ex, a.ey + b.ey};
    }
    friend JonesVector operator*(Complex s, const JonesVector& v) { return {s * v.ex, s * v.ey}; }
};

struct StokesVector {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

struct JonesMatrix {
    std::array<Complex, 4> m{};

    [[nodiscard]] constexpr const Complex& operator()(int r, int c) const { return m[2 * r + c]; }
    [[nodiscard]] constexpr Complex& operator()(int r, int c) { return m[2 * r + c]; }

    [[nodiscard]] static JonesMatrix identity() { return {{1.0, 0.0, 0.0, 1.0}}; }

    [[nodiscard]] static JonesMatrix rotation(double theta) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        return {{c, -s, s, c}};
    }

    [[nodiscard]] static JonesMatrix diagonal(Complex a, Complex b) { return {{a, 0.0, 0.0, b}}; }

    /**
     * Linear retarder with retardation `retardation` (radians) and fast axis at
     * `axis` from x:  R(axis) diag(e^{+i r/2}, e^{-i r/2}) R(-axis), evaluated in
     * the closed form cos(r/2) I + i sin(r/2) [[cos2a, sin2a], [sin2a, -cos2a]].
     */
    [[nodiscard]] static JonesMatrix retarder(double retardation, double axis) {
        const double c = std::cos(0.5 * retardation);
        const double s = std::sin(0.5 * retardation);
        const double c2 = std::cos(2.0 * axis);
        const double s2 = std::sin(2.0 * axis);
        return {{Complex{c, s * c2}, Complex{0.0, s * s2}, Complex{0.0, s * s2}, Complex{c, -s * c2}}};
    }

    friend JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b) {
        return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                 a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
    }

    friend JonesVector operator*(const JonesMatrix& a, const JonesVector& v) {
        return {a.m[0] * v.ex + a.m[1] * v.ey, a.m[2] * v.ex + a.m[3] * v.ey};
    }

    friend JonesMatrix operator*(Complex s, const JonesMatrix& a) {
        return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
    }

    friend JonesMatrix operator+(const JonesMatrix& a, const JonesMatrix& b) {
        return {{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]}};
    }

    friend JonesMatrix operator-(const JonesMatrix& a, const JonesMatrix& b) {
        return {{a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]}};
    }
};

[[nodiscard]] inline JonesMatrix mat_mul(const JonesMatrix& a, const JonesMatrix& b) { return a * b; }

[[nodiscard]] inline JonesVector apply(const JonesMatrix& m, const JonesVector& v) { return m * v; }

[[nodiscard]] inline JonesMatrix transpose(const JonesMatrix& a) { return {{a.m[0], a.m[2], a.m[1], a.m[3]}}; }

[[nodiscard]] inline JonesMatrix adjoint(const JonesMatrix& a) {
    return {{std::conj(a.m[0]), std::conj(a.m[2]), std::conj(a.m[1]), std::conj(a.m[3])}};
}

[[nodiscard]] inline Complex determinant(const JonesMatrix& a) { return a.m[0] * a.m[3] - a.m[1] * a.m[2]; }

[[nodiscard]] inline Complex trace(const JonesMatrix& a) { return a.m[0] + a.m[3]; }

/// Largest entry modulus of a - b.
[[nodiscard]] inline double max_abs_diff(const JonesMatrix& a, const JonesMatrix& b) {
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(a.m[k] - b.m[k]));
    return d;
}

[[nodiscard]] inline double max_abs_diff(const JonesVector& a, const JonesVector& b) {
    return std::max(std::abs(a.ex - b.ex), std::abs(a.ey - b.ey));
}

/// max-norm of J^dagger J - I
[[nodiscard]] inline double unitarity_defect(const JonesMatrix& a) {
    return max_abs_diff(adjoint(a) * a, JonesMatrix::identity());
}

/**
 * Projective equality for unitary operators: |tr(A^dagger B)| / 2 == 1
 * within `tol`.
 */
[[nodiscard]] inline bool equal_up_to_phase(const JonesMatrix& a, const JonesMatrix& b, double tol = 1e-12) {
    return std::abs(std::abs(trace(adjoint(a) * b)) / 2.0 - 1.0) <= tol;
}

[[nodiscard]] inline double intensity(const JonesVector& v) { return std::norm(v.ex) + std::norm(v.ey); }

[[nodiscard]] inline JonesVector normalize(const JonesVector& v) {
    const double n = std::sqrt(intensity(v));
    if (!(n > 0.0)) throw DomainError("v", "cannot normalize a zero Jones vector");
    return Complex{1.0 / n, 0.0} * v;
}

[[nodiscard]] inline StokesVector jones_to_stokes(const JonesVector& v) {
    const Complex c = v.ex * std::conj(v.ey);
    const double ix = std::norm(v.ex);
    const double iy = std::norm(v.ey);
    return {ix + iy, ix - iy, 2.0 * c.real(), -2.0 * c.imag()};
}

/**
 * Literal axis-ratio ellipticity |Ey| / |Ex|. Only equals the minor/major
 * axis ratio when the ellipse axes lie along x and y; not clamped.
 */
[[nodiscard]] inline double ellipticity_axis_ratio(const JonesVector& v) {
    const double ax = std::abs(v.ex);
    if (ax < 1e-300) throw DomainError("ex", "axis-ratio ellipticity undefined for |Ex| = 0");
    return std::abs(v.ey) / ax;
}

/**
 * Frame-independent ellipticity tan(chi) with sin(2 chi) = s3 / s0.
 * Signed by handedness, in [-1, 1].
 */
[[nodiscard]] inline double ellipticity_principal(const JonesVector& v) {
    const StokesVector s = jones_to_stokes(v);
    if (!(s.s0 > 0.0)) throw DomainError("v", "ellipticity undefined for a zero Jones vector");
    const double sin2chi = std::clamp(s.s3 / s.s0, -1.0, 1.0);
    return std::tan(0.5 * std::asin(sin2chi));
}

} // namespace focsim
