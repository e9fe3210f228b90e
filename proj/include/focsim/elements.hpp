/**
 * @file elements.hpp
 * @brief Jones matrices of the in-line reflective current sensor and the
 *        round-trip field / detected intensity built from them.
 *
 * The round trip is evaluated in one fixed transverse (x, y) frame, with z
 * pointing from the source towards the mirror:
 *
 *   E = Lp . S45out . P(phi) . Q^T . F(F) . M . F(F) . Q . P(phi) . S45in . Lp . Ein
 *
 *  - Reciprocal elements (splice, lead, wave plate) contribute their
 *    transpose on the way back; for the splice that is its inverse.
 *  - The Faraday rotation is non-reciprocal and keeps its sense, so the
 *    return pass is faraday_in(F) again.
 *  - The mirror is the identity.
 *  - P(phi) = diag(e^{i phi/2}, e^{-i phi/2}) is the differential phase of the
 *    polarization-maintaining lead between splice and wave plate (phi = 0
 *    reproduces the bare element chain).
 *
 * faraday_out() and qwp_ideal_out() are the same return operators written in
 * the mirror-image frame (y -> -y) that co-moves with the reflected beam:
 * faraday_out(F) = Y faraday_in(F) Y and qwp_ideal_out() = Y qwp_ideal_in()^T Y
 * with Y = diag(1, -1). They are provided as printed but are not used by the
 * fixed-frame chain.
 *
 * With a broadband source the lead decorrelates the two non-swapped
 * polarization paths (x->x, y->y) from the swapped ones, so the detector sees
 * the average of |E|^2 over phi. detected_intensity() evaluates that average
 * exactly (|E|^2 is a trigonometric polynomial of degree 2 in phi).
 */

#pragma once

#include "errors.hpp"
#include "jones.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

namespace focsim {

// ---------------------------------------------------------------- elements

[[nodiscard]] inline JonesMatrix polarizer() { return {{1.0, 0.0, 0.0, 0.0}}; }

[[nodiscard]] inline JonesMatrix splice45_in() {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    return {{h, h, -h, h}};
}

[[nodiscard]] inline JonesMatrix splice45_out() {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    return {{h, -h, h, h}};
}

[[nodiscard]] inline JonesMatrix qwp_ideal_in() {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    return {{h, Complex{0.0, h}, Complex{0.0, h}, h}};
}

[[nodiscard]] inline JonesMatrix qwp_ideal_out() {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    return {{h, Complex{0.0, -h}, Complex{0.0, -h}, h}};
}

[[nodiscard]] inline JonesMatrix faraday_in(double rotation_rad) { return JonesMatrix::rotation(rotation_rad); }

[[nodiscard]] inline JonesMatrix faraday_out(double rotation_rad) { return JonesMatrix::rotation(-rotation_rad); }

[[nodiscard]] inline JonesMatrix mirror() { return JonesMatrix::identity(); }

/// Differential phase of the polarization-maintaining lead.
[[nodiscard]] inline JonesMatrix lead_phase(double phi) {
    return JonesMatrix::diagonal(std::polar(1.0, 0.5 * phi), std::polar(1.0, -0.5 * phi));
}

/// Y = diag(1, -1): maps the fixed frame to the mirror-image frame of the reflected beam.
[[nodiscard]] inline JonesMatrix mirror_frame_flip() { return JonesMatrix::diagonal(1.0, -1.0); }

// ----------------------------------------------------------- wave plate model

/// How the retardation follows from birefringence and cut length.
enum class RetardationConvention {
    phase,   ///< rho = 2 pi dn d / lambda
    literal, ///< rho = dn d, reproduced for figure comparison only
};

struct ImperfectWaveplate {
    double rho_rad = std::numbers::pi / 2.0;
    double beta_rad = 0.0; ///< splice-angle deviation of the fast axis from its nominal orientation
    std::optional<double> delta_n;
    std::optional<double> cut_length_m;
    std::optional<double> wavelength_m;

    [[nodiscard]] static double retardation(double delta_n, double cut_length_m, double wavelength_m,
                                            RetardationConvention conv = RetardationConvention::phase) {
        if (conv == RetardationConvention::literal) return delta_n * cut_length_m;
        return 2.0 * std::numbers::pi * delta_n * cut_length_m / wavelength_m;
    }

    [[nodiscard]] static ImperfectWaveplate from_physical(double delta_n, double cut_length_m, double wavelength_m,
                                                          double beta_rad,
                                                          RetardationConvention conv = RetardationConvention::phase) {
        return {retardation(delta_n, cut_length_m, wavelength_m, conv), beta_rad, delta_n, cut_length_m,
                wavelength_m};
    }

    /// Cut length giving an exact quarter wave.
    [[nodiscard]] static double quarter_wave_length(double delta_n, double wavelength_m) {
        return wavelength_m / (4.0 * delta_n);
    }

    [[nodiscard]] bool is_ideal() const { return rho_rad == std::numbers::pi / 2.0 && beta_rad == 0.0; }

    /// Whether the stored rho matches the physical triple (when present).
    [[nodiscard]] bool consistent(double tol = 1e-12) const {
        if (!delta_n || !cut_length_m || !wavelength_m) return true;
        return std::abs(retardation(*delta_n, *cut_length_m, *wavelength_m) - rho_rad) <= tol;
    }
};

/**
 * Imperfect plate, sin/cos form:
 *   cos(rho/2) I + i sin(rho/2) [[cos2b, sin2b], [sin2b, -cos2b]]
 * which equals cos(rho/2) [[1 + i t cos2b, i t sin2b], [i t sin2b, 1 - i t cos2b]]
 * with t = tan(rho/2) wherever the tangent is finite.
 */
[[nodiscard]] inline JonesMatrix qwp_imperfect(double rho_rad, double beta_rad) {
    return JonesMatrix::retarder(rho_rad, beta_rad);
}

[[nodiscard]] inline JonesMatrix qwp_imperfect(const ImperfectWaveplate& w) { return qwp_imperfect(w.rho_rad, w.beta_rad); }

/// The tangent form exactly as printed; singular where cos(rho/2) = 0.
[[nodiscard]] inline JonesMatrix qwp_imperfect_tan_form(double rho_rad, double beta_rad) {
    const double wrapped = std::remainder(rho_rad - std::numbers::pi, 2.0 * std::numbers::pi);
    if (std::abs(wrapped) < 1e-9)
        throw DomainError("rho_rad", "tan(rho/2) is singular at rho = pi (mod 2 pi)");
    const double c = std::cos(0.5 * rho_rad);
    const double t = std::tan(0.5 * rho_rad);
    const double c2 = std::cos(2.0 * beta_rad);
    const double s2 = std::sin(2.0 * beta_rad);
    return Complex{c, 0.0} *
           JonesMatrix{{Complex{1.0, t * c2}, Complex{0.0, t * s2}, Complex{0.0, t * s2}, Complex{1.0, -t * c2}}};
}

// --------------------------------------------------------------- coil

struct FaradayCoil {
    double rotation_angle_rad = 0.0;
    std::optional<double> verdet_rad_per_a_turn;
    std::optional<double> turns;
    std::optional<double> current_a;

    [[nodiscard]] static FaradayCoil from_current(double verdet_rad_per_a_turn, double turns, double current_a) {
        return {verdet_rad_per_a_turn * turns * current_a, verdet_rad_per_a_turn, turns, current_a};
    }

    [[nodiscard]] bool consistent(double tol = 1e-12) const {
        if (!verdet_rad_per_a_turn || !turns || !current_a) return true;
        return std::abs(*verdet_rad_per_a_turn * *turns * *current_a - rotation_angle_rad) <= tol;
    }
};

// --------------------------------------------------------------- scenario

/// Ideal plate (printed quarter-wave matrix with fast axis at 45 degrees to the lead).
struct IdealFrontEnd {};

/// Imperfect plate; its fast axis sits at 45 degrees + beta to the lead axes.
struct ImperfectFrontEnd {
    ImperfectWaveplate plate;
};

/**
 * Any precomputed reciprocal converter (a spun medium's total matrix),
 * entered with its input axes rotated by `misalignment_rad` from the lead.
 */
struct MatrixFrontEnd {
    JonesMatrix forward = JonesMatrix::identity();
    double misalignment_rad = 0.0;
};

using FrontEnd = std::variant<IdealFrontEnd, ImperfectFrontEnd, MatrixFrontEnd>;

/// Nominal plate orientation relative to the lead: the printed ideal matrix is qwp_imperfect(pi/2, pi/4).
inline constexpr double kNominalPlateAxis = std::numbers::pi / 4.0;

/// Forward matrix of the conversion stage, expressed from lead frame to coil frame.
[[nodiscard]] inline JonesMatrix front_end_matrix(const FrontEnd& fe) {
    struct Visitor {
        JonesMatrix operator()(const IdealFrontEnd&) const { return qwp_ideal_in(); }
        JonesMatrix operator()(const ImperfectFrontEnd& f) const {
            return qwp_imperfect(f.plate.rho_rad, kNominalPlateAxis + f.plate.beta_rad);
        }
        JonesMatrix operator()(const MatrixFrontEnd& f) const {
            return f.forward * JonesMatrix::rotation(-f.misalignment_rad);
        }
    };
    return std::visit(Visitor{}, fe);
}

struct FocsScenario {
    FrontEnd front_end = IdealFrontEnd{};
    FaradayCoil coil{};
};

struct IntensityResult {
    double i_out = 0.0;
    double i_ideal = 0.0;
    double relative_error_pct = 0.0;
};

/// Full round-trip operator for a given conversion stage, rotation and lead phase.
[[nodiscard]] inline JonesMatrix roundtrip_matrix(const JonesMatrix& front, double rotation_rad,
                                                  double lead_phi = 0.0) {
    const JonesMatrix lead = lead_phase(lead_phi);
    const JonesMatrix fwd = front * lead * splice45_in() * polarizer();
    const JonesMatrix back = polarizer() * splice45_out() * lead * transpose(front);
    return back * faraday_in(rotation_rad) * mirror() * faraday_in(rotation_rad) * fwd;
}

[[nodiscard]] inline JonesVector roundtrip_field(const FocsScenario& s, const JonesVector& e_in,
                                                 double lead_phi = 0.0) {
    return roundtrip_matrix(front_end_matrix(s.front_end), s.coil.rotation_angle_rad, lead_phi) * e_in;
}

/// Intensity averaged over the lead's differential phase (broadband source).
[[nodiscard]] inline double lead_averaged_intensity(const JonesMatrix& front, double rotation_rad,
                                                    const JonesVector& e_in) {
    // Four equally spaced phases integrate harmonics up to order 3 exactly.
    double sum = 0.0;
    for (int k = 0; k < 4; ++k)
        sum += intensity(roundtrip_matrix(front, rotation_rad, 0.5 * std::numbers::pi * k) * e_in);
    return 0.25 * sum;
}

/// Closed form of the ideal chain for Ein = [1, 0]: (1 + cos 4F) / 2.
[[nodiscard]] inline double ideal_closed_form(double rotation_rad) { return 0.5 * (1.0 + std::cos(4.0 * rotation_rad)); }

inline constexpr double kFringeNullThreshold = 1e-15;

/**
 * Detected intensity of the scenario and of the same chain with the ideal
 * plate, and the relative error between them in percent.
 */
[[nodiscard]] inline IntensityResult detected_intensity(const FocsScenario& s, const JonesVector& e_in = {1.0, 0.0}) {
    const double f = s.coil.rotation_angle_rad;
    const double ideal = lead_averaged_intensity(qwp_ideal_in(), f, e_in);
    if (ideal < kFringeNullThreshold)
        throw DomainError("rotation_angle_rad", "relative error undefined at a fringe null (F = " +
                                                    std::to_string(f) + " rad)");
    const double out = lead_averaged_intensity(front_end_matrix(s.front_end), f, e_in);
    return {out, ideal, (out - ideal) / ideal * 100.0};
}

} // namespace focsim
