/**
 * @file spun.hpp
 * @brief Spun birefringent media (high-order quarter-wave plates, spun
 *        fiber) as ordered products of short rotated retarders, and the
 *        ellipticity metrics evaluated along them.
 *
 * Segment k of a medium with intrinsic retardation delta (rad/m) and local
 * fast-axis angle theta_k is the linear retarder
 *   R(theta_k) diag(e^{+i delta dz/2}, e^{-i delta dz/2}) R(-theta_k),
 * with theta(z) = integral_0^z xi(u) du the accumulated spin angle. The total
 * operator is J_N ... J_2 J_1.
 */

#pragma once

#include "errors.hpp"
#include "jones.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace focsim {

enum class ProfileKind { linear, cosine, constant, sampled };

[[nodiscard]] inline std::string_view to_string(ProfileKind k) {
    switch (k) {
    case ProfileKind::linear: return "linear";
    case ProfileKind::cosine: return "cosine";
    case ProfileKind::constant: return "constant";
    case ProfileKind::sampled: return "sampled";
    }
    return "unknown";
}

[[nodiscard]] inline std::optional<ProfileKind> parse_profile_kind(std::string_view s) {
    if (s == "linear") return ProfileKind::linear;
    if (s == "cosine") return ProfileKind::cosine;
    if (s == "constant") return ProfileKind::constant;
    if (s == "sampled") return ProfileKind::sampled;
    return std::nullopt;
}

/**
 * Spin-rate profile xi(z).
 *
 * linear:   xi = xi_max (z - L1) / L2 on [L1, L1 + L2]
 * cosine:   xi = xi_max (0.5 - 0.5 cos(pi (z - L1) / L2)) on [L1, L1 + L2]
 * Both are 0 before L1 and xi_max after L1 + L2 (uniform spinning).
 * constant: xi = xi_max everywhere.
 * sampled:  piecewise-linear through `table` (z ascending), held constant
 *           outside the table.
 */
struct SpinProfile {
    ProfileKind kind = ProfileKind::cosine;
    double xi_max_rad_per_m = 0.0;
    double lead_in_m = 0.0;
    double transition_m = 0.0;
    std::vector<std::pair<double, double>> table; // (z_m, xi_rad_per_m), sampled kind only

    [[nodiscard]] double ramp_end() const { return lead_in_m + transition_m; }
};

namespace detail {

inline void require_non_negative(double z) {
    if (!(z >= 0.0)) throw DomainError("z", "position must be >= 0");
}

inline double sampled_rate(const SpinProfile& p, double z) {
    const auto& t = p.table;
    if (t.empty()) throw DomainError("table", "sampled profile has no samples");
    if (z <= t.front().first) return t.front().second;
    if (z >= t.back().first) return t.back().second;
    const auto it = std::upper_bound(t.begin(), t.end(), z, [](double v, const auto& e) { return v < e.first; });
    const auto& [z1, x1] = *it;
    const auto& [z0, x0] = *(it - 1);
    return x0 + (x1 - x0) * (z - z0) / (z1 - z0);
}

// exact integral of the piecewise-linear interpolant, i.e. the trapezoidal rule on the table
inline double sampled_angle(const SpinProfile& p, double z) {
    const auto& t = p.table;
    if (t.empty()) throw DomainError("table", "sampled profile has no samples");
    double acc = 0.0;
    double prev_z = 0.0;
    double prev_x = sampled_rate(p, 0.0);
    for (const auto& [zk, xk] : t) {
        if (zk <= prev_z) continue;
        if (zk >= z) break;
        acc += 0.5 * (prev_x + xk) * (zk - prev_z);
        prev_z = zk;
        prev_x = xk;
    }
    acc += 0.5 * (prev_x + sampled_rate(p, z)) * (z - prev_z);
    return acc;
}

} // namespace detail

[[nodiscard]] inline double spin_rate(const SpinProfile& p, double z) {
    detail::require_non_negative(z);
    const double xm = p.xi_max_rad_per_m;
    switch (p.kind) {
    case ProfileKind::constant: return xm;
    case ProfileKind::sampled: return detail::sampled_rate(p, z);
    case ProfileKind::linear:
    case ProfileKind::cosine: {
        if (z <= p.lead_in_m) return 0.0;
        if (z >= p.ramp_end()) return xm;
        const double t = z - p.lead_in_m;
        const double u = t / p.transition_m;
        return p.kind == ProfileKind::linear ? xm * u : xm * (0.5 - 0.5 * std::cos(std::numbers::pi * u));
    }
    }
    return 0.0;
}

/// d xi / dz (one-sided at the ramp ends: the value inside the ramp).
[[nodiscard]] inline double spin_rate_slope(const SpinProfile& p, double z) {
    detail::require_non_negative(z);
    const double xm = p.xi_max_rad_per_m;
    const double t = z - p.lead_in_m;
    switch (p.kind) {
    case ProfileKind::constant: return 0.0;
    case ProfileKind::sampled:
        throw DomainError("profile", "slope of a sampled profile is not defined without smoothing");
    case ProfileKind::linear: return (t < 0.0 || t > p.transition_m) ? 0.0 : xm / p.transition_m;
    case ProfileKind::cosine:
        if (t < 0.0 || t > p.transition_m) return 0.0;
        return xm * 0.5 * std::numbers::pi / p.transition_m * std::sin(std::numbers::pi * t / p.transition_m);
    }
    return 0.0;
}

/// Accumulated fast-axis angle theta(z) = integral_0^z xi.
[[nodiscard]] inline double spin_angle(const SpinProfile& p, double z) {
    detail::require_non_negative(z);
    const double xm = p.xi_max_rad_per_m;
    switch (p.kind) {
    case ProfileKind::constant: return xm * z;
    case ProfileKind::sampled: return detail::sampled_angle(p, z);
    case ProfileKind::linear:
    case ProfileKind::cosine: {
        const double t = std::max(0.0, z - p.lead_in_m);
        const double L2 = p.transition_m;
        const double r = std::min(t, L2);
        double ramp = 0.0;
        if (L2 > 0.0) {
            ramp = p.kind == ProfileKind::linear
                       ? xm * r * r / (2.0 * L2)
                       : xm * (0.5 * r - 0.5 * L2 / std::numbers::pi * std::sin(std::numbers::pi * r / L2));
        }
        return ramp + xm * std::max(0.0, t - L2);
    }
    }
    return 0.0;
}

struct SpunMediumSpec {
    double length_m = 0.0;
    double delta_rad_per_m = 0.0; ///< intrinsic linear-birefringence retardation per unit length
    SpinProfile profile{};
    std::optional<double> xi_over_delta;

    [[nodiscard]] static SpunMediumSpec from_ratio(double length_m, double delta_rad_per_m, ProfileKind kind,
                                                   double xi_over_delta, double lead_in_m, double transition_m) {
        SpunMediumSpec s;
        s.length_m = length_m;
        s.delta_rad_per_m = delta_rad_per_m;
        s.profile = {kind, xi_over_delta * delta_rad_per_m, lead_in_m, transition_m, {}};
        s.xi_over_delta = xi_over_delta;
        return s;
    }

    [[nodiscard]] static double delta_from_beat_length(double beat_length_m) {
        return 2.0 * std::numbers::pi / beat_length_m;
    }

    [[nodiscard]] double beat_length_m() const { return 2.0 * std::numbers::pi / delta_rad_per_m; }

    /// Throws DomainError naming the first violated constraint.
    void validate() const {
        if (!(length_m > 0.0)) throw DomainError("length_m", "medium length must be > 0");
        if (!(delta_rad_per_m >= 0.0)) throw DomainError("delta_rad_per_m", "retardation per length must be >= 0");
        if (profile.lead_in_m < 0.0 || profile.transition_m < 0.0)
            throw DomainError("profile", "lead-in and transition lengths must be >= 0");
        if ((profile.kind == ProfileKind::linear || profile.kind == ProfileKind::cosine) &&
            length_m < profile.ramp_end() * (1.0 - 1e-12))
            throw DomainError("length_m", "medium shorter than lead-in + transition");
        if (xi_over_delta && std::abs(*xi_over_delta * delta_rad_per_m - profile.xi_max_rad_per_m) >
                                 1e-12 * std::max(1.0, std::abs(profile.xi_max_rad_per_m)))
            throw DomainError("xi_over_delta", "xi_over_delta * delta does not match xi_max");
    }
};

struct PropagationGrid {
    std::size_t n_segments = 1;
    double length_m = 0.0;

    [[nodiscard]] static PropagationGrid uniform(double length_m, std::size_t n_segments) {
        if (n_segments < 1) throw DomainError("n_segments", "grid needs at least one segment");
        if (!(length_m > 0.0)) throw DomainError("length_m", "grid length must be > 0");
        return {n_segments, length_m};
    }

    [[nodiscard]] double dz() const { return length_m / static_cast<double>(n_segments); }
    /// Left end of segment k (0-based).
    [[nodiscard]] double z(std::size_t k) const { return static_cast<double>(k) * dz(); }
};

/// Where in a segment the fast-axis angle is evaluated.
enum class SegmentRule { midpoint, left_endpoint };

/**
 * rotated_axis: product of rotated retarders in the fixed frame.
 * corotating:   same medium in the local fiber frame: retarders along x with an
 *               explicit frame rotation between consecutive segments. Equals
 *               R(-theta_last) J_rotated R(theta_first).
 */
enum class SegmentModel { rotated_axis, corotating };

[[nodiscard]] inline JonesMatrix segment_matrix(double delta_rad_per_m, double theta_rad, double dz_m) {
    if (!(dz_m > 0.0)) throw DomainError("dz", "segment length must be > 0");
    return JonesMatrix::retarder(delta_rad_per_m * dz_m, theta_rad);
}

[[nodiscard]] inline double segment_angle(const SpunMediumSpec& spec, const PropagationGrid& grid, std::size_t k,
                                          SegmentRule rule) {
    const double offset = rule == SegmentRule::midpoint ? 0.5 : 0.0;
    return spin_angle(spec.profile, (static_cast<double>(k) + offset) * grid.dz());
}

namespace detail {
inline void check_grid(const SpunMediumSpec& spec, const PropagationGrid& grid) {
    if (std::abs(grid.length_m - spec.length_m) > 1e-12 * spec.length_m)
        throw DomainError("grid", "grid does not cover the medium length");
}
} // namespace detail

[[nodiscard]] inline JonesMatrix total_matrix(const SpunMediumSpec& spec, const PropagationGrid& grid,
                                              SegmentRule rule = SegmentRule::midpoint,
                                              SegmentModel model = SegmentModel::rotated_axis) {
    detail::check_grid(spec, grid);
    const double dz = grid.dz();
    JonesMatrix j = JonesMatrix::identity();
    if (model == SegmentModel::rotated_axis) {
        for (std::size_t k = 0; k < grid.n_segments; ++k)
            j = segment_matrix(spec.delta_rad_per_m, segment_angle(spec, grid, k, rule), dz) * j;
        return j;
    }
    const JonesMatrix local = segment_matrix(spec.delta_rad_per_m, 0.0, dz);
    double prev = segment_angle(spec, grid, 0, rule);
    j = local;
    for (std::size_t k = 1; k < grid.n_segments; ++k) {
        const double th = segment_angle(spec, grid, k, rule);
        j = local * JonesMatrix::rotation(-(th - prev)) * j;
        prev = th;
    }
    return j;
}

/**
 * The same medium traversed from its far end back to its start. For a
 * reciprocal medium in a fixed transverse frame this is J_1^T ... J_N^T,
 * i.e. the transpose of the forward product.
 */
[[nodiscard]] inline JonesMatrix reverse_matrix(const SpunMediumSpec& spec, const PropagationGrid& grid,
                                                SegmentRule rule = SegmentRule::midpoint) {
    detail::check_grid(spec, grid);
    const double dz = grid.dz();
    JonesMatrix j = JonesMatrix::identity();
    for (std::size_t k = grid.n_segments; k-- > 0;)
        j = transpose(segment_matrix(spec.delta_rad_per_m, segment_angle(spec, grid, k, rule), dz)) * j;
    return j;
}

enum class EllipticityMetric { axis_ratio, principal };

[[nodiscard]] inline std::string_view to_string(EllipticityMetric m) {
    return m == EllipticityMetric::principal ? "principal" : "axis_ratio";
}

/// Ellipticity of `v`, or nullopt where the chosen metric is undefined.
[[nodiscard]] inline std::optional<double> ellipticity(const JonesVector& v, EllipticityMetric metric) {
    try {
        return metric == EllipticityMetric::principal ? ellipticity_principal(v) : ellipticity_axis_ratio(v);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

/**
 * Sampled epsilon(z). Sample 0 is the input at z = 0; sample k is the field
 * after segment k. A missing epsilon marks a point where the metric is
 * undefined (|Ex| = 0 for axis_ratio).
 */
struct EllipticityTrajectory {
    std::vector<double> z_m;
    std::vector<std::optional<double>> epsilon;
    std::vector<JonesVector> states;
    EllipticityMetric metric = EllipticityMetric::principal;

    [[nodiscard]] std::size_t size() const { return z_m.size(); }
    [[nodiscard]] const JonesVector& final_state() const { return states.back(); }
};

[[nodiscard]] inline EllipticityTrajectory propagate_trajectory(const SpunMediumSpec& spec,
                                                                const PropagationGrid& grid,
                                                                const JonesVector& e_in,
                                                                EllipticityMetric metric = EllipticityMetric::principal,
                                                                SegmentRule rule = SegmentRule::midpoint) {
    detail::check_grid(spec, grid);
    if (!(intensity(e_in) > 0.0)) throw DomainError("e_in", "input field has zero intensity");
    EllipticityTrajectory t;
    t.metric = metric;
    const std::size_t n = grid.n_segments;
    t.z_m.reserve(n + 1);
    t.epsilon.reserve(n + 1);
    t.states.reserve(n + 1);
    JonesVector v = e_in;
    t.z_m.push_back(0.0);
    t.epsilon.push_back(ellipticity(v, metric));
    t.states.push_back(v);
    const double dz = grid.dz();
    for (std::size_t k = 0; k < n; ++k) {
        v = segment_matrix(spec.delta_rad_per_m, segment_angle(spec, grid, k, rule), dz) * v;
        t.z_m.push_back(k + 1 == n ? grid.length_m : grid.z(k + 1));
        t.epsilon.push_back(ellipticity(v, metric));
        t.states.push_back(v);
    }
    return t;
}

/**
 * Segment count heuristic N = C L^2 / tol, floored at 64. The constant C
 * (1/m^2) comes from a refinement study on the default medium.
 */
[[nodiscard]] inline std::size_t estimate_segments(double length_m, double tolerance, double calibration_per_m2) {
    if (!(length_m > 0.0)) throw DomainError("length_m", "length must be > 0");
    if (!(tolerance > 0.0 && tolerance < 1.0)) throw DomainError("tolerance", "tolerance must be in (0, 1)");
    const double n = std::ceil(calibration_per_m2 * length_m * length_m / tolerance);
    return std::max<std::size_t>(64, static_cast<std::size_t>(n));
}

struct StabilityMetrics {
    double delta_eps_pp = 0.0;
    double rms_eps = 0.0;
    double mean_eps = 0.0;
};

struct ZWindow {
    double z_lo = 0.0;
    double z_hi = 0.0;

    [[nodiscard]] static ZWindow full(double length_m) { return {0.0, length_m}; }
    /// [L1 + L2, L]: the uniformly spun tail.
    [[nodiscard]] static ZWindow post_transition(const SpinProfile& p, double length_m) {
        return {p.ramp_end(), length_m};
    }
};

/**
 * Peak-to-peak max(eps) - min(eps) and
 * RMS = sqrt(1/Lw integral (eps - mean)^2 dz) with mean = 1/Lw integral eps dz,
 * both integrals by the trapezoidal rule over samples inside the window.
 * Gaps split the integration; intervals touching a gap are skipped.
 * The default window is the whole trajectory.
 */
[[nodiscard]] inline StabilityMetrics stability_metrics(const EllipticityTrajectory& traj,
                                                        std::optional<ZWindow> window = std::nullopt) {
    if (traj.size() == 0) throw DomainError("window", "empty trajectory");
    const ZWindow w = window.value_or(ZWindow{traj.z_m.front(), traj.z_m.back()});
    const double slack = 1e-12 * std::max(1.0, std::abs(w.z_hi));
    std::vector<std::pair<double, std::optional<double>>> pts;
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (traj.z_m[k] >= w.z_lo - slack && traj.z_m[k] <= w.z_hi + slack) pts.emplace_back(traj.z_m[k], traj.epsilon[k]);

    double lo = 0.0, hi = 0.0;
    std::size_t valid = 0;
    for (const auto& [z, e] : pts) {
        if (!e) continue;
        lo = valid == 0 ? *e : std::min(lo, *e);
        hi = valid == 0 ? *e : std::max(hi, *e);
        ++valid;
    }
    if (valid < 2) throw DomainError("window", "fewer than two defined samples in the window");

    auto integrate = [&](auto&& f) {
        double acc = 0.0, span = 0.0;
        for (std::size_t k = 1; k < pts.size(); ++k) {
            const auto& [z0, e0] = pts[k - 1];
            const auto& [z1, e1] = pts[k];
            if (!e0 || !e1) continue;
            acc += 0.5 * (f(*e0) + f(*e1)) * (z1 - z0);
            span += z1 - z0;
        }
        return std::pair{acc, span};
    };
    const auto [sum, span] = integrate([](double e) { return e; });
    if (!(span > 0.0)) throw DomainError("window", "window has zero length");
    const double mean = sum / span;
    const auto [sq, span2] = integrate([mean](double e) { return (e - mean) * (e - mean); });
    return {hi - lo, std::sqrt(std::max(0.0, sq / span2)), mean};
}

/**
 * max_z |d xi / dz| * xi_max over the trajectory's z range: the driver that
 * ellipticity fluctuation is expected to scale with. A relative quantity; it
 * carries no proportionality constant.
 */
[[nodiscard]] inline double fluctuation_bound(const EllipticityTrajectory& traj, const SpinProfile& p) {
    if (p.kind == ProfileKind::sampled)
        throw DomainError("profile", "fluctuation bound needs an analytic profile");
    const double z0 = traj.size() ? traj.z_m.front() : 0.0;
    const double z1 = traj.size() ? traj.z_m.back() : p.ramp_end();
    const double a = std::max(z0, p.lead_in_m);
    const double b = std::min(z1, p.ramp_end());
    if (p.kind == ProfileKind::constant || b < a || p.transition_m <= 0.0) return 0.0;
    double slope = 0.0;
    if (p.kind == ProfileKind::linear) {
        slope = p.xi_max_rad_per_m / p.transition_m;
    } else {
        const double mid = p.lead_in_m + 0.5 * p.transition_m;
        const double zs = std::clamp(mid, a, b);
        slope = spin_rate_slope(p, zs);
    }
    return std::abs(slope) * p.xi_max_rad_per_m;
}

/// First z with epsilon >= threshold, if any.
[[nodiscard]] inline std::optional<double> conversion_length(const EllipticityTrajectory& traj, double threshold) {
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (traj.epsilon[k] && *traj.epsilon[k] >= threshold) return traj.z_m[k];
    return std::nullopt;
}

} // namespace focsim
