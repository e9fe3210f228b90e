/**
 * @file reports.hpp
 * @brief Result tables for each experiment. The CLI prints exactly these,
 *        so a library caller can reproduce CLI output byte for byte.
 */

#pragma once

#include "../constants.hpp"
#include "../elements.hpp"
#include "../experiments.hpp"
#include "../spun.hpp"
#include "table.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace focsim::io {

namespace detail {
inline double or_nan(const std::optional<double>& v) { return v.value_or(std::numeric_limits<double>::quiet_NaN()); }
} // namespace detail

/// Empty table stamped with the constants fingerprint and the producing command.
[[nodiscard]] inline ResultTable make_table(const AssumedConstants& c, const std::string& command) {
    ResultTable t;
    t.set_meta("constants", c.fingerprint());
    t.set_meta("command", command);
    return t;
}

[[nodiscard]] inline ResultTable simulate_table(const AssumedConstants& c, const FocsScenario& s,
                                                const IntensityResult& r) {
    auto t = make_table(c, "simulate");
    t.columns = {{"rotation", "rad"}, {"current", "A"}, {"i_out", ""}, {"i_ideal", ""}, {"relative_error", "pct"}};
    t.add_row({s.coil.rotation_angle_rad, detail::or_nan(s.coil.current_a), r.i_out, r.i_ideal, r.relative_error_pct});
    return t;
}

[[nodiscard]] inline ResultTable trajectory_table(const AssumedConstants& c, const SpunMediumSpec& m,
                                                  const EllipticityTrajectory& traj, std::size_t every) {
    auto t = make_table(c, "trajectory");
    t.set_meta("grid_n", std::to_string(traj.size() - 1));
    t.set_meta("profile", std::string(to_string(m.profile.kind)));
    t.set_meta("xi_max_rad_per_m", meta_number(m.profile.xi_max_rad_per_m));
    t.set_meta("metric", std::string(to_string(traj.metric)));
    t.columns = {{"z", "m"}, {"epsilon", ""}, {"ex_re", ""}, {"ex_im", ""}, {"ey_re", ""}, {"ey_im", ""}};
    if (every == 0) every = 1;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (k % every != 0 && k + 1 != traj.size()) continue;
        const auto& v = traj.states[k];
        t.add_row({traj.z_m[k], detail::or_nan(traj.epsilon[k]), v.ex.real(), v.ex.imag(), v.ey.real(), v.ey.imag()});
    }
    return t;
}

[[nodiscard]] inline ResultTable current_sweep_table(const AssumedConstants& c, const CurrentSweepSpec& spec,
                                                     const SweepResult& r) {
    auto t = make_table(c, "sweep-current");
    t.set_meta("front_end", std::string(to_string(spec.front_end)));
    if (spec.front_end == FrontEndKind::spun_fiber || spec.front_end == FrontEndKind::high_order_qwp)
        t.set_meta("grid_n", std::to_string(spec.medium_segments));
    t.set_meta("max_abs_error_pct", meta_number(r.summary.max_abs_error_pct));
    t.set_meta("mean_error_pct", meta_number(r.summary.mean_error_pct));
    t.set_meta("n_excluded", std::to_string(r.summary.n_excluded));
    t.columns = {{"current", "A"}, {"rotation", "rad"}, {"i_out", ""}, {"i_ideal", ""}, {"relative_error", "pct"}};
    for (const auto& row : r.rows)
        t.add_row({row.current_a, row.rotation_rad, row.i_out, row.i_ideal, row.relative_error_pct});
    return t;
}

[[nodiscard]] inline ResultTable xi_sweep_table(const AssumedConstants& c, const XiSweepOptions& opt,
                                                const std::vector<XiSweepRow>& rows) {
    auto t = make_table(c, "sweep-xi");
    t.set_meta("grid_n", std::to_string(opt.segments));
    t.set_meta("metric", std::string(to_string(opt.metric)));
    t.columns = {{"profile", ""},
                 {"xi_over_delta", ""},
                 {"xi_max", "rad_per_m"},
                 {"delta_eps_pp", ""},
                 {"rms_eps", ""},
                 {"mean_eps", ""},
                 {"post_delta_eps_pp", ""},
                 {"post_rms_eps", ""},
                 {"conversion_length", "m"},
                 {"fluctuation_bound", "rad2_per_m3"},
                 {"flagged", ""}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows) {
        t.add_row({std::string(to_string(r.profile)), r.xi_over_delta, r.xi_max_rad_per_m, r.full.delta_eps_pp,
                   r.full.rms_eps, r.full.mean_eps, r.post_transition ? r.post_transition->delta_eps_pp : nan,
                   r.post_transition ? r.post_transition->rms_eps : nan, detail::or_nan(r.conversion_length_m),
                   r.fluctuation_bound, r.flagged ? 1.0 : 0.0});
    }
    return t;
}

[[nodiscard]] inline ResultTable perturbation_table(const AssumedConstants& c, const XiSweepOptions& opt,
                                                    const PerturbationReport& rep) {
    auto t = make_table(c, "perturb");
    t.set_meta("grid_n", std::to_string(opt.segments));
    t.set_meta("baseline_delta_eps_pp", meta_number(rep.baseline.delta_eps_pp));
    t.set_meta("baseline_rms_eps", meta_number(rep.baseline.rms_eps));
    t.set_meta("wavelength_dpp_increase_pct", meta_number(rep.wavelength_dpp_increase_pct));
    t.set_meta("wavelength_rms_increase_pct", meta_number(rep.wavelength_rms_increase_pct));
    t.set_meta("temperature_dpp_increase_pct", meta_number(rep.temperature_dpp_increase_pct));
    t.set_meta("temperature_rms_increase_pct", meta_number(rep.temperature_rms_increase_pct));
    t.columns = {{"axis", ""},        {"wavelength_offset", "m"}, {"temperature_offset", "C"},
                 {"delta", "rad_per_m"}, {"delta_eps_pp", ""},    {"rms_eps", ""},
                 {"dpp_increase", "pct"}, {"rms_increase", "pct"}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : rep.samples) {
        const bool wl = s.axis == PerturbationAxis::wavelength;
        t.add_row({std::string(to_string(s.axis)), wl ? s.offset : nan, wl ? nan : s.offset, s.delta_rad_per_m,
                   s.metrics.delta_eps_pp, s.metrics.rms_eps, s.dpp_increase_pct, s.rms_increase_pct});
    }
    return t;
}

[[nodiscard]] inline ResultTable convergence_table(const AssumedConstants& c, const ConvergenceReport& rep) {
    auto t = make_table(c, "converge");
    t.set_meta("grid_n", std::to_string(rep.reference_segments));
    t.columns = {{"n_segments", ""}, {"error_max_norm", ""}, {"ratio", ""}};
    for (const auto& r : rep.rows)
        t.add_row({static_cast<double>(r.n_segments), r.error, detail::or_nan(r.ratio)});
    return t;
}

} // namespace focsim::io
