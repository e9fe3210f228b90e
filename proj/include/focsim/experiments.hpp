/**
 * @file experiments.hpp
 * @brief Parameter sweeps over the sensor chain and spun media: error vs
 *        current for the different conversion stages, xi/delta sweeps of
 *        the ellipticity metrics, wavelength/temperature perturbation and
 *        segment-count refinement.
 *
 * Independent cells run on a small thread pool. Each cell writes only its
 * own slot of a pre-sized result vector, so output order and values never
 * depend on the worker count.
 */

#pragma once

#include "constants.hpp"
#include "elements.hpp"
#include "errors.hpp"
#include "jones.hpp"
#include "spun.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace focsim {

// ---------------------------------------------------------------- execution

/// FOCSIM_THREADS if set to a positive integer, else the hardware concurrency.
[[nodiscard]] inline unsigned default_worker_count() {
    if (const char* env = std::getenv("FOCSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n). `workers` = 0 picks default_worker_count().
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned workers = 0) {
    if (workers == 0) workers = default_worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------- medium models

/// Beat length proportional to wavelength: delta(lambda) = delta0 lambda0 / lambda.
[[nodiscard]] inline double delta_at_wavelength(double delta0, double lambda0_m, double lambda_m) {
    return delta0 * (lambda0_m / lambda_m);
}

/// delta(T) = delta0 (1 + k_T dT).
[[nodiscard]] inline double delta_at_temperature(double delta0, double coeff_per_c, double delta_t_c) {
    return delta0 * (1.0 + coeff_per_c * delta_t_c);
}

/// The default spun medium of the constants block with the given profile and xi/delta.
[[nodiscard]] inline SpunMediumSpec default_medium(const AssumedConstants& c, ProfileKind kind, double xi_over_delta) {
    return SpunMediumSpec::from_ratio(c.medium_length_m, SpunMediumSpec::delta_from_beat_length(c.medium_beat_length_m),
                                      kind, xi_over_delta, c.medium_lead_in_m, c.medium_transition_m);
}

[[nodiscard]] inline SpunMediumSpec default_medium(const AssumedConstants& c) {
    return default_medium(c, ProfileKind::cosine, c.medium_xi_over_delta);
}

/// Input for trajectories: linear light along the fast axis at the unspun entry end.
[[nodiscard]] inline JonesVector aligned_input() { return {1.0, 0.0}; }

// ------------------------------------------------------------ current sweep

enum class FrontEndKind { ideal, imperfect_qwp, spun_fiber, high_order_qwp };

[[nodiscard]] inline std::string_view to_string(FrontEndKind k) {
    switch (k) {
    case FrontEndKind::ideal: return "ideal";
    case FrontEndKind::imperfect_qwp: return "imperfect_qwp";
    case FrontEndKind::spun_fiber: return "spun_fiber";
    case FrontEndKind::high_order_qwp: return "high_order_qwp";
    }
    return "unknown";
}

[[nodiscard]] inline std::optional<FrontEndKind> parse_front_end_kind(std::string_view s) {
    if (s == "ideal") return FrontEndKind::ideal;
    if (s == "imperfect_qwp") return FrontEndKind::imperfect_qwp;
    if (s == "spun_fiber") return FrontEndKind::spun_fiber;
    if (s == "high_order_qwp") return FrontEndKind::high_order_qwp;
    return std::nullopt;
}

struct CurrentSweepSpec {
    double current_min_a = 0.0;
    double current_max_a = 2000.0;
    std::size_t n_points = 201;
    double verdet_turns_rad_per_a = 2.5e-4;
    /// When set, sweep F directly over this range instead of converting currents.
    std::optional<std::array<double, 2>> rotation_range_rad;

    FrontEndKind front_end = FrontEndKind::ideal;
    ImperfectWaveplate plate{};    ///< imperfect_qwp
    SpunMediumSpec medium{};       ///< spun_fiber and high_order_qwp
    std::size_t medium_segments = 200000;
    double misalignment_rad = 0.0; ///< spun media: splice angle between lead and medium axes
    SegmentRule rule = SegmentRule::midpoint;
    unsigned workers = 0;

    void validate() const {
        if (n_points < 2) throw DomainError("n_points", "a sweep needs at least two points");
        if (rotation_range_rad) {
            if (!((*rotation_range_rad)[1] > (*rotation_range_rad)[0]))
                throw DomainError("rotation_range_rad", "rotation range is empty");
        } else if (!(current_max_a > current_min_a)) {
            throw DomainError("current_max_a", "current range is empty");
        }
        if (front_end == FrontEndKind::spun_fiber || front_end == FrontEndKind::high_order_qwp) medium.validate();
    }
};

struct SweepRow {
    double current_a = 0.0; ///< NaN when sweeping F directly
    double rotation_rad = 0.0;
    double i_out = 0.0;
    double i_ideal = 0.0;
    double relative_error_pct = 0.0;
};

struct SweepSummary {
    double max_abs_error_pct = 0.0;
    double mean_error_pct = 0.0;
    std::size_t n_excluded = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> excluded_rotation_rad; ///< fringe nulls
    SweepSummary summary;
};

/// Max |error| and mean error over rows, in row order.
[[nodiscard]] inline SweepSummary summarize(const std::vector<SweepRow>& rows, std::size_t n_excluded = 0) {
    SweepSummary s;
    s.n_excluded = n_excluded;
    if (rows.empty()) {
        s.mean_error_pct = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (const auto& r : rows) {
        s.max_abs_error_pct = std::max(s.max_abs_error_pct, std::abs(r.relative_error_pct));
        sum += r.relative_error_pct;
    }
    s.mean_error_pct = sum / static_cast<double>(rows.size());
    return s;
}

/// The conversion stage the sweep spec describes. Spun media are propagated once here.
[[nodiscard]] inline FrontEnd build_front_end(const CurrentSweepSpec& spec) {
    switch (spec.front_end) {
    case FrontEndKind::ideal: return IdealFrontEnd{};
    case FrontEndKind::imperfect_qwp: return ImperfectFrontEnd{spec.plate};
    case FrontEndKind::spun_fiber:
    case FrontEndKind::high_order_qwp: {
        const auto grid = PropagationGrid::uniform(spec.medium.length_m, spec.medium_segments);
        return MatrixFrontEnd{total_matrix(spec.medium, grid, spec.rule), spec.misalignment_rad};
    }
    }
    return IdealFrontEnd{};
}

[[nodiscard]] inline SweepResult run_current_sweep(const CurrentSweepSpec& spec) {
    spec.validate();
    const FrontEnd fe = build_front_end(spec);
    const std::size_t n = spec.n_points;
    struct Cell {
        SweepRow row;
        bool excluded = false;
    };
    std::vector<Cell> cells(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            const double u = static_cast<double>(i) / static_cast<double>(n - 1);
            Cell& c = cells[i];
            if (spec.rotation_range_rad) {
                const auto [f0, f1] = *spec.rotation_range_rad;
                c.row.current_a = std::numeric_limits<double>::quiet_NaN();
                c.row.rotation_rad = f0 + (f1 - f0) * u;
            } else {
                c.row.current_a = spec.current_min_a + (spec.current_max_a - spec.current_min_a) * u;
                c.row.rotation_rad = spec.verdet_turns_rad_per_a * c.row.current_a;
            }
            try {
                const auto r = detected_intensity({fe, FaradayCoil{c.row.rotation_rad, {}, {}, {}}});
                c.row.i_out = r.i_out;
                c.row.i_ideal = r.i_ideal;
                c.row.relative_error_pct = r.relative_error_pct;
            } catch (const DomainError&) {
                c.excluded = true;
            }
        },
        spec.workers);

    SweepResult out;
    for (const auto& c : cells) {
        if (c.excluded)
            out.excluded_rotation_rad.push_back(c.row.rotation_rad);
        else
            out.rows.push_back(c.row);
    }
    out.summary = summarize(out.rows, out.excluded_rotation_rad.size());
    return out;
}

/**
 * Loss of fringe amplitude relative to the ideal chain, in percent:
 * 1 - (Imax - Imin) / (Imax - Imin)_ideal over F in [0, pi/2].
 */
[[nodiscard]] inline double contrast_drop_pct(const FrontEnd& fe, std::size_t n_samples = 721) {
    const JonesMatrix front = front_end_matrix(fe);
    const JonesVector e_in{1.0, 0.0};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double lo_i = lo, hi_i = hi;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double f = 0.5 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_samples - 1);
        const double v = lead_averaged_intensity(front, f, e_in);
        const double vi = lead_averaged_intensity(qwp_ideal_in(), f, e_in);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        lo_i = std::min(lo_i, vi);
        hi_i = std::max(hi_i, vi);
    }
    return (1.0 - (hi - lo) / (hi_i - lo_i)) * 100.0;
}

/// Fabrication deviation applied to a conversion stage: cut-length and splice-angle offsets.
struct Deviation {
    double cut_m = 0.0;
    double splice_rad = 0.0;
};

/// The four sign combinations of the constants block's cut and splice deviations.
[[nodiscard]] inline std::array<Deviation, 4> deviation_corners(const AssumedConstants& c) {
    const double d = c.cut_deviation_m;
    const double b = c.splice_deviation_rad;
    return {{{d, b}, {d, -b}, {-d, b}, {-d, -b}}};
}

/// Bare fiber quarter-wave plate cut to lambda / (4 dn) + deviation.
[[nodiscard]] inline ImperfectWaveplate deviated_plate(const AssumedConstants& c, const Deviation& dev) {
    const double d = ImperfectWaveplate::quarter_wave_length(c.qwp_delta_n, c.wavelength_m) + dev.cut_m;
    return ImperfectWaveplate::from_physical(c.qwp_delta_n, d, c.wavelength_m, dev.splice_rad);
}

/// Default current sweep for a front end with a given deviation.
[[nodiscard]] inline CurrentSweepSpec default_current_sweep(const AssumedConstants& c, FrontEndKind kind,
                                                            const Deviation& dev = {}) {
    CurrentSweepSpec s;
    s.current_min_a = 0.0;
    s.current_max_a = c.current_max_a;
    s.n_points = static_cast<std::size_t>(c.current_points);
    s.verdet_turns_rad_per_a = c.verdet_turns_rad_per_a;
    s.front_end = kind;
    s.medium_segments = static_cast<std::size_t>(c.medium_segments);
    switch (kind) {
    case FrontEndKind::ideal: break;
    case FrontEndKind::imperfect_qwp: s.plate = deviated_plate(c, dev); break;
    case FrontEndKind::spun_fiber:
        s.medium = default_medium(c, ProfileKind::constant, c.medium_xi_over_delta);
        s.medium.length_m += dev.cut_m;
        s.misalignment_rad = dev.splice_rad;
        break;
    case FrontEndKind::high_order_qwp:
        s.medium = default_medium(c);
        s.medium.length_m += dev.cut_m;
        s.misalignment_rad = dev.splice_rad;
        break;
    }
    return s;
}

struct WorstCase {
    Deviation deviation;
    SweepResult result;
};

/// Sweep at every deviation corner; returns the corner with the largest max |error|.
[[nodiscard]] inline WorstCase worst_corner_sweep(const AssumedConstants& c, FrontEndKind kind) {
    std::optional<WorstCase> worst;
    for (const auto& dev : deviation_corners(c)) {
        auto r = run_current_sweep(default_current_sweep(c, kind, dev));
        if (!worst || r.summary.max_abs_error_pct > worst->result.summary.max_abs_error_pct)
            worst = WorstCase{dev, std::move(r)};
    }
    return *worst;
}

// ------------------------------------------------------------------ xi sweep

struct XiSweepOptions {
    std::size_t segments = 200000;
    EllipticityMetric metric = EllipticityMetric::principal;
    SegmentRule rule = SegmentRule::midpoint;
    JonesVector e_in = aligned_input();
    double conversion_threshold = 0.95;
    double flag_threshold = 0.01; ///< Delta eps_pp above this is flagged
    unsigned workers = 0;
};

struct XiSweepRow {
    ProfileKind profile = ProfileKind::cosine;
    double xi_over_delta = 0.0;
    double xi_max_rad_per_m = 0.0;
    StabilityMetrics full;                          ///< window [0, L]
    std::optional<StabilityMetrics> post_transition; ///< window [L1 + L2, L], if it holds two samples
    std::optional<double> conversion_length_m;
    double fluctuation_bound = 0.0;
    bool flagged = false;
};

[[nodiscard]] inline XiSweepRow evaluate_cell(const SpunMediumSpec& medium, const XiSweepOptions& opt) {
    medium.validate();
    const auto grid = PropagationGrid::uniform(medium.length_m, opt.segments);
    const auto traj = propagate_trajectory(medium, grid, opt.e_in, opt.metric, opt.rule);
    XiSweepRow row;
    row.profile = medium.profile.kind;
    row.xi_over_delta = medium.xi_over_delta.value_or(medium.profile.xi_max_rad_per_m / medium.delta_rad_per_m);
    row.xi_max_rad_per_m = medium.profile.xi_max_rad_per_m;
    row.full = stability_metrics(traj, ZWindow::full(medium.length_m));
    try {
        row.post_transition = stability_metrics(traj, ZWindow::post_transition(medium.profile, medium.length_m));
    } catch (const DomainError&) {
        row.post_transition.reset();
    }
    row.conversion_length_m = conversion_length(traj, opt.conversion_threshold);
    if (medium.profile.kind != ProfileKind::sampled) row.fluctuation_bound = fluctuation_bound(traj, medium.profile);
    row.flagged = row.full.delta_eps_pp > opt.flag_threshold;
    return row;
}

/// One row per (profile, ratio), profiles outermost, in the given order.
[[nodiscard]] inline std::vector<XiSweepRow> run_xi_sweep(const SpunMediumSpec& medium_template,
                                                         const std::vector<double>& ratios,
                                                         const std::vector<ProfileKind>& profiles,
                                                         const XiSweepOptions& opt = {}) {
    for (double r : ratios)
        if (!(r > 0.0)) throw DomainError("ratios", "xi/delta ratios must be > 0");
    std::vector<SpunMediumSpec> cells;
    for (auto kind : profiles) {
        for (double r : ratios) {
            SpunMediumSpec m = medium_template;
            m.profile.kind = kind;
            m.profile.xi_max_rad_per_m = r * m.delta_rad_per_m;
            m.xi_over_delta = r;
            cells.push_back(m);
        }
    }
    std::vector<XiSweepRow> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) { rows[i] = evaluate_cell(cells[i], opt); }, opt.workers);
    return rows;
}

// ---------------------------------------------------------- perturbation

struct PerturbationSpec {
    double wavelength_drift_m = 10e-9;     ///< +/- range
    double temperature_excursion_c = 20.0; ///< +/- range
    std::size_t n_samples = 2;             ///< per axis, evenly spaced over [-range, +range]
    double wavelength_m = 1310e-9;         ///< lambda0 of the unperturbed medium
    double temperature_coeff_per_c = 5e-4;

    void validate() const {
        if (!(wavelength_drift_m >= 0.0)) throw DomainError("wavelength_drift_m", "drift must be >= 0");
        if (!(temperature_excursion_c >= 0.0))
            throw DomainError("temperature_excursion_c", "excursion must be >= 0");
        if (n_samples < 1) throw DomainError("n_samples", "need at least one sample per axis");
        if (!(wavelength_m > 0.0)) throw DomainError("wavelength_m", "wavelength must be > 0");
        if (wavelength_drift_m >= wavelength_m) throw DomainError("wavelength_drift_m", "drift exceeds the wavelength");
    }

    [[nodiscard]] static PerturbationSpec from_constants(const AssumedConstants& c) {
        return {c.wavelength_drift_m, c.temperature_excursion_c, 2, c.wavelength_m, c.temperature_coeff_per_c};
    }
};

enum class PerturbationAxis { wavelength, temperature };

[[nodiscard]] inline std::string_view to_string(PerturbationAxis a) {
    return a == PerturbationAxis::wavelength ? "wavelength" : "temperature";
}

struct PerturbationSample {
    PerturbationAxis axis = PerturbationAxis::wavelength;
    double offset = 0.0; ///< meters of wavelength or degrees C
    double delta_rad_per_m = 0.0;
    StabilityMetrics metrics;
    double dpp_increase_pct = 0.0;
    double rms_increase_pct = 0.0;
};

struct PerturbationReport {
    StabilityMetrics baseline;
    std::vector<PerturbationSample> samples;
    double wavelength_dpp_increase_pct = 0.0; ///< worst case over the wavelength samples
    double wavelength_rms_increase_pct = 0.0;
    double temperature_dpp_increase_pct = 0.0;
    double temperature_rms_increase_pct = 0.0;
};

namespace detail {
inline double pct_increase(double value, double base) {
    if (value == base) return 0.0;
    return (value - base) / base * 100.0;
}

inline std::vector<double> symmetric_offsets(double range, std::size_t n) {
    if (n == 1) return {range};
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = -range + 2.0 * range * static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}
} // namespace detail

/**
 * Re-evaluates the metrics with delta moved by wavelength drift and by
 * temperature; the spin rate xi_max is a fixed property of the preform and
 * is held constant. Window as in XiSweepRow::full.
 */
[[nodiscard]] inline PerturbationReport run_perturbation_study(const SpunMediumSpec& base, const PerturbationSpec& pert,
                                                               const XiSweepOptions& opt = {}) {
    base.validate();
    pert.validate();
    SpunMediumSpec fixed_xi = base;
    fixed_xi.xi_over_delta.reset();

    std::vector<PerturbationSample> samples;
    for (double d : detail::symmetric_offsets(pert.wavelength_drift_m, pert.n_samples))
        samples.push_back({PerturbationAxis::wavelength, d,
                           delta_at_wavelength(base.delta_rad_per_m, pert.wavelength_m, pert.wavelength_m + d), {}, 0, 0});
    for (double d : detail::symmetric_offsets(pert.temperature_excursion_c, pert.n_samples))
        samples.push_back({PerturbationAxis::temperature, d,
                           delta_at_temperature(base.delta_rad_per_m, pert.temperature_coeff_per_c, d), {}, 0, 0});

    PerturbationReport rep;
    std::vector<StabilityMetrics> metrics(samples.size() + 1);
    parallel_for(
        samples.size() + 1,
        [&](std::size_t i) {
            SpunMediumSpec m = fixed_xi;
            if (i > 0) m.delta_rad_per_m = samples[i - 1].delta_rad_per_m;
            metrics[i] = evaluate_cell(m, opt).full;
        },
        opt.workers);
    rep.baseline = metrics[0];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto& s = samples[i];
        s.metrics = metrics[i + 1];
        s.dpp_increase_pct = detail::pct_increase(s.metrics.delta_eps_pp, rep.baseline.delta_eps_pp);
        s.rms_increase_pct = detail::pct_increase(s.metrics.rms_eps, rep.baseline.rms_eps);
    }
    auto worst = [&](PerturbationAxis axis, double PerturbationSample::*field) {
        std::optional<double> w;
        for (const auto& s : samples)
            if (s.axis == axis) w = w ? std::max(*w, s.*field) : s.*field;
        return w.value_or(0.0);
    };
    rep.wavelength_dpp_increase_pct = worst(PerturbationAxis::wavelength, &PerturbationSample::dpp_increase_pct);
    rep.wavelength_rms_increase_pct = worst(PerturbationAxis::wavelength, &PerturbationSample::rms_increase_pct);
    rep.temperature_dpp_increase_pct = worst(PerturbationAxis::temperature, &PerturbationSample::dpp_increase_pct);
    rep.temperature_rms_increase_pct = worst(PerturbationAxis::temperature, &PerturbationSample::rms_increase_pct);
    rep.samples = std::move(samples);
    return rep;
}

// ------------------------------------------------------------- convergence

struct ConvergenceRow {
    std::size_t n_segments = 0;
    double error = 0.0;               ///< max-norm distance to the reference matrix
    std::optional<double> ratio;      ///< error(N) / error(next N in the ladder)
};

struct ConvergenceReport {
    std::size_t reference_segments = 0;
    std::vector<ConvergenceRow> rows;
};

[[nodiscard]] inline ConvergenceReport run_convergence_study(const SpunMediumSpec& medium,
                                                             const std::vector<std::size_t>& ladder,
                                                             std::size_t reference_segments,
                                                             SegmentRule rule = SegmentRule::midpoint,
                                                             unsigned workers = 0) {
    medium.validate();
    if (ladder.empty()) throw DomainError("ladder", "empty segment ladder");
    std::vector<JonesMatrix> mats(ladder.size() + 1);
    parallel_for(
        ladder.size() + 1,
        [&](std::size_t i) {
            const std::size_t n = i == 0 ? reference_segments : ladder[i - 1];
            mats[i] = total_matrix(medium, PropagationGrid::uniform(medium.length_m, n), rule);
        },
        workers);
    ConvergenceReport rep;
    rep.reference_segments = reference_segments;
    for (std::size_t i = 0; i < ladder.size(); ++i) rep.rows.push_back({ladder[i], max_abs_diff(mats[i + 1], mats[0]), {}});
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
        if (rep.rows[i + 1].error > 0.0) rep.rows[i].ratio = rep.rows[i].error / rep.rows[i + 1].error;
    return rep;
}

} // namespace focsim
