// focsim: command-line front end for the sensor and spun-medium simulations.
//
// Exit status: 0 success, 2 configuration / usage error, 3 numeric-domain
// error, 4 output failure.

#include "focsim/focsim.hpp"

#include <CLI11.hpp>

#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace focsim;
using namespace focsim::io;

enum ExitCode { kOk = 0, kConfigError = 2, kDomainError = 3, kIoError = 4 };

struct GlobalOptions {
    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    bool seedless = false; // every run is deterministic; accepted for scripting symmetry
};

struct SimulateOptions {
    std::optional<double> rho_rad, beta_rad, rotation_rad, current_a;
};

struct TrajectoryOptions {
    std::optional<std::string> profile, metric;
    std::optional<double> ratio;
    std::optional<std::size_t> segments;
    std::size_t every = 100;
};

struct SweepCurrentOptions {
    std::optional<std::string> front_end;
    std::optional<double> cut_deviation_m, splice_deviation_rad;
    std::optional<std::size_t> points, segments;
};

struct SweepXiOptions {
    std::vector<double> ratios;
    std::vector<std::string> profiles;
    std::optional<std::size_t> segments;
};

struct PerturbOptions {
    std::optional<std::size_t> samples, segments;
    std::optional<std::string> profile;
    std::optional<double> ratio;
};

struct ConvergeOptions {
    std::vector<std::size_t> ladder;
    std::optional<std::size_t> reference;
    std::optional<std::string> profile, rule;
    std::optional<double> ratio;
};

MediumSection& medium_of(ScenarioConfig& cfg) {
    if (!cfg.medium) cfg.medium.emplace();
    return *cfg.medium;
}

void override_medium(ScenarioConfig& cfg, const std::optional<std::string>& profile, const std::optional<double>& ratio,
                     const std::optional<std::size_t>& segments) {
    if (profile) medium_of(cfg).profile = *profile;
    if (ratio) {
        medium_of(cfg).xi_over_delta = *ratio;
        medium_of(cfg).xi_max_rad_per_m.reset();
    }
    if (segments) medium_of(cfg).segments = *segments;
}

void write_output(const ResultTable& t, const GlobalOptions& g) {
    const Format f = g.format == "json" ? Format::json : Format::csv;
    const std::string text = render(t, f);
    if (g.out_path.empty()) {
        std::cout << text << std::flush;
        if (!std::cout) throw IoError("failed to write to stdout");
        return;
    }
    std::ofstream out(g.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file '" + g.out_path + "'");
    out << text;
    out.close();
    if (!out) throw IoError("failed to write output file '" + g.out_path + "'");
}

ScenarioConfig load(const GlobalOptions& g) {
    return g.config_path.empty() ? ScenarioConfig{} : load_config(g.config_path);
}

ResultTable run_simulate(const GlobalOptions& g, const SimulateOptions& o) {
    ScenarioConfig cfg = load(g);
    if (!cfg.scenario) cfg.scenario.emplace();
    auto& sc = *cfg.scenario;
    if (o.rho_rad || o.beta_rad) {
        sc.waveplate = WaveplateConfig{};
        sc.waveplate.model = "imperfect";
        sc.waveplate.rho_rad = o.rho_rad.value_or(std::numbers::pi / 2.0);
        sc.waveplate.beta_rad = o.beta_rad.value_or(0.0);
    }
    if (o.rotation_rad) {
        sc.coil = CoilConfig{};
        sc.coil.rotation_rad = *o.rotation_rad;
    } else if (o.current_a) {
        sc.coil.rotation_rad.reset();
        sc.coil.current_a = *o.current_a;
    }
    const auto c = resolve_constants(cfg);
    const auto s = resolve_scenario(cfg, c);
    return simulate_table(c, s, detected_intensity(s, resolve_input_field(cfg)));
}

ResultTable run_trajectory(const GlobalOptions& g, const TrajectoryOptions& o) {
    ScenarioConfig cfg = load(g);
    override_medium(cfg, o.profile, o.ratio, o.segments);
    if (o.metric) medium_of(cfg).metric = *o.metric;
    const auto c = resolve_constants(cfg);
    const auto m = resolve_medium(cfg, c);
    m.spec.validate();
    const auto grid = PropagationGrid::uniform(m.spec.length_m, m.segments);
    const auto traj = propagate_trajectory(m.spec, grid, aligned_input(), m.metric, m.rule);
    return trajectory_table(c, m.spec, traj, o.every);
}

ResultTable run_sweep_current(const GlobalOptions& g, const SweepCurrentOptions& o) {
    ScenarioConfig cfg = load(g);
    if (!cfg.current_sweep) cfg.current_sweep.emplace();
    auto& s = *cfg.current_sweep;
    if (o.front_end) s.front_end = *o.front_end;
    if (o.cut_deviation_m) s.cut_deviation_m = *o.cut_deviation_m;
    if (o.splice_deviation_rad) s.splice_deviation_rad = *o.splice_deviation_rad;
    if (o.points) s.n_points = *o.points;
    if (o.segments) medium_of(cfg).segments = *o.segments;
    const auto c = resolve_constants(cfg);
    const auto spec = resolve_current_sweep(cfg, c);
    return current_sweep_table(c, spec, run_current_sweep(spec));
}

ResultTable run_sweep_xi(const GlobalOptions& g, const SweepXiOptions& o) {
    ScenarioConfig cfg = load(g);
    if (!cfg.xi_sweep) cfg.xi_sweep.emplace();
    if (!o.ratios.empty()) cfg.xi_sweep->ratios = o.ratios;
    if (!o.profiles.empty()) cfg.xi_sweep->profiles = o.profiles;
    if (o.segments) medium_of(cfg).segments = *o.segments;
    const auto c = resolve_constants(cfg);
    const auto m = resolve_medium(cfg, c);
    const auto x = resolve_xi_sweep(cfg, c);
    return xi_sweep_table(c, x.options, run_xi_sweep(m.spec, x.ratios, x.profiles, x.options));
}

ResultTable run_perturb(const GlobalOptions& g, const PerturbOptions& o) {
    ScenarioConfig cfg = load(g);
    override_medium(cfg, o.profile, o.ratio, o.segments);
    if (o.samples) {
        if (!cfg.perturbation) cfg.perturbation.emplace();
        cfg.perturbation->n_samples = *o.samples;
    }
    const auto c = resolve_constants(cfg);
    const auto m = resolve_medium(cfg, c);
    const auto x = resolve_xi_sweep(cfg, c);
    return perturbation_table(c, x.options, run_perturbation_study(m.spec, resolve_perturbation(cfg, c), x.options));
}

ResultTable run_converge(const GlobalOptions& g, const ConvergeOptions& o) {
    ScenarioConfig cfg = load(g);
    override_medium(cfg, o.profile, o.ratio, std::nullopt);
    if (o.rule) medium_of(cfg).segment_rule = *o.rule;
    if (!o.ladder.empty() || o.reference) {
        if (!cfg.convergence) cfg.convergence.emplace();
        if (!o.ladder.empty()) cfg.convergence->ladder = o.ladder;
        if (o.reference) cfg.convergence->reference_segments = *o.reference;
    }
    const auto c = resolve_constants(cfg);
    const auto m = resolve_medium(cfg, c);
    const auto s = resolve_convergence(cfg);
    return convergence_table(c, run_convergence_study(m.spec, s.ladder, s.reference_segments, m.rule));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reflective fiber-optic current sensor and spun-medium simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON scenario configuration");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out_path, "Output file (default: stdout)");
    app.add_flag("--seedless", g.seedless, "Deterministic run (always the case)");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Single round trip: detected intensity and relative error");
    simulate->add_option("--rho-rad", sim.rho_rad, "Plate retardation");
    simulate->add_option("--beta-rad", sim.beta_rad, "Plate axis deviation");
    simulate->add_option("--rotation-rad", sim.rotation_rad, "Faraday rotation F");
    simulate->add_option("--current-a", sim.current_a, "Coil current (converted with the Verdet constant)");

    TrajectoryOptions tr;
    auto* trajectory = app.add_subcommand("trajectory", "Ellipticity along a spun medium");
    trajectory->add_option("--profile", tr.profile, "linear | cosine | constant | sampled");
    trajectory->add_option("--ratio", tr.ratio, "xi_max / delta");
    trajectory->add_option("--segments", tr.segments, "Number of segments");
    trajectory->add_option("--metric", tr.metric, "principal | axis_ratio");
    trajectory->add_option("--every", tr.every, "Emit every k-th sample")->capture_default_str();

    SweepCurrentOptions sc;
    auto* sweep_current = app.add_subcommand("sweep-current", "Relative error vs coil current");
    sweep_current->add_option("--front-end", sc.front_end, "ideal | imperfect_qwp | spun_fiber | high_order_qwp");
    sweep_current->add_option("--cut-deviation-m", sc.cut_deviation_m, "Cut-length deviation");
    sweep_current->add_option("--splice-deviation-rad", sc.splice_deviation_rad, "Splice-angle deviation");
    sweep_current->add_option("--points", sc.points, "Number of currents");
    sweep_current->add_option("--segments", sc.segments, "Segments for spun front ends");

    SweepXiOptions sx;
    auto* sweep_xi = app.add_subcommand("sweep-xi", "Ellipticity metrics over xi/delta and profiles");
    sweep_xi->add_option("--ratios", sx.ratios, "Comma-separated xi/delta values")->delimiter(',');
    sweep_xi->add_option("--profiles", sx.profiles, "Comma-separated profiles")->delimiter(',');
    sweep_xi->add_option("--segments", sx.segments, "Number of segments");

    PerturbOptions pe;
    auto* perturb = app.add_subcommand("perturb", "Wavelength and temperature perturbation of the metrics");
    perturb->add_option("--samples", pe.samples, "Samples per axis");
    perturb->add_option("--segments", pe.segments, "Number of segments");
    perturb->add_option("--profile", pe.profile, "Medium profile");
    perturb->add_option("--ratio", pe.ratio, "xi_max / delta");

    ConvergeOptions cv;
    auto* converge = app.add_subcommand("converge", "Segment-count refinement against a fine reference");
    converge->add_option("--ladder", cv.ladder, "Comma-separated segment counts")->delimiter(',');
    converge->add_option("--reference", cv.reference, "Reference segment count");
    converge->add_option("--profile", cv.profile, "Medium profile");
    converge->add_option("--ratio", cv.ratio, "xi_max / delta");
    converge->add_option("--rule", cv.rule, "midpoint | left_endpoint");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        ResultTable t;
        if (*simulate)
            t = run_simulate(g, sim);
        else if (*trajectory)
            t = run_trajectory(g, tr);
        else if (*sweep_current)
            t = run_sweep_current(g, sc);
        else if (*sweep_xi)
            t = run_sweep_xi(g, sx);
        else if (*perturb)
            t = run_perturb(g, pe);
        else
            t = run_converge(g, cv);
        write_output(t, g);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "domain error in '" << e.parameter() << "': " << e.what() << '\n';
        return kDomainError;
    } catch (const IoError& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kIoError;
    }
    return kOk;
}
