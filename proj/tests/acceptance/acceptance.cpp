// Acceptance runner. Prints one PASS/FAIL line per criterion; with
// --criterion N only that criterion runs. Exit status is nonzero if any
// selected criterion fails.

#include "../properties.hpp"
#include "focsim/focsim.hpp"

#include <CLI11.hpp>
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace focsim;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;
    Verdict (*run)();
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

Verdict ideal_closed_form_fit() {
    std::vector<double> fs, is;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double f = 0.5 * kPi * k / 999.0;
        const double i = intensity(roundtrip_field({IdealFrontEnd{}, FaradayCoil{f, {}, {}, {}}}, {1.0, 0.0}));
        const double shape = 1.0 + std::cos(4.0 * f);
        num += i * shape;
        den += shape * shape;
        fs.push_back(f);
        is.push_back(i);
    }
    const double c = num / den;
    double worst = 0.0;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const double model = c * (1.0 + std::cos(4.0 * fs[k]));
        const double res = std::abs(is[k] - model);
        // relative residual; at the exact null both sides vanish to rounding
        if (model > 1e-12) worst = std::max(worst, res / model);
        else if (res > 1e-15) worst = std::max(worst, 1.0);
    }
    return {worst < 1e-10, "C = " + fmt(c, 17) + ", max relative residual " + fmt(worst)};
}

Verdict plate_column_matches_printed_vector() {
    double worst = 0.0;
    for (int a = 0; a < 20; ++a) {
        for (int b = 0; b < 20; ++b) {
            const double rho = 2.0 * kPi * a / 19.0, beta = -kPi / 2 + kPi * b / 19.0;
            const JonesVector got = qwp_imperfect(rho, beta) * JonesVector{1.0, 0.0};
            const JonesVector want{Complex{std::cos(rho / 2), std::sin(rho / 2) * std::cos(2 * beta)},
                                   Complex{0.0, std::sin(rho / 2) * std::sin(2 * beta)}};
            worst = std::max(worst, max_abs_diff(got, want));
        }
    }
    return {worst <= 1e-12, "max deviation " + fmt(worst)};
}

Verdict engineering_limit_violation() {
    const AssumedConstants c;
    const auto w = worst_corner_sweep(c, FrontEndKind::imperfect_qwp);
    double lo = 1e300, hi = -1e300;
    for (const auto& d : deviation_corners(c)) {
        const double drop = contrast_drop_pct(ImperfectFrontEnd{deviated_plate(c, d)});
        lo = std::min(lo, drop);
        hi = std::max(hi, drop);
    }
    const double err = w.result.summary.max_abs_error_pct;
    return {err > c.engineering_limit_pct && lo >= 2.0 && hi <= 4.0,
            "max |error| " + fmt(err) + "% (limit " + fmt(c.engineering_limit_pct) + "%), contrast drop " + fmt(lo) +
                "-" + fmt(hi) + "%, constants " + c.fingerprint()};
}

Verdict convergence_order() {
    const AssumedConstants c;
    const auto rep = run_convergence_study(default_medium(c), {250, 500, 1000, 2000}, 1000000);
    bool ok = true;
    std::string d;
    double err_1000 = 0.0;
    for (const auto& row : rep.rows) {
        if (row.n_segments == 1000) err_1000 = row.error;
        if (row.ratio) {
            ok = ok && *row.ratio >= 1.7 && *row.ratio <= 2.3;
            d += "err(" + std::to_string(row.n_segments) + ")/err(2N) = " + fmt(*row.ratio, 4) + ", ";
        }
    }
    ok = ok && err_1000 < 1e-3;
    return {ok, d + "max-norm deviation at N = 1000: " + fmt(err_1000, 4)};
}

Verdict zero_spin_oracle() {
    const SpunMediumSpec m{1.0, kPi / 2, SpinProfile{ProfileKind::constant, 0.0, 0.0, 0.0, {}}, std::nullopt};
    const auto exact = JonesMatrix::retarder(kPi / 2, 0.0);
    double worst = 0.0;
    for (std::size_t n : {64u, 4096u}) worst = std::max(worst, max_abs_diff(total_matrix(m, PropagationGrid::uniform(1.0, n)), exact));
    return {worst < 1e-10, "max deviation " + fmt(worst)};
}

Verdict profile_ordering() {
    const auto& g = props::default_profile_grid();
    bool ok = true;
    std::string d = "linear pp";
    for (std::size_t i = 0; i < 4; ++i) {
        ok = ok && g.rows[4 + i].full.delta_eps_pp <= g.rows[i].full.delta_eps_pp;
        if (i > 0) ok = ok && g.rows[i].full.delta_eps_pp >= g.rows[i - 1].full.delta_eps_pp;
        d += " " + fmt(g.rows[i].full.delta_eps_pp, 4);
    }
    d += ", cosine pp";
    for (std::size_t i = 4; i < 8; ++i) d += " " + fmt(g.rows[i].full.delta_eps_pp, 4);
    return {ok, d};
}

Verdict tradeoff_correlation() {
    const double rho = props::spearman_bound_vs_fluctuation(props::default_profile_grid());
    return {rho >= 0.8, "Spearman " + fmt(rho, 4)};
}

Verdict error_reduction() {
    const AssumedConstants c;
    const double bare = worst_corner_sweep(c, FrontEndKind::imperfect_qwp).result.summary.max_abs_error_pct;
    const double hoqwp = worst_corner_sweep(c, FrontEndKind::high_order_qwp).result.summary.max_abs_error_pct;
    return {hoqwp <= 0.2 * bare, "high-order " + fmt(hoqwp) + "% vs bare " + fmt(bare) + "% (reduction " +
                                     fmt(100.0 * (1.0 - hoqwp / bare), 4) + "%), constants " + c.fingerprint()};
}

Verdict perturbation_directionality() {
    const AssumedConstants c;
    XiSweepOptions opt;
    opt.segments = static_cast<std::size_t>(c.medium_segments);
    const auto r = run_perturbation_study(default_medium(c), PerturbationSpec::from_constants(c), opt);
    const bool ok = r.wavelength_dpp_increase_pct > 0 && r.temperature_dpp_increase_pct > 0 &&
                    r.temperature_dpp_increase_pct > r.wavelength_dpp_increase_pct;
    return {ok, "pp increase: wavelength " + fmt(r.wavelength_dpp_increase_pct, 4) + "%, temperature " +
                    fmt(r.temperature_dpp_increase_pct, 4) + "%; rms increase: wavelength " +
                    fmt(r.wavelength_rms_increase_pct, 4) + "%, temperature " + fmt(r.temperature_rms_increase_pct, 4) +
                    "% (reference bands 5-8% and 10-12% not asserted)"};
}

std::string run_cli(const std::string& args, const std::string& env, int& status) {
    const std::string cmd = env + " " + FOCSIM_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
    std::string out;
    status = -1;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int st = pclose(p);
    status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

Verdict determinism_and_round_trip() {
    bool ok = true;
    std::string d;
    for (const char* fmt_flag : {"csv", "json"}) {
        const std::string args = std::string("sweep-xi --segments 20000 --format ") + fmt_flag;
        int s1 = 0, s2 = 0, s3 = 0;
        const auto a = run_cli(args, "FOCSIM_THREADS=1", s1);
        const auto b = run_cli(args, "FOCSIM_THREADS=1", s2);
        const auto c = run_cli(args, "FOCSIM_THREADS=8", s3);
        const bool same = s1 == 0 && s2 == 0 && s3 == 0 && !a.empty() && a == b && a == c;
        ok = ok && same;
        d += std::string(fmt_flag) + (same ? " byte-identical" : " differs") + ", ";
    }
    const auto cfg = props::config_round_trip();
    const auto tab = props::table_round_trip_and_determinism();
    ok = ok && cfg.passed() && tab.passed();
    d += "config fixed point " + std::to_string(cfg.cases - cfg.failures) + "/" + std::to_string(cfg.cases) +
         ", table round trip " + std::to_string(tab.cases - tab.failures) + "/" + std::to_string(tab.cases);
    return {ok, d};
}

Verdict property_suite() {
    int failed = 0, total = 0;
    std::string d;
    for (const auto& p : props::all_properties()) {
        const auto o = p.run();
        ++total;
        const bool ok = o.passed();
        std::cout << "    " << (ok ? "pass" : "FAIL") << "  " << p.module << ": " << p.name << " (" << o.cases
                  << " cases" << (ok ? "" : ", " + std::to_string(o.failures) + " failed; " + o.first_failure) << ")\n";
        if (!ok) {
            ++failed;
            d += (d.empty() ? "" : ", ") + p.name;
        }
    }
    return {failed == 0, std::to_string(total - failed) + "/" + std::to_string(total) + " properties hold, seed " +
                             std::to_string(props::kPropertySeed) + (d.empty() ? "" : "; failing: " + d)};
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "ideal chain closed form", 1, ideal_closed_form_fit},
        {2, "imperfect plate column", 1, plate_column_matches_printed_vector},
        {3, "engineering limit violation", 5, engineering_limit_violation},
        {4, "first-order convergence", 30, convergence_order},
        {5, "zero-spin oracle", 1, zero_spin_oracle},
        {6, "profile ordering", 30, profile_ordering},
        {7, "trade-off correlation", 30, tradeoff_correlation},
        {8, "error-reduction ordering", 60, error_reduction},
        {9, "perturbation directionality", 60, perturbation_directionality},
        {10, "determinism and round trip", 10, determinism_and_round_trip},
        {11, "property suite", 120, property_suite},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"focsim acceptance runner"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    int failures = 0;
    for (const auto& c : criteria()) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = v.pass && in_time;
        if (!pass) ++failures;
        std::cout << "AC" << c.id << " " << (pass ? "PASS" : "FAIL") << "  " << c.title << ": " << v.detail << " ["
                  << fmt(secs, 3) << " s of " << c.budget_s << " s" << (in_time ? "" : ", over budget") << "]\n";
    }
    return failures == 0 ? 0 : 1;
}
