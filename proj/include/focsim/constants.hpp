// Default physical parameters. Each entry carries a source tag ("assumed" for
// values chosen here); every reported number is stamped with fingerprint().

#pragma once

#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace focsim {

enum class Source { paper, assumed };

[[nodiscard]] inline std::string_view to_string(Source s) { return s == Source::paper ? "paper" : "assumed"; }

struct ConstantEntry {
    std::string name;
    double value;
    Source source;
};

struct AssumedConstants {
    // optical source
    double wavelength_m = 1310e-9;
    // fiber quarter-wave plate (elliptical-core fiber)
    double qwp_delta_n = 1.0e-4;
    double cut_deviation_m = 500e-6;
    double splice_deviation_rad = 2.0 * std::numbers::pi / 180.0;
    // sensing coil: F = verdet_turns * I
    double verdet_turns_rad_per_a = 2.5e-4;
    double current_max_a = 2000.0;
    double current_points = 201.0;
    double engineering_limit_pct = 0.2;
    // spun medium (high-order QWP / spun fiber)
    double medium_length_m = 0.3;
    double medium_beat_length_m = 0.01;
    double medium_lead_in_m = 0.0;
    double medium_transition_m = 0.25;
    double medium_xi_over_delta = 10.0;
    double medium_segments = 200000.0;
    double conversion_threshold = 0.95;
    // environment
    double wavelength_drift_m = 10e-9;
    double temperature_excursion_c = 20.0;
    double temperature_coeff_per_c = 5e-4;
    // segment-count heuristic N = C L^2 / tol
    double segment_calibration_per_m2 = 1500.0;

    [[nodiscard]] std::vector<ConstantEntry> entries() const {
        std::vector<ConstantEntry> out;
        for (const auto& f : fields()) out.push_back({std::string(f.name), this->*f.member, f.source});
        return out;
    }

    /// Returns false if `name` is not a known constant.
    bool set(std::string_view name, double value) {
        for (const auto& f : fields()) {
            if (f.name == name) {
                this->*f.member = value;
                return true;
            }
        }
        return false;
    }

    /// FNV-1a over "name=value;source\n" lines with 17 significant digits.
    [[nodiscard]] std::string fingerprint() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        char buf[160];
        for (const auto& e : entries()) {
            const int n = std::snprintf(buf, sizeof buf, "%s=%.17g;%s\n", e.name.c_str(), e.value,
                                        std::string(to_string(e.source)).c_str());
            for (int i = 0; i < n; ++i) {
                h ^= static_cast<unsigned char>(buf[i]);
                h *= 0x100000001b3ULL;
            }
        }
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    bool operator==(const AssumedConstants&) const = default;

private:
    struct Field {
        std::string_view name;
        double AssumedConstants::*member;
        Source source;
    };

    static const std::vector<Field>& fields() {
        using C = AssumedConstants;
        static const std::vector<Field> table{
            {"wavelength_m", &C::wavelength_m, Source::assumed},
            {"qwp_delta_n", &C::qwp_delta_n, Source::assumed},
            {"cut_deviation_m", &C::cut_deviation_m, Source::paper},
            {"splice_deviation_rad", &C::splice_deviation_rad, Source::paper},
            {"verdet_turns_rad_per_a", &C::verdet_turns_rad_per_a, Source::assumed},
            {"current_max_a", &C::current_max_a, Source::paper},
            {"current_points", &C::current_points, Source::assumed},
            {"engineering_limit_pct", &C::engineering_limit_pct, Source::paper},
            {"medium_length_m", &C::medium_length_m, Source::assumed},
            {"medium_beat_length_m", &C::medium_beat_length_m, Source::assumed},
            {"medium_lead_in_m", &C::medium_lead_in_m, Source::assumed},
            {"medium_transition_m", &C::medium_transition_m, Source::assumed},
            {"medium_xi_over_delta", &C::medium_xi_over_delta, Source::paper},
            {"medium_segments", &C::medium_segments, Source::assumed},
            {"conversion_threshold", &C::conversion_threshold, Source::assumed},
            {"wavelength_drift_m", &C::wavelength_drift_m, Source::paper},
            {"temperature_excursion_c", &C::temperature_excursion_c, Source::paper},
            {"temperature_coeff_per_c", &C::temperature_coeff_per_c, Source::assumed},
            {"segment_calibration_per_m2", &C::segment_calibration_per_m2, Source::assumed},
        };
        return table;
    }
};

} // namespace focsim
