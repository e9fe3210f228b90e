/**
 * @file config.hpp
 * @brief JSON scenario configuration: parsing with strict key checking,
 *        canonical serialization, and resolution into library types.
 *
 * Layout (every section optional except schema_version):
 *
 *   {
 *     "schema_version": "focsim-config/1",
 *     "constants":  { "<name>": { "value": 1.31e-06, "source": "assumed" } },
 *     "scenario":   { "waveplate": {...}, "coil": {...}, "input_field": {...} },
 *     "medium":     { "length_m": 0.3, "beat_length_m": 0.01, "profile": "cosine", ... },
 *     "current_sweep": { "front_end": "high_order_qwp", "n_points": 201, ... },
 *     "xi_sweep":   { "ratios": [1, 3, 5, 10], "profiles": ["linear", "cosine"] },
 *     "perturbation": { "wavelength_drift_m": 1e-08, ... },
 *     "convergence":  { "ladder": [250, 500, 1000, 2000, 4000], "reference_segments": 1000000 }
 *   }
 *
 * Dimensional keys end in their unit. Keys left out fall back to the
 * constants block when resolved, and are also left out when serialized,
 * so parse -> serialize -> parse is a fixed point.
 */

#pragma once

#include "../constants.hpp"
#include "../elements.hpp"
#include "../errors.hpp"
#include "../experiments.hpp"
#include "../spun.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace focsim::io {

inline constexpr std::string_view kConfigSchema = "focsim-config/1";

using Json = nlohmann::ordered_json;

struct ConstantOverride {
    double value = 0.0;
    Source source = Source::assumed;
    bool operator==(const ConstantOverride&) const = default;
};

struct WaveplateConfig {
    std::string model = "ideal"; // ideal | imperfect
    std::optional<double> rho_rad, beta_rad, delta_n, cut_length_m, wavelength_m;
    std::optional<std::string> retardation_convention; // phase | literal

    template <class F> void fields(F&& f) {
        f("model", model);
        f("rho_rad", rho_rad);
        f("beta_rad", beta_rad);
        f("delta_n", delta_n);
        f("cut_length_m", cut_length_m);
        f("wavelength_m", wavelength_m);
        f("retardation_convention", retardation_convention);
    }
    bool operator==(const WaveplateConfig&) const = default;
};

struct CoilConfig {
    std::optional<double> rotation_rad, verdet_rad_per_a_turn, turns, current_a;

    template <class F> void fields(F&& f) {
        f("rotation_rad", rotation_rad);
        f("verdet_rad_per_a_turn", verdet_rad_per_a_turn);
        f("turns", turns);
        f("current_a", current_a);
    }
    bool operator==(const CoilConfig&) const = default;
};

struct InputFieldConfig {
    double ex_re = 1.0, ex_im = 0.0, ey_re = 0.0, ey_im = 0.0;

    template <class F> void fields(F&& f) {
        f("ex_re", ex_re);
        f("ex_im", ex_im);
        f("ey_re", ey_re);
        f("ey_im", ey_im);
    }
    bool operator==(const InputFieldConfig&) const = default;
};

struct ScenarioSection {
    WaveplateConfig waveplate;
    CoilConfig coil;
    std::optional<InputFieldConfig> input_field;

    template <class F> void fields(F&& f) {
        f("waveplate", waveplate);
        f("coil", coil);
        f("input_field", input_field);
    }
    bool operator==(const ScenarioSection&) const = default;
};

struct MediumSection {
    std::optional<double> length_m, beat_length_m, delta_rad_per_m, lead_in_m, transition_m;
    std::optional<std::string> profile;
    std::optional<double> xi_over_delta, xi_max_rad_per_m;
    std::optional<std::vector<std::array<double, 2>>> table_z_m_xi_rad_per_m;
    std::optional<std::size_t> segments;
    std::optional<std::string> segment_rule; // midpoint | left_endpoint
    std::optional<std::string> metric;       // principal | axis_ratio

    template <class F> void fields(F&& f) {
        f("length_m", length_m);
        f("beat_length_m", beat_length_m);
        f("delta_rad_per_m", delta_rad_per_m);
        f("lead_in_m", lead_in_m);
        f("transition_m", transition_m);
        f("profile", profile);
        f("xi_over_delta", xi_over_delta);
        f("xi_max_rad_per_m", xi_max_rad_per_m);
        f("table_z_m_xi_rad_per_m", table_z_m_xi_rad_per_m);
        f("segments", segments);
        f("segment_rule", segment_rule);
        f("metric", metric);
    }
    bool operator==(const MediumSection&) const = default;
};

struct CurrentSweepSection {
    std::optional<std::string> front_end;
    std::optional<double> current_min_a, current_max_a, verdet_turns_rad_per_a;
    std::optional<double> rotation_min_rad, rotation_max_rad;
    std::optional<std::size_t> n_points;
    std::optional<double> cut_deviation_m, splice_deviation_rad;
    std::optional<double> rho_rad, beta_rad;

    template <class F> void fields(F&& f) {
        f("front_end", front_end);
        f("current_min_a", current_min_a);
        f("current_max_a", current_max_a);
        f("verdet_turns_rad_per_a", verdet_turns_rad_per_a);
        f("rotation_min_rad", rotation_min_rad);
        f("rotation_max_rad", rotation_max_rad);
        f("n_points", n_points);
        f("cut_deviation_m", cut_deviation_m);
        f("splice_deviation_rad", splice_deviation_rad);
        f("rho_rad", rho_rad);
        f("beta_rad", beta_rad);
    }
    bool operator==(const CurrentSweepSection&) const = default;
};

struct XiSweepSection {
    std::optional<std::vector<double>> ratios;
    std::optional<std::vector<std::string>> profiles;
    std::optional<double> conversion_threshold;
    std::optional<double> flag_threshold;

    template <class F> void fields(F&& f) {
        f("ratios", ratios);
        f("profiles", profiles);
        f("conversion_threshold", conversion_threshold);
        f("flag_threshold", flag_threshold);
    }
    bool operator==(const XiSweepSection&) const = default;
};

struct PerturbationSection {
    std::optional<double> wavelength_drift_m, temperature_excursion_c, temperature_coeff_per_c;
    std::optional<std::size_t> n_samples;

    template <class F> void fields(F&& f) {
        f("wavelength_drift_m", wavelength_drift_m);
        f("temperature_excursion_c", temperature_excursion_c);
        f("temperature_coeff_per_c", temperature_coeff_per_c);
        f("n_samples", n_samples);
    }
    bool operator==(const PerturbationSection&) const = default;
};

struct ConvergenceSection {
    std::optional<std::vector<std::size_t>> ladder;
    std::optional<std::size_t> reference_segments;

    template <class F> void fields(F&& f) {
        f("ladder", ladder);
        f("reference_segments", reference_segments);
    }
    bool operator==(const ConvergenceSection&) const = default;
};

struct ScenarioConfig {
    std::string schema_version{kConfigSchema};
    std::vector<std::pair<std::string, ConstantOverride>> constants;
    std::optional<ScenarioSection> scenario;
    std::optional<MediumSection> medium;
    std::optional<CurrentSweepSection> current_sweep;
    std::optional<XiSweepSection> xi_sweep;
    std::optional<PerturbationSection> perturbation;
    std::optional<ConvergenceSection> convergence;

    bool operator==(const ScenarioConfig&) const = default;
};

// ------------------------------------------------------------------ parsing

namespace detail {

template <class T> struct is_optional : std::false_type {};
template <class T> struct is_optional<std::optional<T>> : std::true_type {};

template <class T>
concept Section = requires(T t) { t.fields([](std::string_view, auto&) {}); };

inline std::string child(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }

template <class T> void read_value(const Json& j, const std::string& path, T& out);

template <Section T> void read_section(const Json& j, const std::string& path, T& out) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    std::set<std::string, std::less<>> known;
    out.fields([&](std::string_view key, auto& member) {
        known.emplace(key);
        const auto it = j.find(std::string(key));
        if (it != j.end()) read_value(*it, child(path, key), member);
    });
    for (const auto& [k, v] : j.items())
        if (!known.contains(k)) throw ConfigError(child(path, k), "unknown key");
}

template <class T> void read_value(const Json& j, const std::string& path, T& out) {
    if constexpr (is_optional<T>::value) {
        typename T::value_type v{};
        read_value(j, path, v);
        out = std::move(v);
    } else if constexpr (Section<T>) {
        read_section(j, path, out);
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!j.is_string()) throw ConfigError(path, "expected a string");
        out = j.get<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
        if (!j.is_number()) throw ConfigError(path, "expected a number");
        out = j.get<double>();
    } else if constexpr (std::is_same_v<T, std::size_t>) {
        if (!j.is_number_unsigned()) throw ConfigError(path, "expected a non-negative integer");
        out = j.get<std::size_t>();
    } else if constexpr (std::is_same_v<T, std::array<double, 2>>) {
        if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected a pair of numbers");
        for (std::size_t i = 0; i < 2; ++i) read_value(j[i], path + "/" + std::to_string(i), out[i]);
    } else {
        // std::vector<...>
        if (!j.is_array()) throw ConfigError(path, "expected an array");
        out.clear();
        for (std::size_t i = 0; i < j.size(); ++i) {
            typename T::value_type v{};
            read_value(j[i], path + "/" + std::to_string(i), v);
            out.push_back(std::move(v));
        }
    }
}

template <class T> Json write_value(const T& v);

template <Section T> Json write_section(const T& s) {
    Json j = Json::object();
    T copy = s;
    copy.fields([&](std::string_view key, const auto& member) {
        using M = std::remove_cvref_t<decltype(member)>;
        if constexpr (is_optional<M>::value) {
            if (member) j[std::string(key)] = write_value(*member);
        } else {
            j[std::string(key)] = write_value(member);
        }
    });
    return j;
}

template <class T> Json write_value(const T& v) {
    if constexpr (Section<T>) {
        return write_section(v);
    } else if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, double> || std::is_same_v<T, std::size_t>) {
        return Json(v);
    } else {
        Json a = Json::array();
        for (const auto& e : v) a.push_back(write_value(e));
        return a;
    }
}

inline std::size_t line_of_byte(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace detail

[[nodiscard]] inline ScenarioConfig parse_config(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("line " + std::to_string(detail::line_of_byte(text, e.byte ? e.byte - 1 : 0)),
                          "malformed JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("/", "top level must be an object");
    ScenarioConfig cfg;
    static const std::set<std::string, std::less<>> top{"schema_version", "constants", "scenario", "medium",
                                                        "current_sweep", "xi_sweep", "perturbation", "convergence"};
    for (const auto& [k, v] : j.items())
        if (!top.contains(k)) throw ConfigError("/" + k, "unknown key");

    const auto sv = j.find("schema_version");
    if (sv == j.end()) throw ConfigError("/schema_version", "missing schema version");
    detail::read_value(*sv, "/schema_version", cfg.schema_version);
    if (cfg.schema_version != kConfigSchema)
        throw ConfigError("/schema_version", "unsupported schema '" + cfg.schema_version + "', expected '" +
                                                 std::string(kConfigSchema) + "'");

    if (const auto c = j.find("constants"); c != j.end()) {
        if (!c->is_object()) throw ConfigError("/constants", "expected an object");
        AssumedConstants defaults;
        const auto entries = defaults.entries();
        for (const auto& [name, entry] : c->items()) {
            const std::string path = "/constants/" + name;
            const auto known = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.name == name; });
            if (known == entries.end()) throw ConfigError(path, "unknown constant");
            if (!entry.is_object()) throw ConfigError(path, "expected {\"value\": ..., \"source\": ...}");
            for (const auto& [k, v] : entry.items())
                if (k != "value" && k != "source") throw ConfigError(path + "/" + k, "unknown key");
            if (!entry.contains("value")) throw ConfigError(path + "/value", "missing value");
            if (!entry.contains("source")) throw ConfigError(path + "/source", "missing source tag");
            ConstantOverride o;
            detail::read_value(entry["value"], path + "/value", o.value);
            std::string src;
            detail::read_value(entry["source"], path + "/source", src);
            if (src != "assumed" && src != "paper") throw ConfigError(path + "/source", "source must be 'assumed' or 'paper'");
            o.source = src == "paper" ? Source::paper : Source::assumed;
            if (o.source != known->source)
                throw ConfigError(path + "/source", "constant '" + name + "' is tagged '" +
                                                        std::string(to_string(known->source)) + "' in the library");
            cfg.constants.emplace_back(name, o);
        }
    }
    auto section = [&](const char* key, auto& out) {
        if (const auto it = j.find(key); it != j.end()) detail::read_value(*it, std::string("/") + key, out);
    };
    section("scenario", cfg.scenario);
    section("medium", cfg.medium);
    section("current_sweep", cfg.current_sweep);
    section("xi_sweep", cfg.xi_sweep);
    section("perturbation", cfg.perturbation);
    section("convergence", cfg.convergence);
    return cfg;
}

[[nodiscard]] inline Json to_json(const ScenarioConfig& cfg) {
    Json j;
    j["schema_version"] = cfg.schema_version;
    if (!cfg.constants.empty()) {
        Json c = Json::object();
        for (const auto& [name, o] : cfg.constants) c[name] = {{"value", o.value}, {"source", to_string(o.source)}};
        j["constants"] = c;
    }
    if (cfg.scenario) j["scenario"] = detail::write_value(*cfg.scenario);
    if (cfg.medium) j["medium"] = detail::write_value(*cfg.medium);
    if (cfg.current_sweep) j["current_sweep"] = detail::write_value(*cfg.current_sweep);
    if (cfg.xi_sweep) j["xi_sweep"] = detail::write_value(*cfg.xi_sweep);
    if (cfg.perturbation) j["perturbation"] = detail::write_value(*cfg.perturbation);
    if (cfg.convergence) j["convergence"] = detail::write_value(*cfg.convergence);
    return j;
}

[[nodiscard]] inline std::string serialize_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

[[nodiscard]] inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// --------------------------------------------------------------- resolution

[[nodiscard]] inline AssumedConstants resolve_constants(const ScenarioConfig& cfg) {
    AssumedConstants c;
    for (const auto& [name, o] : cfg.constants)
        if (!c.set(name, o.value)) throw ConfigError("/constants/" + name, "unknown constant");
    return c;
}

namespace detail {
inline ProfileKind profile_or_throw(const std::string& s, const std::string& path) {
    if (auto k = parse_profile_kind(s)) return *k;
    throw ConfigError(path, "unknown profile '" + s + "' (linear, cosine, constant, sampled)");
}
} // namespace detail

[[nodiscard]] inline FocsScenario resolve_scenario(const ScenarioConfig& cfg, const AssumedConstants& c) {
    const ScenarioSection s = cfg.scenario.value_or(ScenarioSection{});
    FocsScenario out;
    const auto& w = s.waveplate;
    if (w.model == "ideal") {
        if (w.rho_rad || w.beta_rad || w.delta_n || w.cut_length_m || w.wavelength_m)
            throw ConfigError("/scenario/waveplate", "ideal model takes no plate parameters");
        out.front_end = IdealFrontEnd{};
    } else if (w.model == "imperfect") {
        const double beta = w.beta_rad.value_or(0.0);
        if (w.rho_rad) {
            if (w.delta_n || w.cut_length_m || w.wavelength_m)
                throw ConfigError("/scenario/waveplate", "give either rho_rad or delta_n/cut_length_m/wavelength_m");
            out.front_end = ImperfectFrontEnd{{*w.rho_rad, beta, {}, {}, {}}};
        } else {
            RetardationConvention conv = RetardationConvention::phase;
            if (w.retardation_convention) {
                if (*w.retardation_convention == "literal")
                    conv = RetardationConvention::literal;
                else if (*w.retardation_convention != "phase")
                    throw ConfigError("/scenario/waveplate/retardation_convention", "expected 'phase' or 'literal'");
            }
            const double dn = w.delta_n.value_or(c.qwp_delta_n);
            const double lambda = w.wavelength_m.value_or(c.wavelength_m);
            const double d = w.cut_length_m.value_or(ImperfectWaveplate::quarter_wave_length(dn, lambda));
            out.front_end = ImperfectFrontEnd{ImperfectWaveplate::from_physical(dn, d, lambda, beta, conv)};
        }
    } else {
        throw ConfigError("/scenario/waveplate/model", "expected 'ideal' or 'imperfect'");
    }
    const auto& k = s.coil;
    if (k.rotation_rad) {
        if (k.current_a) throw ConfigError("/scenario/coil", "give either rotation_rad or current_a");
        out.coil = FaradayCoil{*k.rotation_rad, {}, {}, {}};
    } else {
        const double turns = k.turns.value_or(1.0);
        const double verdet = k.verdet_rad_per_a_turn.value_or(c.verdet_turns_rad_per_a / turns);
        out.coil = FaradayCoil::from_current(verdet, turns, k.current_a.value_or(0.0));
    }
    return out;
}

[[nodiscard]] inline JonesVector resolve_input_field(const ScenarioConfig& cfg) {
    if (!cfg.scenario || !cfg.scenario->input_field) return {1.0, 0.0};
    const auto& f = *cfg.scenario->input_field;
    return {{f.ex_re, f.ex_im}, {f.ey_re, f.ey_im}};
}

struct MediumSettings {
    SpunMediumSpec spec;
    std::size_t segments = 200000;
    SegmentRule rule = SegmentRule::midpoint;
    EllipticityMetric metric = EllipticityMetric::principal;
};

[[nodiscard]] inline MediumSettings resolve_medium(const ScenarioConfig& cfg, const AssumedConstants& c) {
    const MediumSection m = cfg.medium.value_or(MediumSection{});
    MediumSettings out;
    if (m.beat_length_m && m.delta_rad_per_m)
        throw ConfigError("/medium", "give either beat_length_m or delta_rad_per_m");
    const double delta = m.delta_rad_per_m.value_or(
        SpunMediumSpec::delta_from_beat_length(m.beat_length_m.value_or(c.medium_beat_length_m)));
    const ProfileKind kind =
        m.profile ? detail::profile_or_throw(*m.profile, "/medium/profile") : ProfileKind::cosine;
    if (m.xi_over_delta && m.xi_max_rad_per_m)
        throw ConfigError("/medium", "give either xi_over_delta or xi_max_rad_per_m");
    out.spec.length_m = m.length_m.value_or(c.medium_length_m);
    out.spec.delta_rad_per_m = delta;
    out.spec.profile.kind = kind;
    out.spec.profile.lead_in_m = m.lead_in_m.value_or(c.medium_lead_in_m);
    out.spec.profile.transition_m = m.transition_m.value_or(c.medium_transition_m);
    if (m.xi_max_rad_per_m) {
        out.spec.profile.xi_max_rad_per_m = *m.xi_max_rad_per_m;
    } else {
        const double r = m.xi_over_delta.value_or(c.medium_xi_over_delta);
        out.spec.profile.xi_max_rad_per_m = r * delta;
        out.spec.xi_over_delta = r;
    }
    if (kind == ProfileKind::sampled) {
        if (!m.table_z_m_xi_rad_per_m || m.table_z_m_xi_rad_per_m->empty())
            throw ConfigError("/medium/table_z_m_xi_rad_per_m", "sampled profile needs a table");
        double prev = -1.0;
        for (std::size_t i = 0; i < m.table_z_m_xi_rad_per_m->size(); ++i) {
            const auto [z, xi] = (*m.table_z_m_xi_rad_per_m)[i];
            if (!(z > prev))
                throw ConfigError("/medium/table_z_m_xi_rad_per_m/" + std::to_string(i), "z must increase from >= 0");
            prev = z;
            out.spec.profile.table.emplace_back(z, xi);
        }
        out.spec.xi_over_delta.reset();
    } else if (m.table_z_m_xi_rad_per_m) {
        throw ConfigError("/medium/table_z_m_xi_rad_per_m", "table only applies to the sampled profile");
    }
    out.segments = m.segments.value_or(static_cast<std::size_t>(c.medium_segments));
    if (out.segments < 1) throw ConfigError("/medium/segments", "expected a positive integer");
    if (m.segment_rule) {
        if (*m.segment_rule == "left_endpoint")
            out.rule = SegmentRule::left_endpoint;
        else if (*m.segment_rule != "midpoint")
            throw ConfigError("/medium/segment_rule", "expected 'midpoint' or 'left_endpoint'");
    }
    if (m.metric) {
        if (*m.metric == "axis_ratio")
            out.metric = EllipticityMetric::axis_ratio;
        else if (*m.metric != "principal")
            throw ConfigError("/medium/metric", "expected 'principal' or 'axis_ratio'");
    }
    return out;
}

[[nodiscard]] inline CurrentSweepSpec resolve_current_sweep(const ScenarioConfig& cfg, const AssumedConstants& c) {
    const CurrentSweepSection s = cfg.current_sweep.value_or(CurrentSweepSection{});
    FrontEndKind kind = FrontEndKind::imperfect_qwp;
    if (s.front_end) {
        const auto k = parse_front_end_kind(*s.front_end);
        if (!k) throw ConfigError("/current_sweep/front_end", "expected ideal, imperfect_qwp, spun_fiber or high_order_qwp");
        kind = *k;
    }
    const Deviation dev{s.cut_deviation_m.value_or(0.0), s.splice_deviation_rad.value_or(0.0)};
    CurrentSweepSpec out = default_current_sweep(c, kind, dev);
    if (kind == FrontEndKind::spun_fiber || kind == FrontEndKind::high_order_qwp) {
        if (cfg.medium) {
            const auto m = resolve_medium(cfg, c);
            out.medium = m.spec;
            if (kind == FrontEndKind::spun_fiber) {
                out.medium.profile.kind = ProfileKind::constant;
                out.medium.profile.table.clear();
            }
            out.medium.length_m += dev.cut_m;
            out.medium_segments = m.segments;
            out.rule = m.rule;
        }
    }
    if (s.rho_rad || s.beta_rad) {
        if (kind != FrontEndKind::imperfect_qwp)
            throw ConfigError("/current_sweep", "rho_rad/beta_rad only apply to the imperfect_qwp front end");
        if (s.cut_deviation_m || s.splice_deviation_rad)
            throw ConfigError("/current_sweep", "give either rho_rad/beta_rad or cut/splice deviations");
        out.plate = {s.rho_rad.value_or(std::numbers::pi / 2.0), s.beta_rad.value_or(0.0), {}, {}, {}};
    }
    out.current_min_a = s.current_min_a.value_or(out.current_min_a);
    out.current_max_a = s.current_max_a.value_or(out.current_max_a);
    out.verdet_turns_rad_per_a = s.verdet_turns_rad_per_a.value_or(out.verdet_turns_rad_per_a);
    out.n_points = s.n_points.value_or(out.n_points);
    if (s.rotation_min_rad || s.rotation_max_rad) {
        if (!s.rotation_min_rad || !s.rotation_max_rad)
            throw ConfigError("/current_sweep", "rotation_min_rad and rotation_max_rad go together");
        if (s.current_min_a || s.current_max_a)
            throw ConfigError("/current_sweep", "give either a current range or a rotation range");
        out.rotation_range_rad = std::array<double, 2>{*s.rotation_min_rad, *s.rotation_max_rad};
    }
    return out;
}

struct XiSweepSettings {
    std::vector<double> ratios{1.0, 3.0, 5.0, 10.0};
    std::vector<ProfileKind> profiles{ProfileKind::linear, ProfileKind::cosine};
    XiSweepOptions options;
};

[[nodiscard]] inline XiSweepSettings resolve_xi_sweep(const ScenarioConfig& cfg, const AssumedConstants& c) {
    XiSweepSettings out;
    const auto m = resolve_medium(cfg, c);
    out.options.segments = m.segments;
    out.options.rule = m.rule;
    out.options.metric = m.metric;
    out.options.conversion_threshold = c.conversion_threshold;
    if (!cfg.xi_sweep) return out;
    const auto& s = *cfg.xi_sweep;
    if (s.ratios) out.ratios = *s.ratios;
    if (s.profiles) {
        out.profiles.clear();
        for (std::size_t i = 0; i < s.profiles->size(); ++i)
            out.profiles.push_back(detail::profile_or_throw((*s.profiles)[i], "/xi_sweep/profiles/" + std::to_string(i)));
    }
    if (s.conversion_threshold) out.options.conversion_threshold = *s.conversion_threshold;
    if (s.flag_threshold) out.options.flag_threshold = *s.flag_threshold;
    return out;
}

[[nodiscard]] inline PerturbationSpec resolve_perturbation(const ScenarioConfig& cfg, const AssumedConstants& c) {
    PerturbationSpec p = PerturbationSpec::from_constants(c);
    if (!cfg.perturbation) return p;
    const auto& s = *cfg.perturbation;
    p.wavelength_drift_m = s.wavelength_drift_m.value_or(p.wavelength_drift_m);
    p.temperature_excursion_c = s.temperature_excursion_c.value_or(p.temperature_excursion_c);
    p.temperature_coeff_per_c = s.temperature_coeff_per_c.value_or(p.temperature_coeff_per_c);
    p.n_samples = s.n_samples.value_or(p.n_samples);
    return p;
}

struct ConvergenceSettings {
    std::vector<std::size_t> ladder{250, 500, 1000, 2000, 4000};
    std::size_t reference_segments = 1000000;
};

[[nodiscard]] inline ConvergenceSettings resolve_convergence(const ScenarioConfig& cfg) {
    ConvergenceSettings out;
    if (!cfg.convergence) return out;
    if (cfg.convergence->ladder) out.ladder = *cfg.convergence->ladder;
    if (cfg.convergence->reference_segments) out.reference_segments = *cfg.convergence->reference_segments;
    for (std::size_t i = 0; i < out.ladder.size(); ++i)
        if (out.ladder[i] < 1) throw ConfigError("/convergence/ladder/" + std::to_string(i), "expected a positive integer");
    if (out.reference_segments < 1) throw ConfigError("/convergence/reference_segments", "expected a positive integer");
    return out;
}

} // namespace focsim::io
