#pragma once

// Scenario configuration files (JSON) and their validation.

#include "threecircle/comparison/profile.hpp"
#include "threecircle/geometry/catalog.hpp"
#include "threecircle/growth/growth.hpp"
#include "threecircle/growth/polynomial.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace threecircle::runner {

using json = nlohmann::json;

inline const std::vector<std::string>& scenario_kinds() {
    static const std::vector<std::string> kinds = {
        "curvature-equivalence", "comparison-ode", "geodesic-taylor", "three-circle",
        "monotonicity",          "max-principle",  "counterexample",  "dimension-count",
    };
    return kinds;
}

struct ProfileSpec {
    std::string name = "zero";
    ParamMap params;
};

struct RadiiSpec {
    double min = 0.1;
    double max = 3.0;
    std::size_t count = 16;
    std::string spacing = "geometric";  // or "linear"

    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> r;
        for (std::size_t k = 0; k < count; ++k) {
            const double s = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
            r.push_back(spacing == "linear" ? min + s * (max - min) : min * std::pow(max / min, s));
        }
        return r;
    }
};

struct ScenarioConfig {
    std::string name;
    std::string kind;
    MetricSpec metric{"flat", 1, {}};
    bool has_metric = false;
    std::vector<MetricSpec> metrics;  // kinds that sweep several charts
    std::vector<FunctionSpec> functions;
    std::optional<ProfileSpec> profile;
    std::vector<ProfileSpec> profiles;
    RadiiSpec radii;
    bool has_radii = false;
    SphereSampler sampler;
    ToleranceBundle tol;
    std::string output_dir;
    json options = json::object();
    json source = json::object();  // the parsed document, echoed in reports

    /// Metric list for sweeping kinds: explicit list, else the single metric, else the default set.
    [[nodiscard]] std::vector<MetricSpec> metric_set() const;
};

inline std::vector<MetricSpec> default_metric_set() {
    return {
        {"flat", 1, {}},
        {"flat", 2, {}},
        {"poincare-ball", 1, {}},
        {"poincare-ball", 2, {}},
        {"radial-conformal", 1, {}},
        {"radial-conformal", 2, {}},
        {"radial-conformal", 2, {{"a", 0.5}, {"b", 0.3}}},
        {"poly-perturbed", 2, {{"eps", 0.1}, {"seed", 3}}},
    };
}

inline std::vector<MetricSpec> ScenarioConfig::metric_set() const {
    if (!metrics.empty()) return metrics;
    if (has_metric) return {metric};
    return default_metric_set();
}

inline std::string format_number(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

inline std::string format_params(const ParamMap& p) {
    std::string s;
    for (const auto& [k, v] : p) s += "," + k + "=" + format_number(v);
    return s;
}

inline std::string spec_label(const MetricSpec& m) { return m.name + "(n=" + std::to_string(m.n) + format_params(m.params) + ")"; }

inline std::string spec_label(const FunctionSpec& f) {
    std::string p = format_params(f.params);
    if (!p.empty()) p = "(" + p.substr(1) + ")";
    return f.name + p;
}

inline std::string spec_label(const ProfileSpec& q) {
    std::string p = format_params(q.params);
    if (!p.empty()) p = "(" + p.substr(1) + ")";
    return q.name + p;
}

namespace detail {

inline void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

template <class T>
T get(const json& j, const char* key, const std::string& where, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

inline ParamMap parse_params(const json& j, const std::string& where) {
    ParamMap p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw ConfigError(where + ".params must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw ConfigError("parameter '" + k + "' in " + where + " must be a number");
        p[k] = v.get<double>();
    }
    return p;
}

inline MetricSpec parse_metric(const json& j, const std::string& where) {
    require_keys(j, where, {"name", "n", "params"});
    if (!j.contains("name")) throw ConfigError(where + " needs a name");
    MetricSpec m;
    m.name = get<std::string>(j, "name", where, "");
    m.n = get<int>(j, "n", where, 1);
    m.params = parse_params(j.value("params", json()), where);
    return m;
}

inline cplx parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(where + ": complex numbers are a number or [re, im]");
}

// A function entry with "count": k expands to k copies whose "seed" parameter
// is incremented from its starting value.
inline std::vector<FunctionSpec> parse_functions(const json& arr, int n, const std::string& where) {
    if (!arr.is_array()) throw ConfigError(where + " must be an array");
    std::vector<FunctionSpec> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        const auto& j = arr[i];
        require_keys(j, w, {"name", "params", "terms", "count"});
        FunctionSpec f;
        f.name = get<std::string>(j, "name", w, "");
        if (f.name.empty()) throw ConfigError(w + " needs a name");
        f.n = n;
        f.params = parse_params(j.value("params", json()), w);
        if (j.contains("terms")) {
            for (const auto& t : j.at("terms")) {
                require_keys(t, w + ".terms", {"exponent", "coefficient"});
                Exponent a = get<Exponent>(t, "exponent", w + ".terms", {});
                f.terms.push_back({a, parse_complex(t.value("coefficient", json(1.0)), w + ".terms")});
            }
        }
        const int count = get<int>(j, "count", w, 1);
        if (count < 1) throw ConfigError(w + ".count must be at least 1");
        if (count > 1 && !f.params.count("seed")) f.params["seed"] = 1;
        for (int c = 0; c < count; ++c) {
            FunctionSpec g = f;
            if (count > 1) g.params["seed"] = f.params["seed"] + c;
            out.push_back(std::move(g));
        }
    }
    return out;
}

inline ProfileSpec parse_profile(const json& j, const std::string& where) {
    require_keys(j, where, {"name", "params"});
    ProfileSpec q;
    q.name = get<std::string>(j, "name", where, "zero");
    q.params = parse_params(j.value("params", json()), where);
    return q;
}

}  // namespace detail

/// Constructs every referenced catalog entry so that bad names and
/// parameters surface before any computation starts.
inline void validate(const ScenarioConfig& c) {
    if (std::find(scenario_kinds().begin(), scenario_kinds().end(), c.kind) == scenario_kinds().end()) {
        throw ConfigError("unknown scenario kind '" + c.kind + "'");
    }
    if (c.name.empty()) throw ConfigError("scenario needs a name");
    for (char ch : c.name) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
            throw ConfigError("scenario name may only contain letters, digits, '-', '_' and '.'");
        }
    }
    c.sampler.validate();
    c.tol.validate();
    if (c.has_radii) {
        if (!(c.radii.min > 0)) throw ConfigError("radii.min must be positive");
        if (!(c.radii.max > c.radii.min)) throw ConfigError("radii.max must exceed radii.min");
        if (c.radii.count < 3) throw ConfigError("radii.count must be at least 3");
        if (c.radii.spacing != "geometric" && c.radii.spacing != "linear") {
            throw ConfigError("radii.spacing must be 'geometric' or 'linear'");
        }
    }
    for (const auto& m : c.metric_set()) (void)make_metric(m);
    for (const auto& f : c.functions) (void)make_function(f);
    if (c.profile && c.profile->name != "dominating-bump") (void)make_profile(c.profile->name, c.profile->params);
    for (const auto& q : c.profiles) (void)make_profile(q.name, q.params);
}

inline ScenarioConfig parse_config(const json& j) {
    detail::require_keys(j, "scenario",
                         {"name", "kind", "metric", "metrics", "functions", "profile", "profiles", "radii", "sampler",
                          "tolerances", "output_dir", "options"});
    ScenarioConfig c;
    c.source = j;
    c.name = detail::get<std::string>(j, "name", "scenario", "");
    c.kind = detail::get<std::string>(j, "kind", "scenario", "");
    if (j.contains("metric")) {
        c.metric = detail::parse_metric(j.at("metric"), "metric");
        c.has_metric = true;
    }
    if (j.contains("metrics")) {
        if (!j.at("metrics").is_array()) throw ConfigError("metrics must be an array");
        for (std::size_t i = 0; i < j.at("metrics").size(); ++i) {
            c.metrics.push_back(detail::parse_metric(j.at("metrics")[i], "metrics[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("functions")) c.functions = detail::parse_functions(j.at("functions"), c.metric.n, "functions");
    if (j.contains("profile")) c.profile = detail::parse_profile(j.at("profile"), "profile");
    if (j.contains("profiles")) {
        if (!j.at("profiles").is_array()) throw ConfigError("profiles must be an array");
        for (const auto& q : j.at("profiles")) c.profiles.push_back(detail::parse_profile(q, "profiles"));
    }
    if (j.contains("radii")) {
        const auto& r = j.at("radii");
        detail::require_keys(r, "radii", {"min", "max", "count", "spacing"});
        c.radii.min = detail::get<double>(r, "min", "radii", c.radii.min);
        c.radii.max = detail::get<double>(r, "max", "radii", c.radii.max);
        c.radii.count = detail::get<std::size_t>(r, "count", "radii", c.radii.count);
        c.radii.spacing = detail::get<std::string>(r, "spacing", "radii", c.radii.spacing);
        c.has_radii = true;
    }
    if (j.contains("sampler")) {
        const auto& s = j.at("sampler");
        detail::require_keys(s, "sampler", {"directions", "seed", "refine", "refine_starts"});
        c.sampler.directions = detail::get<std::size_t>(s, "directions", "sampler", c.sampler.directions);
        c.sampler.seed = detail::get<std::uint64_t>(s, "seed", "sampler", c.sampler.seed);
        c.sampler.refine = detail::get<bool>(s, "refine", "sampler", c.sampler.refine);
        c.sampler.refine_starts = detail::get<std::size_t>(s, "refine_starts", "sampler", c.sampler.refine_starts);
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        detail::require_keys(t, "tolerances", {"ode_rel", "ode_abs", "tensor_rel", "convexity_slack"});
        c.tol.ode_rel = detail::get<double>(t, "ode_rel", "tolerances", c.tol.ode_rel);
        c.tol.ode_abs = detail::get<double>(t, "ode_abs", "tolerances", c.tol.ode_abs);
        c.tol.tensor_rel = detail::get<double>(t, "tensor_rel", "tolerances", c.tol.tensor_rel);
        c.tol.convexity_slack = detail::get<double>(t, "convexity_slack", "tolerances", c.tol.convexity_slack);
    }
    c.output_dir = detail::get<std::string>(j, "output_dir", "scenario", "");
    if (j.contains("options")) {
        if (!j.at("options").is_object()) throw ConfigError("options must be an object");
        c.options = j.at("options");
    }
    validate(c);
    return c;
}

inline ScenarioConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Typed access to kind-specific options with a closed set of keys.
class Options {
public:
    Options(const json& j, std::string kind, std::initializer_list<const char*> allowed) : j_(j), kind_(std::move(kind)) {
        detail::require_keys(j_, "options of a " + kind_ + " scenario", allowed);
    }

    template <class T>
    [[nodiscard]] T get(const char* key, T fallback) const {
        return detail::get<T>(j_, key, "options", fallback);
    }

    [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }
    [[nodiscard]] const json& raw(const char* key) const { return j_.at(key); }

    [[nodiscard]] std::optional<CVector> point(const char* key, int n) const {
        if (!j_.contains(key)) return std::nullopt;
        const auto& a = j_.at(key);
        if (!a.is_array() || static_cast<int>(a.size()) != n) {
            throw ConfigError(std::string("options.") + key + " must list " + std::to_string(n) + " coordinates");
        }
        CVector p(n);
        for (int k = 0; k < n; ++k) p(k) = detail::parse_complex(a[static_cast<std::size_t>(k)], key);
        return p;
    }

private:
    const json& j_;
    std::string kind_;
};

}  // namespace threecircle::runner
