#pragma once

// Check results, report documents and CSV artifacts of a scenario run.

#include "threecircle/growth/growth.hpp"
#include "threecircle/runner/config.hpp"

#include <boost/version.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#define THREECIRCLE_VERSION "1.0.0"

namespace threecircle::runner {

struct Check {
    std::string name;
    bool passed = false;
    std::string kind;        // verdict kind or a short tag
    double magnitude = 0.0;  // worst deviation in the failing direction
    double slack = 0.0;
    std::string detail;
    json data = json::object();
};

inline Check check_from(std::string name, const Verdict& v) {
    Check c;
    c.name = std::move(name);
    c.passed = v.passed;
    c.kind = to_string(v.kind);
    c.magnitude = v.worst_magnitude;
    c.slack = v.slack_used;
    c.detail = v.detail;
    c.data["worst_index"] = v.worst_index;
    return c;
}

/// Pass when value <= limit.
inline Check bound_check(std::string name, double value, double limit, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.passed = value <= limit;
    c.kind = c.passed ? "bound-holds" : "violation";
    c.magnitude = value;
    c.slack = limit;
    c.detail = std::move(detail);
    return c;
}

struct Artifact {
    std::string file;  // relative to the output directory
    std::string content;
};

struct Report {
    ScenarioConfig config;
    std::vector<Check> checks;
    std::vector<Artifact> artifacts;
    double seconds = 0.0;
    std::string error;  // non-configuration failure that aborted the run

    [[nodiscard]] bool passed() const {
        if (!error.empty() || checks.empty()) return false;
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }

    [[nodiscard]] const Check* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    [[nodiscard]] std::string first_failure() const {
        if (!error.empty()) return error;
        for (const auto& c : checks) {
            if (!c.passed) return c.name;
        }
        return {};
    }
};

inline std::string format17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string safe_file_component(const std::string& s) {
    std::string out;
    for (char ch : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.';
        out += ok ? ch : '_';
    }
    return out;
}

inline std::string curve_csv(const GrowthCurve& c) {
    std::string s = "r,abscissa,M,log_M,second_diff,argmax_dir_index\n";
    for (std::size_t j = 0; j < c.size(); ++j) {
        s += format17(c.radii[j]) + "," + format17(c.abscissae[j]) + "," + format17(c.M[j]) + "," +
             format17(std::log(c.M[j])) + "," + format17(c.second_diff[j]) + "," + std::to_string(c.argmax[j]) + "\n";
    }
    return s;
}

inline std::string profile_csv(const ComparisonProfile& p) {
    std::string s = "t,u,u_prime,h,v\n";
    for (std::size_t k = 0; k < p.grid.size(); ++k) {
        s += format17(p.grid[k]) + "," + format17(p.u[k]) + "," + format17(p.du[k]) + "," + format17(p.h[k]) + "," +
             format17(p.v[k]) + "\n";
    }
    return s;
}

inline json tolerances_json(const ToleranceBundle& t) {
    return {{"ode_rel", t.ode_rel}, {"ode_abs", t.ode_abs}, {"tensor_rel", t.tensor_rel}, {"convexity_slack", t.convexity_slack}};
}

inline json to_json(const Report& r) {
    json j;
    j["name"] = r.config.name;
    j["kind"] = r.config.kind;
    j["status"] = r.passed() ? "pass" : "fail";
    if (!r.passed()) j["first_failure"] = r.first_failure();
    if (!r.error.empty()) j["error"] = r.error;
    j["scenario"] = r.config.source;
    j["effective"] = {{"sampler",
                       {{"directions", r.config.sampler.directions},
                        {"seed", r.config.sampler.seed},
                        {"refine", r.config.sampler.refine},
                        {"refine_starts", r.config.sampler.refine_starts}}},
                      {"tolerances", tolerances_json(r.config.tol)}};
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"kind", c.kind},
                          {"magnitude", c.magnitude},
                          {"slack", c.slack},
                          {"detail", c.detail},
                          {"data", c.data}});
    }
    j["checks"] = checks;
    j["check_count"] = r.checks.size();
    json files = json::array();
    for (const auto& a : r.artifacts) files.push_back(a.file);
    j["artifacts"] = files;
    j["provenance"] = {{"version", THREECIRCLE_VERSION},
                       {"seed", r.config.sampler.seed},
                       {"compiler", __VERSION__},
                       {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                     std::to_string(EIGEN_MINOR_VERSION)},
                       {"boost", BOOST_LIB_VERSION}};
    j["timings"] = {{"total_seconds", r.seconds}};
    return j;
}

/// Writes the CSV artifacts and `<name>.report.json` into `dir`.
inline std::vector<std::filesystem::path> write_outputs(const Report& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::filesystem::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot write '" + p.string() + "'");
        out << content;
        written.push_back(p);
    };
    for (const auto& a : r.artifacts) put(dir / a.file, a.content);
    put(dir / (r.config.name + ".report.json"), to_json(r).dump(2) + "\n");
    return written;
}

}  // namespace threecircle::runner
