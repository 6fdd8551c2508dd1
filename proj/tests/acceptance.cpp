// Acceptance run: executes every scenario under scenarios/, evaluates the
// thirteen acceptance criteria against explicit thresholds, and prints one
// PASS/FAIL line per criterion.
//
// usage: acceptance [path-to-cli] [scenario-dir]

#include "threecircle/runner/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

#ifndef THREECIRCLE_SOURCE_DIR
#define THREECIRCLE_SOURCE_DIR "."
#endif

namespace fs = std::filesystem;
namespace tr = threecircle::runner;
using threecircle::MetricSpec;

namespace {

struct Failed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failed(what);
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

struct Suite {
    std::map<std::string, tr::Report> reports;
    double seconds = 0.0;

    const tr::Report& get(const std::string& name) const {
        auto it = reports.find(name);
        require(it != reports.end(), "scenario '" + name + "' is missing");
        require(it->second.error.empty(), "scenario '" + name + "' aborted: " + it->second.error);
        return it->second;
    }
};

std::vector<fs::path> scenario_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

Suite run_suite(const std::vector<fs::path>& files, const fs::path& out) {
    Suite s;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& f : files) {
        auto cfg = tr::load_config(f.string());
        auto rep = tr::run_scenario(cfg);
        tr::write_outputs(rep, out);
        s.reports.emplace(cfg.name, std::move(rep));
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

std::vector<const tr::Check*> with_prefix(const tr::Report& r, const std::string& prefix) {
    std::vector<const tr::Check*> out;
    for (const auto& c : r.checks) {
        if (c.name.rfind(prefix, 0) == 0) out.push_back(&c);
    }
    return out;
}

const tr::Check& named(const tr::Report& r, const std::string& name) {
    const auto* c = r.find(name);
    require(c != nullptr, "check '" + name + "' missing from " + r.config.name);
    return *c;
}

std::set<std::string> labels(const std::vector<MetricSpec>& ms) {
    std::set<std::string> s;
    for (const auto& m : ms) s.insert(tr::spec_label(m));
    return s;
}

void require_default_metrics(const tr::ScenarioConfig& c) {
    const auto have = labels(c.metric_set());
    for (const auto& l : labels(tr::default_metric_set())) require(have.count(l) > 0, c.name + " does not cover " + l);
}

double option(const tr::ScenarioConfig& c, const char* key, double fallback) {
    return c.options.contains(key) ? c.options.at(key).get<double>() : fallback;
}

// --- criteria ---------------------------------------------------------------

std::string curvature_equivalence(const Suite& s) {
    const auto& r = s.get("curvature-equivalence");
    require_default_metrics(r.config);
    const auto& c = named(r, "holomorphic-sectional-identity");
    require(c.data.at("samples").get<int>() >= 100, "fewer than 100 samples");
    require(c.magnitude <= 1e-5, "relative disagreement " + num(c.magnitude));
    require(r.seconds < 30.0, "runtime " + num(r.seconds) + " s");
    return "max relative disagreement " + num(c.magnitude) + " over " + std::to_string(c.data.at("samples").get<int>()) +
           " triples";
}

std::string l_operator(const Suite& s) {
    const auto& r = s.get("curvature-equivalence");
    const auto& c = named(r, "L-operator-triple-identity");
    require(c.data.at("samples").get<int>() >= 50, "fewer than 50 samples");
    require(c.magnitude <= 1e-6, "spread " + num(c.magnitude));
    return "max spread " + num(c.magnitude) + " over " + std::to_string(c.data.at("samples").get<int>()) + " triples";
}

std::string closed_form(const Suite& s) {
    const auto& r = s.get("comparison-ode");
    const auto& c = named(r, "closed-form-tn[constant(c=1)]");
    const auto w = r.config.options.value("closed_form_window", std::vector<double>{0.1, 5.0});
    require(w.size() == 2 && w[0] <= 0.1 && w[1] >= 5.0, "closed-form window narrower than [0.1, 5]");
    require(c.magnitude <= 1e-6, "deviation " + num(c.magnitude));
    return "max |v - log tanh(t/2) - c| = " + num(c.magnitude);
}

const std::vector<std::string> kIntegrable = {"zero", "bump", "inverse-cube", "log-weak"};

std::string uprime_suite(const Suite& s) {
    const auto& r = s.get("comparison-ode");
    require(option(r.config, "horizon", 50.0) >= 50.0, "horizon below 50");
    for (const auto* c : with_prefix(r, "u-prime-nondecreasing[")) {
        require(c->magnitude <= 1e-10, c->name + " violation " + num(c->magnitude));
    }
    std::set<std::string> seen;
    double worst = -1e300;
    for (const auto* c : with_prefix(r, "u-prime-below-Iq[")) {
        require(c->magnitude <= 1e-6, c->name + ": u'(T) - I(q) = " + num(c->magnitude));
        worst = std::max(worst, c->magnitude);
        for (const auto& n : kIntegrable) {
            if (c->name.rfind("u-prime-below-Iq[" + n, 0) == 0) seen.insert(n);
        }
    }
    require(seen.size() == kIntegrable.size(), "not every integrable catalog profile was checked");
    const auto& u = named(r, "u-prime-unbounded[constant(c=1)]");
    require(option(r.config, "unbounded_horizon", 10.0) <= 10.0, "unbounded check beyond T = 10");
    require(u.passed && u.magnitude > 1e3, "u'(10) = " + num(u.magnitude));
    return "max u'(50) - I(q) = " + num(worst) + ", u'(10) = " + num(u.magnitude) + " for q = 1";
}

std::string v_bounds(const Suite& s) {
    const auto& r = s.get("comparison-ode");
    std::set<std::string> seen;
    double worst = 0.0;
    for (const auto* c : with_prefix(r, "v-bounds[")) {
        require(c->passed && c->magnitude <= 1e-8, c->name + " violation " + num(c->magnitude));
        worst = std::max(worst, c->magnitude);
        for (const auto& n : kIntegrable) {
            if (c->name.rfind("v-bounds[" + n, 0) == 0) seen.insert(n);
        }
    }
    require(seen.size() == kIntegrable.size(), "not every integrable catalog profile was checked");
    return "worst violation " + num(worst) + " (slack 1e-8)";
}

std::string taylor(const Suite& s) {
    const auto& r = s.get("geodesic-taylor");
    require_default_metrics(r.config);
    require(option(r.config, "directions", 10) >= 10, "fewer than 10 directions");
    const auto times = r.config.options.value("times", std::vector<double>{0.1, 0.05, 0.025});
    require(times == std::vector<double>({0.1, 0.05, 0.025}), "times differ from {0.1, 0.05, 0.025}");
    double worst = 1e300;
    const auto cs = with_prefix(r, "taylor-order[");
    require(!cs.empty(), "no taylor checks");
    for (const auto* c : cs) {
        require(c->passed, c->name + " order " + num(c->magnitude));
        if (std::isfinite(c->magnitude)) worst = std::min(worst, c->magnitude);
    }
    require(r.seconds < 60.0, "runtime " + num(r.seconds) + " s");
    return "min order " + num(worst) + " over " + std::to_string(cs.size()) + " base points";
}

std::string normal_coordinates(const Suite& s) {
    const auto& r = s.get("geodesic-taylor");
    require(option(r.config, "normal_directions", 20) >= 20, "fewer than 20 directions");
    double chr = 0.0, der = 0.0;
    for (const auto* c : with_prefix(r, "normal-coordinates[")) {
        const double a = c->data.at("christoffel").get<double>(), b = c->data.at("derivative").get<double>();
        require(a < 1e-8 && b < 1e-6, c->name);
        chr = std::max(chr, a);
        der = std::max(der, b);
    }
    return "max sym Gamma " + num(chr) + ", max cubic contraction " + num(der);
}

std::string three_circle(const Suite& s) {
    double worst = 0.0;
    for (int n : {1, 2}) {
        const auto& r = s.get(n == 1 ? "three-circle-flat-c" : "three-circle-flat-c2");
        const auto& c = r.config;
        require(c.metric.name == "flat" && c.metric.n == n, c.name + " is not flat C^" + std::to_string(n));
        require(c.functions.size() >= 20, "fewer than 20 polynomials");
        require(c.radii.min <= 0.1 && c.radii.max >= 3.0, "radii do not cover [0.1, 3]");
        require(c.sampler.directions >= 512, "fewer than 512 directions");
        require(c.tol.convexity_slack <= 1e-6, "convexity slack above 1e-6");
        const auto cs = with_prefix(r, "convexity[");
        require(cs.size() == c.functions.size(), "missing convexity verdicts");
        for (const auto* k : cs) {
            require(k->passed, k->name + " worst " + num(k->magnitude));
            worst = std::max(worst, k->magnitude);
        }
    }
    return "40 curves convex, worst negative second difference " + num(worst);
}

std::string monotonicity(const Suite& s) {
    std::size_t count = 0;
    for (int n : {1, 2}) {
        const auto& r = s.get(n == 1 ? "monotonicity-flat-c" : "monotonicity-flat-c2");
        require(r.config.metric.name == "flat" && r.config.metric.n == n, "not a flat chart");
        require(r.config.functions.empty(), "must use the whole polynomial catalog");
        const auto ods = with_prefix(r, "ord-le-deg[");
        require(ods.size() == threecircle::polynomial_catalog(n).size(), "catalog not covered");
        for (const auto& c : r.checks) {
            require(c.passed, c.name + " " + num(c.magnitude));
        }
        count += ods.size();
    }
    return std::to_string(count) + " catalog entries, parts (3)-(5) within slack";
}

std::string counterexample(const Suite& s) {
    std::string out;
    for (int n : {1, 2}) {
        const auto& r = s.get("counterexample-n" + std::to_string(n));
        const auto& c = r.config;
        require(c.metric.name == "radial-conformal" && c.metric.n == n, "wrong metric");
        require(threecircle::param_or(c.metric.params, "a", 1.0) == 1.0 &&
                    threecircle::param_or(c.metric.params, "b", 0.0) == 0.0,
                "metric is not exp(|z|^2) delta");
        const std::string lab = tr::spec_label(c.metric);
        const auto& v = named(r, "violation detected as expected[" + lab + "]");
        require(v.passed, "no violation detected");
        const double d0 = v.data.at("delta0").get<double>(), rs = v.data.at("r_star").get<double>();
        require(d0 >= 1e-4 && rs > 0 && rs <= 0.5, "delta0 " + num(d0) + " at r " + num(rs));
        require(named(r, "functional-negative[" + lab + "]").passed, "functional not negative");
        const auto& ctl = named(r, "no violation on control[flat(n=" + std::to_string(n) + ")]");
        require(ctl.passed, "flat control reports a violation");
        out += (n == 1 ? "" : "; ") + std::string("n=") + std::to_string(n) + ": delta0 " + num(d0) + " at r " + num(rs);
    }
    return out + "; flat controls clean";
}

std::string max_principle(const Suite& s) {
    const auto& r = s.get("max-principle");
    require_default_metrics(r.config);
    require(option(r.config, "slack", 1e-8) <= 1e-8, "slack above 1e-8");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : r.checks) {
        require(c.passed, c.name + " " + c.detail);
        worst = std::max(worst, c.data.at("interior_max").get<double>() - c.data.at("boundary_max").get<double>());
    }
    return std::to_string(r.checks.size()) + " (metric, function) pairs, max interior - boundary " + num(worst);
}

std::string dimension(const Suite& s) {
    const auto& r = s.get("dimension-count");
    require(option(r.config, "n_max", 3) >= 3 && option(r.config, "d_max", 5) >= 5, "range below n <= 3, d <= 5");
    for (const auto& c : r.checks) require(c.passed, c.name);
    const auto& c22 = named(r, "dimension[n=2,d=2]");
    require(c22.data.at("rank").get<long>() == 6, "n=2, d=2 rank is not 6");
    return std::to_string(r.checks.size()) + " (n, d) pairs match binomial(n+d, n)";
}

std::map<std::string, std::string> read_csvs(const fs::path& dir) {
    std::map<std::string, std::string> m;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".csv") continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        m[e.path().filename().string()] = ss.str();
    }
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const fs::path scen = argc > 2 ? fs::path(argv[2]) : fs::path(THREECIRCLE_SOURCE_DIR) / "scenarios";
    const fs::path work = fs::temp_directory_path() / ("threecircle-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(work);
    const fs::path out_a = work / "a", out_b = work / "b";

    const auto files = scenario_files(scen);
    Suite suite;
    std::string suite_error;
    try {
        suite = run_suite(files, out_a);
    } catch (const std::exception& e) {
        suite_error = e.what();
    }

    struct Criterion {
        int id;
        const char* title;
        std::function<std::string(const Suite&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "curvature equivalence", curvature_equivalence},
        {2, "L-operator triple identity", l_operator},
        {3, "closed-form comparison for q = 1", closed_form},
        {4, "u' monotone, bounded by I(q), unbounded for q = 1", uprime_suite},
        {5, "bounds on v for t > 1", v_bounds},
        {6, "geodesic Taylor convergence order", taylor},
        {7, "normal holomorphic coordinates", normal_coordinates},
        {8, "three circle positive suite", three_circle},
        {9, "monotonicity of log M - ord v and log M - deg v", monotonicity},
        {10, "counterexample reproduction", counterexample},
        {11, "maximum principle", max_principle},
        {12, "dimension count", dimension},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string msg;
        bool ok = false;
        try {
            if (!suite_error.empty()) throw Failed("suite aborted: " + suite_error);
            msg = c.body(suite);
            ok = true;
        } catch (const std::exception& e) {
            msg = e.what();
        }
        failures += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- " << msg << std::endl;
    }

    // 13: a second full run, through the command-line tool when available
    {
        std::string msg;
        bool ok = false;
        try {
            if (!suite_error.empty()) throw Failed("suite aborted: " + suite_error);
            const auto t0 = std::chrono::steady_clock::now();
            if (!cli.empty()) {
                for (const auto& f : files) {
                    const std::string cmd = "\"" + cli + "\" run \"" + f.string() + "\" --out-dir \"" + out_b.string() +
                                            "\" > /dev/null 2>&1";
                    const int rc = std::system(cmd.c_str());
                    require(rc == 0, "command-line run of " + f.filename().string() + " exited with " + std::to_string(rc));
                }
            } else {
                (void)run_suite(files, out_b);
            }
            const double second = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const auto a = read_csvs(out_a), b = read_csvs(out_b);
            require(!a.empty(), "no CSV output");
            require(a.size() == b.size(), "CSV file sets differ");
            for (const auto& [name, content] : a) {
                auto it = b.find(name);
                require(it != b.end() && it->second == content, name + " differs between runs");
            }
            require(suite.seconds < 300.0, "suite wall-clock " + num(suite.seconds) + " s");
            msg = std::to_string(a.size()) + " CSV files byte-identical; suite " + num(suite.seconds) + " s, repeat " +
                  num(second) + " s" + (cli.empty() ? " (in-process)" : " (command line)");
            ok = true;
        } catch (const std::exception& e) {
            msg = e.what();
        }
        failures += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion 13: determinism and runtime -- " << msg << std::endl;
    }

    std::error_code ec;
    fs::remove_all(work, ec);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
