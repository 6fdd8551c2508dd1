#include "threecircle/runner/scenarios.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace threecircle;
using namespace threecircle::runner;
namespace fs = std::filesystem;

namespace {

ScenarioConfig parse(const std::string& text) { return parse_config_text(text); }

const char* kSmallThreeCircle = R"({
  "name": "small",
  "kind": "three-circle",
  "metric": {"name": "flat", "n": 2},
  "functions": [{"name": "z1z2"}, {"name": "random-poly", "params": {"degree": 2, "seed": 4}, "count": 2}],
  "radii": {"min": 0.1, "max": 2.0, "count": 6},
  "sampler": {"directions": 32, "seed": 3}
})";

fs::path scratch(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("threecircle-runner-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Config, ParsesAndExpandsCounts) {
    const auto c = parse(kSmallThreeCircle);
    EXPECT_EQ(c.kind, "three-circle");
    ASSERT_EQ(c.functions.size(), 3u);
    EXPECT_EQ(c.functions[1].params.at("seed"), 4.0);
    EXPECT_EQ(c.functions[2].params.at("seed"), 5.0);
    EXPECT_EQ(c.functions[2].n, 2);
    const auto r = c.radii.values();
    ASSERT_EQ(r.size(), 6u);
    EXPECT_DOUBLE_EQ(r.front(), 0.1);
    EXPECT_NEAR(r.back(), 2.0, 1e-15);
    EXPECT_NEAR(r[1] / r[0], r[2] / r[1], 1e-12);
    EXPECT_EQ(c.sampler.directions, 32u);
}

TEST(Config, ValidationErrors) {
    auto bad = [](const std::string& patch_from, const std::string& patch_to) {
        std::string t = kSmallThreeCircle;
        const auto at = t.find(patch_from);
        EXPECT_NE(at, std::string::npos) << patch_from;
        t.replace(at, patch_from.size(), patch_to);
        EXPECT_THROW(parse(t), ConfigError) << patch_to;
    };
    bad("\"flat\"", "\"no-such-metric\"");
    bad("\"z1z2\"", "\"no-such-function\"");
    bad("\"min\": 0.1", "\"min\": 0.0");
    bad("\"directions\": 32", "\"directions\": 4");
    bad("\"kind\": \"three-circle\"", "\"kind\": \"banana\"");
    bad("\"seed\": 3", "\"seed\": 3, \"colour\": 1");
    bad("\"count\": 6", "\"count\": 2");
    bad("\"name\": \"small\"", "\"name\": \"a/b\"");
    EXPECT_THROW(parse("{not json"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, UnknownOptionIsConfigError) {
    auto c = parse(R"({"name": "d", "kind": "dimension-count", "options": {"n_max": 1, "bogus": 2}})");
    EXPECT_THROW(run_scenario(c), ConfigError);
}

TEST(Config, Overrides) {
    auto c = parse(kSmallThreeCircle);
    apply_overrides(c, {7u, 10.0, 64u});
    EXPECT_EQ(c.sampler.seed, 7u);
    EXPECT_EQ(c.sampler.directions, 64u);
    EXPECT_DOUBLE_EQ(c.tol.ode_rel, 1e-9);
    EXPECT_THROW(apply_overrides(c, {std::nullopt, -1.0, std::nullopt}), ConfigError);
    EXPECT_THROW(apply_overrides(c, {std::nullopt, std::nullopt, 2u}), ConfigError);
}

TEST(Catalogs, ListingContainsEntriesAndIsStable) {
    const auto s = list_catalogs();
    for (const char* name : {"flat", "poincare-ball", "radial-conformal", "poly-perturbed", "zero", "constant", "bump",
                             "inverse-cube", "log-weak", "monomial", "random-poly", "counterexample"}) {
        EXPECT_NE(s.find(name), std::string::npos) << name;
    }
    EXPECT_EQ(s, list_catalogs());
    EXPECT_LT(s.find("metrics:"), s.find("functions:"));
    EXPECT_LT(s.find("functions:"), s.find("profiles:"));
}

TEST(Run, ThreeCirclePassesWithOneCsvPerFunction) {
    const auto rep = run_scenario(parse(kSmallThreeCircle));
    EXPECT_TRUE(rep.passed()) << rep.first_failure();
    ASSERT_EQ(rep.checks.size(), 3u);
    ASSERT_EQ(rep.artifacts.size(), 3u);
    const auto& csv = rep.artifacts[0].content;
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,abscissa,M,log_M,second_diff,argmax_dir_index");
    // |z1 z2| on the sphere of radius r is r^2/4
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cols.push_back(cell);
    ASSERT_EQ(cols.size(), 6u);
    EXPECT_EQ(cols[0], "0.10000000000000001");
    EXPECT_NEAR(std::stod(cols[2]), 0.01 / 4, 1e-6);
    EXPECT_EQ(cols[4], "nan");
    const auto j = to_json(rep);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["check_count"], rep.checks.size());
    EXPECT_EQ(j["provenance"]["seed"], 3);
}

TEST(Run, ArtifactsAreDeterministic) {
    const auto a = run_scenario(parse(kSmallThreeCircle));
    const auto b = run_scenario(parse(kSmallThreeCircle));
    ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
    for (std::size_t k = 0; k < a.artifacts.size(); ++k) {
        EXPECT_EQ(a.artifacts[k].file, b.artifacts[k].file);
        EXPECT_EQ(a.artifacts[k].content, b.artifacts[k].content);
    }
}

TEST(Run, CheckCountsMatchDeclaredChecks) {
    auto dc = run_scenario(parse(R"({"name": "d", "kind": "dimension-count", "options": {"n_max": 2, "d_max": 3}})"));
    EXPECT_TRUE(dc.passed());
    EXPECT_EQ(dc.checks.size(), 8u);
    auto mono = run_scenario(parse(R"({"name": "m", "kind": "monotonicity", "metric": {"name": "flat", "n": 1},
        "functions": [{"name": "linear"}, {"name": "exp-z1-minus-one"}],
        "radii": {"min": 0.1, "max": 1.0, "count": 5}, "sampler": {"directions": 16}})"));
    EXPECT_TRUE(mono.passed()) << mono.first_failure();
    EXPECT_EQ(mono.checks.size(), 6u);
    EXPECT_EQ(mono.checks[5].kind, "vacuous");
    auto ce = run_scenario(parse(R"({"name": "c", "kind": "comparison-ode",
        "profiles": [{"name": "zero"}, {"name": "constant"}], "options": {"horizon": 12}})"));
    EXPECT_TRUE(ce.passed()) << ce.first_failure();
    // zero: monotone, below I(q), v bounds; constant: monotone, unbounded, closed form
    EXPECT_EQ(ce.checks.size(), 6u);
    EXPECT_EQ(ce.artifacts.size(), 2u);
}

TEST(Run, CounterexampleReportsExpectedViolation) {
    const auto rep = run_scenario(parse(R"({"name": "ce", "kind": "counterexample",
        "metric": {"name": "radial-conformal", "n": 1},
        "sampler": {"directions": 16},
        "options": {"controls": [{"metric": {"name": "flat", "n": 1}}]}})"));
    EXPECT_TRUE(rep.passed()) << rep.first_failure();
    const auto* v = rep.find("violation detected as expected[radial-conformal(n=1)]");
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->detail, "violation detected as expected");
    EXPECT_GE(v->data["delta0"].get<double>(), 1e-4);
    EXPECT_NE(rep.find("no violation on control[flat(n=1)]"), nullptr);
    EXPECT_EQ(rep.artifacts.size(), 2u);
}

TEST(Run, FlatChartIsNotACounterexample) {
    const auto rep = run_scenario(parse(R"({"name": "ce", "kind": "counterexample",
        "metric": {"name": "flat", "n": 1}, "sampler": {"directions": 16}})"));
    EXPECT_FALSE(rep.passed());
    EXPECT_EQ(rep.first_failure(), "functional-negative[flat(n=1)]");
}

TEST(Run, DomainErrorsAreRecorded) {
    // base point outside the ball
    const auto rep = run_scenario(parse(R"({"name": "x", "kind": "three-circle",
        "metric": {"name": "poincare-ball", "n": 1}, "functions": [{"name": "linear"}],
        "radii": {"min": 0.1, "max": 0.5, "count": 3}, "sampler": {"directions": 8},
        "options": {"base_point": [2.0]}})"));
    EXPECT_FALSE(rep.passed());
    EXPECT_FALSE(rep.error.empty());
}

TEST(Run, WriteOutputs) {
    const auto dir = scratch("write");
    const auto rep = run_scenario(parse(kSmallThreeCircle));
    const auto files = write_outputs(rep, dir);
    EXPECT_EQ(files.size(), 4u);
    EXPECT_TRUE(fs::exists(dir / "small.report.json"));
    const auto j = json::parse(slurp(dir / "small.report.json"));
    EXPECT_EQ(j["artifacts"].size(), 3u);
    for (const auto& a : rep.artifacts) EXPECT_EQ(slurp(dir / a.file), a.content);
    fs::remove_all(dir);
}

#ifdef THREECIRCLE_CLI
namespace {

int cli(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + " \"" THREECIRCLE_CLI "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST(Cli, ExitCodes) {
    const auto dir = scratch("cli");
    const auto ok = write_config(dir, "ok.json", kSmallThreeCircle);
    EXPECT_EQ(cli("run \"" + ok.string() + "\" --out-dir \"" + (dir / "out").string() + "\""), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "small.report.json"));

    const auto fail = write_config(dir, "fail.json", R"({"name": "f", "kind": "counterexample",
        "metric": {"name": "flat", "n": 1}, "sampler": {"directions": 16}})");
    EXPECT_EQ(cli("run \"" + fail.string() + "\" --out-dir \"" + (dir / "out").string() + "\""), 1);

    const auto bad = write_config(dir, "bad.json", R"({"name": "b", "kind": "three-circle",
        "metric": {"name": "nowhere", "n": 1}, "functions": [{"name": "linear"}]})");
    EXPECT_EQ(cli("run \"" + bad.string() + "\""), 2);
    EXPECT_EQ(cli("run \"" + ok.string() + "\" --directions 2"), 2);
    EXPECT_EQ(cli("run"), 2);
    EXPECT_EQ(cli("list-catalogs"), 0);
    fs::remove_all(dir);
}

TEST(Cli, EnvironmentSetsDefaultOutputDirectory) {
    const auto dir = scratch("env");
    const auto ok = write_config(dir, "ok.json", kSmallThreeCircle);
    EXPECT_EQ(cli("run \"" + ok.string() + "\" --seed 5", "THREECIRCLE_OUT_DIR=\"" + (dir / "envout").string() + "\""), 0);
    ASSERT_TRUE(fs::exists(dir / "envout" / "small.report.json"));
    const auto j = json::parse(slurp(dir / "envout" / "small.report.json"));
    EXPECT_EQ(j["provenance"]["seed"], 5);
    fs::remove_all(dir);
}
#endif
