#include "robustpower/experiment.hpp"
#include "robustpower/verify.hpp"

#include <doctest.h>

#include <json.hpp>

#include <fstream>

using namespace robustpower;
namespace fs = std::filesystem;

namespace {

const CheckResult& find(const VerifyReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("no check " + name);
}

} // namespace

TEST_SUITE("verify") {

TEST_CASE("empty directory: oracles pass, data checks skipped, report written") {
    const auto dir = fs::temp_directory_path() / "rp_verify_empty";
    fs::remove_all(dir);
    const auto report = verify(dir);
    CHECK(report.passed());
    CHECK(report.count(CheckStatus::Skipped) == 5);
    for (const auto& c : report.checks) CHECK((c.status == CheckStatus::Skipped) == c.data_dependent);
    std::ifstream in(dir / "verify_report.json");
    REQUIRE(in);
    const auto j = nlohmann::json::parse(in);
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == report.checks.size());
    CHECK(j["counts"]["skipped"] == 5);
}

TEST_CASE("fresh run outputs verify cleanly") {
    const auto dir = fs::temp_directory_path() / "rp_verify_run";
    fs::remove_all(dir);
    auto sc = preset("table1-3term");
    sc.solver.iterations = 60000;
    sc.solver.step_dual = 3e-4;
    run_scenario(sc, dir);
    const auto report = run_checks(dir);
    for (const auto& c : report.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.status == CheckStatus::Pass);
    }
}

TEST_CASE("tampered outputs fail") {
    const auto dir = fs::temp_directory_path() / "rp_verify_bad";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "p_CDF.txt") << "power cdf_p1\n0 0.5\n1 0.4\n";
    std::ofstream(dir / "p_instances.txt") << "time p1 sum_p\n1 -1 -1\n";
    std::ofstream(dir / "summary.txt") << "terminal cvar_p p0\ntotal 9 15\n";
    const auto report = run_checks(dir);
    CHECK(find(report, "p_CDF_monotone").status == CheckStatus::Fail);
    CHECK(find(report, "p_instances_consistent").status == CheckStatus::Fail);
    CHECK(find(report, "summary_budget").status == CheckStatus::Fail);
    CHECK_FALSE(report.passed());
}

TEST_CASE("sign flip in the power-multiplier gradient is caught") {
    VerifyOptions options;
    options.hooks.dual_gradient = [](const IterationRecord& r, std::span<const double> x,
                                     const SolverConfig& c, std::span<const TerminalConfig> t) {
        auto g = dual_subgradient(r, x, c, t);
        g.mu = -g.mu;
        return g;
    };
    const auto dir = fs::temp_directory_path() / "rp_verify_mutant";
    fs::remove_all(dir);
    const auto report = run_checks(dir, options);
    CHECK(find(report, "waterfilling_reduction").status == CheckStatus::Fail);
    CHECK_FALSE(report.passed());
}

}
