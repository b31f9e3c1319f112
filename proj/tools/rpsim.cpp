// rpsim: run scenarios, parameter sweeps and the verification suite.
//
// Log verbosity comes from ROBUSTPOWER_LOG (trace, debug, info, warn, error,
// off); the default is info.

#include "robustpower/experiment.hpp"
#include "robustpower/scenario.hpp"
#include "robustpower/verify.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>

namespace rp = robustpower;

namespace {

constexpr int kExitError = 2;
constexpr int kExitVerifyFailed = 1;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("rpsim");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("ROBUSTPOWER_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only accept "off" when spelled out
        if (level != spdlog::level::off || std::string_view(env) == "off")
            spdlog::set_level(level);
        else
            spdlog::warn("ignoring ROBUSTPOWER_LOG={}", env);
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> iters;
};

rp::Scenario load(const std::string& name, const Overrides& o) {
    auto sc = rp::resolve_scenario(name);
    if (o.seed) sc.solver.seed = *o.seed;
    if (o.iters) sc.solver.iterations = *o.iters;
    sc.validate();
    return sc;
}

int cmd_run(const std::string& name, const std::string& out, const Overrides& o) {
    const auto sc = load(name, o);
    spdlog::info("running {} ({} terminals, {} iterations, seed {}, {} / {})", sc.name, sc.size(),
                 sc.solver.iterations, sc.solver.seed, rp::to_string(sc.solver.utility),
                 rp::to_string(sc.solver.mode));
    const auto start = std::chrono::steady_clock::now();
    const auto stats = rp::run_scenario(sc, out);
    spdlog::info("done in {:.2f} s, {} value-at-risk solves", seconds_since(start),
                 stats.outcome.z_solves);
    for (std::size_t i = 0; i < sc.size(); ++i)
        spdlog::debug("terminal {}: z {:.4f} mean_p {:.4f} mean_rate {:.4f} cvar_p {:.4f}", i + 1,
                      stats.mean_z[i], stats.mean_p[i], stats.mean_rate[i], stats.cvar_p[i]);
    std::cout << "sum_cvar_p " << stats.sum_cvar_p << " p0 " << sc.solver.p0 << " utility "
              << stats.utility << " mu " << stats.outcome.final_duals.mu << '\n';
    spdlog::info("tables written to {}", out);
    return 0;
}

int cmd_sweep(const std::string& name, const std::string& out, const Overrides& o,
              unsigned threads) {
    const auto sc = load(name, o);
    if (!sc.sweep) {
        spdlog::error("scenario {} has no sweep grid", sc.name);
        return kExitError;
    }
    spdlog::info("sweeping {} over {} x {} grid", sc.name, sc.sweep->phi_low.size(),
                 sc.sweep->phi_high.size());
    const auto start = std::chrono::steady_clock::now();
    const auto points = rp::sweep_surface(sc, out, threads);
    const auto best = std::max_element(points.begin(), points.end(),
                                       [](const auto& a, const auto& b) { return a.rate < b.rate; });
    spdlog::info("done in {:.2f} s", seconds_since(start));
    std::cout << "max_rate " << best->rate << " at phi_low " << best->phi_low << " phi_high "
              << best->phi_high << '\n';
    return 0;
}

int cmd_verify(const std::string& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto report = rp::verify(out);
    for (const auto& c : report.checks)
        std::cout << rp::to_string(c.status) << ' ' << c.name << ": " << c.detail << '\n';
    spdlog::info("{} passed, {} failed, {} skipped in {:.2f} s; report at {}/verify_report.json",
                 report.count(rp::CheckStatus::Pass), report.count(rp::CheckStatus::Fail),
                 report.count(rp::CheckStatus::Skipped), seconds_since(start), out);
    return report.passed() ? 0 : kExitVerifyFailed;
}

int cmd_presets() {
    for (const auto& name : rp::preset_names()) {
        const auto sc = rp::preset(name);
        std::cout << name << "  terminals " << sc.size() << "  p0 " << sc.solver.p0
                  << "  utility " << rp::to_string(sc.solver.utility)
                  << (sc.sweep ? "  sweep" : "") << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Distributionally robust power allocation simulator"};
    app.require_subcommand(1);

    std::string scenario, out;
    Overrides overrides;
    unsigned threads = 0;
    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--seed", overrides.seed, "Override the scenario seed");
        cmd->add_option("--iters", overrides.iters, "Override the iteration count")
            ->check(CLI::PositiveNumber);
    };

    auto* run = app.add_subcommand("run", "Run a scenario and write its tables");
    run->add_option("scenario", scenario, "Preset name or scenario file")->required();
    run->add_option("--out", out, "Output directory")->required();
    add_overrides(run);

    auto* sweep = app.add_subcommand("sweep", "Sweep (phi_low, phi_high) and write surface.txt");
    sweep->add_option("scenario", scenario, "Preset name or scenario file")->required();
    sweep->add_option("--out", out, "Output directory")->required();
    add_overrides(sweep);
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

    auto* verify = app.add_subcommand("verify", "Run the oracle suite and check run outputs");
    verify->add_option("--out", out, "Directory with run outputs; receives the report")
        ->required();

    auto* presets = app.add_subcommand("presets", "Built-in scenarios");
    presets->require_subcommand(1);
    auto* list = presets->add_subcommand("list", "List built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(scenario, out, overrides);
        if (*sweep) return cmd_sweep(scenario, out, overrides, threads);
        if (*verify) return cmd_verify(out);
        if (*list) return cmd_presets();
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitError;
    }
    return kExitError;
}
