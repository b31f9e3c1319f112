#include "robustpower/verify.hpp"

#include "robustpower/cvar.hpp"
#include "robustpower/experiment.hpp"
#include "robustpower/oracles.hpp"
#include "robustpower/tables.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace robustpower {

namespace {

using Check = CheckResult;

Check fail(std::string name, std::string detail) {
    return {std::move(name), CheckStatus::Fail, std::move(detail), false};
}

Check verdict(std::string name, bool ok, const std::ostringstream& detail) {
    return {std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, detail.str(), false};
}

double uniform(RandomStream& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

Check cvar_axioms(RandomStream& rng) {
    std::ostringstream d;
    int bad = 0;
    constexpr int kBatches = 200;
    for (int b = 0; b < kBatches; ++b) {
        const auto n = 1 + static_cast<std::size_t>(uniform01(rng) * 400);
        std::vector<double> x(n);
        for (auto& v : x) v = uniform(rng, -5.0, 20.0);
        if (empirical_cvar(x, 1.0) != sample_mean(x)) ++bad;
        double prev = empirical_cvar(x, 0.1);
        for (int k = 2; k <= 10; ++k) {
            const double c = empirical_cvar(x, 0.1 * k);
            if (c > prev + 1e-12 * std::max(1.0, std::abs(prev))) ++bad;
            prev = c;
        }
        const double phi = uniform(rng, 0.05, 1.0);
        const double shift = uniform(rng, -10.0, 10.0);
        const double scale = uniform(rng, 0.1, 10.0);
        const double base = empirical_cvar(x, phi);
        std::vector<double> xs(x), xa(x);
        for (auto& v : xs) v += shift;
        for (auto& v : xa) v *= scale;
        if (std::abs(empirical_cvar(xs, phi) - (base + shift)) >
            1e-12 * std::max(1.0, std::abs(base + shift)))
            ++bad;
        if (std::abs(empirical_cvar(xa, phi) - scale * base) >
            1e-12 * std::max(1.0, std::abs(scale * base)))
            ++bad;
    }
    d << kBatches << " batches, " << bad << " violations";
    return verdict("cvar_axioms", bad == 0, d);
}

Check policy_brute_force(RandomStream& rng) {
    std::ostringstream d;
    double worst = 0.0;
    constexpr int kTuples = 300;
    const auto fading = FadingModel::rayleigh();
    for (int k = 0; k < kTuples; ++k) {
        const double lambda = uniform(rng, 0.05, 5.0);
        const double mu = uniform(rng, 0.05, 5.0);
        const double phi = uniform(rng, 0.05, 1.0);
        const double s2 = uniform(rng, 0.1, 10.0);
        const double z = uniform(rng, -1.0, 5.0);
        const double h = fading.sample(rng);
        const double p = optimal_power(h, lambda, mu, phi, s2, z);
        const double got = power_objective(p, h, lambda, mu, phi, s2, z);
        const auto ref = oracle::power_objective_max(h, lambda, mu, phi, s2, z);
        worst = std::max(worst, ref.value - got);
    }
    d << kTuples << " tuples, worst shortfall " << worst;
    return verdict("policy_brute_force", worst <= 1e-6, d);
}

Check var_level_grid(RandomStream& rng) {
    std::ostringstream d;
    constexpr int kTuples = 8;
    constexpr std::size_t kSamples = 100000;
    double worst = 0.0;
    const auto fading = FadingModel::rayleigh();
    for (int k = 0; k < kTuples; ++k) {
        const VarLevelParams params{uniform(rng, 0.2, 3.0), uniform(rng, 0.02, 0.5),
                                    uniform(rng, 0.2, 1.0), uniform(rng, 0.2, 5.0)};
        const auto h = fading.sample(rng, kSamples);
        const SampledGain gains(h);
        const double level = params.level();
        const double z = solve_var_level(params, gains, {.tol = 1e-9}).z;
        const double ref = oracle::z_grid_argmax(params, h, 1e-3 * level);
        worst = std::max(worst, std::abs(z - ref) / level);
    }
    d << kTuples << " tuples, worst |z - z_grid| / level " << worst;
    return verdict("var_level_grid", worst <= 2e-3, d);
}

std::vector<TerminalConfig> reference_terminals(double phi) {
    return {{1.0, phi, 1.0 / 3}, {2.0, phi, 1.0 / 3}, {3.0, phi, 1.0 / 3}};
}

SolverConfig reference_config(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.p0 = 15.0;
    cfg.step_dual = 3e-5;
    cfg.iterations = 100000;
    cfg.seed = seed;
    cfg.z_resolve_period = 0;
    return cfg;
}

Scenario reference_scenario(double phi, std::uint64_t seed) {
    Scenario sc;
    sc.name = "reference";
    sc.terminals = reference_terminals(phi);
    sc.fading.assign(3, FadingModel::rayleigh());
    sc.groups.assign(3, TerminalGroup::None);
    sc.solver = reference_config(seed);
    return sc;
}

Check waterfilling_reduction(const VerifyOptions& options) {
    std::ostringstream d;
    try {
        const auto sc = reference_scenario(1.0, options.seed);
        const auto stats = simulate(sc, options.hooks);
        RandomStream rng(options.seed ^ 0xabcdefULL);
        std::vector<std::vector<double>> draws;
        for (std::size_t i = 0; i < sc.size(); ++i) draws.push_back(sc.fading[i].sample(rng, 200000));
        const auto ref = oracle::waterfilling_reference(sc.terminals, sc.solver.p0, draws);
        double worst = 0.0;
        for (std::size_t i = 0; i < sc.size(); ++i)
            worst = std::max(worst, std::abs(stats.mean_p[i] / ref.mean_power[i] - 1.0));
        const double budget = stats.sum_mean_p / sc.solver.p0;
        d << "sum E[p] / p0 = " << budget << ", worst relative power gap " << worst;
        return verdict("waterfilling_reduction", worst <= 0.03 && std::abs(budget - 1.0) <= 0.02,
                       d);
    } catch (const std::exception& e) {
        return fail("waterfilling_reduction", e.what());
    }
}

Check monotonicity_in_phi(const VerifyOptions& options) {
    std::ostringstream d;
    try {
        std::vector<RunStats> runs;
        for (double phi : {0.6, 0.8, 1.0})
            runs.push_back(simulate(reference_scenario(phi, options.seed), options.hooks));
        bool ok = true;
        d << "utility at phi 0.6/0.8/1.0:";
        for (std::size_t k = 0; k < runs.size(); ++k) {
            d << ' ' << runs[k].utility;
            if (k > 0) {
                const double slack = std::max(runs[k].utility_se, runs[k - 1].utility_se);
                if (runs[k].utility < runs[k - 1].utility - slack) ok = false;
            }
        }
        return verdict("monotonicity_in_phi", ok, d);
    } catch (const std::exception& e) {
        return fail("monotonicity_in_phi", e.what());
    }
}

// Data checks on run outputs.

Check skipped(std::string name, const std::filesystem::path& file) {
    return {std::move(name), CheckStatus::Skipped, file.filename().string() + " not present", true};
}

Check data(Check c) {
    c.data_dependent = true;
    return c;
}

Check cdf_table(const std::filesystem::path& dir, const std::string& file,
                const std::string& x_name) {
    const auto path = dir / file;
    const auto name = file.substr(0, file.find('.')) + "_monotone";
    if (!std::filesystem::exists(path)) return skipped(name, path);
    std::ostringstream d;
    try {
        const auto t = read_table(path);
        bool ok = !t.cells.empty();
        for (double x : t.numbers(x_name)) ok = ok && x >= 0.0;
        std::size_t cols = 0;
        for (std::size_t c = 1; c < t.header.size(); ++c, ++cols) {
            const auto y = t.numbers(t.header[c]);
            for (std::size_t r = 0; r < y.size(); ++r) {
                ok = ok && y[r] >= 0.0 && y[r] <= 1.0;
                if (r > 0) ok = ok && y[r] >= y[r - 1];
            }
            ok = ok && !y.empty() && y.back() == 1.0;
        }
        d << cols << " CDF columns over " << t.cells.size() << " points";
        return data(verdict(name, ok, d));
    } catch (const std::exception& e) {
        return data(fail(name, e.what()));
    }
}

Check power_instances(const std::filesystem::path& dir) {
    const auto path = dir / "p_instances.txt";
    if (!std::filesystem::exists(path)) return skipped("p_instances_consistent", path);
    std::ostringstream d;
    try {
        const auto t = read_table(path);
        const auto sum_col = t.column("sum_p");
        bool ok = true;
        for (std::size_t r = 0; r < t.cells.size(); ++r) {
            double sum = 0.0;
            for (std::size_t c = 1; c < sum_col; ++c) {
                const double p = t.number(r, c);
                ok = ok && p >= 0.0;
                sum += p;
            }
            const double reported = t.number(r, sum_col);
            ok = ok && std::abs(sum - reported) <= 1e-9 * std::max(1.0, reported);
        }
        d << t.cells.size() << " rows, powers nonnegative and summed";
        return data(verdict("p_instances_consistent", ok, d));
    } catch (const std::exception& e) {
        return data(fail("p_instances_consistent", e.what()));
    }
}

Check moving_average(const std::filesystem::path& dir) {
    const auto path = dir / "rate_instances.txt";
    if (!std::filesystem::exists(path)) return skipped("rate_instances_window", path);
    std::ostringstream d;
    try {
        const auto t = read_table(path);
        const auto width = t.numbers("window");
        const auto total = t.numbers("sum_cum_r");
        std::size_t n = 0;
        while (std::find(t.header.begin(), t.header.end(), "r" + std::to_string(n + 1)) !=
               t.header.end())
            ++n;
        bool ok = n > 0;
        double worst = 0.0;
        for (std::size_t r = 0; r < t.cells.size(); ++r) {
            const auto w = static_cast<std::size_t>(width[r]);
            ok = ok && w >= 1 && w <= r + 1 && (r == 0 || w >= width[r - 1]);
            double sum_cum = 0.0;
            for (std::size_t i = 1; i <= n; ++i) {
                const auto raw = t.column("r" + std::to_string(i));
                double s = 0.0;
                for (std::size_t k = r + 1 - w; k <= r; ++k) s += t.number(k, raw);
                const double cum = t.number(r, t.column("cum_r" + std::to_string(i)));
                worst = std::max(worst, std::abs(s / double(w) - cum));
                sum_cum += cum;
            }
            worst = std::max(worst, std::abs(sum_cum - total[r]));
        }
        ok = ok && worst <= 1e-9;
        d << t.cells.size() << " rows, worst window mismatch " << worst;
        return data(verdict("rate_instances_window", ok, d));
    } catch (const std::exception& e) {
        return data(fail("rate_instances_window", e.what()));
    }
}

Check summary_budget(const std::filesystem::path& dir) {
    const auto path = dir / "summary.txt";
    if (!std::filesystem::exists(path)) return skipped("summary_budget", path);
    std::ostringstream d;
    try {
        const auto t = read_table(path);
        const auto last = t.cells.size() - 1;
        bool ok = !t.cells.empty() && t.cells[last][0] == "total";
        const double cvar = t.number(last, t.column("cvar_p"));
        const double p0 = t.number(last, t.column("p0"));
        ok = ok && p0 > 0.0 && std::abs(cvar / p0 - 1.0) <= 0.03;
        d << "sum CVaR(p) / p0 = " << cvar / p0;
        return data(verdict("summary_budget", ok, d));
    } catch (const std::exception& e) {
        return data(fail("summary_budget", e.what()));
    }
}

} // namespace

const char* to_string(CheckStatus status) noexcept {
    switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    }
    return "?";
}

bool VerifyReport::passed() const noexcept { return count(CheckStatus::Fail) == 0; }

std::size_t VerifyReport::count(CheckStatus status) const noexcept {
    return std::count_if(checks.begin(), checks.end(),
                         [status](const CheckResult& c) { return c.status == status; });
}

VerifyReport run_checks(const std::filesystem::path& out_dir, const VerifyOptions& options) {
    VerifyReport report;
    RandomStream rng(options.seed);
    auto guarded = [&report](const char* name, auto&& fn) {
        try {
            report.checks.push_back(fn());
        } catch (const std::exception& e) {
            report.checks.push_back(fail(name, e.what()));
        }
    };
    guarded("cvar_axioms", [&] { return cvar_axioms(rng); });
    guarded("policy_brute_force", [&] { return policy_brute_force(rng); });
    guarded("var_level_grid", [&] { return var_level_grid(rng); });
    guarded("waterfilling_reduction", [&] { return waterfilling_reduction(options); });
    guarded("monotonicity_in_phi", [&] { return monotonicity_in_phi(options); });

    report.checks.push_back(cdf_table(out_dir, "p_CDF.txt", "power"));
    report.checks.push_back(cdf_table(out_dir, "rate_CDF.txt", "rate"));
    report.checks.push_back(power_instances(out_dir));
    report.checks.push_back(moving_average(out_dir));
    report.checks.push_back(summary_budget(out_dir));
    return report;
}

VerifyReport verify(const std::filesystem::path& out_dir, const VerifyOptions& options) {
    auto report = run_checks(out_dir, options);
    nlohmann::json j;
    j["passed"] = report.passed();
    j["out_dir"] = out_dir.string();
    j["counts"] = {{"pass", report.count(CheckStatus::Pass)},
                   {"fail", report.count(CheckStatus::Fail)},
                   {"skipped", report.count(CheckStatus::Skipped)}};
    for (const auto& c : report.checks)
        j["checks"].push_back({{"name", c.name},
                               {"status", to_string(c.status)},
                               {"data_dependent", c.data_dependent},
                               {"detail", c.detail}});
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / "verify_report.json");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write verify_report.json in " + out_dir.string());
    return report;
}

} // namespace robustpower
