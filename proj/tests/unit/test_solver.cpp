#include "robustpower/error.hpp"
#include "robustpower/oracles.hpp"
#include "robustpower/solver.hpp"
#include "robustpower/var_levels.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace robustpower;

namespace {

const std::vector<TerminalConfig> kTable1{
    {1.0, 0.90, 1.0 / 3}, {2.0, 0.85, 1.0 / 3}, {3.0, 0.80, 1.0 / 3}};

SolverConfig short_config(std::size_t iterations = 2000) {
    SolverConfig cfg;
    cfg.iterations = iterations;
    cfg.step_dual = 1e-3;
    cfg.seed = 99;
    return cfg;
}

IterationRecord one_terminal(double p, double z, double rate) {
    IterationRecord r;
    r.h = {1.0};
    r.p = {p};
    r.z = {z};
    r.rates = {rate};
    r.duals = {{1.0}, 1.0};
    return r;
}

} // namespace

TEST_SUITE("solver") {

TEST_CASE("dual subgradient") {
    SolverConfig cfg;
    cfg.p0 = 15.0;
    const std::vector<TerminalConfig> one{{1.0, 0.5, 1.0}};
    const std::vector<double> x{0.3};
    CHECK(dual_subgradient(one_terminal(5.0, 5.0, 0.3), x, cfg, one).mu == doctest::Approx(10.0));
    CHECK(dual_subgradient(one_terminal(7.0, 5.0, 0.3), x, cfg, one).mu == doctest::Approx(6.0));
    CHECK(dual_subgradient(one_terminal(7.0, 5.0, 0.3), x, cfg, one).lambda[0] == 0.0);
    CHECK(dual_subgradient(one_terminal(7.0, 5.0, 0.8), x, cfg, one).lambda[0] ==
          doctest::Approx(0.5));
}

TEST_CASE("dual update") {
    const DualState d{{1.0}, 0.01};
    const auto a = dual_update(d, {{0.5}, 0.0}, 0.1);
    CHECK(a.lambda[0] == doctest::Approx(0.95));
    const auto b = dual_update(d, {{0.0}, 10.0}, 0.1);
    CHECK(b.mu == 0.0);
    const auto c = dual_update(d, {{0.0}, 0.0}, 0.1);
    CHECK(c.lambda == d.lambda);
    CHECK(c.mu == d.mu);
    const auto pinned = dual_update(d, {{0.5}, 0.0}, 0.1, UtilityType::Sumrate);
    CHECK(pinned.lambda[0] == 1.0);
    const auto clamp = dual_update(d, {{20.0}, 0.0}, 0.1);
    CHECK(clamp.lambda[0] == 0.0);
}

TEST_CASE("config validation") {
    auto bad = [](auto mutate) {
        SolverConfig c;
        mutate(c);
        return c;
    };
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.p0 = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.step_dual = -1.0; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.step_z = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.mu_init = 0.0; }).validate(), DomainError);
    CHECK_NOTHROW(SolverConfig{}.validate());
    CHECK_THROWS_AS(run(short_config(), std::vector<TerminalConfig>{}, FadingModel::rayleigh()),
                    DomainError);
    const std::vector<FadingModel> two(2, FadingModel::rayleigh());
    CHECK_THROWS_AS(run(short_config(), kTable1, two), DomainError);
}

TEST_CASE("zero iterations return the initial duals") {
    auto cfg = short_config(0);
    const auto traj = run(cfg, kTable1, FadingModel::rayleigh());
    CHECK(traj.empty());
    CHECK(traj.outcome.iterations == 0);
    CHECK(traj.outcome.final_duals.mu == cfg.mu_init);
    CHECK(traj.outcome.final_duals.lambda == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(traj.outcome.final_z == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("runs are reproducible") {
    for (auto mode : {VarLevelMode::ModelBased, VarLevelMode::ModelFree}) {
        auto cfg = short_config();
        cfg.mode = mode;
        const auto a = run(cfg, kTable1, FadingModel::rayleigh());
        const auto b = run(cfg, kTable1, FadingModel::rayleigh());
        REQUIRE(a.size() == cfg.iterations);
        for (std::size_t k = 0; k < a.size(); k += 97) {
            const auto ra = a[k], rb = b[k];
            CHECK(ra.p == rb.p);
            CHECK(ra.z == rb.z);
            CHECK(ra.duals.mu == rb.duals.mu);
        }
        cfg.seed += 1;
        const auto c = run(cfg, kTable1, FadingModel::rayleigh());
        CHECK(c[10].h != a[10].h);
    }
}

TEST_CASE("records are consistent with the policy and the dual recursion") {
    for (auto utility : {UtilityType::Sumrate, UtilityType::ProportionalFairness}) {
        for (auto mode : {VarLevelMode::ModelBased, VarLevelMode::ModelFree}) {
            auto cfg = short_config(3000);
            cfg.utility = utility;
            cfg.mode = mode;
            const auto traj = run(cfg, kTable1, FadingModel::rayleigh());
            REQUIRE(traj.size() == 3000);
            std::vector<double> mean(3, 0.0);
            for (std::size_t k = 0; k < traj.size(); ++k) {
                const auto rec = traj[k];
                CHECK(rec.t == k + 1);
                for (std::size_t i = 0; i < 3; ++i) {
                    const auto& t = kTable1[i];
                    const double p = optimal_power(rec.h[i], rec.duals.lambda[i], rec.duals.mu,
                                                   t.phi, t.noise_var, rec.z[i]);
                    REQUIRE(rec.p[i] == p);
                    REQUIRE(rec.p[i] >= 0.0);
                    REQUIRE(rec.rates[i] == doctest::Approx(rate(p, rec.h[i], t.noise_var)));
                    mean[i] += (rec.rates[i] - mean[i]) / double(k + 1);
                    if (utility == UtilityType::Sumrate) REQUIRE(rec.duals.lambda[i] == t.weight);
                    else REQUIRE(rec.duals.lambda[i] >= kLambdaMin);
                }
                REQUIRE(rec.duals.mu >= cfg.mu_min);
                if (k + 1 < traj.size()) {
                    const auto x = utility == UtilityType::Sumrate
                                       ? mean
                                       : std::vector<double>{1.0 / rec.duals.lambda[0],
                                                             1.0 / rec.duals.lambda[1],
                                                             1.0 / rec.duals.lambda[2]};
                    auto next = dual_update(rec.duals, dual_subgradient(rec, x, cfg, kTable1),
                                            cfg.step_dual, utility);
                    next.mu = std::max(next.mu, cfg.mu_min);
                    for (auto& l : next.lambda)
                        if (utility != UtilityType::Sumrate) l = std::max(l, cfg.lambda_min);
                    const auto after = traj[k + 1];
                    REQUIRE(after.duals.mu == doctest::Approx(next.mu).epsilon(1e-12));
                    for (std::size_t i = 0; i < 3; ++i)
                        REQUIRE(after.duals.lambda[i] ==
                                doctest::Approx(next.lambda[i]).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("model-based levels match a fresh solve") {
    auto cfg = short_config(500);
    cfg.z_resolve_period = 1;
    const auto traj = run(cfg, kTable1, FadingModel::rayleigh());
    const RayleighGain exact(1.0);
    for (std::size_t k = 0; k < traj.size(); k += 50) {
        const auto rec = traj[k];
        for (std::size_t i = 0; i < 3; ++i) {
            const VarLevelParams p{rec.duals.lambda[i], rec.duals.mu, kTable1[i].phi,
                                   kTable1[i].noise_var};
            const double z = solve_var_level(p, exact, {.tol = 1e-10}).z;
            CHECK(rec.z[i] == doctest::Approx(z).epsilon(1e-4));
        }
    }
}

TEST_CASE("cached levels stay close to per-iteration solves") {
    auto every = short_config(20000);
    every.step_dual = 3e-4;
    auto cached = every;
    every.z_resolve_period = 1;
    cached.z_resolve_period = 0;
    const auto a = run(every, kTable1, FadingModel::rayleigh());
    const auto b = run(cached, kTable1, FadingModel::rayleigh());
    CHECK(b.outcome.z_solves < a.outcome.z_solves);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto za = a.level_series(i, tail_begin(a.size()));
        const auto zb = b.level_series(i, tail_begin(b.size()));
        const double ma = std::accumulate(za.begin(), za.end(), 0.0) / za.size();
        const double mb = std::accumulate(zb.begin(), zb.end(), 0.0) / zb.size();
        CHECK(mb == doctest::Approx(ma).epsilon(0.01));
    }
}

TEST_CASE("Monte Carlo expectations track the analytic ones") {
    auto analytic = short_config(20000);
    analytic.step_dual = 3e-5;
    analytic.z_resolve_period = 0;
    analytic.z_resolve_tolerance = 0.05;
    analytic.mu_init = 0.04; // start near the optimum to keep re-solves few
    auto mc = analytic;
    mc.mc_samples = 400000;
    const auto a = run(analytic, kTable1, FadingModel::rayleigh());
    const auto b = run(mc, kTable1, FadingModel::rayleigh());
    for (std::size_t i = 0; i < 3; ++i) {
        const auto za = a.level_series(i, tail_begin(a.size()));
        const auto zb = b.level_series(i, tail_begin(b.size()));
        CHECK(std::accumulate(zb.begin(), zb.end(), 0.0) ==
              doctest::Approx(std::accumulate(za.begin(), za.end(), 0.0)).epsilon(0.03));
    }
}

TEST_CASE("divergence is detected") {
    auto cfg = short_config(100000);
    RunHooks hooks;
    hooks.dual_gradient = [](const IterationRecord& r, std::span<const double> x,
                             const SolverConfig& c, std::span<const TerminalConfig> t) {
        auto g = dual_subgradient(r, x, c, t);
        g.mu = -1e6;
        return g;
    };
    CHECK_THROWS_AS(run(cfg, kTable1, std::vector<FadingModel>(3, FadingModel::rayleigh()), hooks),
                    DivergenceError);
}

TEST_CASE("tail window") {
    CHECK(tail_begin(200000) == 160000);
    CHECK(tail_begin(10) == 8);
    CHECK(tail_begin(4) == 3);
    CHECK(tail_begin(1) == 0);
    CHECK(tail_begin(0) == 0);
}

TEST_CASE("trajectory views") {
    const auto traj = run(short_config(50), kTable1, FadingModel::rayleigh());
    REQUIRE(traj.terminals() == 3);
    const auto rec = traj[7];
    CHECK(std::vector<double>(traj.powers(7).begin(), traj.powers(7).end()) == rec.p);
    CHECK(std::vector<double>(traj.gains(7).begin(), traj.gains(7).end()) == rec.h);
    CHECK(traj.mu(7) == rec.duals.mu);
    CHECK(traj.power_series(1, 40).size() == 10);
    CHECK(traj.power_series(1, 40)[0] == traj[40].p[1]);
    CHECK(traj.rate_series(2, 60).empty());
}

TEST_CASE("enum names") {
    CHECK(std::string(to_string(VarLevelMode::ModelBased)) == "model-based");
    CHECK(std::string(to_string(VarLevelMode::ModelFree)) == "model-free");
    CHECK(std::string(to_string(StepSchedule::InverseSqrt)) == "inverse-sqrt");
}

}
