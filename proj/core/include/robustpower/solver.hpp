#pragma once

#include "robustpower/fading.hpp"
#include "robustpower/policy.hpp"
#include "robustpower/utility.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace robustpower {

/// How the value-at-risk levels z are obtained each iteration.
enum class VarLevelMode {
    ModelBased, ///< bisection on the fading law (dual scheme)
    ModelFree,  ///< stochastic supergradient ascent (primal-dual scheme)
};

enum class StepSchedule {
    Constant,    ///< eps
    InverseSqrt, ///< eps / sqrt(n)
};

const char* to_string(VarLevelMode mode) noexcept;
const char* to_string(StepSchedule schedule) noexcept;

struct SolverConfig {
    double p0 = 15.0;          ///< total power budget
    double step_dual = 3e-5;   ///< dual step size, shared by lambda and mu
    double step_z = 0.05;      ///< value-at-risk step size (model-free only)
    std::size_t iterations = 200000;
    std::uint64_t seed = 1;
    VarLevelMode mode = VarLevelMode::ModelBased;
    UtilityType utility = UtilityType::Sumrate;
    StepSchedule schedule = StepSchedule::Constant;

    /// Model-based z is re-solved at least every this many iterations (0: never by count).
    std::size_t z_resolve_period = 1;
    /// ...and whenever lambda*phi/mu moved by more than this relative amount.
    double z_resolve_tolerance = 0.01;
    /// Fading draws per terminal for model-based expectations; 0 selects the analytic law.
    std::size_t mc_samples = 0;
    double z_tol = 1e-6;

    double mu_init = 1.0;
    double mu_min = 1e-8;
    double lambda_min = kLambdaMin;
    double divergence_mu = 1e6;

    void validate() const;
};

/// One fading realization and everything the iteration did with it.
struct IterationRecord {
    std::size_t t = 0;
    std::vector<double> h;
    std::vector<double> p;
    std::vector<double> z;
    std::vector<double> rates;
    DualState duals; ///< multipliers used to compute p (before this iteration's update)
};

struct DualGradient {
    std::vector<double> lambda;
    double mu = 0.0;
};

/**
 * Stochastic dual subgradient:
 *   g_lambda_i = r_i(p_i, h_i) - x_i
 *   g_mu       = P0 - sum_i [ z_i + (p_i - z_i)_+ / phi_i ]
 */
DualGradient dual_subgradient(const IterationRecord& record, std::span<const double> x_star,
                              const SolverConfig& config,
                              std::span<const TerminalConfig> terminals);

/// Projected step (duals - step * g)_+. Sumrate leaves lambda pinned.
DualState dual_update(const DualState& duals, const DualGradient& g, double step,
                      UtilityType utility = UtilityType::ProportionalFairness);

using IterationObserver = std::function<void(const IterationRecord&)>;

using DualGradientFn = std::function<DualGradient(
    const IterationRecord&, std::span<const double>, const SolverConfig&,
    std::span<const TerminalConfig>)>;

/// Overrides for instrumenting a run. Empty members fall back to the defaults.
struct RunHooks {
    DualGradientFn dual_gradient;
};

struct RunOutcome {
    DualState final_duals;
    std::vector<double> final_z;
    std::size_t iterations = 0;
    std::size_t z_solves = 0;
};

/**
 * Dual descent over a stream of fading draws. Each iteration observes h,
 * sets z (model-based solve or model-free step), sets p from the closed-form
 * policy, sets x from the utility, then takes a projected dual step.
 * Initialization: lambda = weights, mu = mu_init, z = 0.
 *
 * Deterministic for a given config. Throws DivergenceError if mu exceeds
 * divergence_mu.
 */
RunOutcome run(const SolverConfig& config, std::span<const TerminalConfig> terminals,
               std::span<const FadingModel> models, const IterationObserver& observer,
               const RunHooks& hooks = {});

/// Full per-iteration history in flat storage.
class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(std::size_t terminals) : n_(terminals) {}

    void append(const IterationRecord& record);
    void reserve(std::size_t iterations);

    std::size_t size() const noexcept { return t_.size(); }
    bool empty() const noexcept { return t_.empty(); }
    std::size_t terminals() const noexcept { return n_; }

    IterationRecord operator[](std::size_t k) const;

    std::span<const double> powers(std::size_t k) const { return row(p_, k); }
    std::span<const double> rates(std::size_t k) const { return row(r_, k); }
    std::span<const double> gains(std::size_t k) const { return row(h_, k); }
    std::span<const double> levels(std::size_t k) const { return row(z_, k); }
    std::span<const double> lambdas(std::size_t k) const { return row(lambda_, k); }
    double mu(std::size_t k) const { return mu_[k]; }

    /// Column i of the power history from iteration `from` onward.
    std::vector<double> power_series(std::size_t i, std::size_t from = 0) const;
    std::vector<double> rate_series(std::size_t i, std::size_t from = 0) const;
    std::vector<double> level_series(std::size_t i, std::size_t from = 0) const;

    RunOutcome outcome;

private:
    std::span<const double> row(const std::vector<double>& v, std::size_t k) const {
        return {v.data() + k * n_, n_};
    }
    std::vector<double> column(const std::vector<double>& v, std::size_t i,
                               std::size_t from) const;

    std::size_t n_ = 0;
    std::vector<std::size_t> t_;
    std::vector<double> h_, p_, z_, r_, lambda_, mu_;
};

Trajectory run(const SolverConfig& config, std::span<const TerminalConfig> terminals,
               const FadingModel& model);
Trajectory run(const SolverConfig& config, std::span<const TerminalConfig> terminals,
               std::span<const FadingModel> models, const RunHooks& hooks = {});

/// First index of the converged-statistics window: the final 20% of `iterations`.
std::size_t tail_begin(std::size_t iterations) noexcept;

} // namespace robustpower
