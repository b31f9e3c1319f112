#include "robustpower/solver.hpp"

#include "robustpower/error.hpp"
#include "robustpower/var_levels.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace robustpower {

const char* to_string(VarLevelMode mode) noexcept {
    return mode == VarLevelMode::ModelBased ? "model-based" : "model-free";
}

const char* to_string(StepSchedule schedule) noexcept {
    return schedule == StepSchedule::Constant ? "constant" : "inverse-sqrt";
}

void SolverConfig::validate() const {
    if (!(p0 > 0.0)) throw DomainError("solver p0 must be positive");
    if (!(step_dual > 0.0)) throw DomainError("solver step_dual must be positive");
    if (!(step_z > 0.0)) throw DomainError("solver step_z must be positive");
    if (!(z_resolve_tolerance >= 0.0)) throw DomainError("z_resolve_tolerance must be >= 0");
    if (!(z_tol > 0.0)) throw DomainError("z_tol must be positive");
    if (!(mu_init > 0.0)) throw DomainError("mu_init must be positive");
    if (!(mu_min > 0.0)) throw DomainError("mu_min must be positive");
    if (!(lambda_min > 0.0)) throw DomainError("lambda_min must be positive");
}

DualGradient dual_subgradient(const IterationRecord& record, std::span<const double> x_star,
                              const SolverConfig& config,
                              std::span<const TerminalConfig> terminals) {
    const std::size_t n = terminals.size();
    DualGradient g;
    g.lambda.resize(n);
    double budget_use = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        g.lambda[i] = record.rates[i] - x_star[i];
        const double z = record.z[i];
        budget_use += z + std::max(record.p[i] - z, 0.0) / terminals[i].phi;
    }
    g.mu = config.p0 - budget_use;
    return g;
}

DualState dual_update(const DualState& duals, const DualGradient& g, double step,
                      UtilityType utility) {
    DualState next = duals;
    if (utility != UtilityType::Sumrate) {
        for (std::size_t i = 0; i < next.lambda.size(); ++i)
            next.lambda[i] = std::max(duals.lambda[i] - step * g.lambda[i], 0.0);
    }
    next.mu = std::max(duals.mu - step * g.mu, 0.0);
    return next;
}

namespace {

// Per-terminal cache of the model-based level. Between solves z tracks the
// waterfilling level lambda*phi/mu proportionally.
struct LevelCache {
    double level = 0.0;
    double z = 0.0;
    std::size_t solved_at = 0;
    bool valid = false;
};

UtilityKind make_utility(UtilityType type, std::span<const TerminalConfig> terminals) {
    if (type == UtilityType::ProportionalFairness) return UtilityKind::proportional_fairness();
    std::vector<double> w;
    w.reserve(terminals.size());
    for (const auto& t : terminals) w.push_back(t.weight);
    return UtilityKind::sumrate(std::move(w));
}

} // namespace

RunOutcome run(const SolverConfig& config, std::span<const TerminalConfig> terminals,
               std::span<const FadingModel> models, const IterationObserver& observer,
               const RunHooks& hooks) {
    config.validate();
    const std::size_t n = terminals.size();
    if (n == 0) throw DomainError("run needs at least one terminal");
    if (models.size() != n) throw DomainError("need one fading model per terminal");
    for (const auto& t : terminals) t.validate();

    const UtilityKind utility = make_utility(config.utility, terminals);
    const bool pinned = config.utility == UtilityType::Sumrate;

    RandomStream stream(config.seed);

    std::vector<std::unique_ptr<GainExpectation>> expectations;
    if (config.mode == VarLevelMode::ModelBased) {
        for (std::size_t i = 0; i < n; ++i) {
            if (config.mc_samples > 0) {
                std::seed_seq seq{config.seed, static_cast<std::uint64_t>(i + 1),
                                  std::uint64_t{0x9e3779b97f4a7c15ULL}};
                RandomStream sample_stream(seq);
                expectations.push_back(std::make_unique<SampledGain>(
                    SampledGain::draw(models[i], sample_stream, config.mc_samples)));
            } else {
                expectations.push_back(analytic_expectation(models[i]));
            }
        }
    }
    std::vector<LevelCache> cache(n);

    IterationRecord rec;
    rec.h.assign(n, 0.0);
    rec.p.assign(n, 0.0);
    rec.z.assign(n, 0.0);
    rec.rates.assign(n, 0.0);
    rec.duals.mu = config.mu_init;
    rec.duals.lambda.reserve(n);
    for (const auto& t : terminals) rec.duals.lambda.push_back(t.weight);

    DualState duals = rec.duals;
    std::vector<double> z(n, 0.0);
    std::vector<double> mean_rates(n, 0.0);

    RunOutcome outcome;

    for (std::size_t t = 1; t <= config.iterations; ++t) {
        const double decay =
            config.schedule == StepSchedule::Constant ? 1.0 : 1.0 / std::sqrt(double(t));
        const double eps = config.step_dual * decay;
        const double eps_z = config.step_z * decay;

        for (std::size_t i = 0; i < n; ++i) rec.h[i] = models[i].sample(stream);

        for (std::size_t i = 0; i < n; ++i) {
            const auto& term = terminals[i];
            const VarLevelParams params{duals.lambda[i], duals.mu, term.phi, term.noise_var};
            if (config.mode == VarLevelMode::ModelFree) {
                z[i] = var_supergradient_step(z[i], rec.h[i], params, eps_z);
                continue;
            }
            auto& c = cache[i];
            const double level = params.level();
            const bool stale =
                !c.valid ||
                (config.z_resolve_period > 0 && t - c.solved_at >= config.z_resolve_period) ||
                std::abs(level - c.level) > config.z_resolve_tolerance * c.level;
            if (stale) {
                VarLevelOptions options;
                options.tol = config.z_tol;
                if (c.valid && c.level > 0.0) options.hint = c.z * level / c.level;
                c.z = solve_var_level(params, *expectations[i], options).z;
                c.level = level;
                c.solved_at = t;
                c.valid = true;
                ++outcome.z_solves;
                z[i] = c.z;
            } else {
                z[i] = c.z * level / c.level;
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            const auto& term = terminals[i];
            rec.p[i] = optimal_power(rec.h[i], duals.lambda[i], duals.mu, term.phi,
                                     term.noise_var, z[i]);
            rec.rates[i] = std::log1p(rec.p[i] * rec.h[i] * rec.h[i] / term.noise_var);
            mean_rates[i] += (rec.rates[i] - mean_rates[i]) / double(t);
        }
        rec.t = t;
        rec.z = z;
        rec.duals = duals;

        const auto x_star = optimal_rate_vector(utility, duals.lambda, mean_rates);
        const DualGradient g = hooks.dual_gradient
                                   ? hooks.dual_gradient(rec, x_star, config, terminals)
                                   : dual_subgradient(rec, x_star, config, terminals);
        duals = dual_update(duals, g, eps, config.utility);
        duals.mu = std::max(duals.mu, config.mu_min);
        if (!pinned)
            for (auto& l : duals.lambda) l = std::max(l, config.lambda_min);

        if (!(duals.mu <= config.divergence_mu)) {
            std::ostringstream msg;
            msg << "dual descent diverged at iteration " << t << ": mu = " << duals.mu
                << ", g_mu = " << g.mu << ", step = " << eps;
            throw DivergenceError(msg.str());
        }

        if (observer) observer(rec);
        outcome.iterations = t;
    }

    outcome.final_duals = duals;
    outcome.final_z = z;
    return outcome;
}

void Trajectory::reserve(std::size_t iterations) {
    t_.reserve(iterations);
    mu_.reserve(iterations);
    for (auto* v : {&h_, &p_, &z_, &r_, &lambda_}) v->reserve(iterations * n_);
}

void Trajectory::append(const IterationRecord& record) {
    if (record.p.size() != n_) throw DomainError("record size does not match trajectory");
    t_.push_back(record.t);
    h_.insert(h_.end(), record.h.begin(), record.h.end());
    p_.insert(p_.end(), record.p.begin(), record.p.end());
    z_.insert(z_.end(), record.z.begin(), record.z.end());
    r_.insert(r_.end(), record.rates.begin(), record.rates.end());
    lambda_.insert(lambda_.end(), record.duals.lambda.begin(), record.duals.lambda.end());
    mu_.push_back(record.duals.mu);
}

IterationRecord Trajectory::operator[](std::size_t k) const {
    IterationRecord rec;
    rec.t = t_.at(k);
    auto copy = [&](const std::vector<double>& v) {
        const auto r = row(v, k);
        return std::vector<double>(r.begin(), r.end());
    };
    rec.h = copy(h_);
    rec.p = copy(p_);
    rec.z = copy(z_);
    rec.rates = copy(r_);
    rec.duals.lambda = copy(lambda_);
    rec.duals.mu = mu_[k];
    return rec;
}

std::vector<double> Trajectory::column(const std::vector<double>& v, std::size_t i,
                                       std::size_t from) const {
    std::vector<double> out;
    if (from >= size()) return out;
    out.reserve(size() - from);
    for (std::size_t k = from; k < size(); ++k) out.push_back(v[k * n_ + i]);
    return out;
}

std::vector<double> Trajectory::power_series(std::size_t i, std::size_t from) const {
    return column(p_, i, from);
}

std::vector<double> Trajectory::rate_series(std::size_t i, std::size_t from) const {
    return column(r_, i, from);
}

std::vector<double> Trajectory::level_series(std::size_t i, std::size_t from) const {
    return column(z_, i, from);
}

Trajectory run(const SolverConfig& config, std::span<const TerminalConfig> terminals,
               std::span<const FadingModel> models, const RunHooks& hooks) {
    Trajectory traj(terminals.size());
    traj.reserve(config.iterations);
    traj.outcome = run(
        config, terminals, models, [&](const IterationRecord& r) { traj.append(r); }, hooks);
    return traj;
}

Trajectory run(const SolverConfig& config, std::span<const TerminalConfig> terminals,
               const FadingModel& model) {
    const std::vector<FadingModel> models(terminals.size(), model);
    return run(config, terminals, models);
}

std::size_t tail_begin(std::size_t iterations) noexcept {
    const std::size_t tail = std::max<std::size_t>(1, (iterations + 4) / 5);
    return iterations > tail ? iterations - tail : 0;
}

} // namespace robustpower
