#include "robustpower/var_levels.hpp"

#include "robustpower/error.hpp"
#include "robustpower/policy.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace robustpower {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// J(c) = E[t / (c + t)] for t ~ Exp(1), i.e. 1 - c e^c E1(c).
double truncated_ratio(double c) {
    if (c < 100.0) return 1.0 - c * std::exp(c) * boost::math::expint(1, c);
    // Asymptotic series sum_{k>=1} (-1)^{k+1} k! / c^k; 15 terms are far below
    // double precision for c >= 100.
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 15; ++k) {
        term *= -static_cast<double>(k) / c;
        sum -= term;
    }
    return sum;
}

} // namespace

void VarLevelParams::validate() const {
    if (!(lambda > 0.0)) throw DomainError("value-at-risk level requires lambda > 0");
    if (!(mu > 0.0)) throw DomainError("value-at-risk level requires mu > 0");
    if (!(phi > 0.0 && phi <= 1.0)) throw DomainError("value-at-risk level requires phi in (0, 1]");
    if (!(noise_var > 0.0)) throw DomainError("value-at-risk level requires noise_var > 0");
}

const char* to_string(VarBranch branch) noexcept {
    switch (branch) {
    case VarBranch::AtZero: return "at_zero";
    case VarBranch::Low: return "low";
    case VarBranch::High: return "high";
    }
    return "?";
}

double h_bar(double z, const VarLevelParams& params) {
    const double gap = params.level() - z;
    if (gap <= 0.0) return kInf;
    return std::sqrt(params.noise_var / gap);
}

SampledGain::SampledGain(std::span<const double> h_samples) {
    if (h_samples.empty()) throw DomainError("sampled expectation needs at least one draw");
    gains_.reserve(h_samples.size());
    for (double h : h_samples) {
        if (!(h >= 0.0)) throw DomainError("fading samples must be nonnegative");
        gains_.push_back(h * h);
    }
    std::sort(gains_.begin(), gains_.end());
}

SampledGain SampledGain::draw(const FadingModel& model, RandomStream& stream, std::size_t n) {
    return SampledGain(model.sample(stream, n));
}

double SampledGain::expected_selection(double z, double level, double noise_var) const {
    const double n = static_cast<double>(gains_.size());
    auto below = gains_.end();
    if (z < level) {
        const double threshold = noise_var / (level - z);
        below = std::upper_bound(gains_.begin(), gains_.end(), threshold);
    }
    double sum = 0.0;
    for (auto it = gains_.begin(); it != below; ++it) sum += level * *it / (noise_var + z * *it);
    const double above = static_cast<double>(gains_.end() - below);
    return (sum + above) / n;
}

RayleighGain::RayleighGain(double mean_square) : mean_square_(mean_square) {
    if (!(mean_square > 0.0)) throw DomainError("Rayleigh mean_square must be positive");
}

double RayleighGain::expected_selection(double z, double level, double noise_var) const {
    // h^2 ~ Exp(m). With c = sigma^2/(z m) and t = T/m for the gain threshold
    // T = sigma^2/(level - z), the C_z integral reduces to exponential integrals.
    const double m = mean_square_;
    const double snr = level * m / noise_var;
    const double c = z > 0.0 ? noise_var / (z * m) : kInf;

    if (c > 1e12 && z < level) {
        const double t = noise_var / ((level - z) * m);
        const double et = std::exp(-t);
        return snr * (-std::expm1(-t) - t * et) + et;
    }
    if (z >= level) return snr * c * truncated_ratio(c);

    const double t = noise_var / ((level - z) * m);
    const double et = std::exp(-t);
    const double inside = truncated_ratio(c) - et * (t + c * truncated_ratio(c + t)) / (c + t);
    return snr * c * inside + et;
}

std::unique_ptr<GainExpectation> analytic_expectation(const FadingModel& model) {
    switch (model.kind()) {
    case FadingKind::Rayleigh: return std::make_unique<RayleighGain>(model.mean_square());
    }
    return nullptr;
}

double z_subgradient(double z, const VarLevelParams& params, const GainExpectation& gains) {
    params.validate();
    const double scale = params.mu / params.phi;
    if (z < 0.0) return params.mu * (1.0 - params.phi) / params.phi;
    return -params.mu + scale * gains.expected_selection(z, params.level(), params.noise_var);
}

BranchEval classify_var_level(const VarLevelParams& params, const GainExpectation& gains) {
    BranchEval eval;
    eval.kappa = params.kappa();
    eval.h_bar = h_bar(0.0, params);
    if (z_subgradient(0.0, params, gains) <= 0.0)
        eval.branch = VarBranch::AtZero;
    else if (z_subgradient(params.level(), params, gains) <= 0.0)
        eval.branch = VarBranch::Low;
    else
        eval.branch = VarBranch::High;
    return eval;
}

VarLevelSolution solve_var_level(const VarLevelParams& params, const GainExpectation& gains,
                                 const VarLevelOptions& options) {
    params.validate();
    if (!(options.tol > 0.0)) throw DomainError("value-at-risk tolerance must be positive");

    VarLevelSolution out;
    // S(0) <= 1 always, so the at-zero condition holds whenever phi = 1.
    if (params.phi == 1.0) return out;

    auto g = [&](double z) {
        ++out.evaluations;
        return z_subgradient(z, params, gains);
    };
    const double accept = options.tol * params.mu / params.phi;
    const double level = params.level();

    if (g(0.0) <= 0.0) return out;

    const double g_level = g(level);
    if (std::abs(g_level) <= accept) {
        out.z = level;
        out.branch = VarBranch::Low;
        return out;
    }

    // Invariant: g(lo) > 0 >= g(hi).
    double lo = 0.0;
    double hi = level;
    bool have_hi = true;
    if (g_level <= 0.0) {
        out.branch = VarBranch::Low;
    } else {
        out.branch = VarBranch::High;
        lo = level;
        have_hi = false;
    }

    const double hint = options.hint;
    const bool in_domain = std::isfinite(hint) && hint > lo && (!have_hi || hint < hi);
    if (in_domain) {
        const double d = 0.01 * hint;
        const double a = std::max(lo, hint - d);
        if (a > lo) {
            const double ga = g(a);
            if (std::abs(ga) <= accept) {
                out.z = a;
                return out;
            }
            if (ga <= 0.0) {
                hi = a;
                have_hi = true;
            } else {
                lo = a;
            }
        }
        if (lo == a) {
            const double b = have_hi ? std::min(hi, hint + d) : hint + d;
            if (!have_hi || b < hi) {
                const double gb = g(b);
                if (gb <= 0.0) {
                    hi = b;
                    have_hi = true;
                } else {
                    lo = b;
                }
            }
        }
    }

    if (!have_hi) {
        hi = std::max(2.0 * lo, 2.0 * level);
        const double cap = options.max_bracket_factor * level;
        while (g(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > cap)
                throw BracketError("value-at-risk bracket exceeded its cap; the subgradient "
                                   "never turns negative");
        }
    }

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (std::abs(gm) <= accept) break;
        if (gm > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    out.z = mid;
    return out;
}

VarLevelSolution solve_var_level(const VarLevelParams& params, const FadingModel& model,
                                 double tol, std::size_t samples, std::uint64_t seed) {
    RandomStream stream(seed);
    const auto gains = SampledGain::draw(model, stream, samples);
    VarLevelOptions options;
    options.tol = tol;
    return solve_var_level(params, gains, options);
}

double var_stochastic_supergradient(double z, double p_star, double h,
                                    const VarLevelParams& params) {
    if (!(params.mu > 0.0)) throw DomainError("value-at-risk step requires mu > 0");
    double selection = 0.0;
    if (p_star - z > kKinkTolerance) {
        selection = 1.0;
    } else if (std::abs(p_star - z) <= kKinkTolerance) {
        const double c = c_parameter(std::max(z, 0.0), h, params.lambda, params.mu, params.phi,
                                     params.noise_var);
        selection = std::clamp(c, 0.0, 1.0);
    }
    return -params.mu + (params.mu / params.phi) * selection;
}

double var_supergradient_step(double z, double h, const VarLevelParams& params, double step) {
    if (!(params.mu > 0.0)) throw DomainError("value-at-risk step requires mu > 0");
    const double p_star =
        optimal_power(h, params.lambda, params.mu, params.phi, params.noise_var, z);
    return z + step * var_stochastic_supergradient(z, p_star, h, params);
}

} // namespace robustpower
