#include "robustpower/policy.hpp"

#include "robustpower/error.hpp"

#include <algorithm>
#include <cmath>

namespace robustpower {

void TerminalConfig::validate() const {
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
        throw DomainError("terminal noise_var must be positive");
    if (!(phi > 0.0 && phi <= 1.0)) throw DomainError("terminal phi must lie in (0, 1]");
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw DomainError("terminal weight must be positive");
}

double rate(double power, double h, double noise_var) {
    detail::require(power >= 0.0, "rate requires p >= 0");
    detail::require(h >= 0.0, "rate requires h >= 0");
    detail::require(noise_var > 0.0, "rate requires noise_var > 0");
    return std::log1p(power * h * h / noise_var);
}

double power_objective(double power, double h, double lambda, double mu, double phi,
                       double noise_var, double z) {
    return lambda * std::log1p(power * h * h / noise_var) -
           (mu / phi) * std::max(power - z, 0.0);
}

double waterfilling_power(double h, double lambda, double mu, double phi, double noise_var) {
    if (h == 0.0) return 0.0;
    return std::max(lambda * phi / mu - noise_var / (h * h), 0.0);
}

double optimal_power(double h, double lambda, double mu, double phi, double noise_var,
                     double z) {
    detail::require(h >= 0.0, "optimal_power requires h >= 0");
    detail::require(lambda >= 0.0 && mu >= 0.0, "optimal_power requires nonnegative duals");
    detail::require(phi > 0.0 && phi <= 1.0, "optimal_power requires phi in (0, 1]");
    detail::require(noise_var > 0.0, "optimal_power requires noise_var > 0");

    if (lambda == 0.0) return mu == 0.0 ? 0.0 : std::max(z, 0.0);
    if (mu == 0.0) throw UnboundedError("power subproblem is unbounded for lambda > 0 and mu = 0");
    return std::max(waterfilling_power(h, lambda, mu, phi, noise_var), std::max(z, 0.0));
}

double c_parameter(double p_star, double h, double lambda, double mu, double phi,
                   double noise_var) {
    detail::require(mu > 0.0, "c_parameter requires mu > 0");
    detail::require(h >= 0.0 && p_star >= 0.0, "c_parameter requires h >= 0 and p >= 0");
    const double g = h * h;
    return (lambda * phi / mu) * g / (noise_var + p_star * g);
}

} // namespace robustpower
