#pragma once

#include <span>
#include <vector>

namespace robustpower {

enum class UtilityType { Sumrate, ProportionalFairness };

const char* to_string(UtilityType type) noexcept;

/// Concave network utility on the ergodic rate vector.
class UtilityKind {
public:
    /// f(x) = w^T x with w > 0 componentwise.
    static UtilityKind sumrate(std::vector<double> weights);
    /// f(x) = sum_i log x_i.
    static UtilityKind proportional_fairness();

    UtilityType type() const noexcept { return type_; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    UtilityKind(UtilityType type, std::vector<double> weights)
        : type_(type), weights_(std::move(weights)) {}

    UtilityType type_;
    std::vector<double> weights_;
};

/// Lower bound kept on proportional-fairness multipliers so 1/lambda stays finite.
inline constexpr double kLambdaMin = 1e-6;

/**
 * Maximizer of f(x) - lambda^T x.
 *
 * Proportional fairness gives x = 1/lambda (all lambda > 0 required). For
 * sumrate the subproblem is linear with lambda pinned to w, so x carries no
 * information for the duals; the observed running mean rate is reported.
 */
std::vector<double> optimal_rate_vector(const UtilityKind& utility,
                                        std::span<const double> lambda,
                                        std::span<const double> mean_rates = {});

double utility_value(const UtilityKind& utility, std::span<const double> x);

} // namespace robustpower
