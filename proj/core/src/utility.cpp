#include "robustpower/utility.hpp"

#include "robustpower/error.hpp"

#include <cmath>
#include <numeric>

namespace robustpower {

const char* to_string(UtilityType type) noexcept {
    switch (type) {
    case UtilityType::Sumrate: return "sumrate";
    case UtilityType::ProportionalFairness: return "pf";
    }
    return "?";
}

UtilityKind UtilityKind::sumrate(std::vector<double> weights) {
    if (weights.empty()) throw DomainError("sumrate utility needs at least one weight");
    for (double w : weights)
        if (!(w > 0.0)) throw DomainError("sumrate weights must be strictly positive");
    return UtilityKind(UtilityType::Sumrate, std::move(weights));
}

UtilityKind UtilityKind::proportional_fairness() {
    return UtilityKind(UtilityType::ProportionalFairness, {});
}

std::vector<double> optimal_rate_vector(const UtilityKind& utility,
                                        std::span<const double> lambda,
                                        std::span<const double> mean_rates) {
    if (utility.type() == UtilityType::Sumrate) {
        if (!mean_rates.empty() && mean_rates.size() != lambda.size())
            throw DomainError("mean rate vector size does not match lambda");
        if (mean_rates.empty()) return std::vector<double>(lambda.size(), 0.0);
        return {mean_rates.begin(), mean_rates.end()};
    }
    std::vector<double> x(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] > 0.0))
            throw DomainError("proportional fairness rate vector needs lambda > 0");
        x[i] = 1.0 / lambda[i];
    }
    return x;
}

double utility_value(const UtilityKind& utility, std::span<const double> x) {
    if (utility.type() == UtilityType::Sumrate) {
        const auto w = utility.weights();
        if (w.size() != x.size()) throw DomainError("weight and rate vector sizes differ");
        return std::inner_product(w.begin(), w.end(), x.begin(), 0.0);
    }
    double total = 0.0;
    for (double xi : x) {
        if (!(xi > 0.0)) throw DomainError("proportional fairness needs positive rates");
        total += std::log(xi);
    }
    return total;
}

} // namespace robustpower
