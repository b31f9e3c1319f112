#include "robustpower/cvar.hpp"

#include "robustpower/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace robustpower {
namespace {

void check(std::span<const double> batch, double phi) {
    if (batch.empty()) throw DomainError("CVaR needs at least one sample");
    if (!(phi > 0.0 && phi <= 1.0)) throw DomainError("CVaR confidence phi must lie in (0, 1]");
}

} // namespace

double sample_mean(std::span<const double> batch) {
    if (batch.empty()) throw DomainError("mean of an empty batch");
    return std::accumulate(batch.begin(), batch.end(), 0.0) / static_cast<double>(batch.size());
}

double cvar_objective(double z, std::span<const double> batch, double phi) {
    check(batch, phi);
    double excess = 0.0;
    for (double x : batch) excess += std::max(x - z, 0.0);
    return z + excess / (phi * static_cast<double>(batch.size()));
}

double empirical_cvar(std::span<const double> batch, double phi) {
    check(batch, phi);
    if (phi == 1.0) return sample_mean(batch);

    std::vector<double> sorted(batch.begin(), batch.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    // Written as the last order statistic with positive weight plus the averaged
    // excess above it, so flat tails come out exact.
    const double k = phi * static_cast<double>(sorted.size());
    const auto whole = static_cast<std::size_t>(std::ceil(k)) - 1;
    const double edge = sorted[whole];
    double excess = 0.0;
    for (std::size_t j = 0; j < whole; ++j) excess += sorted[j] - edge;
    return edge + excess / k;
}

double value_at_risk(std::span<const double> batch, double phi) {
    check(batch, phi);
    std::vector<double> sorted(batch.begin(), batch.end());
    std::sort(sorted.begin(), sorted.end());

    const double n = static_cast<double>(sorted.size());
    // Count of samples >= sorted[j] is n - j for the first index j of each value.
    // Walk from the top; the first value whose upper count reaches phi*n wins.
    const double needed = phi * n - 1e-9;
    for (std::size_t j = sorted.size(); j-- > 0;) {
        if (j > 0 && sorted[j - 1] == sorted[j]) continue;
        if (n - static_cast<double>(j) >= needed) return sorted[j];
    }
    return sorted.front();
}

} // namespace robustpower
