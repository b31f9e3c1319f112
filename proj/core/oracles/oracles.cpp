#include "robustpower/oracles.hpp"

#include "robustpower/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace robustpower::oracle {

Maximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // The endpoints are candidates too: the maximum may sit on the boundary.
    Maximum best{0.5 * (a + b), f(0.5 * (a + b))};
    for (double x : {lo, hi}) {
        const double v = f(x);
        if (v > best.value) best = {x, v};
    }
    return best;
}

Maximum power_objective_max(double h, double lambda, double mu, double phi, double noise_var,
                            double z, double p_max) {
    if (p_max < 0.0) p_max = 10.0 * lambda * phi / mu + std::max(z, 0.0) + 1.0;
    auto f = [&](double p) {
        return lambda * std::log1p(p * h * h / noise_var) - (mu / phi) * std::max(p - z, 0.0);
    };
    return golden_section_max(f, 0.0, p_max);
}

namespace {

// Per-draw maximum of lambda*log(1 + p g/s2) - (mu/phi)(p - z)_+ over p >= 0,
// taken over the candidates of each concave piece: the kink and the
// stationary point of the penalized piece.
double draw_value(double g, double z, const VarLevelParams& prm) {
    const double penalty = prm.mu / prm.phi;
    const double kink = std::max(z, 0.0);
    double best = prm.lambda * std::log1p(kink * g / prm.noise_var) - penalty * (kink - z);
    if (g > 0.0) {
        const double stationary = prm.level() - prm.noise_var / g;
        if (stationary > kink)
            best = std::max(best, prm.lambda * std::log1p(stationary * g / prm.noise_var) -
                                      penalty * (stationary - z));
    }
    return best;
}

} // namespace

double z_objective(double z, const VarLevelParams& params, std::span<const double> h) {
    double sum = 0.0;
    for (double hj : h) sum += draw_value(hj * hj, z, params);
    return -params.mu * z + sum / static_cast<double>(h.size());
}

double z_objective_slope(double z, const VarLevelParams& params, std::span<const double> h,
                         double delta) {
    return (z_objective(z + delta, params, h) - z_objective(z - delta, params, h)) / (2.0 * delta);
}

double z_grid_argmax(const VarLevelParams& params, std::span<const double> h, double step) {
    std::map<long, double> memo;
    auto f = [&](long k) {
        auto [it, fresh] = memo.try_emplace(k, 0.0);
        if (fresh) it->second = z_objective(static_cast<double>(k) * step, params, h);
        return it->second;
    };

    // Find an index range [0, hi] that contains the maximizer.
    long hi = std::max<long>(4, static_cast<long>(std::ceil(2.0 * params.level() / step)));
    while (f(hi) >= f(hi / 2)) {
        hi *= 2;
        if (hi > (1L << 40)) throw BracketError("z grid oracle could not bracket the maximum");
    }

    // Golden-section search on the integer grid; the symmetric update reuses
    // one interior point per step. Concavity keeps a maximizer inside [a, b].
    long a = 0, b = hi;
    long c = b - std::lround(0.6180339887498949 * static_cast<double>(b - a));
    long d = a + b - c;
    while (b - a > 6) {
        if (c > d) std::swap(c, d);
        if (c == d) break;
        if (f(c) < f(d)) {
            a = c;
            c = d;
            d = a + b - c;
        } else {
            b = d;
            d = c;
            c = a + b - d;
        }
    }
    long best = a;
    double best_value = f(a);
    for (long k = std::max(0L, a - 3); k <= b + 3; ++k) {
        const double v = f(k);
        if (v > best_value) {
            best = k;
            best_value = v;
        }
    }
    return static_cast<double>(best) * step;
}

WaterfillingReference waterfilling_reference(std::span<const TerminalConfig> terminals,
                                             double p0,
                                             const std::vector<std::vector<double>>& h_draws) {
    const std::size_t n = terminals.size();
    if (h_draws.size() != n) throw DomainError("need fading draws for every terminal");

    auto mean_powers = [&](double mu) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double water = terminals[i].weight / mu;
            double s = 0.0;
            for (double h : h_draws[i]) {
                if (h == 0.0) continue;
                s += std::max(water - terminals[i].noise_var / (h * h), 0.0);
            }
            out[i] = s / static_cast<double>(h_draws[i].size());
        }
        return out;
    };
    auto total = [&](double mu) {
        const auto m = mean_powers(mu);
        return std::accumulate(m.begin(), m.end(), 0.0);
    };

    // Total power is decreasing in mu; bisect in log space.
    double lo = 1e-12, hi = 1e6;
    for (int k = 0; k < 200; ++k) {
        const double mid = std::sqrt(lo * hi);
        if (total(mid) > p0)
            lo = mid;
        else
            hi = mid;
        if (hi / lo < 1.0 + 1e-13) break;
    }
    WaterfillingReference ref;
    ref.mu = std::sqrt(lo * hi);
    ref.mean_power = mean_powers(ref.mu);
    return ref;
}

} // namespace robustpower::oracle
