#pragma once

#include "robustpower/fading.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace robustpower {

/// Dual-side inputs of the per-terminal value-at-risk subproblem.
struct VarLevelParams {
    double lambda = 1.0;
    double mu = 1.0;
    double phi = 1.0;
    double noise_var = 1.0;

    /// Requires lambda > 0, mu > 0, phi in (0, 1], noise_var > 0.
    void validate() const;

    /// sigma^2 * kappa = lambda*phi/mu, the waterfilling level in power units.
    double level() const noexcept { return lambda * phi / mu; }
    double kappa() const noexcept { return level() / noise_var; }
};

enum class VarBranch { AtZero, Low, High };

const char* to_string(VarBranch branch) noexcept;

/// Gain threshold H(z) = sqrt(sigma^2 / (sigma^2 kappa - z)); +inf once z >= sigma^2 kappa.
double h_bar(double z, const VarLevelParams& params);

/**
 * Expectation over the fading law needed by the value-at-risk subgradient.
 *
 * For z >= 0 implementations return the expected Heaviside selection
 *
 *   S(z) = E[ C_z * 1{h <= H(z)} ] + P(h > H(z)),   C_z = level h^2 / (sigma^2 + z h^2),
 *
 * with the lower semicontinuous choice C_0 = kappa h^2 at z = 0. S is
 * continuous and nonincreasing on [0, inf).
 */
class GainExpectation {
public:
    virtual ~GainExpectation() = default;
    virtual double expected_selection(double z, double level, double noise_var) const = 0;
};

/// Monte Carlo over a fixed set of fading draws (common random numbers).
class SampledGain final : public GainExpectation {
public:
    explicit SampledGain(std::span<const double> h_samples);

    static SampledGain draw(const FadingModel& model, RandomStream& stream, std::size_t n);

    double expected_selection(double z, double level, double noise_var) const override;

    /// Sorted squared gains h^2.
    std::span<const double> power_gains() const noexcept { return gains_; }

private:
    std::vector<double> gains_;
};

/// Closed form for Rayleigh fading (exponential h^2) via the exponential integral.
class RayleighGain final : public GainExpectation {
public:
    explicit RayleighGain(double mean_square = 1.0);

    double expected_selection(double z, double level, double noise_var) const override;

private:
    double mean_square_;
};

/// Exact expectation for the model's law when one is available.
std::unique_ptr<GainExpectation> analytic_expectation(const FadingModel& model);

/// Piecewise subgradient of the z-subproblem objective. Constant mu(1-phi)/phi for z < 0.
double z_subgradient(double z, const VarLevelParams& params, const GainExpectation& gains);

struct BranchEval {
    double kappa = 0.0;
    double h_bar = 0.0; ///< H(0)
    VarBranch branch = VarBranch::AtZero;
};

/// Which optimality condition holds for the optimal level.
BranchEval classify_var_level(const VarLevelParams& params, const GainExpectation& gains);

struct VarLevelOptions {
    double tol = 1e-6;
    /// Previous solution used to narrow the bisection bracket; NaN for none.
    double hint = std::numeric_limits<double>::quiet_NaN();
    /// Upper bracket doubling stops at this multiple of sigma^2 kappa.
    double max_bracket_factor = 1073741824.0; // 2^30
};

struct VarLevelSolution {
    double z = 0.0;
    VarBranch branch = VarBranch::AtZero;
    int evaluations = 0;
};

/**
 * Optimal value-at-risk level z* >= 0 for one terminal.
 *
 * Classifies the branch from the subgradient signs at 0 and at sigma^2 kappa,
 * then bisects the nonincreasing subgradient on [0, sigma^2 kappa] or on
 * [sigma^2 kappa, Z] with Z found by doubling. Terminates when
 * |g(z)| <= tol * mu / phi. Throws BracketError if doubling exceeds the cap.
 */
VarLevelSolution solve_var_level(const VarLevelParams& params, const GainExpectation& gains,
                                 const VarLevelOptions& options = {});

/// Convenience overload drawing `samples` fading values from `seed`.
VarLevelSolution solve_var_level(const VarLevelParams& params, const FadingModel& model,
                                 double tol = 1e-6, std::size_t samples = 100000,
                                 std::uint64_t seed = 0x5eed);

/// Events with |p* - z| below this count as the kink p* = z.
inline constexpr double kKinkTolerance = 1e-12;

/// Single-draw supergradient -mu + (mu/phi) C for a given policy output p*.
double var_stochastic_supergradient(double z, double p_star, double h,
                                    const VarLevelParams& params);

/// One stochastic supergradient ascent step z + step * g, with p* from the closed-form policy.
double var_supergradient_step(double z, double h, const VarLevelParams& params, double step);

} // namespace robustpower
