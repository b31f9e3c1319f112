#pragma once

#include "robustpower/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace robustpower {

enum class CheckStatus { Pass, Fail, Skipped };
const char* to_string(CheckStatus status) noexcept;

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
    bool data_dependent = false; ///< reads files from the output directory
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool passed() const noexcept;
    std::size_t count(CheckStatus status) const noexcept;
};

struct VerifyOptions {
    /// Applied to every solver run inside the suite (mutation testing).
    RunHooks hooks;
    std::uint64_t seed = 20240611;
};

/**
 * Oracle suite (CVaR axioms, policy brute force, value-at-risk grid search,
 * waterfilling reduction, monotonicity in phi) plus consistency checks on
 * whatever run outputs exist in out_dir. Missing files are reported as
 * skipped. Never throws for a failed check.
 */
VerifyReport run_checks(const std::filesystem::path& out_dir, const VerifyOptions& options = {});

/// run_checks, then writes out_dir/verify_report.json.
VerifyReport verify(const std::filesystem::path& out_dir, const VerifyOptions& options = {});

} // namespace robustpower
