#pragma once

#include <stdexcept>
#include <string>

namespace robustpower {

/// Precondition violation on an argument (negative gain, phi outside (0,1], ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The per-terminal power subproblem has no finite maximizer (lambda > 0, mu = 0).
class UnboundedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root bracketing for the value-at-risk level ran past its hard cap.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dual iterates left the region where the run can be trusted.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario file could not be read or failed validation.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& what, int line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    /// 1-based line in the source file, or -1 when not tied to a location.
    int line() const noexcept { return line_; }

private:
    int line_;
};

namespace detail {
inline void require(bool condition, const char* message) {
    if (!condition) throw DomainError(message);
}
} // namespace detail

} // namespace robustpower
