#pragma once

#include <stdexcept>
#include <string>

namespace donflow {

// Base class for all failures raised by the library. `kind()` is a stable
// machine-readable tag, used by the CLI to emit error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// rho ^ rho <= eps_deg * dvol somewhere: the form is (numerically) degenerate.
struct NondegeneracyError : Error {
    explicit NondegeneracyError(const std::string& msg)
        : Error("nondegeneracy", msg) {}
};

// The cached 1-form -> 3-form star matrix failed to invert.
struct SingularStarError : Error {
    explicit SingularStarError(const std::string& msg)
        : Error("singular_star", msg) {}
};

// Inputs violate the pointwise constraint-set preconditions.
struct ConstraintError : Error {
    explicit ConstraintError(const std::string& msg)
        : Error("constraint", msg) {}
};

// A field required to be exact has a harmonic or non-closed part.
struct NotExactError : Error {
    explicit NotExactError(const std::string& msg)
        : Error("not_exact", msg) {}
};

// min u fell below the degeneracy floor or a non-finite value appeared.
struct BlowUpError : Error {
    explicit BlowUpError(const std::string& msg)
        : Error("blow_up", msg) {}
};

// The semi-implicit inner iteration failed to contract.
struct FixedPointDivergence : Error {
    explicit FixedPointDivergence(const std::string& msg)
        : Error("fixed_point_divergence", msg) {}
};

// Newton inversion did not reduce the residual within its budget.
struct NewtonDivergence : Error {
    explicit NewtonDivergence(const std::string& msg)
        : Error("newton_divergence", msg) {}
};

// Generated initial condition is too close to degenerate.
struct DegenerateInitialError : Error {
    explicit DegenerateInitialError(const std::string& msg)
        : Error("degenerate_initial", msg) {}
};

// Config file rejected. `key` names the offending entry when known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, std::string key = "")
        : Error("config", msg), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace donflow
