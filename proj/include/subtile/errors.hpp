#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace subtile {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// The working precision cap was reached before the requested width.
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg) : Error(msg) {}
};

// A series was evaluated at a point where its tail bound does not converge.
struct NonConvergent : Error {
    explicit NonConvergent(const std::string& msg) : Error(msg) {}
};

// bisect_root was handed a bracket without a certified sign change.
struct NoSignChange : Error {
    explicit NoSignChange(const std::string& msg) : Error(msg) {}
};

// Iterative eigenvalue estimation did not settle within the iteration cap.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// A materialization (supertile, patch, point set) would exceed its budget.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

// A limit letter was used with a sequence that cannot represent it.
struct UnsupportedLimitLetter : Error {
    explicit UnsupportedLimitLetter(const std::string& msg) : Error(msg) {}
};

// A word cannot be parsed into level-1 supertile images.
struct NotLegal : Error {
    explicit NotLegal(const std::string& msg) : Error(msg) {}
};

// Two independently computed enclosures of the same quantity are disjoint.
// Always a bug trap, never a math failure.
struct InternalInconsistency : Error {
    explicit InternalInconsistency(const std::string& msg) : Error(msg) {}
};

// A certified tile-length minimum fell below the Delone lower bound.
struct DeloneViolation : Error {
    explicit DeloneViolation(const std::string& msg) : Error(msg) {}
};

// Malformed arguments: bad domain, division by an interval containing zero,
// out-of-range configuration.
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// Admissibility violation of a coefficient sequence, with the witnessing index.
struct ValidationFailure : Error {
    enum class Condition { A1, A2, A3 };
    Condition condition;
    std::uint64_t witness;

    ValidationFailure(Condition c, std::uint64_t w, const std::string& msg)
        : Error(msg), condition(c), witness(w) {}
};

}  // namespace subtile
