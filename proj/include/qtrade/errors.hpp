#pragma once
// Exception types thrown by the library. All derive from qtrade::Error so
// callers can catch everything from this library in one handler.

#include <stdexcept>
#include <string>

namespace qtrade {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Matrix fails a Hermiticity check.
struct NotHermitianError : Error {
    explicit NotHermitianError(const std::string& what) : Error(what) {}
};

// Iterative routine hit its iteration cap before reaching tolerance.
struct NoConvergenceError : Error {
    explicit NoConvergenceError(const std::string& what) : Error(what) {}
};

// Matrix has an eigenvalue below the allowed negative slack.
struct NotPsdError : Error {
    explicit NotPsdError(const std::string& what) : Error(what) {}
};

// Operands have incompatible shapes.
struct DimMismatchError : Error {
    explicit DimMismatchError(const std::string& what) : Error(what) {}
};

// Operation requires dimension 2.
struct NotQubitError : Error {
    explicit NotQubitError(const std::string& what) : Error(what) {}
};

// Vector or matrix fails a normalization check.
struct NotNormalizedError : Error {
    explicit NotNormalizedError(const std::string& what) : Error(what) {}
};

// Scalar argument outside its admissible interval.
struct OutOfRangeError : Error {
    explicit OutOfRangeError(const std::string& what) : Error(what) {}
};

// Parameter set violates a structural constraint.
struct ConstraintViolationError : Error {
    explicit ConstraintViolationError(const std::string& what) : Error(what) {}
};

// Search budget exhausted before convergence.
struct BudgetExhaustedError : Error {
    explicit BudgetExhaustedError(const std::string& what) : Error(what) {}
};

}  // namespace qtrade
