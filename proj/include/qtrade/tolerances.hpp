#pragma once
// Default numerical tolerances. Checks take a tolerance parameter that
// defaults to one of these; the CLI can override them via --config.

namespace qtrade {
namespace tol {

inline constexpr double herm = 1e-10;    // Hermiticity residual
inline constexpr double trace = 1e-10;   // trace-one residual
inline constexpr double psd = 1e-9;      // negative-eigenvalue slack
inline constexpr double eig = 1e-9;      // eigendecomposition residual
inline constexpr double opt = 1e-6;      // optimizer agreement
inline constexpr double region = 1e-9;   // region-boundary detection

}  // namespace tol

// Runtime-overridable copy used by the CLI.
struct Tolerances {
    double eig = tol::eig;
    double opt = tol::opt;
    double region = tol::region;
};

}  // namespace qtrade
