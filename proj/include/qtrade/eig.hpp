#pragma once
// Hermitian eigendecomposition by cyclic Jacobi rotations, and the PSD
// matrix square root built on it. Intended for dimensions up to 64.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "tolerances.hpp"

namespace qtrade {

struct EigResult {
    std::vector<double> values;   // ascending
    ComplexMatrix vectors;        // columns; input ≈ V diag(values) V†
};

namespace detail {

inline double offdiag_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < m.rows(); ++p)
        for (std::size_t q = p + 1; q < m.cols(); ++q) s += std::norm(m(p, q));
    return std::sqrt(2.0 * s);
}

}  // namespace detail

// Cyclic Jacobi for a Hermitian matrix. Each rotation annihilates one
// off-diagonal entry with a complex Givens rotation; sweeps repeat until the
// off-diagonal norm falls below 1e-14 of the matrix scale, capped at 100
// sweeps.
inline EigResult herm_eig(const ComplexMatrix& input, double herm_tolerance = tol::herm) {
    input.require_square("herm_eig");
    const double residual = input.hermiticity_residual();
    if (residual > herm_tolerance)
        throw NotHermitianError("herm_eig: hermiticity residual " + std::to_string(residual));

    const std::size_t n = input.rows();
    ComplexMatrix a = input.hermitized();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.frobenius_norm(), 1e-30);
    const double threshold = 1e-14 * scale;
    constexpr int max_sweeps = 100;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (detail::offdiag_norm(a) <= threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const Complex phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(phase) * akq;
                    a(k, q) = s * phase * akp + c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
                a(p, q) = a(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    v(k, q) = s * phase * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && detail::offdiag_norm(a) > threshold)
        throw NoConvergenceError("herm_eig: no convergence after 100 sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigResult result;
    result.values.resize(n);
    result.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        result.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, j) = v(i, order[j]);
    }
    return result;
}

inline ComplexMatrix eig_rebuild(const EigResult& e) {
    const std::size_t n = e.values.size();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                s += e.vectors(i, k) * e.values[k] * std::conj(e.vectors(j, k));
            out(i, j) = s;
        }
    return out;
}

inline double min_eigenvalue(const ComplexMatrix& m, double herm_tolerance = tol::herm) {
    return herm_eig(m, herm_tolerance).values.front();
}

inline bool is_psd(const ComplexMatrix& m, double psd_tolerance = tol::psd,
                   double herm_tolerance = tol::herm) {
    return min_eigenvalue(m, herm_tolerance) >= -psd_tolerance;
}

// Square root of a PSD Hermitian matrix. Eigenvalues within psd_tolerance
// below zero are clamped to zero; anything lower throws.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m, double psd_tolerance = tol::psd,
                              double herm_tolerance = tol::herm) {
    EigResult e = herm_eig(m, herm_tolerance);
    for (auto& lambda : e.values) {
        if (lambda < -psd_tolerance)
            throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(lambda));
        lambda = std::sqrt(std::max(lambda, 0.0));
    }
    return eig_rebuild(e);
}

}  // namespace qtrade
