#pragma once
// Density-operator checks, purification, Pauli matrices, and the qubit
// Bloch-vector parametrization.

#include <array>
#include <cmath>

#include "eig.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "tolerances.hpp"

namespace qtrade {

inline ComplexMatrix sigma_x() {
    return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0});
}
inline ComplexMatrix sigma_y() {
    return ComplexMatrix(2, 2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0});
}
inline ComplexMatrix sigma_z() {
    return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0});
}

inline ComplexMatrix maximally_mixed(std::size_t d) {
    ComplexMatrix m = ComplexMatrix::identity(d);
    return m * (1.0 / static_cast<double>(d));
}

inline bool is_density(const ComplexMatrix& m, double trace_tolerance = tol::trace,
                       double psd_tolerance = tol::psd, double herm_tolerance = tol::herm) {
    if (!m.square()) return false;
    if (m.hermiticity_residual() > herm_tolerance) return false;
    if (std::abs(m.trace() - Complex(1.0, 0.0)) > trace_tolerance) return false;
    return min_eigenvalue(m.hermitized(), herm_tolerance) >= -psd_tolerance;
}

// Purification on H ⊗ H: rho = sum_i p_i |v_i><v_i| maps to
// sum_i sqrt(p_i) v_i ⊗ e_i, so tracing out the second factor recovers rho.
inline CVec purify(const ComplexMatrix& rho, double psd_tolerance = tol::psd) {
    rho.require_square("purify");
    const std::size_t d = rho.rows();
    EigResult e = herm_eig(rho);
    CVec psi(d * d, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < d; ++k) {
        double p = e.values[k];
        if (p < -psd_tolerance) throw NotPsdError("purify: eigenvalue " + std::to_string(p));
        p = std::max(p, 0.0);
        const double w = std::sqrt(p);
        for (std::size_t i = 0; i < d; ++i) psi[i * d + k] += w * e.vectors(i, k);
    }
    return psi;
}

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline ComplexMatrix from_bloch(const BlochVector& r) {
    if (r.norm() > 1.0 + 1e-9)
        throw OutOfRangeError("from_bloch: |r| = " + std::to_string(r.norm()) + " exceeds 1");
    ComplexMatrix m(2, 2);
    m(0, 0) = 0.5 * (1.0 + r.z);
    m(1, 1) = 0.5 * (1.0 - r.z);
    m(0, 1) = 0.5 * Complex(r.x, -r.y);
    m(1, 0) = 0.5 * Complex(r.x, r.y);
    return m;
}

inline BlochVector to_bloch(const ComplexMatrix& rho) {
    if (rho.rows() != 2 || rho.cols() != 2)
        throw NotQubitError("to_bloch: matrix is " + rho.shape_str());
    BlochVector r;
    r.x = (rho * sigma_x()).trace().real();
    r.y = (rho * sigma_y()).trace().real();
    r.z = (rho * sigma_z()).trace().real();
    return r;
}

}  // namespace qtrade
