#pragma once
// The one-parameter family of unitarily covariant qudit channels
// T(a) = (1 - alpha d^2/(d^2-1)) a + (alpha d/(d^2-1)) Tr(a) I,
// its Stinespring dilation on H ⊗ H ⊗ H, Kraus form, Choi matrix, and the
// closed-form worst-case fidelity 1 - alpha d/(d+1).

#include <cmath>
#include <cstdint>
#include <vector>

#include "eig.hpp"
#include "errors.hpp"
#include "haar.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "tolerances.hpp"

namespace qtrade {

struct CovariantChannel {
    std::size_t d = 2;
    double alpha = 0.0;
    int c2_sign = +1;

    CovariantChannel(std::size_t dim, double a, int sign = +1) : d(dim), alpha(a), c2_sign(sign) {
        if (d < 2) throw OutOfRangeError("CovariantChannel: dimension must be at least 2");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw OutOfRangeError("CovariantChannel: alpha = " + std::to_string(alpha));
        if (c2_sign != 1 && c2_sign != -1)
            throw OutOfRangeError("CovariantChannel: c2_sign must be +1 or -1");
    }

    double c1() const { return std::sqrt(1.0 - alpha); }
    double c2() const { return c2_sign * std::sqrt(alpha); }
};

// The map is self-adjoint with respect to the trace pairing, so the same
// formula is both its Heisenberg and Schroedinger form.
inline ComplexMatrix channel_apply(const CovariantChannel& ch, const ComplexMatrix& a) {
    if (!a.square() || a.rows() != ch.d)
        throw DimMismatchError("channel_apply: operand is " + a.shape_str());
    const double dd = static_cast<double>(ch.d);
    const double dsq = dd * dd;
    ComplexMatrix out = a;
    out *= Complex(1.0 - ch.alpha * dsq / (dsq - 1.0), 0.0);
    const Complex w = a.trace() * Complex(ch.alpha * dd / (dsq - 1.0), 0.0);
    for (std::size_t i = 0; i < ch.d; ++i) out(i, i) += w;
    return out;
}

// (sum_i e_i ⊗ e_i) / sqrt(d)
inline CVec maximally_entangled_state(std::size_t d) {
    CVec psi(d * d, Complex(0.0, 0.0));
    const double w = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) psi[i * d + i] = w;
    return psi;
}

// Stinespring isometry V: C^d -> C^d ⊗ C^d ⊗ C^d,
// V psi = c1 (psi ⊗ psi0) + (c2/sqrt(d^2-1)) (psi ⊗ psi0 - d psi0 ⊗ psi),
// with output index (s1, s2, s3) -> s1 d^2 + s2 d + s3. The channel acts as
// T(a) = V† (a ⊗ I) V with a on the first output slot.
inline ComplexMatrix build_isometry(const CovariantChannel& ch) {
    const std::size_t d = ch.d;
    const double root_d = std::sqrt(static_cast<double>(d));
    const double c_plus = ch.c1() + ch.c2() / std::sqrt(static_cast<double>(d * d - 1));
    const double c_swap = -static_cast<double>(d) * ch.c2() / std::sqrt(static_cast<double>(d * d - 1));

    ComplexMatrix v(d * d * d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            v(j * d * d + i * d + i, j) += c_plus / root_d;   // psi ⊗ psi0
            v(i * d * d + i * d + j, j) += c_swap / root_d;   // psi0 ⊗ psi
        }
    }
    return v;
}

inline double isometry_residual(const ComplexMatrix& v) {
    return max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(v.cols()));
}

// V† (a ⊗ I_{d^2}) V
inline ComplexMatrix heisenberg_from_isometry(const ComplexMatrix& v, const ComplexMatrix& a) {
    const std::size_t d = a.rows();
    return v.adjoint() * tensor(a, ComplexMatrix::identity(d * d)) * v;
}

// Kraus operators K_m(i, j) = V(i d^2 + m, j) indexed by the computational
// ancilla basis; operators with Frobenius norm below 1e-12 are dropped.
inline std::vector<ComplexMatrix> kraus_from_isometry(const ComplexMatrix& v) {
    const std::size_t d = v.cols();
    const std::size_t anc = v.rows() / d;
    if (anc * d != v.rows()) throw DimMismatchError("kraus_from_isometry: rows not divisible by cols");
    std::vector<ComplexMatrix> kraus;
    for (std::size_t m = 0; m < anc; ++m) {
        ComplexMatrix k(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) k(i, j) = v(i * anc + m, j);
        if (k.frobenius_norm() >= 1e-12) kraus.push_back(k);
    }
    return kraus;
}

inline ComplexMatrix kraus_apply(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho) {
    ComplexMatrix out(rho.rows(), rho.cols());
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
}

// max over random operands and Haar unitaries of |u T(a) u† - T(u a u†)|.
inline double covariance_residual(const CovariantChannel& ch, const Rng& rng, std::uint64_t trials) {
    Rng local = rng.split(0x636F7661ull);
    double worst = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ComplexMatrix a = ginibre(local, ch.d, ch.d);
        const ComplexMatrix u = haar_unitary(local, ch.d);
        const ComplexMatrix lhs = u * channel_apply(ch, a) * u.adjoint();
        const ComplexMatrix rhs = channel_apply(ch, u * a * u.adjoint());
        worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
    return worst;
}

// Worst-case pure-input fidelity of the family: 1 - alpha d / (d+1),
// attained at every pure state by covariance.
inline double wc_fidelity_closed(const CovariantChannel& ch) {
    const double dd = static_cast<double>(ch.d);
    return 1.0 - ch.alpha * dd / (dd + 1.0);
}

// Choi matrix sum_{ij} |i><j| ⊗ T(|i><j|) of a channel given by its action
// on matrix units.
template <typename Op>
ComplexMatrix choi_matrix(Op&& op, std::size_t d) {
    ComplexMatrix choi(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            ComplexMatrix unit(d, d);
            unit(i, j) = 1.0;
            const ComplexMatrix block = op(unit);
            for (std::size_t p = 0; p < d; ++p)
                for (std::size_t q = 0; q < d; ++q)
                    choi(i * d + p, j * d + q) = block(p, q);
        }
    return choi;
}

inline ComplexMatrix choi_matrix(const CovariantChannel& ch) {
    return choi_matrix([&ch](const ComplexMatrix& a) { return channel_apply(ch, a); }, ch.d);
}

}  // namespace qtrade
