#pragma once
// Covariant POVM seeds and the measure-through instrument. A POVM covariant
// under the pure-state manifold is determined by one seed operator; on C^d
// seeds take the form gamma d P_{e1} + (1-gamma) d/(d-1) P_perp, and on the
// ancilla pair C^d ⊗ C^d the seed is block-diagonal in a basis adapted to
// the stabilizer of e1. q0_from_seed pulls an ancilla seed back through the
// dilation isometry to the effective estimation seed on C^d.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "channels.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "haar.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "tolerances.hpp"

namespace qtrade {

struct SeedCd {
    std::size_t d = 2;
    double gamma = 0.5;

    SeedCd(std::size_t dim, double g) : d(dim), gamma(g) {
        if (d < 2) throw OutOfRangeError("SeedCd: dimension must be at least 2");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw OutOfRangeError("SeedCd: gamma = " + std::to_string(gamma));
    }
};

// gamma d P_{e1} + (1-gamma) d/(d-1) (I - P_{e1})
inline ComplexMatrix seed_cd_matrix(const SeedCd& s) {
    const double dd = static_cast<double>(s.d);
    ComplexMatrix m(s.d, s.d);
    m(0, 0) = s.gamma * dd;
    const double w = (1.0 - s.gamma) * dd / (dd - 1.0);
    for (std::size_t i = 1; i < s.d; ++i) m(i, i) = w;
    return m;
}

// Outcome density of the covariant POVM at outcome p for probe q, as a
// function of the overlap t = |<p|q>|^2:
// d (d gamma - 1)/(d-1) t + d (1-gamma)/(d-1).
inline double response_density(const SeedCd& s, double overlap) {
    const double dd = static_cast<double>(s.d);
    return dd * (dd * s.gamma - 1.0) / (dd - 1.0) * overlap + dd * (1.0 - s.gamma) / (dd - 1.0);
}

inline double response_density(const SeedCd& s, const CVec& probe, const CVec& outcome) {
    return response_density(s, std::norm(dot(outcome, probe)));
}

// Orthonormal basis of C^d ⊗ C^d adapted to the stabilizer of e1, as matrix
// columns in this order: psi0, psi0_perp = (psi0 - sqrt(d) e1⊗e1)/sqrt(d-1),
// the block e1 ⊗ e_j (j >= 2), the block e_j ⊗ e1 (j >= 2), then a
// Gram-Schmidt completion inside C^(d-1) ⊗ C^(d-1) orthogonal to its own
// diagonal maximally entangled direction.
inline ComplexMatrix adapted_basis(std::size_t d) {
    if (d < 2) throw OutOfRangeError("adapted_basis: dimension must be at least 2");
    const std::size_t dim = d * d;
    std::vector<CVec> candidates;
    candidates.reserve(dim + 2);

    candidates.push_back(maximally_entangled_state(d));
    {
        CVec perp = maximally_entangled_state(d);
        perp[0] -= std::sqrt(static_cast<double>(d));
        scale(perp, Complex(1.0 / std::sqrt(static_cast<double>(d - 1)), 0.0));
        candidates.push_back(perp);
    }
    for (std::size_t j = 1; j < d; ++j) candidates.push_back(basis_vector(dim, 0 * d + j));
    for (std::size_t j = 1; j < d; ++j) candidates.push_back(basis_vector(dim, j * d + 0));
    for (std::size_t j = 1; j < d; ++j)
        for (std::size_t k = 1; k < d; ++k) candidates.push_back(basis_vector(dim, j * d + k));

    ComplexMatrix basis(dim, dim);
    std::size_t col = 0;
    for (const CVec& cand : candidates) {
        if (col == dim) break;
        CVec v = cand;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < col; ++k) {
                Complex proj(0.0, 0.0);
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(basis(i, k)) * v[i];
                for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * basis(i, k);
            }
        }
        const double nrm = vec_norm(v);
        if (nrm < 1e-10) continue;
        for (std::size_t i = 0; i < dim; ++i) basis(i, col) = v[i] / nrm;
        ++col;
    }
    if (col != dim) throw NoConvergenceError("adapted_basis: span is rank-deficient");
    return basis;
}

// Ancilla seed parameters. In the adapted basis the seed is
// [[1, c], [conj(c), b]] ⊕ e I_{d-1} ⊕ f I_{d-1} ⊕ g I_{d(d-2)}, subject to
// b, e, f, g >= 0, |c|^2 <= b, and the normalization constraint
// b/(d^2-1) + (e+f)/(d+1) + g d(d-2)/(d^2-1) = 1. At d = 2 the g block is
// empty and g must be 0.
struct SeedP0 {
    std::size_t d = 2;
    double b = 0.0, e = 0.0, f = 0.0, g = 0.0;
    Complex c = 0.0;

    SeedP0(std::size_t dim, double b_, Complex c_, double e_, double f_, double g_ = 0.0)
        : d(dim), b(b_), e(e_), f(f_), g(g_), c(c_) {
        if (d < 2) throw OutOfRangeError("SeedP0: dimension must be at least 2");
        if (b < -1e-12 || e < -1e-12 || f < -1e-12 || g < -1e-12)
            throw OutOfRangeError("SeedP0: block weights must be nonnegative");
        b = std::max(b, 0.0);
        e = std::max(e, 0.0);
        f = std::max(f, 0.0);
        g = std::max(g, 0.0);
        if (std::norm(c) > b * (1.0 + 1e-9) + 1e-12)
            throw ConstraintViolationError("SeedP0: |c|^2 exceeds b");
        if (d == 2 && g != 0.0)
            throw ConstraintViolationError("SeedP0: g must be 0 when d = 2");
        const double r = normalization_residual();
        if (std::abs(r) > tol::eig)
            throw ConstraintViolationError("SeedP0: normalization residual " + std::to_string(r));
    }

    double normalization_residual() const {
        const double dd = static_cast<double>(d);
        const double dsq1 = dd * dd - 1.0;
        return b / dsq1 + (e + f) / (dd + 1.0) + g * dd * (dd - 2.0) / dsq1 - 1.0;
    }

    // Completes (b, c, e, g) to an admissible seed by solving the
    // normalization constraint for f.
    static SeedP0 with_f_solved(std::size_t dim, double b_, Complex c_, double e_, double g_ = 0.0) {
        const double dd = static_cast<double>(dim);
        const double dsq1 = dd * dd - 1.0;
        const double f_ =
            (dd + 1.0) * (1.0 - b_ / dsq1 - g_ * dd * (dd - 2.0) / dsq1) - e_;
        if (f_ < -1e-9)
            throw ConstraintViolationError("SeedP0: parameters leave no nonnegative f");
        return SeedP0(dim, b_, c_, e_, std::max(f_, 0.0), g_);
    }
};

inline ComplexMatrix seed_p0_matrix(const SeedP0& s) {
    const std::size_t d = s.d;
    const std::size_t dim = d * d;
    ComplexMatrix blocks(dim, dim);
    blocks(0, 0) = 1.0;
    blocks(0, 1) = s.c;
    blocks(1, 0) = std::conj(s.c);
    blocks(1, 1) = s.b;
    std::size_t idx = 2;
    for (std::size_t j = 0; j < d - 1; ++j) blocks(idx, idx) = s.e, ++idx;
    for (std::size_t j = 0; j < d - 1; ++j) blocks(idx, idx) = s.f, ++idx;
    for (; idx < dim; ++idx) blocks(idx, idx) = s.g;

    const ComplexMatrix basis = adapted_basis(d);
    return (basis * blocks * basis.adjoint()).hermitized();
}

// Effective estimation seed on C^d: Q0 = V† (I_d ⊗ P0) V.
inline ComplexMatrix q0_from_seed(const CovariantChannel& ch, const SeedP0& s) {
    if (ch.d != s.d) throw DimMismatchError("q0_from_seed: channel and seed dimensions differ");
    const ComplexMatrix v = build_isometry(ch);
    const ComplexMatrix p0 = seed_p0_matrix(s);
    return (v.adjoint() * tensor(ComplexMatrix::identity(ch.d), p0) * v).hermitized();
}

// Closed form of q0_from_seed at d = 2 (channel with c2 = +sqrt(alpha)):
// diag(1 - alpha + 2 Re(c) sqrt(alpha - alpha^2)/sqrt(3) + alpha (b + 2f)/3,
//      1 - alpha - 2 Re(c) sqrt(alpha - alpha^2)/sqrt(3) + alpha (b + 2e)/3).
inline ComplexMatrix q0_closed_d2(double alpha, const SeedP0& s) {
    if (s.d != 2) throw NotQubitError("q0_closed_d2: seed dimension is " + std::to_string(s.d));
    const double cross = 2.0 * s.c.real() * std::sqrt(std::max(alpha - alpha * alpha, 0.0)) /
                         std::sqrt(3.0);
    ComplexMatrix q(2, 2);
    q(0, 0) = 1.0 - alpha + cross + alpha * (s.b + 2.0 * s.f) / 3.0;
    q(1, 1) = 1.0 - alpha - cross + alpha * (s.b + 2.0 * s.e) / 3.0;
    return q;
}

// Uniformly random admissible seed: block weights drawn inside the
// normalization simplex, c uniform on the disk |c|^2 <= b.
inline SeedP0 random_seed_p0(Rng& rng, std::size_t d) {
    const double dd = static_cast<double>(d);
    const double cap = dd * dd - 1.0;
    const double b = rng.uniform(0.0, cap);
    double budget = 1.0 - b / cap;
    double g = 0.0;
    if (d >= 3) {
        const double g_cap = budget * cap / (dd * (dd - 2.0));
        g = rng.uniform(0.0, g_cap);
        budget -= g * dd * (dd - 2.0) / cap;
    }
    const double rest = (dd + 1.0) * std::max(budget, 0.0);
    const double e = rng.uniform(0.0, rest);
    const double radius = std::sqrt(b * rng.uniform());
    const double phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    const Complex c(radius * std::cos(phase), radius * std::sin(phase));
    return SeedP0(d, b, c, e, rest - e, g);
}

// u fixing e1: 1 ⊕ w with w Haar on the complement.
inline ComplexMatrix stabilizer_unitary(Rng& rng, std::size_t d) {
    const ComplexMatrix w = haar_unitary(rng, d - 1);
    ComplexMatrix u(d, d);
    u(0, 0) = 1.0;
    for (std::size_t i = 0; i < d - 1; ++i)
        for (std::size_t j = 0; j < d - 1; ++j) u(i + 1, j + 1) = w(i, j);
    return u;
}

// Representation of the estimated-state unitary on the ancilla pair.
inline ComplexMatrix ancilla_rep(const ComplexMatrix& u) { return tensor(u.conjugate(), u); }

// --- rotating polarizer (qubit) ---

struct RotatingPolarizer {
    double lambda = 0.0;

    explicit RotatingPolarizer(double l) : lambda(l) {
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw OutOfRangeError("RotatingPolarizer: lambda = " + std::to_string(lambda));
    }

    // With probability lambda the polarizer projects onto a uniformly random
    // direction and reports it; otherwise the state passes through.
    ComplexMatrix apply(const ComplexMatrix& a) const {
        if (a.rows() != 2 || a.cols() != 2) throw NotQubitError("RotatingPolarizer: operand is " + a.shape_str());
        ComplexMatrix out = a;
        out *= Complex(1.0 - 2.0 * lambda / 3.0, 0.0);
        const Complex w = a.trace() * Complex(lambda / 3.0, 0.0);
        out(0, 0) += w;
        out(1, 1) += w;
        return out;
    }

    // Same map written through the Haar average of p a p.
    ComplexMatrix apply_via_average(const ComplexMatrix& a) const {
        ComplexMatrix projected = pure_sandwich_mean(a);
        projected *= Complex(2.0 * lambda, 0.0);
        ComplexMatrix through = a;
        through *= Complex(1.0 - lambda, 0.0);
        return projected + through;
    }

    ComplexMatrix estimation_seed() const {
        ComplexMatrix q(2, 2);
        q(0, 0) = 1.0 + lambda;
        q(1, 1) = 1.0 - lambda;
        return q;
    }

    double gamma() const { return (1.0 + lambda) / 2.0; }
    double transmission_fidelity() const { return 1.0 - lambda / 3.0; }
    double estimation_fidelity() const { return (3.0 + lambda) / 6.0; }
};

// --- instrument consistency ---

struct InstrumentReport {
    double dilation_residual = 0.0;        // |V†(a ⊗ I)V - T(a)| over random a
    double normalization_max_dev = 0.0;    // |MC mean of u Q0 u† - I|
    double normalization_std_error = 0.0;
    bool normalization_pass = false;       // within 3 standard errors
    double partition_channel_residual = 0.0;  // |sum_i V†(a ⊗ F_i)V - T(a)|
    double partition_channel_bound = 0.0;
    double min_choi_eigenvalue = 0.0;      // over the partition maps' preduals
    std::uint64_t samples = 0;
    std::size_t buckets = 0;
    bool passed = false;
};

// Checks that the seed defines a bona fide measure-through instrument for
// the channel: the total map equals the channel, the outcome total is the
// identity, and every partition element acts completely positively.
inline InstrumentReport instrument_consistency(const CovariantChannel& ch, const SeedP0& seed,
                                               const Rng& rng, std::uint64_t samples,
                                               std::size_t buckets = 4,
                                               double tolerance = tol::eig) {
    InstrumentReport report;
    report.samples = samples;
    report.buckets = buckets;

    const std::size_t d = ch.d;
    const ComplexMatrix v = build_isometry(ch);
    const ComplexMatrix p0 = seed_p0_matrix(seed);
    const ComplexMatrix q0 = q0_from_seed(ch, seed);

    Rng local = rng.split(0x696E7374ull);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix a = ginibre(local, d, d);
        report.dilation_residual = std::max(
            report.dilation_residual, max_abs_diff(heisenberg_from_isometry(v, a), channel_apply(ch, a)));
    }

    const McMatrix norm_mc = mc_average_conjugation(rng.split(0x6E6F726Dull), q0, samples);
    report.normalization_max_dev = max_abs_diff(norm_mc.mean, ComplexMatrix::identity(d));
    report.normalization_std_error = norm_mc.std_error;
    report.normalization_pass = report.normalization_max_dev <= 3.0 * norm_mc.std_error + tolerance;

    // Random finite partition of the outcome set: samples are assigned to
    // buckets round-robin, giving MC estimates F_i of the outcome integrals
    // over a measurable partition with sum_i F_i -> I.
    std::vector<ComplexMatrix> f(buckets, ComplexMatrix(d * d, d * d));
    Rng part = rng.split(0x70617274ull);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const ComplexMatrix u = haar_unitary(part, d);
        const ComplexMatrix w = ancilla_rep(u);
        f[i % buckets] += w * p0 * w.adjoint();
    }
    for (auto& fi : f) fi *= Complex(1.0 / static_cast<double>(samples), 0.0);

    ComplexMatrix f_total(d * d, d * d);
    for (const auto& fi : f) f_total += fi;

    const ComplexMatrix probe = ginibre(local, d, d);
    ComplexMatrix partition_sum(d, d);
    for (const auto& fi : f)
        partition_sum += v.adjoint() * tensor(probe, fi) * v;
    report.partition_channel_residual = max_abs_diff(partition_sum, channel_apply(ch, probe));
    // The residual is controlled by the MC error of the outcome total times
    // the probe magnitude.
    report.partition_channel_bound =
        max_abs_diff(f_total, ComplexMatrix::identity(d * d)) * probe.max_abs() *
            static_cast<double>(d * d) +
        tolerance;

    report.min_choi_eigenvalue = 1.0;
    for (const auto& fi : f) {
        auto predual = [&](const ComplexMatrix& rho) {
            const ComplexMatrix big = tensor(ComplexMatrix::identity(d), fi.hermitized()) *
                                      (v * rho * v.adjoint());
            return partial_trace(big, d, d * d, Subsystem::a);
        };
        const ComplexMatrix choi = choi_matrix(predual, d).hermitized();
        report.min_choi_eigenvalue = std::min(report.min_choi_eigenvalue, min_eigenvalue(choi));
    }

    report.passed = report.dilation_residual <= 1e-10 && report.normalization_pass &&
                    report.partition_channel_residual <= report.partition_channel_bound &&
                    report.min_choi_eigenvalue >= -tol::psd;
    return report;
}

}  // namespace qtrade
