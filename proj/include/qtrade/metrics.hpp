#pragma once
// Fidelity and its certificates: the Uhlmann purification characterization,
// worst-case (pure-input) fidelity of a channel, and randomized probes for
// monotonicity, joint concavity, and the Robertson uncertainty bound.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eig.hpp"
#include "haar.hpp"
#include "matrix.hpp"
#include "optimize.hpp"
#include "rng.hpp"
#include "tolerances.hpp"

namespace qtrade {

// F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                       double psd_tolerance = tol::psd) {
    rho.require_same_shape(sigma, "fidelity");
    const ComplexMatrix s = psd_sqrt(rho, psd_tolerance);
    const ComplexMatrix inner = (s * sigma * s).hermitized();
    const EigResult e = herm_eig(inner);
    // Eigenvalues below solver resolution are exact zeros plus noise; keeping
    // them would pollute the sum with sqrt(noise)-sized terms.
    double scale = 0.0;
    for (double lambda : e.values) scale = std::max(scale, std::abs(lambda));
    const double floor = scale * 1e-13;
    double root_sum = 0.0;
    for (double lambda : e.values)
        if (lambda > floor) root_sum += std::sqrt(lambda);
    return root_sum * root_sum;
}

inline double pure_fidelity(const CVec& psi, const CVec& phi) {
    if (std::abs(vec_norm(psi) - 1.0) > 1e-9 || std::abs(vec_norm(phi) - 1.0) > 1e-9)
        throw NotNormalizedError("pure_fidelity: states must be unit vectors");
    return std::norm(dot(psi, phi));
}

// F(|psi><psi|, rho) = <psi|rho|psi>.
inline double pure_mixed_fidelity(const CVec& psi, const ComplexMatrix& rho) {
    return expectation(rho, psi).real();
}

struct UhlmannReport {
    double fidelity_value = 0.0;   // F(rho, sigma)
    double sampled_max = 0.0;      // best overlap over random ancilla unitaries
    double optimal_overlap = 0.0;  // exact maximum from the polar-decomposition oracle
    double gap_sampled = 0.0;      // fidelity_value - sampled_max
    double gap_optimal = 0.0;      // |fidelity_value - optimal_overlap|
    std::uint64_t trials = 0;
    bool passed = false;
};

// Checks the purification characterization of fidelity: over purifications
// psi of rho and (I ⊗ W) phi of sigma, |<psi|(I ⊗ W)|phi>|^2 never exceeds
// F(rho, sigma) and attains it at the optimal W. The attained maximum is
// computed exactly as the squared nuclear norm of the overlap matrix
// C(a,b) = sum_i conj(psi[i,a]) phi[i,b], the polar-decomposition optimum.
inline UhlmannReport uhlmann_check(const Rng& rng, const ComplexMatrix& rho,
                                   const ComplexMatrix& sigma, std::uint64_t trials,
                                   double tolerance = tol::eig) {
    rho.require_same_shape(sigma, "uhlmann_check");
    const std::size_t d = rho.rows();

    UhlmannReport report;
    report.trials = trials;
    report.fidelity_value = fidelity(rho, sigma);

    const CVec psi = purify(rho);
    const CVec phi = purify(sigma);

    Rng local = rng.split(0x75686C6Dull);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ComplexMatrix w = haar_unitary(local, d);
        Complex overlap(0.0, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    overlap += std::conj(psi[i * d + a]) * w(a, b) * phi[i * d + b];
        report.sampled_max = std::max(report.sampled_max, std::norm(overlap));
    }

    ComplexMatrix c(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            Complex s(0.0, 0.0);
            for (std::size_t i = 0; i < d; ++i) s += std::conj(psi[i * d + a]) * phi[i * d + b];
            c(a, b) = s;
        }
    const EigResult gram = herm_eig((c.adjoint() * c).hermitized());
    double nuclear = 0.0;
    for (double lambda : gram.values) nuclear += std::sqrt(std::max(lambda, 0.0));
    report.optimal_overlap = nuclear * nuclear;

    report.gap_sampled = report.fidelity_value - report.sampled_max;
    report.gap_optimal = std::abs(report.fidelity_value - report.optimal_overlap);
    report.passed = report.sampled_max <= report.fidelity_value + tolerance &&
                    report.gap_optimal <= 1e-6;
    return report;
}

enum class WcMethod { covariant_shortcut, sampled, refined };

inline std::string wc_method_name(WcMethod m) {
    switch (m) {
        case WcMethod::covariant_shortcut: return "covariant-shortcut";
        case WcMethod::sampled: return "sampled";
        default: return "refined";
    }
}

struct WorstCaseReport {
    double value = 1.0;
    CVec argmin;
    WcMethod method = WcMethod::sampled;
    std::size_t evals = 0;
    bool budget_exhausted = false;
};

// Worst-case fidelity inf over pure psi of <psi| op(|psi><psi|) |psi> for a
// channel given by its Schroedinger action on density operators. Haar probes
// locate a basin; Nelder-Mead then refines in a real chart of the pure-state
// manifold around the best probe (2d-2 parameters).
template <typename Op>
WorstCaseReport worst_case_fidelity(Op&& op, std::size_t d, const Rng& rng,
                                    std::size_t probes = 512, std::size_t budget = 40000) {
    auto objective = [&op](const CVec& psi) {
        return expectation(op(projector(psi)), psi).real();
    };

    WorstCaseReport report;
    Rng local = rng.split(0x77637364ull);
    CVec best = haar_pure_state(local, d);
    double best_val = objective(best);
    ++report.evals;
    for (std::size_t i = 1; i < probes; ++i) {
        const CVec psi = haar_pure_state(local, d);
        const double v = objective(psi);
        ++report.evals;
        if (v < best_val) {
            best_val = v;
            best = psi;
        }
    }
    report.method = WcMethod::sampled;
    report.value = best_val;
    report.argmin = best;
    if (report.evals >= budget) {
        report.budget_exhausted = true;
        return report;
    }

    // Orthonormal frame {best, eta_1, ..., eta_{d-1}} by Gram-Schmidt over
    // the standard basis.
    std::vector<CVec> frame{best};
    for (std::size_t j = 0; j < d && frame.size() < d; ++j) {
        CVec v = basis_vector(d, j);
        for (const CVec& u : frame) {
            const Complex proj = dot(u, v);
            for (std::size_t i = 0; i < d; ++i) v[i] -= proj * u[i];
        }
        const double nrm = vec_norm(v);
        if (nrm > 1e-8) {
            scale(v, Complex(1.0 / nrm, 0.0));
            frame.push_back(v);
        }
    }

    auto chart = [&frame, d](const std::vector<double>& x) {
        CVec psi = frame[0];
        for (std::size_t k = 1; k < frame.size(); ++k) {
            const Complex coeff(x[2 * (k - 1)], x[2 * (k - 1) + 1]);
            for (std::size_t i = 0; i < d; ++i) psi[i] += coeff * frame[k][i];
        }
        return normalized(psi);
    };

    const std::size_t refine_budget = budget - report.evals;
    const NelderMeadResult nm = nelder_mead(
        [&](const std::vector<double>& x) { return objective(chart(x)); },
        std::vector<double>(2 * (d - 1), 0.0), 0.15, 1e-13, refine_budget);
    report.evals += nm.evals;
    if (nm.value < report.value) {
        report.value = nm.value;
        report.argmin = chart(nm.x);
        report.method = WcMethod::refined;
    }
    report.budget_exhausted = !nm.converged;
    return report;
}

// First d*env columns of a Haar unitary on C^(d*env) restricted to inputs in
// C^d: a Haar-random Stinespring isometry with environment dimension env.
inline ComplexMatrix random_stinespring_isometry(Rng& rng, std::size_t d, std::size_t env) {
    const ComplexMatrix u = haar_unitary(rng, d * env);
    ComplexMatrix v(d * env, d);
    for (std::size_t i = 0; i < d * env; ++i)
        for (std::size_t j = 0; j < d; ++j) v(i, j) = u(i, j);
    return v;
}

// Channel action rho -> Tr_env(V rho V†) for an isometry with output index
// (system, env) = i*env + e.
inline ComplexMatrix stinespring_apply(const ComplexMatrix& v, std::size_t d, std::size_t env,
                                       const ComplexMatrix& rho) {
    if (rho.rows() != d) throw DimMismatchError("stinespring_apply: state is " + rho.shape_str());
    return partial_trace(v * rho * v.adjoint(), d, env, Subsystem::a);
}

struct MonotonicityReport {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double worst_margin = 1.0;  // min over trials of F(T rho, T sigma) - F(rho, sigma)
};

// Fidelity never decreases under a channel. Channels are random Stinespring
// isometries with environment dimension d; states are Hilbert-Schmidt random.
inline MonotonicityReport monotonicity_probe(const Rng& rng, std::size_t d, std::uint64_t trials,
                                             double tolerance = tol::eig) {
    MonotonicityReport report;
    report.trials = trials;
    Rng local = rng.split(0x6D6F6E6Full);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ComplexMatrix v = random_stinespring_isometry(local, d, d);
        const ComplexMatrix rho = random_mixed_state(local, d);
        const ComplexMatrix sigma = random_mixed_state(local, d);
        const double before = fidelity(rho, sigma);
        const double after =
            fidelity(stinespring_apply(v, d, d, rho).hermitized(), stinespring_apply(v, d, d, sigma).hermitized());
        const double margin = after - before;
        report.worst_margin = std::min(report.worst_margin, margin);
        if (margin < -tolerance) ++report.violations;
    }
    return report;
}

struct ConcavityReport {
    std::uint64_t trials = 0;
    std::uint64_t violations_product_form = 0;  // F >= sum_i p_i q_i F_i
    std::uint64_t violations_sqrt_form = 0;     // F >= (sum_i sqrt(p_i q_i F_i))^2
    double worst_margin_product = 1.0;
    double worst_margin_sqrt = 1.0;
};

// Joint concavity of fidelity over random finite ensembles, checked in both
// the product form and the stronger square-root form.
inline ConcavityReport strong_concavity_probe(const Rng& rng, std::size_t d, std::size_t terms,
                                              std::uint64_t trials, double tolerance = tol::eig) {
    ConcavityReport report;
    report.trials = trials;
    Rng local = rng.split(0x636F6E63ull);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<double> p(terms), q(terms);
        double ps = 0.0, qs = 0.0;
        for (std::size_t i = 0; i < terms; ++i) {
            p[i] = -std::log(1.0 - local.uniform());
            q[i] = -std::log(1.0 - local.uniform());
            ps += p[i];
            qs += q[i];
        }
        for (std::size_t i = 0; i < terms; ++i) {
            p[i] /= ps;
            q[i] /= qs;
        }

        ComplexMatrix rho_mix(d, d), sigma_mix(d, d);
        double product_form = 0.0, sqrt_form = 0.0;
        for (std::size_t i = 0; i < terms; ++i) {
            const ComplexMatrix rho = random_mixed_state(local, d);
            const ComplexMatrix sigma = random_mixed_state(local, d);
            rho_mix += p[i] * rho;
            sigma_mix += q[i] * sigma;
            const double fi = fidelity(rho, sigma);
            product_form += p[i] * q[i] * fi;
            sqrt_form += std::sqrt(p[i] * q[i] * std::max(fi, 0.0));
        }
        sqrt_form *= sqrt_form;

        const double f_mix = fidelity(rho_mix.hermitized(), sigma_mix.hermitized());
        const double margin_product = f_mix - product_form;
        const double margin_sqrt = f_mix - sqrt_form;
        report.worst_margin_product = std::min(report.worst_margin_product, margin_product);
        report.worst_margin_sqrt = std::min(report.worst_margin_sqrt, margin_sqrt);
        if (margin_product < -tolerance) ++report.violations_product_form;
        if (margin_sqrt < -tolerance) ++report.violations_sqrt_form;
    }
    return report;
}

struct UncertaintyPair {
    double lhs = 0.0;  // delta(a) * delta(b)
    double rhs = 0.0;  // |Tr(rho [a,b])| / 2
    bool satisfied = false;
};

// Robertson bound delta(a) delta(b) >= |Tr(rho [a, b])| / 2 for Hermitian
// observables in the state rho.
inline UncertaintyPair uncertainty_probe(const ComplexMatrix& a, const ComplexMatrix& b,
                                         const ComplexMatrix& rho, double tolerance = tol::eig,
                                         double herm_tolerance = tol::herm) {
    if (a.hermiticity_residual() > herm_tolerance || b.hermiticity_residual() > herm_tolerance)
        throw NotHermitianError("uncertainty_probe: observables must be Hermitian");
    auto moment = [&rho](const ComplexMatrix& m) { return (rho * m).trace().real(); };
    const double mean_a = moment(a);
    const double mean_b = moment(b);
    const double var_a = std::max(0.0, moment(a * a) - mean_a * mean_a);
    const double var_b = std::max(0.0, moment(b * b) - mean_b * mean_b);

    UncertaintyPair out;
    out.lhs = std::sqrt(var_a) * std::sqrt(var_b);
    out.rhs = 0.5 * std::abs((rho * (a * b - b * a)).trace());
    out.satisfied = out.lhs >= out.rhs - tolerance;
    return out;
}

}  // namespace qtrade
