#pragma once
// Haar sampling on the unitary group and the pure-state manifold, plus
// Monte Carlo averaging with deterministic stream splitting: estimates are
// accumulated over a fixed set of 64 child streams and combined in stream
// order, so results depend only on (seed, n), not on thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace qtrade {

inline ComplexMatrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
    return g;
}

// Haar-distributed unitary: QR of a complex Ginibre matrix via modified
// Gram-Schmidt (with one reorthogonalization pass), followed by the
// R-diagonal phase correction U = Q diag(conj(r_jj)/|r_jj|).
inline ComplexMatrix haar_unitary(Rng& rng, std::size_t d) {
    if (d == 0) throw OutOfRangeError("haar_unitary: dimension 0");
    ComplexMatrix q(d, d);
    std::vector<Complex> r_diag(d);
    for (std::size_t j = 0; j < d; ++j) {
        CVec v(d);
        double nrm = 0.0;
        do {
            for (std::size_t i = 0; i < d; ++i) v[i] = rng.complex_normal();
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < j; ++k) {
                    Complex proj(0.0, 0.0);
                    for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, k)) * v[i];
                    for (std::size_t i = 0; i < d; ++i) v[i] -= proj * q(i, k);
                }
            }
            nrm = vec_norm(v);
        } while (nrm < 1e-12);
        r_diag[j] = nrm;
        for (std::size_t i = 0; i < d; ++i) q(i, j) = v[i] / nrm;
    }
    for (std::size_t j = 0; j < d; ++j) {
        const Complex phase = std::conj(r_diag[j]) / std::abs(r_diag[j]);
        for (std::size_t i = 0; i < d; ++i) q(i, j) *= phase;
    }
    return q;
}

inline double unitarity_residual(const ComplexMatrix& u) {
    return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.cols()));
}

// Haar-uniform pure state: normalized complex Gaussian vector.
inline CVec haar_pure_state(Rng& rng, std::size_t d) {
    CVec psi(d);
    double nrm = 0.0;
    do {
        for (auto& x : psi) x = rng.complex_normal();
        nrm = vec_norm(psi);
    } while (nrm < 1e-12);
    scale(psi, Complex(1.0 / nrm, 0.0));
    return psi;
}

// Hilbert-Schmidt random density operator: G G† / Tr(G G†).
inline ComplexMatrix random_mixed_state(Rng& rng, std::size_t d) {
    const ComplexMatrix g = ginibre(rng, d, d);
    ComplexMatrix rho = g * g.adjoint();
    return rho * (1.0 / rho.trace().real());
}

// cos(theta) * anchor + sin(theta) * eta with eta a unit vector orthogonal
// to the anchor. theta = 0 returns the anchor itself.
inline CVec polar_combine(const CVec& anchor, const CVec& eta, double theta) {
    if (anchor.size() != eta.size())
        throw DimMismatchError("polar_combine: lengths differ");
    const double c = std::cos(theta), s = std::sin(theta);
    CVec out(anchor.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * anchor[i] + s * eta[i];
    return out;
}

// Haar-uniform pure state expressed in polar coordinates around a fixed
// anchor state: the overlap t = cos^2(theta) with the anchor has density
// (d-1)(1-t)^(d-2), and the transverse direction is uniform on the unit
// sphere of the orthogonal complement.
inline CVec fubini_study_sample(Rng& rng, const CVec& anchor) {
    const std::size_t d = anchor.size();
    if (d < 2) throw OutOfRangeError("fubini_study_sample: dimension must be at least 2");
    if (std::abs(vec_norm(anchor) - 1.0) > 1e-9)
        throw NotNormalizedError("fubini_study_sample: anchor is not normalized");

    // sin^2(theta) = u^(1/(d-1)) inverts the CDF of the angular density
    // sin^(2d-3)(theta) cos(theta).
    const double t = std::pow(rng.uniform(), 1.0 / static_cast<double>(d - 1));
    const double theta = std::asin(std::min(1.0, std::sqrt(t)));

    CVec eta(d);
    double nrm = 0.0;
    do {
        for (auto& x : eta) x = rng.complex_normal();
        const Complex overlap = dot(anchor, eta);
        for (std::size_t i = 0; i < d; ++i) eta[i] -= overlap * anchor[i];
        nrm = vec_norm(eta);
    } while (nrm < 1e-8);
    scale(eta, Complex(1.0 / nrm, 0.0));
    return polar_combine(anchor, eta, theta);
}

// Closed form of the Haar average of p a p over pure projectors p:
// (a + Tr(a) I) / (d (d+1)).
inline ComplexMatrix pure_sandwich_mean(const ComplexMatrix& a) {
    a.require_square("pure_sandwich_mean");
    const double d = static_cast<double>(a.rows());
    ComplexMatrix out = a;
    ComplexMatrix eye = ComplexMatrix::identity(a.rows());
    out += a.trace() * eye;
    return out * (1.0 / (d * (d + 1.0)));
}

// --- Monte Carlo estimates ---

struct McScalar {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

struct McMatrix {
    ComplexMatrix mean;
    double std_error = 0.0;  // largest entrywise standard error
    std::uint64_t n = 0;
};

namespace detail {

inline constexpr std::uint64_t kMcStreams = 64;

inline std::uint64_t stream_count(std::uint64_t n, std::uint64_t s) {
    return n / kMcStreams + (s < n % kMcStreams ? 1 : 0);
}

}  // namespace detail

// Mean and standard error of a scalar-valued sampler. Work is sharded over
// 64 deterministic child streams; `jobs` only controls how many run
// concurrently.
template <typename F>
McScalar mc_scalar(const Rng& rng, std::uint64_t n, F&& sample, unsigned jobs = 1) {
    if (n == 0) throw OutOfRangeError("mc_scalar: zero samples");
    struct Partial {
        double sum = 0.0, sumsq = 0.0;
    };
    auto run_stream = [&](std::uint64_t s) {
        Partial p;
        Rng child = rng.split(s);
        const std::uint64_t count = detail::stream_count(n, s);
        for (std::uint64_t i = 0; i < count; ++i) {
            const double x = sample(child);
            p.sum += x;
            p.sumsq += x * x;
        }
        return p;
    };

    std::vector<Partial> partials(detail::kMcStreams);
    if (jobs <= 1) {
        for (std::uint64_t s = 0; s < detail::kMcStreams; ++s) partials[s] = run_stream(s);
    } else {
        std::vector<std::future<Partial>> futures;
        futures.reserve(detail::kMcStreams);
        for (std::uint64_t s = 0; s < detail::kMcStreams; ++s)
            futures.push_back(std::async(std::launch::async | std::launch::deferred, run_stream, s));
        for (std::uint64_t s = 0; s < detail::kMcStreams; ++s) partials[s] = futures[s].get();
    }

    double sum = 0.0, sumsq = 0.0;
    for (const auto& p : partials) {
        sum += p.sum;
        sumsq += p.sumsq;
    }
    McScalar out;
    out.n = n;
    out.mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - out.mean * out.mean);
    out.std_error = std::sqrt(var / static_cast<double>(n));
    return out;
}

// Matrix-valued Monte Carlo mean with entrywise standard errors.
template <typename F>
McMatrix mc_matrix(const Rng& rng, std::uint64_t n, std::size_t rows, std::size_t cols, F&& sample,
                   unsigned jobs = 1) {
    if (n == 0) throw OutOfRangeError("mc_matrix: zero samples");
    struct Partial {
        ComplexMatrix sum;
        std::vector<double> sumsq_re, sumsq_im;
    };
    auto run_stream = [&](std::uint64_t s) {
        Partial p;
        p.sum = ComplexMatrix(rows, cols);
        p.sumsq_re.assign(rows * cols, 0.0);
        p.sumsq_im.assign(rows * cols, 0.0);
        Rng child = rng.split(s);
        const std::uint64_t count = detail::stream_count(n, s);
        for (std::uint64_t i = 0; i < count; ++i) {
            const ComplexMatrix x = sample(child);
            for (std::size_t k = 0; k < rows * cols; ++k) {
                const Complex v = x.data()[k];
                p.sum.data()[k] += v;
                p.sumsq_re[k] += v.real() * v.real();
                p.sumsq_im[k] += v.imag() * v.imag();
            }
        }
        return p;
    };

    std::vector<Partial> partials(detail::kMcStreams);
    if (jobs <= 1) {
        for (std::uint64_t s = 0; s < detail::kMcStreams; ++s) partials[s] = run_stream(s);
    } else {
        std::vector<std::future<Partial>> futures;
        futures.reserve(detail::kMcStreams);
        for (std::uint64_t s = 0; s < detail::kMcStreams; ++s)
            futures.push_back(std::async(std::launch::async | std::launch::deferred, run_stream, s));
        for (std::uint64_t s = 0; s < detail::kMcStreams; ++s) partials[s] = futures[s].get();
    }

    ComplexMatrix sum(rows, cols);
    std::vector<double> sumsq_re(rows * cols, 0.0), sumsq_im(rows * cols, 0.0);
    for (const auto& p : partials) {
        sum += p.sum;
        for (std::size_t k = 0; k < rows * cols; ++k) {
            sumsq_re[k] += p.sumsq_re[k];
            sumsq_im[k] += p.sumsq_im[k];
        }
    }

    McMatrix out;
    out.n = n;
    const double dn = static_cast<double>(n);
    out.mean = sum * (1.0 / dn);
    for (std::size_t k = 0; k < rows * cols; ++k) {
        const Complex m = out.mean.data()[k];
        const double var_re = std::max(0.0, sumsq_re[k] / dn - m.real() * m.real());
        const double var_im = std::max(0.0, sumsq_im[k] / dn - m.imag() * m.imag());
        out.std_error = std::max(out.std_error, std::sqrt((var_re + var_im) / dn));
    }
    return out;
}

// Monte Carlo mean of u a u† over Haar-random unitaries.
inline McMatrix mc_average_conjugation(const Rng& rng, const ComplexMatrix& a, std::uint64_t n,
                                       unsigned jobs = 1) {
    a.require_square("mc_average_conjugation");
    const std::size_t d = a.rows();
    return mc_matrix(rng, n, d, d,
                     [&a, d](Rng& r) {
                         const ComplexMatrix u = haar_unitary(r, d);
                         return u * a * u.adjoint();
                     },
                     jobs);
}

// Monte Carlo mean of (conj(u) ⊗ u) b (conj(u) ⊗ u)† over Haar-random u;
// b acts on C^d ⊗ C^d.
inline McMatrix mc_tensor_conjugation(const Rng& rng, const ComplexMatrix& b, std::size_t d,
                                      std::uint64_t n, unsigned jobs = 1) {
    if (!b.square() || b.rows() != d * d)
        throw DimMismatchError("mc_tensor_conjugation: matrix is " + b.shape_str() + ", expected " +
                               std::to_string(d * d) + " square");
    return mc_matrix(rng, n, d * d, d * d,
                     [&b, d](Rng& r) {
                         const ComplexMatrix u = haar_unitary(r, d);
                         const ComplexMatrix w = tensor(u.conjugate(), u);
                         return w * b * w.adjoint();
                     },
                     jobs);
}

// Kolmogorov-Smirnov statistic against the uniform law on [0, 1].
inline double ks_uniform_statistic(std::vector<double> samples) {
    if (samples.empty()) throw OutOfRangeError("ks_uniform_statistic: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = std::clamp(samples[i], 0.0, 1.0);
        d_stat = std::max(d_stat, f - static_cast<double>(i) / n);
        d_stat = std::max(d_stat, static_cast<double>(i + 1) / n - f);
    }
    return d_stat;
}

}  // namespace qtrade
