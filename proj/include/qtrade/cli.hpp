#pragma once
// Command-line surface. `run` parses argv-style arguments and executes one
// subcommand; all output is deterministic for a fixed (arguments, seed) pair.
// Exit codes: 0 all checks passed, 1 a check failed, 2 bad flags or input.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "apps.hpp"
#include "channels.hpp"
#include "density.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "haar.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "povm.hpp"
#include "tolerances.hpp"
#include "tradeoff.hpp"
#include "version.hpp"

namespace qtrade::cli {

inline constexpr std::uint64_t kDefaultSeed = 42;

// --seed beats QTRADE_SEED beats the built-in default.
inline std::uint64_t seed_fallback() {
    if (const char* env = std::getenv("QTRADE_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return static_cast<std::uint64_t>(v);
    }
    return kDefaultSeed;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != rows * cols || im.size() != rows * cols)
        throw DimMismatchError("matrix_from_json: entry arrays do not match rows*cols");
    ComplexMatrix m(rows, cols);
    for (std::size_t k = 0; k < rows * cols; ++k)
        m.data()[k] = Complex(re[k].get<double>(), im[k].get<double>());
    return m;
}

inline ComplexMatrix matrix_from_json_string(const std::string& text) {
    return matrix_from_json(nlohmann::json::parse(text));
}

inline Tolerances tolerances_from_config(const std::string& path) {
    Tolerances t{};
    if (path.empty()) return t;
    std::ifstream in(path);
    if (!in) throw OutOfRangeError("--config: cannot open " + path);
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("eig")) t.eig = j.at("eig").get<double>();
    if (j.contains("opt")) t.opt = j.at("opt").get<double>();
    if (j.contains("region")) t.region = j.at("region").get<double>();
    return t;
}

// One named check with its measured value, bound, and verdict.
struct CheckList {
    Json items = Json::array();
    bool ok = true;

    void add(const std::string& name, double value, double bound, bool pass) {
        Json c = Json::object();
        c.set("name", Json::string(name));
        c.set("value", Json::number(value));
        c.set("bound", Json::number(bound));
        c.set("pass", Json::boolean(pass));
        items.push(std::move(c));
        ok = ok && pass;
    }

    void residual(const std::string& name, double value, double bound) {
        add(name, value, bound, value <= bound);
    }

    // Deviation in units of the standard error.
    void zscore(const std::string& name, double deviation, double std_error, double limit = 3.0) {
        const double z = std::abs(deviation) / (std_error + 1e-12);
        add(name, z, limit, z <= limit);
    }

    void require(const std::string& name, bool pass) { add(name, pass ? 0.0 : 1.0, 0.5, pass); }
};

struct SuiteResult {
    Json report = Json::object();
    bool pass = true;
};

inline Json suite_header(const char* suite, std::size_t d, std::uint64_t seed, std::uint64_t n) {
    Json j = Json::object();
    j.set("suite", Json::string(suite));
    j.set("version", Json::string(kVersion));
    j.set("d", Json::uinteger(d));
    j.set("seed", Json::uinteger(seed));
    j.set("samples", Json::uinteger(n));
    return j;
}

inline SuiteResult finish_suite(Json header, CheckList& cl) {
    header.set("pass", Json::boolean(cl.ok));
    header.set("checks", std::move(cl.items));
    return SuiteResult{std::move(header), cl.ok};
}

// --- verify haar ---

inline SuiteResult verify_haar(std::size_t d, std::uint64_t n, std::uint64_t seed, unsigned jobs) {
    const double dd = static_cast<double>(d);
    Rng root(seed);
    CheckList cl;

    {
        Rng r = root.split(1);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) worst = std::max(worst, unitarity_residual(haar_unitary(r, d)));
        cl.residual("unitarity residual (50 draws)", worst, 1e-10);
    }
    {
        const McScalar est = mc_scalar(
            root.split(2), n, [d](Rng& r) { return haar_unitary(r, d)(0, 0).real(); }, jobs);
        cl.zscore("first moment of an entry", est.mean, est.std_error);
    }
    {
        const McScalar est = mc_scalar(
            root.split(3), n, [d](Rng& r) { return std::norm(haar_unitary(r, d)(0, 0)); }, jobs);
        cl.zscore("second moment of an entry", est.mean - 1.0 / dd, est.std_error);
    }
    {
        Rng wr = root.split(6);
        const ComplexMatrix w = haar_unitary(wr, d);
        const McScalar plain = mc_scalar(
            root.split(4), n, [d](Rng& r) { return std::norm(haar_unitary(r, d)(0, 0)); }, jobs);
        const McScalar shifted = mc_scalar(
            root.split(5), n, [d, &w](Rng& r) { return std::norm((w * haar_unitary(r, d))(0, 0)); },
            jobs);
        const double se = std::sqrt(plain.std_error * plain.std_error +
                                    shifted.std_error * shifted.std_error);
        cl.zscore("left invariance (two-sample)", plain.mean - shifted.mean, se);
    }
    {
        Rng r = root.split(7);
        const std::uint64_t n_ks = std::min<std::uint64_t>(n, 20000);
        const CVec anchor = haar_pure_state(r, d);
        std::vector<double> u;
        u.reserve(n_ks);
        for (std::uint64_t i = 0; i < n_ks; ++i) {
            const double t = std::norm(dot(anchor, haar_pure_state(r, d)));
            u.push_back(1.0 - std::pow(1.0 - t, dd - 1.0));
        }
        cl.residual("overlap law ks (haar route)", ks_uniform_statistic(u),
                     1.628 / std::sqrt(static_cast<double>(n_ks)));
    }
    {
        Rng r = root.split(8);
        const std::uint64_t n_ks = std::min<std::uint64_t>(n, 20000);
        const CVec anchor = haar_pure_state(r, d);
        std::vector<double> u;
        u.reserve(n_ks);
        for (std::uint64_t i = 0; i < n_ks; ++i) {
            const double t = std::norm(dot(anchor, fubini_study_sample(r, anchor)));
            u.push_back(1.0 - std::pow(1.0 - t, dd - 1.0));
        }
        cl.residual("overlap law ks (polar route)", ks_uniform_statistic(u),
                     1.628 / std::sqrt(static_cast<double>(n_ks)));
    }
    {
        Rng qr = root.split(11);
        const CVec q = haar_pure_state(qr, d);
        const McScalar m1 = mc_scalar(
            root.split(12), n,
            [d, &q](Rng& r) { return std::norm(dot(q, haar_pure_state(r, d))); }, jobs);
        cl.zscore("mean overlap identity", dd * m1.mean - 1.0, dd * m1.std_error);
        const McScalar m2 = mc_scalar(
            root.split(13), n,
            [d, &q](Rng& r) {
                const double t = std::norm(dot(q, haar_pure_state(r, d)));
                return t * t;
            },
            jobs);
        cl.zscore("squared overlap identity", dd * m2.mean - 2.0 / (dd + 1.0), dd * m2.std_error);
    }
    {
        Rng ar = root.split(9);
        const CVec anchor = haar_pure_state(ar, d);
        const McScalar m1 = mc_scalar(
            root.split(10), n,
            [&anchor](Rng& r) { return std::norm(dot(anchor, fubini_study_sample(r, anchor))); },
            jobs);
        cl.zscore("polar route mean overlap", m1.mean - 1.0 / dd, m1.std_error);
        const McScalar m2 = mc_scalar(
            root.split(14), n,
            [&anchor](Rng& r) {
                const double t = std::norm(dot(anchor, fubini_study_sample(r, anchor)));
                return t * t;
            },
            jobs);
        cl.zscore("polar route squared overlap", m2.mean - 2.0 / (dd * (dd + 1.0)), m2.std_error);
    }
    {
        Rng ar = root.split(15);
        const ComplexMatrix g = ginibre(ar, d, d);
        const ComplexMatrix a = ((g + g.adjoint()) * 0.5).hermitized();
        const McMatrix est = mc_average_conjugation(root.split(16), a, n, jobs);
        ComplexMatrix target = ComplexMatrix::identity(d);
        target *= a.trace() * Complex(1.0 / dd, 0.0);
        cl.zscore("global conjugation average", max_abs_diff(est.mean, target), est.std_error);
    }
    {
        Rng ar = root.split(17);
        const ComplexMatrix g = ginibre(ar, d, d);
        const ComplexMatrix a = ((g + g.adjoint()) * 0.5).hermitized();
        const McMatrix est = mc_matrix(
            root.split(18), n, d, d,
            [d, &a](Rng& r) {
                const ComplexMatrix p = projector(haar_pure_state(r, d));
                return p * a * p;
            },
            jobs);
        cl.zscore("pure sandwich average", max_abs_diff(est.mean, pure_sandwich_mean(a)),
                  est.std_error);
    }

    return finish_suite(suite_header("haar", d, seed, n), cl);
}

// --- verify fidelity ---

inline SuiteResult verify_fidelity(std::size_t d, std::uint64_t trials, std::uint64_t seed,
                                   const Tolerances& tols) {
    Rng root(seed);
    CheckList cl;

    {
        Rng r = root.split(1);
        double worst_self = 0.0, worst_sym = 0.0, worst_pure = 0.0, worst_pm = 0.0;
        double worst_range = 0.0, worst_unitary = 0.0;
        for (int t = 0; t < 20; ++t) {
            const ComplexMatrix rho = random_mixed_state(r, d);
            const ComplexMatrix sigma = random_mixed_state(r, d);
            const double f = fidelity(rho, sigma);
            worst_self = std::max(worst_self, std::abs(fidelity(rho, rho) - 1.0));
            worst_sym = std::max(worst_sym, std::abs(f - fidelity(sigma, rho)));
            worst_range = std::max(worst_range, std::max(-f, f - 1.0));

            const CVec psi = haar_pure_state(r, d);
            const CVec phi = haar_pure_state(r, d);
            worst_pure = std::max(
                worst_pure, std::abs(fidelity(projector(psi), projector(phi)) - pure_fidelity(psi, phi)));
            worst_pm = std::max(worst_pm, std::abs(fidelity(projector(psi), rho) -
                                                   pure_mixed_fidelity(psi, rho)));

            const ComplexMatrix u = haar_unitary(r, d);
            worst_unitary = std::max(
                worst_unitary,
                std::abs(fidelity((u * rho * u.adjoint()).hermitized(),
                                  (u * sigma * u.adjoint()).hermitized()) -
                         f));
        }
        cl.residual("self fidelity", worst_self, 1e-10);
        cl.residual("symmetry", worst_sym, 1e-10);
        cl.residual("pure overlap agreement", worst_pure, 1e-9);
        cl.residual("pure-mixed agreement", worst_pm, 1e-9);
        cl.residual("range", worst_range, 1e-10);
        cl.residual("unitary invariance", worst_unitary, 1e-9);
    }
    {
        const MonotonicityReport rep = monotonicity_probe(root, d, trials, tols.eig);
        cl.add("monotonicity violations", static_cast<double>(rep.violations), 0.5,
               rep.violations == 0);
    }
    {
        const ConcavityReport rep = strong_concavity_probe(root, d, 3, trials, tols.eig);
        cl.add("concavity violations (product form)",
               static_cast<double>(rep.violations_product_form), 0.5,
               rep.violations_product_form == 0);
        cl.add("concavity violations (sqrt form)", static_cast<double>(rep.violations_sqrt_form),
               0.5, rep.violations_sqrt_form == 0);
    }
    {
        Rng r = root.split(2);
        const ComplexMatrix rho = random_mixed_state(r, d);
        const ComplexMatrix sigma = random_mixed_state(r, d);
        const UhlmannReport rep = uhlmann_check(root, rho, sigma, 200, tols.eig);
        cl.require("purification bound", rep.sampled_max <= rep.fidelity_value + tols.eig);
        cl.residual("purification optimum gap", rep.gap_optimal, 1e-6);
        const UhlmannReport same = uhlmann_check(root, rho, rho, 50, tols.eig);
        cl.residual("equal-states optimum", std::abs(same.optimal_overlap - 1.0), 1e-9);
    }
    {
        Rng r = root.split(3);
        bool all_ok = true;
        for (int t = 0; t < 50; ++t) {
            const ComplexMatrix ga = ginibre(r, d, d);
            const ComplexMatrix gb = ginibre(r, d, d);
            const ComplexMatrix a = ((ga + ga.adjoint()) * 0.5).hermitized();
            const ComplexMatrix b = ((gb + gb.adjoint()) * 0.5).hermitized();
            const ComplexMatrix rho = random_mixed_state(r, d);
            all_ok = all_ok && uncertainty_probe(a, b, rho, tols.eig).satisfied;
        }
        cl.require("uncertainty (random observables)", all_ok);
        if (d == 2) {
            const UncertaintyPair pair =
                uncertainty_probe(sigma_x(), sigma_y(), projector(basis_vector(2, 0)));
            cl.residual("uncertainty equality case", std::abs(pair.lhs - pair.rhs), 1e-12);
        }
    }

    return finish_suite(suite_header("fidelity", d, seed, trials), cl);
}

// --- verify channels ---

inline SuiteResult verify_channels(std::size_t d, std::uint64_t trials, std::uint64_t seed,
                                   const Tolerances& tols) {
    Rng root(seed);
    CheckList cl;

    double worst_trace = 0.0, worst_unital = 0.0, worst_isometry = 0.0, worst_dilation = 0.0;
    double worst_kraus_complete = 0.0, worst_kraus_action = 0.0;
    double min_choi = 1.0;
    Rng r = root.split(1);
    for (int ia = 0; ia <= 20; ++ia) {
        const double alpha = static_cast<double>(ia) / 20.0;
        const CovariantChannel ch(d, alpha);
        const ComplexMatrix v = build_isometry(ch);
        worst_isometry = std::max(worst_isometry, isometry_residual(v));
        worst_unital = std::max(
            worst_unital, max_abs_diff(channel_apply(ch, ComplexMatrix::identity(d)),
                                       ComplexMatrix::identity(d)));
        const std::vector<ComplexMatrix> kraus = kraus_from_isometry(v);
        ComplexMatrix ksum(d, d);
        for (const auto& k : kraus) ksum += k.adjoint() * k;
        worst_kraus_complete =
            std::max(worst_kraus_complete, max_abs_diff(ksum, ComplexMatrix::identity(d)));
        min_choi = std::min(min_choi, min_eigenvalue(choi_matrix(ch).hermitized()));
        for (int t = 0; t < 20; ++t) {
            const ComplexMatrix a = ginibre(r, d, d);
            const ComplexMatrix ta = channel_apply(ch, a);
            worst_trace = std::max(worst_trace, std::abs((ta.trace() - a.trace())));
            worst_dilation = std::max(worst_dilation, max_abs_diff(heisenberg_from_isometry(v, a), ta));
            const ComplexMatrix rho = random_mixed_state(r, d);
            worst_kraus_action =
                std::max(worst_kraus_action, max_abs_diff(kraus_apply(kraus, rho), channel_apply(ch, rho)));
        }
    }
    cl.residual("trace preservation", worst_trace, 1e-10);
    cl.residual("unitality", worst_unital, 1e-12);
    cl.residual("isometry residual", worst_isometry, 1e-12);
    cl.residual("dilation agreement", worst_dilation, 1e-10);
    cl.residual("kraus completeness", worst_kraus_complete, 1e-10);
    cl.residual("kraus action agreement", worst_kraus_action, 1e-10);
    cl.add("choi positivity", min_choi, tol::psd, min_choi >= -tol::psd);

    {
        const CovariantChannel ch(d, 0.37);
        cl.residual("covariance residual", covariance_residual(ch, root, trials), 1e-10);
    }
    {
        double worst = 0.0;
        bool searches_ok = true;
        for (const double alpha : {0.0, 0.3, 0.5, 0.7, 1.0}) {
            const CovariantChannel ch(d, alpha);
            const WorstCaseReport rep = worst_case_fidelity(
                [&ch](const ComplexMatrix& p) { return channel_apply(ch, p); }, d, root, 512,
                20000);
            worst = std::max(worst, std::abs(rep.value - wc_fidelity_closed(ch)));
            searches_ok = searches_ok && !rep.budget_exhausted;
        }
        cl.residual("worst-case closed vs search", worst, tols.opt);
        cl.require("worst-case search budget", searches_ok);
    }
    if (d == 2) {
        const CovariantChannel ch(2, 0.5, +1);
        const ComplexMatrix v = build_isometry(ch);
        const double c1 = ch.c1(), c2 = ch.c2();
        const double rt2 = std::sqrt(2.0), rt3 = std::sqrt(3.0);
        ComplexMatrix golden(8, 2);
        golden(0, 0) = (c1 - c2 / rt3) / rt2;
        golden(3, 0) = (c1 + c2 / rt3) / rt2;
        golden(6, 0) = -2.0 * c2 / (rt3 * rt2);
        golden(1, 1) = -2.0 * c2 / (rt3 * rt2);
        golden(4, 1) = (c1 + c2 / rt3) / rt2;
        golden(7, 1) = (c1 - c2 / rt3) / rt2;
        cl.residual("golden isometry entries", max_abs_diff(v, golden), 1e-12);
        cl.residual("worst-case value at alpha=1/2",
                    std::abs(wc_fidelity_closed(ch) - 2.0 / 3.0), 1e-12);
    }

    return finish_suite(suite_header("channels", d, seed, trials), cl);
}

// --- verify povm ---

inline SuiteResult verify_povm(std::size_t d, std::uint64_t n, std::uint64_t seed, unsigned jobs,
                               const Tolerances& tols) {
    const double dd = static_cast<double>(d);
    Rng root(seed);
    CheckList cl;

    {
        double worst_psd = 0.0, worst_norm = 0.0, worst_fid = 0.0;
        int which = 0;
        for (const double gamma : {0.0, 0.37, 1.0}) {
            const SeedCd s(d, gamma);
            const ComplexMatrix m = seed_cd_matrix(s);
            worst_psd = std::min(worst_psd, min_eigenvalue(m));
            const McScalar norm_mc = mc_scalar(
                root.split(20 + which), n,
                [&s, d](Rng& r) {
                    return response_density(s, std::norm(dot(haar_pure_state(r, d),
                                                             basis_vector(d, 0))));
                },
                jobs);
            worst_norm = std::max(worst_norm, std::abs(norm_mc.mean - 1.0) / (norm_mc.std_error + 1e-12));
            const McScalar fid_mc = mc_scalar(
                root.split(30 + which), n,
                [&s, d](Rng& r) {
                    const double t = std::norm(dot(haar_pure_state(r, d), basis_vector(d, 0)));
                    return t * response_density(s, t);
                },
                jobs);
            worst_fid = std::max(
                worst_fid, std::abs(fid_mc.mean - estimation_fidelity(d, gamma)) /
                               (fid_mc.std_error + 1e-12));
            ++which;
        }
        cl.add("estimation seed psd", worst_psd, tol::psd, worst_psd >= -tol::psd);
        cl.add("response normalization", worst_norm, 3.0, worst_norm <= 3.0);
        cl.add("mean outcome fidelity", worst_fid, 3.0, worst_fid <= 3.0);
    }
    cl.residual("adapted basis unitarity", unitarity_residual(adapted_basis(d)), 1e-12);
    {
        Rng r = root.split(2);
        double worst_psd = 0.0, worst_stab = 0.0, worst_gamma = 0.0;
        for (int t = 0; t < 20; ++t) {
            const SeedP0 s = random_seed_p0(r, d);
            const ComplexMatrix p0 = seed_p0_matrix(s);
            worst_psd = std::min(worst_psd, min_eigenvalue(p0));
            for (int k = 0; k < 3; ++k) {
                const ComplexMatrix rep = ancilla_rep(stabilizer_unitary(r, d));
                worst_stab = std::max(worst_stab, max_abs_diff(rep * p0 * rep.adjoint(), p0));
            }
            const double alpha = r.uniform();
            const CovariantChannel ch(d, alpha);
            const ComplexMatrix q0 = q0_from_seed(ch, s);
            worst_gamma = std::max(
                worst_gamma, std::abs(gamma_of(ch, s) - q0(0, 0).real() / dd));
            if (d == 2)
                worst_gamma = std::max(worst_gamma, max_abs_diff(q0, q0_closed_d2(alpha, s)));
        }
        cl.add("seed psd over random draws", worst_psd, tol::psd, worst_psd >= -tol::psd);
        cl.residual("stabilizer invariance", worst_stab, 1e-10);
        cl.residual("gamma pullback agreement", worst_gamma, 1e-10);
    }
    {
        Rng r = root.split(3);
        const SeedP0 s = random_seed_p0(r, d);
        const ComplexMatrix p0 = seed_p0_matrix(s);
        const McMatrix anc = mc_tensor_conjugation(root.split(4), p0, d, n, jobs);
        cl.zscore("outcome total (ancilla)",
                  max_abs_diff(anc.mean, ComplexMatrix::identity(d * d)), anc.std_error);

        const CovariantChannel ch(d, 0.31);
        const ComplexMatrix q0 = q0_from_seed(ch, s);
        const McMatrix sys = mc_average_conjugation(root.split(5), q0, n, jobs);
        cl.zscore("outcome total (system)", max_abs_diff(sys.mean, ComplexMatrix::identity(d)),
                  sys.std_error);

        const CVec psi0 = maximally_entangled_state(d);
        CVec perp = maximally_entangled_state(d);
        perp[0] -= std::sqrt(dd);
        scale(perp, Complex(1.0 / std::sqrt(dd - 1.0), 0.0));

        const McMatrix inv = mc_tensor_conjugation(root.split(6), projector(psi0), d, n, jobs);
        cl.zscore("invariant block average", max_abs_diff(inv.mean, projector(psi0)),
                  inv.std_error);

        ComplexMatrix perp_target = ComplexMatrix::identity(d * d);
        perp_target -= projector(psi0);
        perp_target *= Complex(1.0 / (dd * dd - 1.0), 0.0);
        const McMatrix pp = mc_tensor_conjugation(root.split(7), projector(perp), d, n, jobs);
        cl.zscore("perp block average", max_abs_diff(pp.mean, perp_target), pp.std_error);

        const McMatrix cross = mc_tensor_conjugation(root.split(8), outer(psi0, perp), d, n, jobs);
        cl.zscore("cross block average", max_abs_diff(cross.mean, ComplexMatrix(d * d, d * d)),
                  cross.std_error);
    }
    if (d == 2) {
        const double rt3 = std::sqrt(3.0);
        const SeedP0 opt(2, 3.0, rt3, 0.0, 0.0);
        ComplexMatrix golden(4, 4);
        golden(0, 0) = 2.0 - rt3;
        golden(0, 3) = -1.0;
        golden(3, 0) = -1.0;
        golden(3, 3) = 2.0 + rt3;
        cl.residual("golden optimal seed", max_abs_diff(seed_p0_matrix(opt), golden), 1e-12);

        double worst = 0.0;
        for (int ia = 0; ia <= 10; ++ia) {
            const double alpha = 0.05 * static_cast<double>(ia);
            const CovariantChannel ch(2, alpha);
            const double s = 2.0 * std::sqrt(std::max(alpha - alpha * alpha, 0.0));
            ComplexMatrix q_golden(2, 2);
            q_golden(0, 0) = 1.0 + s;
            q_golden(1, 1) = 1.0 - s;
            worst = std::max(worst, max_abs_diff(q0_from_seed(ch, opt), q_golden));
        }
        cl.residual("golden effective seed", worst, 1e-12);
    }
    if (d == 2) {
        double worst_apply = 0.0;
        bool inside = true;
        for (int il = 0; il <= 10; ++il) {
            const double lambda = static_cast<double>(il) / 10.0;
            const RotatingPolarizer pol{lambda};
            Rng r = root.split(9);
            for (int t = 0; t < 5; ++t) {
                const ComplexMatrix a = ginibre(r, 2, 2);
                worst_apply = std::max(worst_apply, max_abs_diff(pol.apply(a), pol.apply_via_average(a)));
            }
            const RegionClass c = region_classify(2, pol.transmission_fidelity(),
                                                  pol.estimation_fidelity(), tols.region);
            inside = inside && (c == RegionClass::region1 || c == RegionClass::region2_interior ||
                                c == RegionClass::boundary);
        }
        cl.residual("polarizer two-route agreement", worst_apply, 1e-12);
        cl.require("polarizer points inside region", inside);
        const RotatingPolarizer still{0.0};
        const RotatingPolarizer always{1.0};
        const double ep = std::abs(still.transmission_fidelity() - 1.0) +
                          std::abs(still.estimation_fidelity() - 0.5) +
                          std::abs(always.transmission_fidelity() - 2.0 / 3.0) +
                          std::abs(always.estimation_fidelity() - 2.0 / 3.0);
        cl.residual("polarizer endpoints", ep, 1e-12);
    }
    {
        Rng r = root.split(10);
        const SeedP0 s = random_seed_p0(r, d);
        const CovariantChannel ch(d, 0.3);
        const InstrumentReport rep = instrument_consistency(ch, s, root, n, 4, tols.eig);
        cl.residual("instrument dilation", rep.dilation_residual, 1e-10);
        cl.require("instrument outcome total", rep.normalization_pass);
        cl.residual("instrument partition vs channel", rep.partition_channel_residual,
                     rep.partition_channel_bound);
        cl.add("instrument partition positivity", rep.min_choi_eigenvalue, tol::psd,
               rep.min_choi_eigenvalue >= -tol::psd);
    }

    return finish_suite(suite_header("povm", d, seed, n), cl);
}

// --- verify tradeoff ---

inline SuiteResult verify_tradeoff(std::size_t d, std::uint64_t seed, const Tolerances& tols) {
    const double dd = static_cast<double>(d);
    Rng root(seed);
    CheckList cl;

    std::vector<double> alphas;
    for (int i = 0; i <= 20; ++i) alphas.push_back(static_cast<double>(i) / 20.0);
    alphas.push_back(1.0 / dd);
    alphas.push_back((dd - 1.0) / dd);

    {
        double worst_max = 0.0, worst_min = 0.0;
        for (const double alpha : alphas) {
            const CovariantChannel ch(d, alpha);
            worst_max = std::max(worst_max,
                                 std::abs(gamma_extremum_sliced(ch, true) - gamma_max(d, alpha)));
            worst_min = std::max(worst_min,
                                 std::abs(gamma_extremum_sliced(ch, false) - gamma_min(d, alpha)));
        }
        cl.residual("closed vs sliced search (max)", worst_max, tols.opt);
        cl.residual("closed vs sliced search (min)", worst_min, tols.opt);
    }
    {
        double worst_max = 0.0, worst_min = 0.0;
        int idx = 0;
        for (int i = 0; i <= 10; ++i) {
            const double alpha = static_cast<double>(i) / 10.0;
            const CovariantChannel ch(d, alpha);
            worst_max = std::max(worst_max, std::abs(gamma_extremum_unreduced(ch, true, root.split(100 + idx), 24) -
                                                     gamma_max(d, alpha)));
            worst_min = std::max(worst_min, std::abs(gamma_extremum_unreduced(ch, false, root.split(200 + idx), 24) -
                                                     gamma_min(d, alpha)));
            ++idx;
        }
        cl.residual("closed vs unreduced search (max)", worst_max, tols.opt);
        cl.residual("closed vs unreduced search (min)", worst_min, tols.opt);
    }
    {
        double worst_attain = 0.0, worst_pullback = 0.0;
        for (const double alpha : alphas) {
            const CovariantChannel ch(d, alpha);
            const SeedP0 smax = gamma_max_seed(d, alpha);
            const SeedP0 smin = gamma_min_seed(d, alpha);
            worst_attain = std::max(worst_attain,
                                    std::abs(gamma_of(ch, smax) - gamma_max(d, alpha)));
            worst_attain = std::max(worst_attain,
                                    std::abs(gamma_of(ch, smin) - gamma_min(d, alpha)));
            worst_pullback = std::max(
                worst_pullback,
                std::abs(q0_from_seed(ch, smax)(0, 0).real() / dd - gamma_max(d, alpha)));
            worst_pullback = std::max(
                worst_pullback,
                std::abs(q0_from_seed(ch, smin)(0, 0).real() / dd - gamma_min(d, alpha)));
        }
        cl.residual("extremal seeds attain closed values", worst_attain, 1e-12);
        cl.residual("extremal seeds pull back through dilation", worst_pullback, 1e-10);
    }
    {
        double worst_arc = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const double alpha = (dd - 1.0) / dd * static_cast<double>(i) / 20.0;
            const double f_t = transmission_fidelity(d, alpha);
            const double f_e = estimation_fidelity(d, gamma_max(d, alpha));
            worst_arc = std::max(worst_arc, std::abs(ellipse_residual(d, f_t, f_e)));
        }
        cl.residual("upper arc on ellipse", worst_arc, tols.region);
    }
    if (d == 2) {
        Rng r = root.split(11);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const double f_t = r.uniform(0.0, 1.2);
            const double f_e = r.uniform(0.0, 1.2);
            worst = std::max(worst,
                             std::abs(ellipse_residual(2, f_t, f_e) - ellipse_residual_d2(f_t, f_e)));
        }
        cl.residual("ellipse forms agree", worst, 1e-12);

        bool classes_ok = true;
        classes_ok = classes_ok && region_classify(2, 0.6, 0.55, tols.region) == RegionClass::region1;
        classes_ok = classes_ok &&
                     region_classify(2, 5.0 / 6.0, 7.0 / 12.0, tols.region) == RegionClass::region2_interior;
        classes_ok = classes_ok && region_classify(2, 2.0 / 3.0, 2.0 / 3.0, tols.region) == RegionClass::boundary;
        classes_ok = classes_ok && region_classify(2, 1.0, 0.5, tols.region) == RegionClass::boundary;
        classes_ok = classes_ok && region_classify(2, 0.95, 0.7, tols.region) == RegionClass::outside;
        cl.require("classification goldens", classes_ok);
    }
    {
        const std::vector<CurvePoint> upper = boundary_curve(d, 3);
        const std::vector<CurvePoint> lower = lower_curve(d, 3);
        double ep = std::abs(upper[0].f_t - 1.0) + std::abs(upper[0].f_e - 1.0 / dd);
        ep += std::abs(upper[2].f_t - 1.0 / (dd + 1.0)) + std::abs(upper[2].f_e - 2.0 / (dd + 1.0));
        ep += std::abs(lower[2].f_t - 1.0 / (dd + 1.0)) + std::abs(lower[2].f_e - 1.0 / (dd + 1.0));
        cl.residual("curve endpoints", ep, 1e-12);

        const double corner_alpha = (dd - 1.0) / dd;
        const double corner_ft = transmission_fidelity(d, corner_alpha);
        const double corner_fe = estimation_fidelity(d, gamma_max(d, corner_alpha));
        cl.residual("curve corner",
                     std::abs(corner_ft - 2.0 / (dd + 1.0)) + std::abs(corner_fe - 2.0 / (dd + 1.0)),
                     1e-12);
    }
    {
        cl.residual("cloning bound (1 -> 2 qubits)", std::abs(werner_bound(1, 2, 2) - 5.0 / 6.0),
                     1e-12);
        cl.residual("cloning bound asymptote",
                     std::abs(werner_bound(1, 1000000000ull, 2) - 2.0 / 3.0), 1e-8);
        double worst_mono = 0.0;
        double prev = werner_bound(1, 1, 2);
        for (std::uint64_t m = 2; m <= 20; ++m) {
            const double cur = werner_bound(1, m, 2);
            worst_mono = std::max(worst_mono, cur - prev);
            prev = cur;
        }
        cl.add("cloning bound monotone in M", worst_mono, 1e-12, worst_mono <= 1e-12);
    }

    return finish_suite(suite_header("tradeoff", d, seed, 0), cl);
}

// --- emitters ---

inline std::string curve_csv(std::size_t d, std::size_t points, std::uint64_t seed,
                             const Tolerances& tols) {
    std::string out = csv_comment(seed, points, kVersion) + "\n";
    out += "alpha,f_t,f_e_max,f_e_min,on_boundary\n";
    for (const TradeoffPoint& p : tradeoff_curve(d, points, tols.region))
        out += csv_row({format_double(p.alpha), format_double(p.f_t), format_double(p.f_e_max),
                        format_double(p.f_e_min), p.on_boundary ? "1" : "0"}) +
               "\n";
    return out;
}

inline std::string classify_json(std::size_t d, double f_t, double f_e, const Tolerances& tols) {
    Json j = Json::object();
    j.set("d", Json::uinteger(d));
    j.set("f_t", Json::number(f_t));
    j.set("f_e", Json::number(f_e));
    j.set("class", Json::string(region_class_name(region_classify(d, f_t, f_e, tols.region))));
    return j.dump();
}

inline std::string cloner_csv(std::size_t points, std::uint64_t seed) {
    if (points < 2) throw OutOfRangeError("cloner table needs at least 2 points");
    std::string out = csv_comment(seed, points, kVersion) + "\n";
    out += "alpha,branch,f_a,f_b\n";
    for (std::size_t i = 0; i < points; ++i) {
        const double alpha = static_cast<double>(i) / static_cast<double>(points - 1);
        for (const int sign : {-1, +1}) {
            const CloneFidelities f = clone_fidelities(PauliCloner(alpha, sign));
            out += csv_row({format_double(alpha), sign < 0 ? "-1" : "1", format_double(f.f_a),
                            format_double(f.f_b)}) +
                   "\n";
        }
    }
    return out;
}

inline std::string transmit_csv(std::size_t points, std::uint64_t seed) {
    std::string out = csv_comment(seed, points, kVersion) + "\n";
    out += "p,alpha_star,f_cl,f_dir,f_qm\n";
    for (const TransmissionReport& r : strategy_table(points))
        out += csv_row({format_double(r.p), format_double(r.alpha_star), format_double(r.f_cl),
                        format_double(r.f_dir), format_double(r.f_qm)}) +
               "\n";
    return out;
}

inline std::string channel_dump_json(std::size_t d, double alpha, int sign) {
    const CovariantChannel ch(d, alpha, sign);
    const ComplexMatrix v = build_isometry(ch);
    Json j = Json::object();
    j.set("version", Json::string(kVersion));
    j.set("d", Json::uinteger(d));
    j.set("alpha", Json::number(alpha));
    j.set("c2_sign", Json::integer(sign));
    j.set("f_wc", Json::number(wc_fidelity_closed(ch)));
    j.set("isometry", matrix_to_json(v));
    j.set("choi", matrix_to_json(choi_matrix(ch)));
    Json kraus = Json::array();
    for (const ComplexMatrix& k : kraus_from_isometry(v)) kraus.push(matrix_to_json(k));
    j.set("kraus", std::move(kraus));
    return j.dump();
}

inline std::string channel_dump_csv(std::size_t d, double alpha, int sign, std::uint64_t seed) {
    const CovariantChannel ch(d, alpha, sign);
    const ComplexMatrix v = build_isometry(ch);
    std::string out = csv_comment(seed, 0, kVersion) + "\n";
    out += "matrix,row,col,re,im\n";
    auto emit = [&out](const std::string& name, const ComplexMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                out += csv_row({name, std::to_string(i), std::to_string(j),
                                format_double(m(i, j).real()), format_double(m(i, j).imag())}) +
                       "\n";
    };
    emit("V", v);
    emit("choi", choi_matrix(ch));
    const std::vector<ComplexMatrix> kraus = kraus_from_isometry(v);
    for (std::size_t m = 0; m < kraus.size(); ++m) emit("K" + std::to_string(m), kraus[m]);
    return out;
}

struct PovmCheckResult {
    std::string text;
    bool pass = true;
};

inline PovmCheckResult povm_check(std::size_t d, double alpha, double b, double c, double e,
                                  double f, bool f_given, double g, std::uint64_t n,
                                  std::uint64_t seed, const Tolerances& tols) {
    const SeedP0 s = f_given ? SeedP0(d, b, Complex(c, 0.0), e, f, g)
                             : SeedP0::with_f_solved(d, b, Complex(c, 0.0), e, g);
    const CovariantChannel ch(d, alpha);
    const Rng root(seed);
    const InstrumentReport rep = instrument_consistency(ch, s, root, n, 4, tols.eig);
    const double gamma = gamma_of(ch, s);

    Json j = Json::object();
    j.set("version", Json::string(kVersion));
    j.set("seed", Json::uinteger(seed));
    j.set("samples", Json::uinteger(n));
    j.set("d", Json::uinteger(d));
    j.set("alpha", Json::number(alpha));
    Json sj = Json::object();
    sj.set("b", Json::number(s.b));
    sj.set("c", Json::number(s.c.real()));
    sj.set("e", Json::number(s.e));
    sj.set("f", Json::number(s.f));
    sj.set("g", Json::number(s.g));
    j.set("seed_blocks", std::move(sj));
    j.set("gamma", Json::number(gamma));
    j.set("f_e", Json::number(estimation_fidelity(d, gamma)));
    j.set("f_t", Json::number(transmission_fidelity(d, alpha)));
    j.set("q0", matrix_to_json(q0_from_seed(ch, s)));
    Json ij = Json::object();
    ij.set("dilation_residual", Json::number(rep.dilation_residual));
    ij.set("normalization_max_dev", Json::number(rep.normalization_max_dev));
    ij.set("normalization_std_error", Json::number(rep.normalization_std_error));
    ij.set("normalization_pass", Json::boolean(rep.normalization_pass));
    ij.set("partition_channel_residual", Json::number(rep.partition_channel_residual));
    ij.set("partition_channel_bound", Json::number(rep.partition_channel_bound));
    ij.set("min_choi_eigenvalue", Json::number(rep.min_choi_eigenvalue));
    ij.set("pass", Json::boolean(rep.passed));
    j.set("instrument", std::move(ij));
    j.set("pass", Json::boolean(rep.passed));
    return PovmCheckResult{j.dump(), rep.passed};
}

struct ReportResult {
    std::string text;
    bool pass = true;
};

inline ReportResult report_all(std::uint64_t n, std::uint64_t seed, unsigned jobs,
                               const Tolerances& tols) {
    Json suites = Json::array();
    bool pass = true;
    auto take = [&suites, &pass](SuiteResult r) {
        pass = pass && r.pass;
        suites.push(std::move(r.report));
    };
    for (const std::size_t d : {2, 3}) {
        take(verify_haar(d, n, seed, jobs));
        take(verify_fidelity(d, 400, seed, tols));
        take(verify_channels(d, 200, seed, tols));
        take(verify_povm(d, n, seed, jobs, tols));
        take(verify_tradeoff(d, seed, tols));
    }
    Json j = Json::object();
    j.set("version", Json::string(kVersion));
    j.set("seed", Json::uinteger(seed));
    j.set("samples", Json::uinteger(n));
    j.set("pass", Json::boolean(pass));
    j.set("suites", std::move(suites));
    return ReportResult{j.dump(), pass};
}

// --- entry point ---

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"estimation/transmission trade-off toolkit for covariant channels"};
    app.name("qtrade");
    app.require_subcommand(1);

    std::uint64_t seed = seed_fallback();
    std::uint64_t samples = 50000;
    std::uint64_t trials = 1000;
    unsigned jobs = 1;
    std::size_t d = 2;
    std::size_t points = 101;
    std::string out_path, config_path, format = "json";
    double alpha = 0.0, f_t = 0.0, f_e = 0.0;
    double seed_b = 0.0, seed_c = 0.0, seed_e = 0.0, seed_f = 0.0, seed_g = 0.0;
    int sign = +1;

    int code = 0;
    std::string payload;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "random seed (falls back to QTRADE_SEED, then 42)");
        sub->add_option("--out", out_path, "write output to this file instead of stdout");
        sub->add_option("--config", config_path, "JSON file with tolerance overrides");
    };

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->require_subcommand(1);
    CLI::App* v_haar = verify->add_subcommand("haar", "sampling and moment identities");
    CLI::App* v_fid = verify->add_subcommand("fidelity", "fidelity axioms and certificates");
    CLI::App* v_chan = verify->add_subcommand("channels", "channel family consistency");
    CLI::App* v_povm = verify->add_subcommand("povm", "covariant measurement consistency");
    CLI::App* v_trade = verify->add_subcommand("tradeoff", "trade-off curve consistency");
    for (CLI::App* sub : {v_haar, v_fid, v_chan, v_povm, v_trade}) {
        add_common(sub);
        sub->add_option("--d", d, "Hilbert space dimension")->check(CLI::Range(std::size_t{2}, std::size_t{8}));
    }
    v_haar->add_option("--samples", samples, "Monte Carlo sample count");
    v_haar->add_option("--jobs", jobs, "worker threads for Monte Carlo sharding");
    v_fid->add_option("--trials", trials, "randomized property trials");
    v_chan->add_option("--trials", trials, "randomized covariance trials");
    v_povm->add_option("--samples", samples, "Monte Carlo sample count");
    v_povm->add_option("--jobs", jobs, "worker threads for Monte Carlo sharding");

    CLI::App* trade = app.add_subcommand("tradeoff", "trade-off curve tools");
    trade->require_subcommand(1);
    CLI::App* t_curve = trade->add_subcommand("curve", "emit the attainable-region curves as CSV");
    add_common(t_curve);
    t_curve->add_option("--d", d, "Hilbert space dimension")->check(CLI::Range(std::size_t{2}, std::size_t{8}));
    t_curve->add_option("--points", points, "number of grid points");
    CLI::App* t_class = trade->add_subcommand("classify", "classify a point of the fidelity plane");
    add_common(t_class);
    t_class->add_option("--d", d, "Hilbert space dimension")->check(CLI::Range(std::size_t{2}, std::size_t{8}));
    t_class->add_option("--ft", f_t, "transmission fidelity")->required();
    t_class->add_option("--fe", f_e, "estimation fidelity")->required();

    CLI::App* chan = app.add_subcommand("channel", "channel family tools");
    chan->require_subcommand(1);
    CLI::App* c_dump = chan->add_subcommand("dump", "emit isometry, Choi matrix, and Kraus set");
    add_common(c_dump);
    c_dump->add_option("--d", d, "Hilbert space dimension")->check(CLI::Range(std::size_t{2}, std::size_t{8}));
    c_dump->add_option("--alpha", alpha, "measurement strength in [0, 1]")->required();
    c_dump->add_option("--sign", sign, "sign branch of c2 (+1 or -1)");
    c_dump->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    CLI::App* povm = app.add_subcommand("povm", "measurement seed tools");
    povm->require_subcommand(1);
    CLI::App* p_check = povm->add_subcommand("check", "validate a seed as a measuring instrument");
    add_common(p_check);
    p_check->add_option("--d", d, "Hilbert space dimension")->check(CLI::Range(std::size_t{2}, std::size_t{8}));
    p_check->add_option("--alpha", alpha, "measurement strength in [0, 1]")->required();
    p_check->add_option("--b", seed_b, "psi0-perp block weight")->required();
    p_check->add_option("--c", seed_c, "off-diagonal coupling (real)");
    p_check->add_option("--e", seed_e, "e1 (x) complement block weight");
    CLI::Option* f_opt = p_check->add_option("--f", seed_f, "complement (x) e1 block weight (solved from the normalization when omitted)");
    p_check->add_option("--g", seed_g, "double-complement block weight");
    p_check->add_option("--samples", samples, "Monte Carlo sample count");

    CLI::App* apps = app.add_subcommand("apps", "worked applications");
    apps->require_subcommand(1);
    CLI::App* a_clone = apps->add_subcommand("cloner", "clone fidelities of both sign branches as CSV");
    add_common(a_clone);
    a_clone->add_option("--points", points, "number of grid points");
    CLI::App* a_trans = apps->add_subcommand("transmit", "optimal partial-measurement transmission as CSV");
    add_common(a_trans);
    a_trans->add_option("--points", points, "number of grid points");

    CLI::App* report = app.add_subcommand("report", "aggregate verification");
    report->require_subcommand(1);
    CLI::App* r_all = report->add_subcommand("all", "run every suite at d = 2 and 3");
    add_common(r_all);
    r_all->add_option("--samples", samples, "Monte Carlo sample count");
    r_all->add_option("--jobs", jobs, "worker threads for Monte Carlo sharding");

    v_haar->callback([&] {
        const SuiteResult r = verify_haar(d, samples, seed, jobs);
        payload = r.report.dump();
        code = r.pass ? 0 : 1;
    });
    v_fid->callback([&] {
        const SuiteResult r = verify_fidelity(d, trials, seed, tolerances_from_config(config_path));
        payload = r.report.dump();
        code = r.pass ? 0 : 1;
    });
    v_chan->callback([&] {
        const SuiteResult r = verify_channels(d, trials, seed, tolerances_from_config(config_path));
        payload = r.report.dump();
        code = r.pass ? 0 : 1;
    });
    v_povm->callback([&] {
        const SuiteResult r = verify_povm(d, samples, seed, jobs, tolerances_from_config(config_path));
        payload = r.report.dump();
        code = r.pass ? 0 : 1;
    });
    v_trade->callback([&] {
        const SuiteResult r = verify_tradeoff(d, seed, tolerances_from_config(config_path));
        payload = r.report.dump();
        code = r.pass ? 0 : 1;
    });
    t_curve->callback([&] { payload = curve_csv(d, points, seed, tolerances_from_config(config_path)); });
    t_class->callback([&] { payload = classify_json(d, f_t, f_e, tolerances_from_config(config_path)); });
    c_dump->callback([&] {
        payload = format == "csv" ? channel_dump_csv(d, alpha, sign, seed)
                                  : channel_dump_json(d, alpha, sign);
    });
    p_check->callback([&] {
        const PovmCheckResult r = povm_check(d, alpha, seed_b, seed_c, seed_e, seed_f,
                                             f_opt->count() > 0, seed_g, samples, seed,
                                             tolerances_from_config(config_path));
        payload = r.text;
        code = r.pass ? 0 : 1;
    });
    a_clone->callback([&] { payload = cloner_csv(points, seed); });
    a_trans->callback([&] { payload = transmit_csv(points, seed); });
    r_all->callback([&] {
        const ReportResult r = report_all(samples, seed, jobs, tolerances_from_config(config_path));
        payload = r.text;
        code = r.pass ? 0 : 1;
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (out_path.empty()) {
        out << payload;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot open " << out_path << "\n";
            return 2;
        }
        f << payload;
        err << "wrote " << out_path << "\n";
    }
    return code;
}

}  // namespace qtrade::cli
