// Acceptance gate: twelve end-to-end criteria, one pass/fail line each.
// Tolerances are pinned here and intentionally not configurable.

#include "qtrade/apps.hpp"
#include "qtrade/channels.hpp"
#include "qtrade/cli.hpp"
#include "qtrade/density.hpp"
#include "qtrade/haar.hpp"
#include "qtrade/metrics.hpp"
#include "qtrade/povm.hpp"
#include "qtrade/tradeoff.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace qtrade;

namespace {

constexpr double kDilationTol = 1e-10;
constexpr double kGoldenTol = 1e-12;
constexpr double kWcTol = 1e-6;
constexpr double kPullbackTol = 1e-10;
constexpr double kOptTol = 1e-6;
constexpr double kArcTol = 1e-9;
constexpr double kFormTol = 1e-12;
constexpr double kCloneTol = 1e-10;
constexpr double kSymmetricTol = 1e-8;
constexpr double kTransmitTol = 1e-8;
constexpr double kWernerTol = 1e-8;
constexpr double kSigmaLimit = 3.0;

bool g_all_pass = true;

void report(int index, const std::string& label, bool pass) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", index, label.c_str());
    if (!pass) g_all_pass = false;
}

ComplexMatrix random_operand(Rng& rng, std::size_t d) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.complex_normal();
    return m;
}

// 1. Pure-state overlap moments against the invariant measure, within three
//    standard errors for d in {2, 3, 4, 5}.
bool criterion_overlap_moments() {
    const Rng root(42);
    const std::uint64_t n = 20000;
    bool ok = true;
    for (const std::size_t d : {2, 3, 4, 5}) {
        const double dd = static_cast<double>(d);
        const McScalar m1 = mc_scalar(root.split(d), n, [d](Rng& r) {
            return std::norm(dot(haar_pure_state(r, d), haar_pure_state(r, d)));
        });
        ok = ok && std::abs(dd * m1.mean - 1.0) <= kSigmaLimit * dd * m1.std_error;

        const McScalar m2 = mc_scalar(root.split(100 + d), n, [d](Rng& r) {
            const double t = std::norm(dot(haar_pure_state(r, d), haar_pure_state(r, d)));
            return t * t;
        });
        ok = ok && std::abs(dd * m2.mean - 2.0 / (dd + 1.0)) <= kSigmaLimit * dd * m2.std_error;
    }
    return ok;
}

// 2. The isometric dilation reproduces the channel on random operands for
//    d in {2, 3, 4} across the alpha range, and the d = 2 isometry matches
//    its golden entries.
bool criterion_dilation() {
    Rng rng(7);
    double worst = 0.0;
    for (const std::size_t d : {2, 3, 4}) {
        for (int ia = 0; ia <= 20; ++ia) {
            const double alpha = static_cast<double>(ia) / 20.0;
            const CovariantChannel ch(d, alpha);
            const ComplexMatrix v = build_isometry(ch);
            for (int trial = 0; trial < 20; ++trial) {
                const ComplexMatrix a = random_operand(rng, d);
                worst = std::max(worst,
                                 max_abs_diff(heisenberg_from_isometry(v, a), channel_apply(ch, a)));
            }
        }
    }
    bool ok = worst <= kDilationTol;

    const ComplexMatrix v = build_isometry(CovariantChannel(2, 0.5, +1));
    const double c1 = std::sqrt(0.5), c2 = std::sqrt(0.5);
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    ComplexMatrix golden(8, 2);
    golden(0, 0) = (c1 - c2 / r3) / r2;
    golden(3, 0) = (c1 + c2 / r3) / r2;
    golden(6, 0) = -2.0 * c2 / (r3 * r2);
    golden(1, 1) = -2.0 * c2 / (r3 * r2);
    golden(4, 1) = (c1 + c2 / r3) / r2;
    golden(7, 1) = (c1 - c2 / r3) / r2;
    ok = ok && max_abs_diff(v, golden) <= kGoldenTol;
    return ok;
}

// 3. Worst-case channel fidelity: closed form against the search over pure
//    inputs, and the pinned value 2/3 at d = 2, alpha = 1/2.
bool criterion_worst_case() {
    const Rng root(42);
    bool ok = std::abs(wc_fidelity_closed(CovariantChannel(2, 0.5)) - 2.0 / 3.0) <= kGoldenTol;
    for (const std::size_t d : {2, 3}) {
        for (const double alpha : {0.0, 0.3, 0.5, 0.7, 1.0}) {
            const CovariantChannel ch(d, alpha);
            const WorstCaseReport rep = worst_case_fidelity(
                [&ch](const ComplexMatrix& a) { return channel_apply(ch, a); }, d,
                root.split(d * 100 + static_cast<std::uint64_t>(alpha * 10)), 512, 20000);
            ok = ok && std::abs(rep.value - wc_fidelity_closed(ch)) <= kWcTol;
        }
    }
    return ok;
}

// 4. The scalar reduction of a seed agrees with the pulled-back effect on
//    1000 random admissible seeds.
bool criterion_pullback() {
    Rng rng(11);
    double worst = 0.0;
    for (const std::size_t d : {2, 3}) {
        const double dd = static_cast<double>(d);
        for (int trial = 0; trial < 500; ++trial) {
            const SeedP0 s = random_seed_p0(rng, d);
            const CovariantChannel ch(d, rng.uniform());
            const ComplexMatrix q0 = q0_from_seed(ch, s);
            worst = std::max(worst, std::abs(gamma_of(ch, s) - q0(0, 0).real() / dd));
        }
    }
    return worst <= kPullbackTol;
}

// 5. Closed-form extremal gammas against the unreduced direct search over
//    the full seed family, on a 21-point alpha grid plus both branch points.
bool criterion_gamma_extrema() {
    const Rng root(42);
    double worst = 0.0;
    for (const std::size_t d : {2, 3}) {
        const double dd = static_cast<double>(d);
        std::vector<double> alphas;
        for (int ia = 0; ia <= 20; ++ia) alphas.push_back(static_cast<double>(ia) / 20.0);
        alphas.push_back(1.0 / dd);
        alphas.push_back((dd - 1.0) / dd);
        std::uint64_t idx = 0;
        for (const double alpha : alphas) {
            const CovariantChannel ch(d, alpha);
            worst = std::max(worst, std::abs(gamma_extremum_unreduced(ch, true, root.split(d * 1000 + idx), 24) -
                                             gamma_max(d, alpha)));
            worst = std::max(worst, std::abs(gamma_extremum_unreduced(ch, false, root.split(d * 2000 + idx), 24) -
                                             gamma_min(d, alpha)));
            ++idx;
        }
    }
    return worst <= kOptTol;
}

// 6. The optimal arc lies on the region's elliptical boundary, the two
//    ellipse forms agree at d = 2, and the curve endpoints land where they
//    must.
bool criterion_region() {
    bool ok = true;
    for (const std::size_t d : {2, 3}) {
        const double knee = (static_cast<double>(d) - 1.0) / static_cast<double>(d);
        for (int ia = 0; ia <= 20; ++ia) {
            const double alpha = knee * static_cast<double>(ia) / 20.0;
            const double f_t = transmission_fidelity(d, alpha);
            const double f_e = estimation_fidelity(d, gamma_max(d, alpha));
            ok = ok && std::abs(ellipse_residual(d, f_t, f_e)) <= kArcTol;
        }
    }

    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const double f_t = rng.uniform(0.0, 1.0);
        const double f_e = rng.uniform(0.0, 1.0);
        ok = ok && std::abs(ellipse_residual(2, f_t, f_e) - ellipse_residual_d2(f_t, f_e)) <=
                       kFormTol;
    }

    const std::vector<TradeoffPoint> curve = tradeoff_curve(2, 21);
    ok = ok && std::abs(curve.front().f_t - 1.0) <= kGoldenTol;
    ok = ok && std::abs(curve.front().f_e_max - 0.5) <= kGoldenTol;
    ok = ok && std::abs(curve[10].f_t - 2.0 / 3.0) <= kGoldenTol;
    ok = ok && std::abs(curve[10].f_e_max - 2.0 / 3.0) <= kGoldenTol;
    ok = ok && std::abs(curve.back().f_t - 1.0 / 3.0) <= kGoldenTol;
    ok = ok && std::abs(curve.back().f_e_max - 2.0 / 3.0) <= kGoldenTol;
    ok = ok && region_classify(2, 1.0, 0.5) == RegionClass::boundary;
    ok = ok && region_classify(2, 2.0 / 3.0, 2.0 / 3.0) == RegionClass::boundary;
    ok = ok && region_classify(2, 1.0 / 3.0, 2.0 / 3.0) == RegionClass::outside;
    ok = ok && !curve.back().on_boundary;
    return ok;
}

// 7. The optimal qubit seed equals its golden matrix and pulls back to
//    diag(1 +- 2 sqrt(alpha(1-alpha))) below the saturation point.
bool criterion_optimal_seed() {
    const double r3 = std::sqrt(3.0);
    const SeedP0 opt(2, 3.0, r3, 0.0, 0.0);
    ComplexMatrix golden(4, 4);
    golden(0, 0) = 2.0 - r3;
    golden(3, 3) = 2.0 + r3;
    golden(0, 3) = -1.0;
    golden(3, 0) = -1.0;
    bool ok = max_abs_diff(seed_p0_matrix(opt), golden) <= kGoldenTol;

    for (int ia = 0; ia <= 10; ++ia) {
        const double alpha = 0.05 * static_cast<double>(ia);
        const double s = 2.0 * std::sqrt(alpha * (1.0 - alpha));
        ComplexMatrix q_golden(2, 2);
        q_golden(0, 0) = 1.0 + s;
        q_golden(1, 1) = 1.0 - s;
        ok = ok && max_abs_diff(q0_from_seed(CovariantChannel(2, alpha), opt), q_golden) <=
                       kGoldenTol;
    }
    return ok;
}

// 8. The rotating-polarizer model's fidelity pairs run from (1, 1/2) to
//    (2/3, 2/3) without ever leaving the attainable region.
bool criterion_polarizer() {
    const RotatingPolarizer off(0.0);
    const RotatingPolarizer full(1.0);
    bool ok = std::abs(off.transmission_fidelity() - 1.0) <= kGoldenTol &&
              std::abs(off.estimation_fidelity() - 0.5) <= kGoldenTol &&
              std::abs(full.transmission_fidelity() - 2.0 / 3.0) <= kGoldenTol &&
              std::abs(full.estimation_fidelity() - 2.0 / 3.0) <= kGoldenTol;
    for (int il = 0; il <= 20; ++il) {
        const RotatingPolarizer pol(static_cast<double>(il) / 20.0);
        ok = ok && region_classify(2, pol.transmission_fidelity(), pol.estimation_fidelity()) !=
                       RegionClass::outside;
    }
    return ok;
}

// 9. Cloner: closed-form fidelities against the explicit output state, the
//    symmetric point, the Bell weights of the reference pair, and the
//    repartition amplitude tables.
bool criterion_cloner() {
    bool ok = true;
    for (int ia = 0; ia <= 10; ++ia) {
        const double alpha = static_cast<double>(ia) / 10.0;
        for (const int sign : {+1, -1}) {
            const PauliCloner cl(alpha, sign);
            const CloneFidelities f = clone_fidelities(cl);
            ok = ok && std::abs(f.f_a - (1.0 - 2.0 * alpha / 3.0)) <= kCloneTol;
            ok = ok && std::abs(f.f_a_explicit - f.f_a) <= kCloneTol;
            ok = ok && std::abs(f.f_b_explicit - f.f_b) <= kCloneTol;

            const BellWeights w = bell_weights_ra(cloner_output_state(cl));
            ok = ok && w.off_bell_residual <= kCloneTol;
            ok = ok && std::abs(w.weights[0] - (1.0 - alpha)) <= kCloneTol;
            for (std::size_t k = 1; k < 4; ++k)
                ok = ok && std::abs(w.weights[k] - alpha / 3.0) <= kCloneTol;

            const RepartitionAmplitudes rep = repartition_amplitudes(cloner_output_state(cl));
            const double nu = cl.nu(), mu = cl.mu();
            ok = ok && std::abs(rep.rb_ac[0] - Complex(nu / 2.0 + mu, 0.0)) <= kCloneTol;
            for (std::size_t k = 1; k < 4; ++k)
                ok = ok && std::abs(rep.rb_ac[k] - Complex(nu / 2.0, 0.0)) <= kCloneTol;
            for (std::size_t k = 0; k < 3; ++k)
                ok = ok && std::abs(rep.rc_ab[k] - Complex((nu + mu) / 2.0, 0.0)) <= kCloneTol;
            ok = ok && std::abs(rep.rc_ab[3] - Complex((nu - mu) / 2.0, 0.0)) <= kCloneTol;
        }
    }

    const CloneFidelities sym = clone_fidelities(PauliCloner(0.25, -1));
    ok = ok && std::abs(sym.f_a - 5.0 / 6.0) <= kSymmetricTol;
    ok = ok && std::abs(sym.f_b - 5.0 / 6.0) <= kSymmetricTol;
    return ok;
}

// 10. Partial-measurement transmission: closed-form optimum against the
//     numeric maximizer on a 101-point grid, endpoints, and the strategy
//     dominance ordering.
bool criterion_transmission() {
    bool ok = true;
    for (int ip = 0; ip <= 100; ++ip) {
        const double p = static_cast<double>(ip) / 100.0;
        const TransmissionReport rep = transmission_optimize(p);
        ok = ok && std::abs(rep.alpha_star_numeric - rep.alpha_star) <= kTransmitTol;
        ok = ok && std::abs(rep.f_cl_numeric - rep.f_cl) <= kTransmitTol;
        ok = ok && rep.f_qm >= rep.f_cl - kGoldenTol;
        ok = ok && rep.f_cl >= rep.f_dir - kGoldenTol;
        ok = ok && rep.f_cl >= rep.f_meas - kGoldenTol;
    }
    const TransmissionReport never = transmission_optimize(0.0);
    ok = ok && std::abs(never.alpha_star - 0.5) <= kTransmitTol;
    ok = ok && std::abs(never.f_cl - 2.0 / 3.0) <= kTransmitTol;
    const TransmissionReport always = transmission_optimize(1.0);
    ok = ok && std::abs(always.alpha_star) <= kTransmitTol;
    ok = ok && std::abs(always.f_cl - 1.0) <= kTransmitTol;
    return ok;
}

// 11. Structural properties with zero tolerated violations over at least
//     1000 trials each: monotonicity, joint concavity in both forms, the
//     purification-overlap bound, Choi positivity, outcome-total
//     normalization, and the Robertson bound.
bool criterion_properties() {
    const Rng root(42);
    bool ok = true;

    for (const std::size_t d : {2, 3}) {
        const MonotonicityReport mono = monotonicity_probe(root.split(d), d, 500);
        ok = ok && mono.violations == 0;
        const ConcavityReport conc = strong_concavity_probe(root.split(10 + d), d, 3, 500);
        ok = ok && conc.violations_product_form == 0 && conc.violations_sqrt_form == 0;
    }

    {
        Rng rng(17);
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexMatrix rho = random_mixed_state(rng, 2);
            const ComplexMatrix sigma = random_mixed_state(rng, 2);
            const UhlmannReport rep = uhlmann_check(root.split(trial), rho, sigma, 100);
            ok = ok && rep.sampled_max <= rep.fidelity_value + 1e-9 && rep.gap_optimal < 1e-9;
        }
    }

    for (const std::size_t d : {2, 3}) {
        for (int ia = 0; ia <= 20; ++ia) {
            const CovariantChannel ch(d, static_cast<double>(ia) / 20.0);
            ok = ok && min_eigenvalue(choi_matrix(ch)) >= -1e-9;
        }
    }

    {
        Rng rng(23);
        const SeedP0 s = random_seed_p0(rng, 2);
        const ComplexMatrix q0 = q0_from_seed(CovariantChannel(2, 0.31), s);
        const McMatrix total = mc_average_conjugation(root.split(900), q0, 20000);
        ok = ok && max_abs_diff(total.mean, ComplexMatrix::identity(2)) <=
                       kSigmaLimit * total.std_error + 1e-12;
    }

    {
        Rng rng(29);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t d = (trial % 2 == 0) ? 2 : 3;
            ComplexMatrix g = random_operand(rng, d);
            const ComplexMatrix a = (g + g.adjoint()).hermitized();
            ComplexMatrix h = random_operand(rng, d);
            const ComplexMatrix b = (h + h.adjoint()).hermitized();
            ok = ok && uncertainty_probe(a, b, random_mixed_state(rng, d)).satisfied;
        }
    }
    return ok;
}

// 12. Symmetric cloning bound: the pinned 1 -> 2 qubit value and the
//     measure-and-prepare asymptote.
bool criterion_werner() {
    return std::abs(werner_bound(1, 2, 2) - 5.0 / 6.0) <= kWernerTol &&
           std::abs(werner_bound(1, 1000000000, 2) - 2.0 / 3.0) <= kWernerTol;
}

}  // namespace

int main() {
    report(1, "pure-state overlap moments match the invariant measure", criterion_overlap_moments());
    report(2, "isometric dilation reproduces the channel and its golden entries", criterion_dilation());
    report(3, "worst-case fidelity closed form matches the search", criterion_worst_case());
    report(4, "seed reduction agrees with the pulled-back effect", criterion_pullback());
    report(5, "extremal gammas match the unreduced search", criterion_gamma_extrema());
    report(6, "optimal arc and region geometry", criterion_region());
    report(7, "optimal qubit seed and its effective form", criterion_optimal_seed());
    report(8, "rotating polarizer stays attainable between its endpoints", criterion_polarizer());
    report(9, "cloner fidelities, Bell weights, and repartition tables", criterion_cloner());
    report(10, "transmission optimum and strategy dominance", criterion_transmission());
    report(11, "structural properties hold without violations", criterion_properties());
    report(12, "symmetric cloning bound values", criterion_werner());
    return g_all_pass ? 0 : 1;
}
