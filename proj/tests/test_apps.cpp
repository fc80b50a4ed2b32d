#include <catch2/catch_amalgamated.hpp>

#include "qtrade/apps.hpp"
#include "qtrade/haar.hpp"

#include <cmath>

using namespace qtrade;

TEST_CASE("pauli channel on a qubit", "[apps]") {
    Rng rng(42);
    const ComplexMatrix rho = random_mixed_state(rng, 2);

    SECTION("zero noise is the identity") {
        CHECK(max_abs_diff(pauli_channel_apply(rho, 0.0, 0.0, 0.0), rho) < 1e-15);
    }

    SECTION("uniform flips depolarize") {
        // Equal-weight Pauli noise at total strength 3/4 erases the state.
        const ComplexMatrix out = pauli_channel_apply(rho, 0.25, 0.25, 0.25);
        CHECK(max_abs_diff(out, maximally_mixed(2)) < 1e-12);
    }

    SECTION("trace and positivity are preserved") {
        const ComplexMatrix out = pauli_channel_apply(rho, 0.1, 0.2, 0.3);
        CHECK(std::abs(out.trace() - 1.0) < 1e-13);
        CHECK(min_eigenvalue(out) > -1e-12);
    }

    SECTION("weights must form a sub-probability vector") {
        CHECK_THROWS_AS(pauli_channel_apply(rho, 0.5, 0.4, 0.3), OutOfRangeError);
        CHECK_THROWS_AS(pauli_channel_apply(rho, -0.1, 0.0, 0.0), OutOfRangeError);
    }
}

TEST_CASE("bell basis", "[apps]") {
    const std::array<CVec, 4> bell = bell_basis();
    for (const CVec& b : bell) CHECK(std::abs(vec_norm(b) - 1.0) < 1e-15);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) CHECK(std::abs(dot(bell[i], bell[j])) < 1e-15);

    // Ordering: phi+, phi-, psi+, psi-.
    CHECK(std::abs(bell[0][0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(bell[1][3] + 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(bell[2][1] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(bell[3][2] + 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("cloner amplitudes", "[apps]") {
    SECTION("normalization identity of the two amplitudes") {
        for (const double alpha : {0.0, 0.3, 0.7, 1.0}) {
            for (const int sign : {+1, -1}) {
                const PauliCloner cl(alpha, sign);
                const double nu = cl.nu();
                const double mu = cl.mu();
                CHECK(std::abs(nu * nu + nu * mu + mu * mu - 1.0) < 1e-13);
            }
        }
    }

    SECTION("output state is normalized and matches the isometry route") {
        for (const double alpha : {0.0, 0.25, 0.5, 1.0}) {
            for (const int sign : {+1, -1}) {
                const PauliCloner cl(alpha, sign);
                const CVec direct = cloner_output_state(cl);
                REQUIRE(direct.size() == 16);
                CHECK(std::abs(vec_norm(direct) - 1.0) < 1e-13);
                const CVec via_isometry = cloner_output_from_isometry(cl);
                double dev = 0.0;
                for (std::size_t i = 0; i < 16; ++i)
                    dev = std::max(dev, std::abs(direct[i] - via_isometry[i]));
                CHECK(dev < 1e-12);
            }
        }
    }

    SECTION("reference-system pair is Bell diagonal with the channel weights") {
        for (const double alpha : {0.0, 0.4, 1.0}) {
            const PauliCloner cl(alpha);
            const BellWeights w = bell_weights_ra(cloner_output_state(cl));
            CHECK(w.off_bell_residual < 1e-12);
            CHECK(std::abs(w.weights[0] - (1.0 - alpha)) < 1e-10);
            for (std::size_t k = 1; k < 4; ++k)
                CHECK(std::abs(w.weights[k] - alpha / 3.0) < 1e-10);
        }
    }

    SECTION("repartition amplitudes are uniform across both regroupings") {
        const PauliCloner cl(0.37);
        const RepartitionAmplitudes rep = repartition_amplitudes(cloner_output_state(cl));
        const double nu = cl.nu();
        const double mu = cl.mu();

        CHECK(std::abs(rep.ra_bc[0] - Complex(nu + mu / 2.0, 0.0)) < 1e-12);
        for (std::size_t k = 1; k < 4; ++k)
            CHECK(std::abs(rep.ra_bc[k] - Complex(mu / 2.0, 0.0)) < 1e-12);

        CHECK(std::abs(rep.rb_ac[0] - Complex(nu / 2.0 + mu, 0.0)) < 1e-12);
        for (std::size_t k = 1; k < 4; ++k)
            CHECK(std::abs(rep.rb_ac[k] - Complex(nu / 2.0, 0.0)) < 1e-12);

        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(rep.rc_ab[k] - Complex((nu + mu) / 2.0, 0.0)) < 1e-12);
        CHECK(std::abs(rep.rc_ab[3] - Complex((nu - mu) / 2.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("clone fidelities", "[apps]") {
    SECTION("closed forms agree with the explicit output state") {
        for (const double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            for (const int sign : {+1, -1}) {
                const CloneFidelities f = clone_fidelities(PauliCloner(alpha, sign));
                CHECK(std::abs(f.f_a - (1.0 - 2.0 * alpha / 3.0)) < 1e-14);
                CHECK(std::abs(f.f_a_explicit - f.f_a) < 1e-10);
                CHECK(std::abs(f.f_b_explicit - f.f_b) < 1e-10);
            }
        }
    }

    SECTION("pinned second-clone values at alpha one half") {
        const CloneFidelities minus = clone_fidelities(PauliCloner(0.5, -1));
        CHECK(std::abs(minus.f_b - 0.95534180126147961) < 1e-12);
        const CloneFidelities plus = clone_fidelities(PauliCloner(0.5, +1));
        CHECK(std::abs(plus.f_b - 0.37799153207185371) < 1e-12);
    }

    SECTION("symmetric point reaches the optimal cloning fidelity") {
        const CloneFidelities f = clone_fidelities(PauliCloner(0.25, -1));
        CHECK(std::abs(f.f_a - 5.0 / 6.0) < 1e-12);
        CHECK(std::abs(f.f_b - 5.0 / 6.0) < 1e-12);
    }

    SECTION("first clone degrades linearly while the branches split") {
        double prev_a = 1.1;
        for (int ia = 0; ia <= 10; ++ia) {
            const double alpha = static_cast<double>(ia) / 10.0;
            const CloneFidelities f = clone_fidelities(PauliCloner(alpha, -1));
            CHECK(f.f_a < prev_a);
            prev_a = f.f_a;
            const CloneFidelities g = clone_fidelities(PauliCloner(alpha, +1));
            CHECK(f.f_b >= g.f_b - 1e-12);
        }
    }
}

TEST_CASE("transmission strategy", "[apps]") {
    SECTION("objective interpolates the two fidelities") {
        const double p = 0.3, alpha = 0.2;
        const double want = p * transmission_fidelity(2, alpha) +
                            (1.0 - p) * estimation_fidelity(2, gamma_max(2, alpha));
        CHECK(std::abs(transmission_objective(p, alpha) - want) < 1e-14);
    }

    SECTION("closed forms at pinned operating points") {
        const TransmissionReport mid = transmission_optimize(0.5);
        CHECK(std::abs(mid.alpha_star - 0.052786404500042072) < 1e-12);
        CHECK(std::abs(mid.f_cl - 0.76967233145831582) < 1e-12);
        CHECK(std::abs(mid.f_dir - 0.75) < 1e-15);
        CHECK(std::abs(mid.f_qm - 5.0 / 6.0) < 1e-15);

        const TransmissionReport never = transmission_optimize(0.0);
        CHECK(std::abs(never.alpha_star - 0.5) < 1e-12);
        CHECK(std::abs(never.f_cl - 2.0 / 3.0) < 1e-12);

        const TransmissionReport always = transmission_optimize(1.0);
        CHECK(std::abs(always.alpha_star) < 1e-12);
        CHECK(std::abs(always.f_cl - 1.0) < 1e-12);
    }

    SECTION("the numeric maximizer confirms the closed form") {
        for (int ip = 0; ip <= 20; ++ip) {
            const double p = static_cast<double>(ip) / 20.0;
            const TransmissionReport rep = transmission_optimize(p);
            CHECK(std::abs(rep.alpha_star_numeric - rep.alpha_star) < 1e-6);
            CHECK(std::abs(rep.f_cl_numeric - rep.f_cl) < 1e-10);
        }
    }

    SECTION("strategy ordering holds across the channel quality range") {
        for (const TransmissionReport& rep : strategy_table(51)) {
            CHECK(rep.f_qm >= rep.f_cl - 1e-12);
            CHECK(rep.f_cl >= rep.f_dir - 1e-12);
            CHECK(rep.f_cl >= rep.f_meas - 1e-12);
            CHECK(std::abs(rep.f_meas - 2.0 / 3.0) < 1e-15);
        }
    }

    SECTION("probability out of range is rejected") {
        CHECK_THROWS_AS(transmission_optimize(-0.1), OutOfRangeError);
        CHECK_THROWS_AS(transmission_optimize(1.2), OutOfRangeError);
    }
}
