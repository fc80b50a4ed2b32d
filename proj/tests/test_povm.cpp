#include <catch2/catch_amalgamated.hpp>

#include "qtrade/haar.hpp"
#include "qtrade/povm.hpp"
#include "qtrade/tradeoff.hpp"

#include <cmath>

using namespace qtrade;

TEST_CASE("scalar seed validation and response density", "[povm]") {
    CHECK_THROWS_AS(SeedCd(1, 0.5), OutOfRangeError);
    CHECK_THROWS_AS(SeedCd(2, -0.1), OutOfRangeError);
    CHECK_THROWS_AS(SeedCd(2, 1.5), OutOfRangeError);

    SECTION("density is affine in the overlap and normalized at gamma 1/d") {
        const std::size_t d = 3;
        const SeedCd flat(d, 1.0 / 3.0);
        // gamma = 1/d makes the response constant.
        CHECK(std::abs(response_density(flat, 0.0) - response_density(flat, 1.0)) < 1e-14);
        CHECK(std::abs(response_density(flat, 0.5) - 1.0) < 1e-14);
    }

    SECTION("density integrates to one over random outcomes") {
        const Rng root(42);
        for (const double gamma : {0.0, 0.4, 1.0}) {
            const SeedCd s(3, gamma);
            const McScalar total = mc_scalar(root.split(static_cast<std::uint64_t>(gamma * 10)),
                                             20000, [&s](Rng& r) {
                                                 const double t = std::norm(
                                                     dot(haar_pure_state(r, 3), haar_pure_state(r, 3)));
                                                 return response_density(s, t);
                                             });
            CHECK(std::abs(total.mean - 1.0) < 4.0 * total.std_error + 1e-12);
        }
    }

    SECTION("mean rewarded overlap reproduces the estimation fidelity") {
        // E[t rho(t)] = (gamma + 1)/(d + 1) over the invariant measure.
        const Rng root(42);
        const std::size_t d = 2;
        for (const double gamma : {0.5, 0.9}) {
            const SeedCd s(d, gamma);
            const McScalar mean = mc_scalar(
                root.split(static_cast<std::uint64_t>(gamma * 100)), 20000, [&s, d](Rng& r) {
                    const double t =
                        std::norm(dot(haar_pure_state(r, d), haar_pure_state(r, d)));
                    return t * response_density(s, t);
                });
            const double want = (gamma + 1.0) / (static_cast<double>(d) + 1.0);
            CHECK(std::abs(mean.mean - want) < 4.0 * mean.std_error + 1e-12);
        }
    }

    SECTION("seed matrix is positive for admissible gamma") {
        for (const std::size_t d : {2, 3}) {
            for (const double gamma : {0.0, 0.5, 1.0}) {
                const ComplexMatrix m = seed_cd_matrix(SeedCd(d, gamma));
                CHECK(min_eigenvalue(m) > -1e-12);
                CHECK(std::abs(m.trace() - static_cast<double>(d)) < 1e-12);
            }
        }
    }
}

TEST_CASE("adapted basis", "[povm]") {
    for (const std::size_t d : {2, 3, 4}) {
        const ComplexMatrix w = adapted_basis(d);
        REQUIRE(w.rows() == d * d);
        CHECK(max_abs_diff(w.adjoint() * w, ComplexMatrix::identity(d * d)) < 1e-12);

        // Column 0 is the maximally entangled reference state.
        const CVec omega = maximally_entangled_state(d);
        double dev = 0.0;
        for (std::size_t i = 0; i < d * d; ++i) dev = std::max(dev, std::abs(w(i, 0) - omega[i]));
        CHECK(dev < 1e-14);
    }
}

TEST_CASE("block seed constraints", "[povm]") {
    SECTION("normalization must hold") {
        CHECK_THROWS_AS(SeedP0(2, 3.0, 0.0, 1.0, 1.0), ConstraintViolationError);
        CHECK_NOTHROW(SeedP0(2, 3.0, std::sqrt(3.0), 0.0, 0.0));
    }

    SECTION("off-diagonal block is capped by b") {
        CHECK_THROWS_AS(SeedP0(2, 1.0, 1.5, 1.0 / 3.0, 1.0 / 3.0), ConstraintViolationError);
    }

    SECTION("negative weights are rejected") {
        CHECK_THROWS_AS(SeedP0(2, -1.0, 0.0, 2.0, 2.0), OutOfRangeError);
    }

    SECTION("the d(d-2) block exists only above d = 2") {
        CHECK_THROWS_AS(SeedP0(2, 0.0, 0.0, 1.0, 1.0, 0.5), ConstraintViolationError);
        const SeedP0 s = SeedP0::with_f_solved(3, 2.0, 1.0, 0.5, 0.3);
        CHECK(std::abs(s.normalization_residual()) < 1e-12);
        CHECK(s.f >= 0.0);
    }

    SECTION("solving for f can run out of budget") {
        CHECK_THROWS_AS(SeedP0::with_f_solved(2, 3.0, 0.0, 5.0), ConstraintViolationError);
    }
}

TEST_CASE("block seed matrices and pullback", "[povm]") {
    Rng rng(42);
    const Rng root(42);

    SECTION("random admissible seeds give positive operators") {
        for (const std::size_t d : {2, 3}) {
            for (int trial = 0; trial < 20; ++trial) {
                const SeedP0 s = random_seed_p0(rng, d);
                const ComplexMatrix p0 = seed_p0_matrix(s);
                CHECK(p0.hermiticity_residual() < 1e-13);
                CHECK(min_eigenvalue(p0) > -1e-10);
                CHECK(std::abs(p0.trace() - static_cast<double>(d * d)) < 1e-10);
            }
        }
    }

    SECTION("stabilizer conjugation leaves the seed invariant") {
        for (const std::size_t d : {2, 3}) {
            const SeedP0 s = random_seed_p0(rng, d);
            const ComplexMatrix p0 = seed_p0_matrix(s);
            for (int trial = 0; trial < 5; ++trial) {
                const ComplexMatrix u = stabilizer_unitary(rng, d);
                const ComplexMatrix rep = ancilla_rep(u);
                CHECK(max_abs_diff(rep * p0 * rep.adjoint(), p0) < 1e-10);
            }
        }
    }

    SECTION("pulled-back effect matches the scalar reduction") {
        for (const std::size_t d : {2, 3}) {
            const CovariantChannel ch(d, 0.3);
            for (int trial = 0; trial < 20; ++trial) {
                const SeedP0 s = random_seed_p0(rng, d);
                const ComplexMatrix q0 = q0_from_seed(ch, s);
                const double via_q0 =
                    expectation(q0, basis_vector(d, 0)).real() / static_cast<double>(d);
                CHECK(std::abs(via_q0 - gamma_of(ch, s)) < 1e-10);
            }
        }
    }

    SECTION("qubit closed form of the pulled-back effect") {
        const CovariantChannel ch(2, 0.3);
        for (int trial = 0; trial < 10; ++trial) {
            const SeedP0 s = random_seed_p0(rng, 2);
            CHECK(max_abs_diff(q0_from_seed(ch, s), q0_closed_d2(0.3, s)) < 1e-10);
        }
    }

    SECTION("outcome total averages to the identity") {
        const CovariantChannel ch(2, 0.31);
        const SeedP0 s = random_seed_p0(rng, 2);
        const ComplexMatrix q0 = q0_from_seed(ch, s);
        const McMatrix total = mc_average_conjugation(root.split(5), q0, 20000);
        CHECK(max_abs_diff(total.mean, ComplexMatrix::identity(2)) <
              4.0 * total.std_error + 1e-12);
    }
}

TEST_CASE("optimal qubit seed", "[povm]") {
    // The gamma-maximizing seed at d = 2 has b = 3, c = sqrt(3), e = f = 0.
    const double r3 = std::sqrt(3.0);

    SECTION("matrix form") {
        const ComplexMatrix p0 = seed_p0_matrix(SeedP0(2, 3.0, r3, 0.0, 0.0));
        ComplexMatrix want(4, 4);
        want(0, 0) = 2.0 - r3;
        want(3, 3) = 2.0 + r3;
        want(0, 3) = -1.0;
        want(3, 0) = -1.0;
        CHECK(max_abs_diff(p0, want) < 1e-12);
    }

    SECTION("effective seed on the system side") {
        for (const double alpha : {0.0, 0.1, 0.25, 0.5}) {
            const CovariantChannel ch(2, alpha);
            const ComplexMatrix q0 = q0_from_seed(ch, gamma_max_seed(2, alpha));
            const double root = 2.0 * std::sqrt(alpha * (1.0 - alpha));
            CHECK(std::abs(q0(0, 0) - Complex(1.0 + root, 0.0)) < 1e-12);
            CHECK(std::abs(q0(1, 1) - Complex(1.0 - root, 0.0)) < 1e-12);
            CHECK(std::abs(q0(0, 1)) < 1e-12);
        }
    }
}

TEST_CASE("measure-through instrument consistency", "[povm]") {
    Rng rng(3);
    const Rng root(42);
    for (const std::size_t d : {2, 3}) {
        const CovariantChannel ch(d, 0.3);
        const SeedP0 s = random_seed_p0(rng, d);
        const InstrumentReport rep = instrument_consistency(ch, s, root.split(d), 20000);
        CHECK(rep.dilation_residual < 1e-10);
        CHECK(rep.normalization_pass);
        CHECK(rep.partition_channel_residual < rep.partition_channel_bound);
        CHECK(rep.min_choi_eigenvalue > -1e-9);
        CHECK(rep.passed);
    }
}

TEST_CASE("rotating polarizer model", "[povm]") {
    CHECK_THROWS_AS(RotatingPolarizer(1.5), OutOfRangeError);

    Rng rng(19);
    SECTION("both routes give the same map") {
        for (const double lambda : {0.0, 0.3, 1.0}) {
            const RotatingPolarizer pol(lambda);
            for (int trial = 0; trial < 10; ++trial) {
                ComplexMatrix a(2, 2);
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) a(i, j) = rng.complex_normal();
                CHECK(max_abs_diff(pol.apply(a), pol.apply_via_average(a)) < 1e-12);
            }
        }
    }

    SECTION("fidelity pair endpoints") {
        const RotatingPolarizer off(0.0);
        CHECK(std::abs(off.transmission_fidelity() - 1.0) < 1e-15);
        CHECK(std::abs(off.estimation_fidelity() - 0.5) < 1e-15);
        const RotatingPolarizer full(1.0);
        CHECK(std::abs(full.transmission_fidelity() - 2.0 / 3.0) < 1e-15);
        CHECK(std::abs(full.estimation_fidelity() - 2.0 / 3.0) < 1e-15);
    }

    SECTION("every operating point is attainable") {
        for (const double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const RotatingPolarizer pol(lambda);
            const RegionClass cls =
                region_classify(2, pol.transmission_fidelity(), pol.estimation_fidelity());
            CHECK(cls != RegionClass::outside);
            // The reported estimation fidelity never exceeds the optimum at
            // the same transmission.
            const double alpha = alpha_from_ft(2, pol.transmission_fidelity());
            CHECK(pol.estimation_fidelity() <=
                  estimation_fidelity(2, gamma_max(2, alpha)) + 1e-12);
        }
    }
}
