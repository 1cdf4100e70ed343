#include <doctest.h>

#include <cmath>

#include "paritylock/fockspace.hpp"
#include "paritylock/preparation.hpp"
#include "paritylock/random.hpp"

using namespace paritylock;

TEST_SUITE("fockspace") {

TEST_CASE("flat layout and ground state") {
    CHECK(flat_index(Qubit::g, 0) == 0);
    CHECK(flat_index(Qubit::e, 3) == 7);
    const auto psi = new_ground(8);
    CHECK(psi.dim() == 18);
    CHECK(psi.amp(Qubit::g, 0) == cplx(1.0));
    CHECK(psi.norm_squared() == doctest::Approx(1.0));
    CHECK(parity_expectation(psi) == 1.0);
}

TEST_CASE("cutoff and shape errors") {
    CHECK_THROWS_AS(new_ground(1), Error);
    try {
        new_ground(1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidCutoff);
    }
    try {
        JointState(4, std::vector<cplx>(7));
        FAIL("expected dimension-mismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
    try {
        (void)overlap(new_ground(4), new_ground(5));
        FAIL("expected dimension-mismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
}

TEST_CASE("half-transfer superposition moments") {
    std::vector<cplx> a(2 * 9, 0.0);
    a[flat_index(Qubit::g, 0)] = a[flat_index(Qubit::e, 1)] = 1 / std::sqrt(2.0);
    const JointState psi(8, a);
    const auto d = fock_distribution(psi);
    CHECK(d.mean == doctest::Approx(0.5));
    CHECK(d.std == doctest::Approx(0.5));
    CHECK(parity_expectation(psi, Condition::g) == 1.0);
    CHECK(parity_expectation(psi, Condition::e) == -1.0);
    CHECK(parity_expectation(psi) == doctest::Approx(0.0));
    const auto [pg, pe] = qubit_populations(psi);
    CHECK(pg == doctest::Approx(0.5));
    CHECK(pe == doctest::Approx(0.5));
}

TEST_CASE("conditional parity on an empty branch is an error") {
    try {
        parity_expectation(new_ground(6), Condition::e);
        FAIL("expected undefined-conditional");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UndefinedConditional);
    }
}

TEST_CASE("maximally mixed density") {
    const int n_max = 5, d = 2 * (n_max + 1);
    const JointDensity rho(n_max, Eigen::MatrixXcd::Identity(d, d) / double(d));
    CHECK(rho.is_valid());
    const auto dist = fock_distribution(rho);
    for (double p : dist.probs) CHECK(p == doctest::Approx(1.0 / (n_max + 1)));
    CHECK(reduce_qubit(rho)(0, 0).real() == doctest::Approx(0.5));
    CHECK(reduce_oscillator(rho).trace().real() == doctest::Approx(1.0));
}

TEST_CASE("property: prepared states round trip through vectors and densities") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int N = 1 + int(rng.uniform() * 10);
        std::vector<double> areas(N), phases(N);
        for (int j = 0; j < N; ++j) {
            areas[j] = rng.uniform(0.0, 3.0);
            phases[j] = rng.uniform(0.0, 6.28);
        }
        const auto psi = prepare(build_sequence(areas, phases), 32);
        CHECK(std::abs(psi.norm_squared() - 1) < kNormTol);
        const auto back = JointState::from_vector(32, psi.to_vector());
        CHECK(std::abs(overlap(back, psi) - 1.0) < 1e-14);
        const auto rho = JointDensity::pure(psi);
        CHECK(rho.is_valid());
        CHECK(rho.min_eigenvalue() > -1e-10);
        const auto a = fock_distribution(psi), b = fock_distribution(rho);
        CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
        double sg = 0, se = 0;
        for (int n = 0; n <= 32; ++n) (n % 2 ? se : sg) += a.probs[n];
        const auto [pg, pe] = qubit_populations(psi);
        // parity lock ties the qubit populations to the Fock parity
        CHECK(pg == doctest::Approx(sg).epsilon(1e-12));
        CHECK(pe == doctest::Approx(se).epsilon(1e-12));
    }
}

TEST_CASE("edge population watches the top two levels") {
    CHECK(edge_population(JointState::basis(6, Qubit::e, 6).amps()) == 1.0);
    CHECK(edge_population(JointState::basis(6, Qubit::g, 5).amps()) == 1.0);
    CHECK(edge_population(JointState::basis(6, Qubit::g, 4).amps()) == 0.0);
}

}
