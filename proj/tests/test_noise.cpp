#include <doctest.h>

#include <cmath>

#include "paritylock/noise.hpp"
#include "paritylock/preparation.hpp"
#include "paritylock/random.hpp"

using namespace paritylock;
using K = DecoherenceModel::Kind;

namespace {
JointState random_prepared(Rng& rng, int n_max = 24) {
    const int N = 1 + int(rng.uniform() * 8);
    std::vector<double> p(N);
    for (auto& x : p) x = rng.uniform(0.0, 6.283);
    return prepare(build_half_transfer_sequence(N, p), n_max);
}
}  // namespace

TEST_SUITE("noise") {

TEST_CASE("w-mixture end points") {
    Rng rng(1);
    const auto psi = random_prepared(rng);
    const auto pure = JointDensity::pure(psi);
    CHECK((apply_model(psi, DecoherenceModel::make(K::WMixture, 1.0)).matrix() - pure.matrix()).norm() < 1e-15);
    const auto d = apply_model(psi, DecoherenceModel::make(K::WMixture, 0.0));
    CHECK((d.matrix() - Eigen::MatrixXcd(d.matrix().diagonal().asDiagonal())).norm() == 0.0);
    CHECK_THROWS_AS(DecoherenceModel::make(K::WMixture, 1.5), Error);
}

TEST_CASE("w-power scales a distance-3 coherence by w^3") {
    std::vector<cplx> a(2 * 9, 0.0);
    a[flat_index(Qubit::g, 0)] = a[flat_index(Qubit::e, 3)] = 1 / std::sqrt(2.0);
    const JointState psi(8, a);
    const auto rho = apply_model(psi, DecoherenceModel::make(K::WPower, 0.7));
    CHECK(std::abs(rho(flat_index(Qubit::g, 0), flat_index(Qubit::e, 3))) == doctest::Approx(0.5 * 0.343));
}

TEST_CASE("qubit dephasing needs the parity lock") {
    std::vector<cplx> a(2 * 9, 0.0);
    a[flat_index(Qubit::g, 0)] = a[flat_index(Qubit::e, 0)] = 1 / std::sqrt(2.0);
    try {
        apply_model(JointState(8, a), DecoherenceModel::make(K::QubitDephase));
        FAIL("expected not-parity-locked");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotParityLocked);
    }
}

TEST_CASE("qubit dephasing keeps branch coherence only") {
    Rng rng(2);
    const auto psi = prepare(build_half_transfer_sequence(4, {0.1, 0.7, 2.0, 4.0}), 16);
    const auto rho = apply_model(psi, DecoherenceModel::make(K::QubitDephase));
    const auto v = psi.to_vector();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            const cplx expect = (i % 2 == j % 2) ? v(i) * std::conj(v(j)) : cplx(0.0);
            CHECK(std::abs(rho(i, j) - expect) < 1e-15);
        }
}

TEST_CASE("purity") {
    Rng rng(3);
    CHECK(purity(JointDensity::pure(random_prepared(rng))) == doctest::Approx(1.0));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
    m(0, 0) = m(1, 1) = 0.5;
    CHECK(purity(m) == doctest::Approx(0.5));
    // M equal components: purity = w^2 + (1 - w^2)/M
    const int M = 4;
    std::vector<cplx> a(2 * 9, 0.0);
    for (int n = 0; n < M; ++n) a[flat_index(n % 2 ? Qubit::e : Qubit::g, n)] = 0.5;
    const double w = 0.6;
    CHECK(purity(apply_model(JointState(8, a), DecoherenceModel::make(K::WMixture, w))) ==
          doctest::Approx(w * w + (1 - w * w) / M).epsilon(1e-12));
}

TEST_CASE("purity near 0.82 at w = 0.9 for eight pulses") {
    const auto phases = sample_phase_vectors(8, 64, 8);
    double mean = 0.0;
    for (const auto& p : phases)
        mean += purity(apply_model(prepare(build_half_transfer_sequence(8, p)), DecoherenceModel::make(K::WMixture, 0.9))) /
                phases.size();
    CHECK(mean == doctest::Approx(0.82).epsilon(0.03));
}

TEST_CASE("property: models keep trace, positivity and diagonals") {
    Rng rng(4);
    for (int t = 0; t < 40; ++t) {
        const auto psi = random_prepared(rng);
        const auto pure = JointDensity::pure(psi);
        for (auto kind : {K::WMixture, K::WPower, K::QubitDephase, K::FullDephase, K::ClassicalMixture}) {
            const auto rho = apply_model(psi, DecoherenceModel::make(kind, rng.uniform()));
            CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(rho.min_eigenvalue() > -1e-10);
            CHECK((rho.matrix().diagonal() - pure.matrix().diagonal()).cwiseAbs().maxCoeff() < 1e-15);
            CHECK(parity_expectation(rho) == doctest::Approx(parity_expectation(psi)).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: w-power is a semigroup") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto psi = random_prepared(rng);
        const double w1 = rng.uniform(), w2 = rng.uniform();
        const auto a = apply_model(apply_model(psi, DecoherenceModel::make(K::WPower, w1)), DecoherenceModel::make(K::WPower, w2));
        const auto b = apply_model(psi, DecoherenceModel::make(K::WPower, w1 * w2));
        CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

}
