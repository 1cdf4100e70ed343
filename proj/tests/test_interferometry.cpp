#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "paritylock/interferometry.hpp"
#include "paritylock/noise.hpp"
#include "paritylock/preparation.hpp"
#include "paritylock/random.hpp"
#include "paritylock/validation.hpp"

using namespace paritylock;
using std::numbers::pi;
using K = DecoherenceModel::Kind;

namespace {

JointDensity random_locked_density(Rng& rng, int n_max) {
    const int d = 2 * (n_max + 1);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < 3; ++k) {
        const int N = 1 + int(rng.uniform() * 6);
        std::vector<double> a(N), p(N);
        for (int j = 0; j < N; ++j) {
            a[j] = rng.uniform(0.0, pi);
            p[j] = rng.uniform(0.0, 2 * pi);
        }
        const auto v = prepare(build_sequence(a, p), n_max).to_vector();
        rho += rng.uniform() * v * v.adjoint();
    }
    rho /= rho.trace().real();
    return apply_model(JointDensity(n_max, rho), DecoherenceModel::make(K::WPower, rng.uniform()));
}

}  // namespace

TEST_SUITE("interferometry") {

TEST_CASE("ground state is dark to a red pulse") {
    CHECK(measure_pg(new_ground(8), 1.7, 0.0, 0.3, 0.0) == 1.0);
}

TEST_CASE("closed forms for one and two preparation pulses") {
    Rng rng(1);
    for (double w : {1.0, 0.6}) {
        for (int t = 0; t < 5; ++t) {
            const double t1 = rng.uniform(0.2, 3.0), t2 = rng.uniform(0.2, 3.0), tv = rng.uniform(0.2, 3.0);
            const double p1 = rng.uniform(0, 2 * pi), p2 = rng.uniform(0, 2 * pi);
            const auto noise = DecoherenceModel::make(K::WMixture, w);
            const auto r1 = apply_model(prepare(build_sequence({t1}, {p1}), 8), noise);
            const auto r2 = apply_model(prepare(build_sequence({t1, t2}, {p1, p2}), 8), noise);
            for (double phi : uniform_grid(32)) {
                // a lone blue verification pulse is the second pulse of measure_pg
                CHECK(std::abs(measure_pg(r1, 0.0, tv, 0.0, phi) - oracle_pg_b_b(t1, tv, p1, phi, w)) < 1e-12);
                CHECK(std::abs(measure_pg(r2, tv, 0.0, phi, 0.0) - oracle_pg_br_r(t1, t2, tv, p2, phi, w)) < 1e-12);
            }
        }
    }
}

TEST_CASE("property: POVM equivalence on random parity-locked densities") {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
        const int n_max = 14;
        const auto rho = random_locked_density(rng, n_max);
        const double t1 = rng.uniform(0.0, 4.0), t2 = t % 4 == 0 ? 0.0 : rng.uniform(0.0, 4.0);
        const double p1 = rng.uniform(0, 2 * pi), p2 = rng.uniform(0, 2 * pi);
        const auto terms = povm_ground(t1, t2, p1, p2, n_max);
        CHECK(std::abs((terms.total() * rho.matrix()).trace().real() - measure_pg(rho, t1, t2, p1, p2)) < 1e-10);
        if (t2 == 0.0) {
            CHECK(terms.pi2.norm() < 1e-15);
            CHECK(terms.pi3.norm() < 1e-15);
        }
        CHECK((terms.total() - terms.total().adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("second-order POVM term is constant along equal phase difference") {
    Rng rng(3);
    const auto rho = random_locked_density(rng, 12);
    const double d = 0.8;
    const double a = (povm_ground(1.1, 1.4, 0.3 + d, 0.3, 12).pi2 * rho.matrix()).trace().real();
    const double b = (povm_ground(1.1, 1.4, 2.5 + d, 2.5, 12).pi2 * rho.matrix()).trace().real();
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("fast scan equals direct evolution") {
    Rng rng(4);
    const auto rho = random_locked_density(rng, 16);
    const auto spec = VerificationSpec::two_pulse(1.3, 2.1, 16);
    const auto s = scan_fringe(rho, spec);
    for (int i = 0; i < 16; i += 3)
        for (int j = 0; j < 16; j += 5)
            CHECK(std::abs(s.pg(i, j) - measure_pg(rho, 1.3, 2.1, spec.grid1[i], spec.grid2[j])) < 1e-13);
    CHECK(s.contrast == doctest::Approx(s.pg.maxCoeff() - s.pg.minCoeff()));
}

TEST_CASE("dephased states") {
    const auto psi = prepare(build_half_transfer_sequence(4, {0.3, 1.7, 2.9, 5.0}), 24);
    const auto single = VerificationSpec::single_pulse(kHalfTransferArea, 32);
    CHECK(scan_fringe(apply_model(psi, DecoherenceModel::make(K::FullDephase)), single).contrast < 1e-14);
    const auto qdep = apply_model(psi, DecoherenceModel::make(K::QubitDephase));
    CHECK(scan_fringe(qdep, single).contrast < 1e-14);
    // equal-qubit coherences survive: the internal-oscillator fringe stays, the qubit-oscillator one goes
    const auto two = scan_fringe(qdep, VerificationSpec::two_pulse(kHalfTransferArea, kHalfTransferArea));
    CHECK(two.diff_axis.mean_contrast > 0.1);
    CHECK(two.sum_axis.mean_contrast < 1e-12);
}

TEST_CASE("balanced single-pulse pathways give C close to V") {
    const auto s = scan_fringe(prepare(build_half_transfer_sequence(1, {0.9}), 8),
                               VerificationSpec::single_pulse(kHalfTransferArea, 64, PulseKind::BSB));
    CHECK(s.pg.maxCoeff() + s.pg.minCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.contrast == doctest::Approx(s.visibility));
}

TEST_CASE("overlap metrics") {
    auto [c, v] = overlap_metrics(1.0, 0.5);
    CHECK(c == doctest::Approx(0.5));
    CHECK(v == doctest::Approx(0.8));
    std::tie(c, v) = overlap_metrics(0.3, cplx(0, 0.3));
    CHECK(v == doctest::Approx(1.0));
    std::tie(c, v) = overlap_metrics(0.7, 0.0);
    CHECK(c == 0.0);
    CHECK(v == 0.0);
    CHECK_THROWS_AS(overlap_metrics(0.0, 0.0), Error);
    const double zero[3] = {0, 0, 0};
    CHECK_THROWS_AS(fringe_extrema(zero, 3), Error);
}

TEST_CASE("spectrum: DFT route matches the analytic route and an independent DFT") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto rho = random_locked_density(rng, 16);
        const auto spec = VerificationSpec::two_pulse(1.2, 0.9, 32);
        const auto s = scan_fringe(rho, spec);
        const auto a = fourier_spectrum(s);
        const auto b = fourier_spectrum(rho, 1.2, 0.9);
        CHECK(a.dc == doctest::Approx(b.dc).epsilon(1e-12));
        CHECK(a.dc == doctest::Approx(s.pg.mean()).epsilon(1e-12));
        for (auto h : kHarmonics) {
            const auto [A, B] = oracle::dft(s.pg, h.first, h.second);
            CHECK(std::abs(a.A.at(h) - A) < 1e-12);
            CHECK(std::abs(a.B.at(h) - B) < 1e-12);
            CHECK(std::abs(a.A.at(h) - b.A.at(h)) < 1e-12);
            CHECK(std::abs(a.B.at(h) - b.B.at(h)) < 1e-12);
        }
        CHECK(a.R1 == doctest::Approx(std::hypot(a.A.at({1, 0}), a.B.at({1, 0}))));
        // harmonics outside the reachable set vanish
        for (auto [k, l] : {std::pair{2, 0}, {0, 2}, {1, 1}, {3, -1}, {2, -2}}) {
            const auto [A, B] = oracle::dft(s.pg, k, l);
            CHECK(std::hypot(A, B) < 1e-10);
        }
    }
}

TEST_CASE("first-order-only coherence has no higher harmonics") {
    const auto psi = prepare(build_sequence({1.1}, {0.4}), 12);
    const auto s = fourier_spectrum(JointDensity::pure(psi), 1.3, 1.7);
    CHECK(s.R2 < 1e-10);
    CHECK(s.R3 < 1e-10);
    CHECK(s.R1 + s.R1_prime > 0.01);
}

TEST_CASE("under-sampled grids are refused") {
    const auto psi = prepare(build_half_transfer_sequence(2, {0.1, 0.2}), 12);
    try {
        fourier_spectrum(scan_fringe(psi, VerificationSpec::two_pulse(1.0, 1.0, 8)));
        FAIL("expected aliasing-error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AliasingError);
    }
}

TEST_CASE("predicted max of an empty spectrum is zero") { CHECK(predicted_max(CoherenceSpectrum{}) == 0.0); }

TEST_CASE("property: amplitudes are linear in w") {
    Rng rng(6);
    for (int t = 0; t < 5; ++t) {
        const auto psi = prepare(build_half_transfer_sequence(5, sample_phase_vectors(5, 1, 100 + t)[0]), 24);
        const auto full = fourier_spectrum(apply_model(psi, DecoherenceModel::make(K::WMixture, 1.0)), 1.3, 0.8);
        for (double w : {0.25, 0.5}) {
            const auto s = fourier_spectrum(apply_model(psi, DecoherenceModel::make(K::WMixture, w)), 1.3, 0.8);
            for (auto h : kHarmonics) {
                CHECK(std::abs(s.A.at(h) - w * full.A.at(h)) < 1e-12);
                CHECK(std::abs(s.B.at(h) - w * full.B.at(h)) < 1e-12);
            }
        }
    }
}

TEST_CASE("property: phase rotations shift the fringe along the mapped axes") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const auto rho = random_locked_density(rng, 14);
        const double th = rng.uniform(0, 2 * pi), Th = rng.uniform(0, 2 * pi);
        const auto rot = apply_phase_rotation(rho, {th, Th});
        const double p1 = rng.uniform(0, 2 * pi), p2 = rng.uniform(0, 2 * pi);
        CHECK(std::abs(measure_pg(rot, 1.4, 1.9, p1, p2) - measure_pg(rho, 1.4, 1.9, p1 - th + Th, p2 - th - Th)) < 1e-12);
        // 2pi periodicity
        CHECK(std::abs(measure_pg(rho, 1.4, 1.9, p1 + 2 * pi, p2) - measure_pg(rho, 1.4, 1.9, p1, p2)) < 1e-12);
    }
}

TEST_CASE("a grid-aligned theta leaves the diff-axis metrics unchanged") {
    const auto psi = prepare(build_half_transfer_sequence(6, sample_phase_vectors(6, 1, 9)[0]), 24);
    const auto spec = VerificationSpec::two_pulse(pi, pi, 32);
    const auto a = scan_fringe(psi, spec);
    const auto b = scan_fringe(apply_phase_rotation(psi, {2 * pi * 5 / 32, 0.0}), spec);
    CHECK(a.diff_axis.mean_contrast == doctest::Approx(b.diff_axis.mean_contrast).epsilon(1e-12));
    CHECK(a.diff_axis.mean_visibility == doctest::Approx(b.diff_axis.mean_visibility).epsilon(1e-12));
}

TEST_CASE("w halves the averaged contrast") {
    PrepConfig prep{4, {}, 24, {}};
    const auto spec = VerificationSpec::single_pulse(kHalfTransferArea, 32);
    const auto a = averaged_metrics(prep, std::nullopt, spec, 64, 3);
    const auto b = averaged_metrics(prep, DecoherenceModel::make(K::WMixture, 0.5), spec, 64, 3);
    CHECK(b.total.contrast == doctest::Approx(0.5 * a.total.contrast).epsilon(1e-10));
}

TEST_CASE("off-diagonal contributions") {
    const double kappa = 0.7;
    // single blue pulse on |e,n><g,n-1|: pair amplitudes sin and cos of kappa sqrt(n)
    for (int n = 1; n < 6; ++n) {
        const cplx c = offdiag_contribution(TermType::e_g, n, n - 1, kappa, 0.0, 0.0, ReadoutMode::SingleBlue);
        CHECK(std::abs(c) == doctest::Approx(std::abs(std::sin(kappa * std::sqrt(n)) * std::cos(kappa * std::sqrt(n)))));
    }
    // Fock distances outside {1, 3} never reach the qubit-changing terms
    for (int n = 0; n < 8; ++n)
        for (int m = 0; m < 8; ++m)
            if (std::abs(n - m) != 1 && std::abs(n - m) != 3)
                CHECK(offdiag_contribution(TermType::e_g, n, m, kappa, 0.3, 0.2) == cplx(0.0));

    // brute force: the contributions of every density element add up to trace(Pi rho)
    Rng rng(8);
    const int n_max = 10;
    const auto rho = random_locked_density(rng, n_max);
    const double th = 0.4, Th = 1.1;
    cplx total = 0.0;
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m) {
            const auto ex = flat_index(Qubit::e, n), gx = flat_index(Qubit::g, n);
            const auto gy = flat_index(Qubit::g, m), ey = flat_index(Qubit::e, m);
            total += rho(ex, ey) * offdiag_contribution(TermType::e_e, n, m, kappa, th, Th, ReadoutMode::RedBlue, n_max);
            total += rho(gx, gy) * offdiag_contribution(TermType::g_g, n, m, kappa, th, Th, ReadoutMode::RedBlue, n_max);
            const cplx eg = rho(ex, gy) * offdiag_contribution(TermType::e_g, n, m, kappa, th, Th, ReadoutMode::RedBlue, n_max);
            total += eg + std::conj(eg);
        }
    const double direct = measure_pg(apply_phase_rotation(rho, {th, Th}), 2 * kappa, 2 * kappa, 0.0, 0.0);
    CHECK(std::abs(total - direct) < 1e-10);
}

}
