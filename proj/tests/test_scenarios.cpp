#include <doctest.h>

#include <cmath>
#include <numbers>

#include "paritylock/linalg.hpp"
#include "paritylock/preparation.hpp"
#include "paritylock/random.hpp"
#include "paritylock/scenarios.hpp"

using namespace paritylock;
using std::numbers::pi;

TEST_SUITE("scenarios") {

TEST_CASE("zero-duration gate is the identity") {
    Rng rng(1);
    const auto psi = prepare(build_half_transfer_sequence(3, {0.2, 0.4, 0.8}), 16);
    RabiGateSpec s;
    s.duration = 0.0;
    s.dphi = 0.5;
    const auto r = apply_rabi_gate(psi, s, rng);
    CHECK(std::abs(overlap(r.state, psi) - 1.0) < 1e-15);
}

TEST_CASE("Trotter product converges to the dense gate") {
    const int n_max = 4;
    RabiGateSpec s;
    s.duration = 0.8;
    s.phi_r = 0.3;
    s.phi_b = 1.1;
    s.trotter_steps = 1 << 22;
    CHECK(rabi_trotter_error(s, n_max) < 1e-6);
}

TEST_CASE("Trotter error falls at first order") {
    std::vector<double> x, y;
    for (int steps : {16, 32, 64, 128, 256}) {
        RabiGateSpec s;
        s.duration = kHalfTransferArea;
        s.phi_r = 0.3;
        s.phi_b = 1.1;
        s.trotter_steps = steps;
        x.push_back(std::log(double(steps)));
        y.push_back(std::log(rabi_trotter_error(s, 10)));
    }
    Eigen::MatrixXd X(x.size(), 2);
    Eigen::VectorXd Y(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = x[i];
        Y(i) = y[i];
    }
    const auto fit = least_squares(X, Y);
    CHECK(fit.coef(1) == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("gate reports its Trotter error against a tolerance") {
    Rng rng(2);
    RabiGateSpec s;
    s.trotter_steps = 8;
    s.tolerance = 1e-3;
    const auto r = apply_rabi_gate(new_ground(10), s, rng);
    CHECK(r.trotter_error > 1e-3);
    CHECK(!r.within_tolerance);
    CHECK(std::abs(r.state.norm_squared() - 1) < 1e-12);
}

TEST_CASE("instability offsets are bounded and fixed per draw") {
    Rng a(3), b(3);
    RabiGateSpec s;
    s.dphi = 0.4;
    const auto psi = new_ground(20);
    const auto r1 = apply_rabi_gate(psi, s, a);
    const auto r2 = apply_rabi_gate(psi, s, b);
    CHECK(std::abs(r1.offset_r) <= 0.4);
    CHECK(std::abs(r1.offset_b) <= 0.4);
    CHECK(r1.offset_r == r2.offset_r);
    CHECK(std::abs(overlap(r1.state, r2.state) - 1.0) < 1e-14);
}

TEST_CASE("Rabi-gate preparations grow the phonon number") {
    const auto rows = instability_sweep(InstabilityMethod::RabiGate, 1, {0.0}, 2, 1, {.grid = 8, .n_max = 40});
    double prev = rows[0].mean_phonons;
    for (int N = 2; N <= 4; ++N) {
        const auto r = instability_sweep(InstabilityMethod::RabiGate, N, {0.0}, 2, 1, {.grid = 8, .n_max = 60});
        CHECK(r[0].mean_phonons > prev);
        prev = r[0].mean_phonons;
    }
}

TEST_CASE("instability sweep at zero instability equals the ideal realization average") {
    const auto a = instability_sweep(InstabilityMethod::Sideband, 3, {0.0, 0.0}, 8, 5);
    CHECK(a[0].mean_contrast == a[1].mean_contrast);
    CHECK(a[0].mean_contrast > 0.0);
}

TEST_CASE("cat formulas") {
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const cplx alpha = std::polar(rng.uniform(0.0, 3.0), rng.uniform(0.0, 2 * pi));
        const CatSpec s{alpha, alpha, 0.5, 0.0};
        CHECK(cat_metrics(s, s).V == doctest::Approx(1.0).epsilon(1e-12));
        const double w = rng.uniform(0.01, 0.99);
        const CatSpec u{alpha, alpha, w, 0.0};
        CHECK(std::abs(cat_metrics(u, {alpha, alpha, 0.5, 0.0}).V - 2 * std::sqrt(w * (1 - w))) < 1e-10);
        const auto opt = cat_metrics(u, {alpha, alpha, 1 - w, 0.0});
        CHECK(std::abs(opt.V - 1.0) < 1e-10);
        CHECK(std::abs(opt.C - 4 * w * (1 - w)) < 1e-10);
        // truncated Fock representation agrees with the analytic overlaps
        const auto tr = cat_metrics_truncated(u, {alpha, 0.7 * alpha, 0.5, 0.0});
        const auto an = cat_metrics(u, {alpha, 0.7 * alpha, 0.5, 0.0});
        CHECK(std::abs(tr.C - an.C) < 1e-10);
        CHECK(std::abs(tr.V - an.V) < 1e-10);
    }
    const CatSpec s{0.0, 0.0, 0.9, 0.0};
    CHECK(cat_metrics(s, {0.0, 0.0, 0.5, 0.0}).V == doctest::Approx(0.6));
    CHECK(std::abs(coherent_overlap(1.0, 1.0) - 1.0) < 1e-15);
    CHECK(std::abs(coherent_overlap(0.0, 2.0)) == doctest::Approx(std::exp(-2.0)));
    try {
        cat_metrics({0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 0.0});
        FAIL("expected undefined-visibility");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UndefinedVisibility);
    }
}

TEST_CASE("cat limit for well separated balanced branches") {
    const CatSpec s{4.0, 4.0, 0.5, 0.0};
    const auto m = cat_metrics(s, s);
    CHECK(m.C == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.V == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("detection kinds start with the last preparation kind") {
    CHECK(detection_kinds(1) == std::vector{PulseKind::BSB});
    CHECK(detection_kinds(2) == std::vector{PulseKind::RSB, PulseKind::BSB});
    CHECK(detection_kinds(3) == std::vector{PulseKind::BSB, PulseKind::RSB, PulseKind::BSB});
}

TEST_CASE("N = 1 optimization matches a grid search") {
    const auto r = optimize_detection_areas(1, 6, 11, 40, 32, 12);
    for (int i = 0; i < 6; ++i) {
        // the fringe of a single blue detection pulse on a half-transfer state: balanced at A = pi/2
        double best = 0.0;
        Rng rng(derive_seed(11, i));
        const double prep = 2 * pi * rng.uniform();
        rng.uniform();
        const auto psi = prepare(build_sequence({kHalfTransferArea}, {prep}), 12);
        for (int k = 0; k <= 2000; ++k) {
            const double A = 2 * pi * k / 2000;
            double mx = 0, mn = 1;
            for (double phi : uniform_grid(32)) {
                const double pg = qubit_populations(apply_pulse(psi, PulseSpec::make(PulseKind::BSB, A, phi))).first;
                mx = std::max(mx, pg);
                mn = std::min(mn, pg);
            }
            if (mx + mn > 0) best = std::max(best, (mx - mn) / (mx + mn));
        }
        CHECK(r.visibility[i] == doctest::Approx(best).epsilon(1e-4));
        CHECK(r.visibility[i] > 0.99);
    }
}

TEST_CASE("optimization never loses to the baseline and is deterministic") {
    const auto a = optimize_detection_areas(3, 8, 5, 20);
    const auto b = optimize_detection_areas(3, 8, 5, 20);
    CHECK(a.areas == b.areas);
    for (int i = 0; i < 8; ++i) CHECK(a.visibility[i] >= a.baseline[i]);
    CHECK(a.mean_visibility >= a.baseline_visibility);
}

}
