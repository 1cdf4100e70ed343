#include <doctest.h>

#include <cmath>
#include <numbers>

#include "paritylock/estimation.hpp"
#include "paritylock/noise.hpp"
#include "paritylock/preparation.hpp"

using namespace paritylock;
using std::numbers::pi;

TEST_SUITE("estimation") {

TEST_CASE("ground-state flop without decay") {
    FlopModel m;
    m.gamma0 = 0.0;
    const auto t = default_flop_times(50, 1.0);
    const auto pg = flop_curve({1.0}, m, t);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(pg[i] == doctest::Approx(0.5 * (1 + std::cos(m.omega(0) * t[i]))).epsilon(1e-14));
    CHECK(m.gamma(4) == doctest::Approx(0.0));
    FlopModel d;
    CHECK(d.gamma(4) == doctest::Approx(0.1 * std::pow(5.0, 0.7)));
}

TEST_CASE("binomial sampling converges to the model curve") {
    FlopModel m;
    const auto dist = FockDistribution::from_probs({0.3, 0.5, 0.2});
    const auto t = default_flop_times(100, 2.0);
    const auto exact = flop_curve(dist.probs, m, t);
    const int shots = 1000000;
    const auto rec = simulate_rabi_flop(dist, m, t, shots, 4);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double sigma = std::sqrt(exact[i] * (1 - exact[i]) / shots) + 1e-9;
        CHECK(std::abs(rec.pg[i] - exact[i]) < 5 * sigma);
    }
    CHECK(simulate_rabi_flop(dist, m, t, 100, 9).pg == simulate_rabi_flop(dist, m, t, 100, 9).pg);
}

TEST_CASE("noiseless fit round trip") {
    FlopModel m;
    const auto psi = prepare(build_half_transfer_sequence(8, sample_phase_vectors(8, 1, 5)[0]));
    auto probs = fock_distribution(psi).probs;
    probs.resize(13);
    const auto dist = FockDistribution::from_probs(probs);
    const auto rec = simulate_rabi_flop(dist, m, default_flop_times(), 0, 0);
    const auto fit = fit_phonon_distribution(rec, m, 12, 4, 1);
    for (int n = 0; n <= 12; ++n) CHECK(std::abs(fit.probs[n] - probs[n]) < 1e-6);
}

TEST_CASE("shot-limited coverage") {
    FlopModel m;
    int inside = 0, total = 0;
    for (int r = 0; r < 4; ++r) {
        const auto psi = prepare(build_half_transfer_sequence(8, sample_phase_vectors(8, 1, 40 + r)[0]));
        auto probs = fock_distribution(psi).probs;
        probs.resize(13);
        const auto rec = simulate_rabi_flop(FockDistribution::from_probs(probs), m, default_flop_times(), 100, 70 + r);
        const auto fit = fit_phonon_distribution(rec, m, 12, 100, 5 + r);
        for (int n = 0; n <= 12; ++n) {
            inside += std::abs(fit.probs[n] - probs[n]) <= 2 * fit.uncertainties[n] + 1e-3;
            ++total;
        }
    }
    CHECK(double(inside) / total >= 0.9);
}

TEST_CASE("degenerate records") {
    FlopModel m;
    RabiFlopRecord flat{default_flop_times(60, 3.0), std::vector<double>(60, 0.5), 100};
    const auto fit = fit_phonon_distribution(flat, m, 12, 20, 1);
    CHECK(!fit.flags.empty());
    RabiFlopRecord brief;
    for (int i = 0; i < 30; ++i) {
        brief.times.push_back(1e-5 * i);
        brief.pg.push_back(1.0);
    }
    try {
        fit_phonon_distribution(brief, m, 12, 5, 1);
        FAIL("expected unresolved-frequencies");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnresolvedFrequencies);
    }
}

TEST_CASE("conditional distributions split by parity") {
    const auto psi = prepare(build_half_transfer_sequence(8, sample_phase_vectors(8, 1, 12)[0]));
    const auto g = conditional_distribution(psi, Qubit::g);
    const auto e = conditional_distribution(psi, Qubit::e);
    double sg = 0, se = 0;
    for (std::size_t n = 0; n < g.probs.size(); ++n) {
        if (n % 2) CHECK(g.probs[n] == 0.0);
        else CHECK(e.probs[n] == 0.0);
        sg += g.probs[n];
        se += e.probs[n];
    }
    CHECK(sg == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(se == doctest::Approx(1.0).epsilon(1e-12));
    // a carrier flip swaps the branches
    const auto f = conditional_distribution(psi, Qubit::e, true);
    for (std::size_t n = 0; n < g.probs.size(); ++n) CHECK(f.probs[n] == doctest::Approx(g.probs[n]).epsilon(1e-12));
    try {
        conditional_distribution(new_ground(8), Qubit::e);
        FAIL("expected zero-probability");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroProbability);
    }
}

TEST_CASE("noiseless w recovery") {
    for (int N : {1, 2, 3}) {
        for (double w : {0.8, 0.9, 0.917, 0.95, 1.0}) {
            WScenario s;
            s.N = N;
            s.w = w;
            const auto e = run_w_scenario(s);
            CHECK(e.w_hat == doctest::Approx(w).epsilon(1e-6));
        }
    }
}

TEST_CASE("a 1% area error moves w_hat by at most 2%") {
    for (int N : {1, 2, 3})
        for (double err : {-0.01, 0.01}) {
            WScenario s;
            s.N = N;
            s.w = 0.9;
            s.area_error = err;
            CHECK(std::abs(run_w_scenario(s).w_hat - 0.9) <= 0.02 * 0.9);
        }
}

TEST_CASE("property: w estimate is unbiased at 100 shots") {
    for (double w : {0.8, 0.9, 1.0}) {
        double mean = 0.0;
        for (int r = 0; r < 100; ++r) {
            WScenario s;
            s.N = 1;
            s.w = w;
            s.shots = 100;
            s.seed = 1000 + r;
            mean += run_w_scenario(s).w_raw / 100;
        }
        CHECK(std::abs(mean - w) < 0.01);
    }
}

TEST_CASE("ledger rows") {
    std::vector<WScenario> sc(2);
    sc[0].N = 1;
    sc[0].w = 0.95;
    sc[1].N = 3;
    sc[1].w = 0.917;
    const auto rows = fit_w_ledger(sc);
    CHECK(rows[0].one_minus_w == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(rows[1].one_minus_w == doctest::Approx(0.083).epsilon(1e-6));
}

}
