#include "paritylock/validation.hpp"

#include <cmath>
#include <numbers>

#include "paritylock/interferometry.hpp"
#include "paritylock/noise.hpp"
#include "paritylock/preparation.hpp"
#include "paritylock/random.hpp"
#include "paritylock/sideband.hpp"

namespace paritylock {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

CheckResult make(std::string name, double value, double tol, std::string detail = {}) {
    return {std::move(name), value, tol, value < tol, std::move(detail)};
}

SequenceSpec random_sequence(Rng& rng, int N_max) {
    const int N = 1 + static_cast<int>(rng.uniform() * N_max);
    std::vector<double> a(N), p(N);
    for (int j = 0; j < N; ++j) {
        a[j] = rng.uniform(0.0, std::numbers::pi);
        p[j] = rng.uniform(0.0, kTwoPi);
    }
    return build_sequence(a, p);
}

}  // namespace

double oracle_pg_b_b(double t1, double tB, double phi_p, double phi, double w) {
    return 0.5 * (1 + std::cos(t1) * std::cos(tB) - w * std::sin(t1) * std::sin(tB) * std::cos(phi_p - phi));
}

double oracle_pg_br_r(double t1, double t2, double tR, double phi_p2, double phi, double w) {
    const double r = std::numbers::sqrt2;
    const double s = std::sin(t1 / 2);
    return 0.25 * (2 * s * s * (w * std::sin(r * t2) * std::sin(r * tR) * std::cos(phi_p2 - phi) -
                                std::cos(r * t2) * std::cos(r * tR)) +
                   std::cos(t1) + 3);
}

std::vector<CheckResult> run_validation(const ValidationOptions& opt) {
    std::vector<CheckResult> out;
    Rng rng(opt.seed);
    const int draws = opt.quick ? 5 : 20;
    const int n_max = opt.quick ? std::min(opt.n_max, 24) : opt.n_max;

    for (Identity id : {Identity::E1_rsb_theta, Identity::E2_rsb_Theta, Identity::E3_bsb_theta, Identity::E4_bsb_Theta}) {
        double worst = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double A = rng.uniform(0.05, kTwoPi);
            const double angle = rng.uniform(0.0, kTwoPi);
            worst = std::max(worst, verify_commutation_identity(id, A, angle, n_max,
                                                                opt.flip_e2 && id == Identity::E2_rsb_Theta));
        }
        out.push_back(make(std::string("identity-") + to_string(id), worst, 1e-10));
    }

    {
        const int count = opt.quick ? 20 : 100;
        const int nm = 16;
        double worst = 0.0;
        for (int i = 0; i < count; ++i) {
            // mixture of parity-locked pure states, partially dephased
            Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2 * (nm + 1), 2 * (nm + 1));
            double tw = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double wk = rng.uniform();
                const auto v = prepare(random_sequence(rng, 6), nm).to_vector();
                rho += wk * v * v.adjoint();
                tw += wk;
            }
            JointDensity r(nm, rho / tw);
            r = apply_model(r, DecoherenceModel::make(DecoherenceModel::Kind::WMixture, rng.uniform()));
            const double t1 = rng.uniform(0.1, std::numbers::pi);
            const double t2 = i % 5 == 0 ? 0.0 : rng.uniform(0.1, std::numbers::pi);
            const double p1 = rng.uniform(0.0, kTwoPi), p2 = rng.uniform(0.0, kTwoPi);
            const auto terms = povm_ground(t1, t2, p1, p2, nm);
            const double via_povm = (terms.total() * r.matrix()).trace().real();
            worst = std::max(worst, std::abs(via_povm - measure_pg(r, t1, t2, p1, p2)));
            if (t2 == 0.0) worst = std::max({worst, terms.pi2.norm(), terms.pi3.norm()});
        }
        out.push_back(make("povm-equivalence", worst, 1e-10, "trace(Pi rho) vs direct evolution"));
    }

    {
        double worst1 = 0.0, worst2 = 0.0;
        const double w = 0.7;
        const auto noise = DecoherenceModel::make(DecoherenceModel::Kind::WMixture, w);
        for (double t1 : {0.3, 1.0, std::numbers::pi / 2, 2.2, 3.0}) {
            const double tv = rng.uniform(0.2, 3.0), t2 = rng.uniform(0.2, 3.0);
            const double pp = rng.uniform(0.0, kTwoPi), pp2 = rng.uniform(0.0, kTwoPi);
            const auto r1 = apply_model(prepare(build_sequence({t1}, {pp}), 8), noise);
            const auto r2 = apply_model(prepare(build_sequence({t1, t2}, {rng.uniform(0.0, kTwoPi), pp2}), 8), noise);
            for (double phi : uniform_grid(32)) {
                const double s1 = qubit_populations(apply_pulse_density(r1, PulseSpec::make(PulseKind::BSB, tv, phi))).first;
                const double s2 = qubit_populations(apply_pulse_density(r2, PulseSpec::make(PulseKind::RSB, tv, phi))).first;
                worst1 = std::max(worst1, std::abs(s1 - oracle_pg_b_b(t1, tv, pp, phi, w)));
                worst2 = std::max(worst2, std::abs(s2 - oracle_pg_br_r(t1, t2, tv, pp2, phi, w)));
            }
        }
        out.push_back(make("oracle-B|B", worst1, 1e-10));
        out.push_back(make("oracle-BR|R", worst2, 1e-10));
    }

    {
        const int count = opt.quick ? 100 : 1000;
        double worst = 0.0;
        for (int i = 0; i < count; ++i) {
            const auto psi = prepare(random_sequence(rng, 12), 40);
            for (int n = 0; n <= psi.n_max(); ++n)
                worst = std::max(worst, std::abs(psi.amp(n % 2 ? Qubit::g : Qubit::e, n)));
        }
        out.push_back(make("parity-lock", worst, 0.0, "amplitude on (g, odd) and (e, even)"));
        out.back().pass = worst == 0.0;
    }

    {
        double worst = 0.0;
        for (int i = 0; i < (opt.quick ? 3 : 10); ++i) {
            const auto seq = random_sequence(rng, 12);
            const auto a = prepare(seq, 32), b = prepare(seq, 64);
            const double p1 = rng.uniform(0.0, kTwoPi), p2 = rng.uniform(0.0, kTwoPi);
            worst = std::max(worst, std::abs(measure_pg(a, std::numbers::pi, std::numbers::pi, p1, p2) -
                                             measure_pg(b, std::numbers::pi, std::numbers::pi, p1, p2)));
        }
        out.push_back(make("cutoff-sufficiency", worst, 1e-8, "n_max 32 vs 64"));
    }
    return out;
}

}  // namespace paritylock
