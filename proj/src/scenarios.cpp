#include "paritylock/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "paritylock/linalg.hpp"
#include "paritylock/parallel.hpp"

namespace paritylock {

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;
}

void RabiGateSpec::validate() const {
    if (trotter_steps < 1) throw Error(ErrorKind::InvalidArgument, "trotter_steps must be >= 1");
    if (!(dphi >= 0.0)) throw Error(ErrorKind::InvalidArgument, "dphi must be >= 0");
    if (!(duration >= 0.0 && std::isfinite(duration))) throw Error(ErrorKind::InvalidArgument, "duration must be >= 0");
}

namespace {

void trotter_apply(std::vector<cplx>& a, int n_max, double duration, double phi_r, double phi_b, int steps) {
    const double dA = duration / steps;
    const auto ab = mixing_angles(PulseKind::BSB, dA, {}, n_max);
    const auto ar = mixing_angles(PulseKind::RSB, dA, {}, n_max);
    for (int s = 0; s < steps; ++s) {
        detail::rotate_state(a.data(), n_max, PulseKind::BSB, ab, phi_b);
        detail::rotate_state(a.data(), n_max, PulseKind::RSB, ar, phi_r);
    }
}

}  // namespace

RabiGateResult apply_rabi_gate(const JointState& psi, const RabiGateSpec& spec, Rng& rng) {
    spec.validate();
    RabiGateResult r{psi};
    r.offset_r = spec.dphi * (2 * rng.uniform() - 1);
    r.offset_b = spec.dphi * (2 * rng.uniform() - 1);
    if (spec.duration == 0.0) return r;
    std::vector<cplx> a(psi.amps().begin(), psi.amps().end());
    trotter_apply(a, psi.n_max(), spec.duration, spec.phi_r + r.offset_r, spec.phi_b + r.offset_b, spec.trotter_steps);
    if (edge_population(a) > kLeakTol)
        throw Error(ErrorKind::CutoffViolation, "Rabi gate drives population to the Fock cutoff; raise n_max");
    r.state = JointState(psi.n_max(), std::move(a));
    if (spec.tolerance > 0) {
        RabiGateSpec s = spec;
        s.phi_r += r.offset_r;
        s.phi_b += r.offset_b;
        r.trotter_error = rabi_trotter_error(s, psi.n_max());
        r.within_tolerance = r.trotter_error <= spec.tolerance;
    }
    return r;
}

Eigen::MatrixXcd rabi_gate_dense(double duration, double phi_r, double phi_b, int n_max) {
    const int d = 2 * (n_max + 1);
    // K = -i (G_R + G_B) is Hermitian; the gate is exp(i (A/2) K)
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n <= n_max; ++n) {
        if (n >= 1) G(flat_index(Qubit::e, n - 1), flat_index(Qubit::g, n)) += std::polar(std::sqrt(double(n)), phi_r);
        if (n + 1 <= n_max)
            G(flat_index(Qubit::e, n + 1), flat_index(Qubit::g, n)) += std::polar(std::sqrt(double(n + 1)), phi_b);
    }
    G -= Eigen::MatrixXcd(G.adjoint());
    const Eigen::MatrixXcd K = cplx(0, -1) * G;
    return expm_i_hermitian(K, 0.5 * duration);
}

Eigen::MatrixXcd rabi_gate_trotter(double duration, double phi_r, double phi_b, int steps, int n_max) {
    const int d = 2 * (n_max + 1);
    Eigen::MatrixXcd U(d, d);
    for (int c = 0; c < d; ++c) {
        std::vector<cplx> a(d, 0.0);
        a[c] = 1.0;
        trotter_apply(a, n_max, duration, phi_r, phi_b, steps);
        for (int r = 0; r < d; ++r) U(r, c) = a[r];
    }
    return U;
}

double rabi_trotter_error(const RabiGateSpec& spec, int n_max) {
    return operator_norm(rabi_gate_trotter(spec.duration, spec.phi_r, spec.phi_b, spec.trotter_steps, n_max) -
                         rabi_gate_dense(spec.duration, spec.phi_r, spec.phi_b, n_max));
}

// ---- instability sweep ------------------------------------------------------

std::vector<InstabilityRow> instability_sweep(InstabilityMethod method, int N, const std::vector<double>& dphi_grid,
                                              int samples, std::uint64_t seed, const InstabilityOptions& opt) {
    if (N < 1 || samples < 1) throw Error(ErrorKind::InvalidArgument, "instability sweep needs N >= 1 and samples >= 1");
    const bool rabi = method == InstabilityMethod::RabiGate;
    const int n_max = opt.n_max > 0 ? opt.n_max : (rabi ? 80 : kDefaultNMax);
    const int G = opt.grid;
    const auto grid = uniform_grid(G);

    // common random numbers across dphi values
    const auto nominal = sample_phase_vectors(N, samples, derive_seed(seed, 1));
    const int n_off = rabi ? 2 * (N + 2) : N + 2;
    std::vector<std::vector<double>> u(samples, std::vector<double>(n_off));
    {
        Rng rng(derive_seed(seed, 2));
        for (auto& v : u)
            for (auto& x : v) x = 2 * rng.uniform() - 1;
    }

    std::vector<InstabilityRow> rows;
    for (double dphi : dphi_grid) {
        std::vector<std::array<double, 3>> per(samples);
        parallel_for(samples, [&](std::size_t i) {
            const auto& off = u[i];
            Eigen::MatrixXd P(G, G);
            double nbar = 0.0;
            if (!rabi) {
                std::vector<double> ph(N);
                for (int j = 0; j < N; ++j) ph[j] = nominal[i][j] + dphi * off[j];
                const JointState psi = prepare(build_sequence(uniform_areas(N, opt.prep_area), ph), n_max);
                nbar = fock_distribution(psi).mean;
                for (int a = 0; a < G; ++a) {
                    const JointState x = apply_pulse(psi, PulseSpec::make(PulseKind::RSB, opt.verification_area,
                                                                          grid[a] + dphi * off[N]));
                    for (int b = 0; b < G; ++b)
                        P(a, b) = qubit_populations(apply_pulse(x, PulseSpec::make(PulseKind::BSB, opt.verification_area,
                                                                                   grid[b] + dphi * off[N + 1])))
                                      .first;
                }
            } else {
                std::vector<cplx> a(2 * (n_max + 1), 0.0);
                a[0] = 1.0;
                for (int j = 0; j < N; ++j)
                    trotter_apply(a, n_max, opt.prep_area, dphi * off[2 * j], dphi * off[2 * j + 1], opt.trotter_steps);
                if (edge_population(a) > kLeakTol)
                    throw Error(ErrorKind::CutoffViolation, "Rabi-gate preparation reaches the Fock cutoff");
                const JointState psi(n_max, a);
                nbar = fock_distribution(psi).mean;
                for (int p = 0; p < G; ++p) {
                    std::vector<cplx> x = a;
                    trotter_apply(x, n_max, opt.verification_area, grid[p] + dphi * off[2 * N],
                                  dphi * off[2 * N + 1], opt.trotter_steps);
                    for (int q = 0; q < G; ++q) {
                        std::vector<cplx> y = x;
                        trotter_apply(y, n_max, opt.verification_area, dphi * off[2 * N + 2],
                                      grid[q] + dphi * off[2 * N + 3], opt.trotter_steps);
                        double pg = 0.0;
                        for (int n = 0; n <= n_max; ++n) pg += std::norm(y[flat_index(Qubit::g, n)]);
                        P(p, q) = pg;
                    }
                }
            }
            const auto e = fringe_extrema(P.data(), static_cast<std::size_t>(P.size()));
            per[i] = {e.contrast, e.visibility, nbar};
        });
        InstabilityRow r;
        r.dphi = dphi;
        for (auto& p : per) {
            r.mean_contrast += p[0] / samples;
            r.mean_visibility += p[1] / samples;
            r.mean_phonons += p[2] / samples;
        }
        double v = 0.0;
        for (auto& p : per) v += (p[0] - r.mean_contrast) * (p[0] - r.mean_contrast);
        r.stderr_contrast = samples > 1 ? std::sqrt(v / (samples - 1) / samples) : 0.0;
        rows.push_back(r);
    }
    return rows;
}

// ---- cat states -----------------------------------------------------------------

cplx coherent_overlap(cplx alpha, cplx beta) {
    return std::exp(-(std::norm(alpha) + std::norm(beta)) / 2 + std::conj(alpha) * beta);
}

int coherent_cutoff(cplx alpha) {
    const double r = std::abs(alpha);
    return static_cast<int>(std::ceil(r * r + 6 * r + 10));
}

Eigen::VectorXcd coherent_state(cplx alpha, int cutoff) {
    Eigen::VectorXcd v(cutoff + 1);
    cplx c = std::exp(-std::norm(alpha) / 2);
    for (int n = 0; n <= cutoff; ++n) {
        v(n) = c;
        c *= alpha / std::sqrt(double(n + 1));
    }
    return v;
}

namespace {

CatMetrics from_uv(cplx u, cplx v) {
    CatMetrics m;
    m.a = std::norm(u) + std::norm(v);
    m.b = 2 * std::abs(u) * std::abs(v);
    if (!(m.a > 0.0)) throw Error(ErrorKind::UndefinedVisibility, "state and measurement are orthogonal (a = 0)");
    m.C = 2 * m.b;
    m.V = m.b / m.a;
    return m;
}

void check_cat(const CatSpec& s) {
    if (!(s.weight >= 0.0 && s.weight <= 1.0)) throw Error(ErrorKind::InvalidArgument, "cat weight must lie in [0, 1]");
}

}  // namespace

// <M|Psi> = sqrt(w w') <alpha'|alpha> + e^{i(phi - phi')} sqrt((1-w)(1-w')) <-beta'|-beta>
CatMetrics cat_metrics(const CatSpec& s, const CatSpec& m) {
    check_cat(s);
    check_cat(m);
    const cplx u = std::sqrt(s.weight * m.weight) * coherent_overlap(m.alpha, s.alpha);
    const cplx v = std::sqrt((1 - s.weight) * (1 - m.weight)) * coherent_overlap(-m.beta, -s.beta);
    return from_uv(u, v);
}

CatMetrics cat_metrics_truncated(const CatSpec& s, const CatSpec& m, int cutoff) {
    check_cat(s);
    check_cat(m);
    if (cutoff <= 0)
        cutoff = std::max({coherent_cutoff(s.alpha), coherent_cutoff(s.beta), coherent_cutoff(m.alpha),
                           coherent_cutoff(m.beta)});
    const cplx u = std::sqrt(s.weight * m.weight) *
                   coherent_state(m.alpha, cutoff).dot(coherent_state(s.alpha, cutoff));
    const cplx v = std::sqrt((1 - s.weight) * (1 - m.weight)) *
                   coherent_state(-m.beta, cutoff).dot(coherent_state(-s.beta, cutoff));
    return from_uv(u, v);
}

// ---- detection-area optimization ----------------------------------------------

std::vector<PulseKind> detection_kinds(int N) {
    std::vector<PulseKind> k(N);
    const PulseKind last = prep_kind(N);
    const PulseKind other = last == PulseKind::BSB ? PulseKind::RSB : PulseKind::BSB;
    for (int j = 0; j < N; ++j) k[j] = j % 2 == 0 ? last : other;
    return k;
}

namespace {

struct DetectionFringe {
    const JointState& psi;
    const std::vector<PulseKind>& kinds;
    const std::vector<double>& phases;  // phases[0] is replaced by the scan
    const std::vector<double>& grid;

    Extrema operator()(const std::vector<double>& areas) const {
        const int n_max = psi.n_max();
        std::vector<std::vector<double>> ang(kinds.size());
        for (std::size_t j = 0; j < kinds.size(); ++j) ang[j] = mixing_angles(kinds[j], areas[j], {}, n_max);
        std::vector<double> P(grid.size());
        std::vector<cplx> a;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            a.assign(psi.amps().begin(), psi.amps().end());
            for (std::size_t j = 0; j < kinds.size(); ++j)
                detail::rotate_state(a.data(), n_max, kinds[j], ang[j], j == 0 ? grid[i] : phases[j]);
            double pg = 0.0;
            for (int n = 0; n <= n_max; ++n) pg += std::norm(a[flat_index(Qubit::g, n)]);
            P[i] = pg;
        }
        return fringe_extrema(P.data(), P.size());
    }
};

template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters) {
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < iters; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

DetectionResult optimize_detection_areas(int N, int samples, std::uint64_t seed, int budget, int grid_points, int n_max) {
    if (budget < 1) throw Error(ErrorKind::InvalidArgument, "optimizer budget must be >= 1");
    if (N < 1 || samples < 1) throw Error(ErrorKind::InvalidArgument, "need N >= 1 and samples >= 1");
    const auto kinds = detection_kinds(N);
    const auto grid = uniform_grid(grid_points);
    DetectionResult res;
    res.areas.resize(samples);
    res.visibility.resize(samples);
    res.baseline.resize(samples);
    std::vector<double> contrast(samples), base_c(samples);
    parallel_for(samples, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        std::vector<double> prep_ph(N), det_ph(N);
        for (auto& x : prep_ph) x = kTwoPi * rng.uniform();
        for (auto& x : det_ph) x = kTwoPi * rng.uniform();
        const JointState psi = prepare(build_half_transfer_sequence(N, prep_ph), n_max);
        const DetectionFringe fringe{psi, kinds, det_ph, grid};

        std::vector<double> areas = uniform_areas(N);
        const Extrema base = fringe(areas);
        double best = base.visibility;
        for (int round = 0; round < 3; ++round)
            for (int j = 0; j < N; ++j) {
                auto f = [&](double x) {
                    std::vector<double> t = areas;
                    t[j] = x;
                    return fringe(t).visibility;
                };
                const auto [x, fx] = golden_max(f, 0.0, kTwoPi, budget);
                if (fx >= best) {
                    areas[j] = x;
                    best = fx;
                }
            }
        const Extrema fin = fringe(areas);
        res.areas[r] = areas;
        res.visibility[r] = fin.visibility;
        contrast[r] = fin.contrast;
        res.baseline[r] = base.visibility;
        base_c[r] = base.contrast;
    });
    for (int r = 0; r < samples; ++r) {
        res.mean_visibility += res.visibility[r] / samples;
        res.mean_contrast += contrast[r] / samples;
        res.baseline_visibility += res.baseline[r] / samples;
        res.baseline_contrast += base_c[r] / samples;
    }
    return res;
}

}  // namespace paritylock
