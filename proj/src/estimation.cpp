#include "paritylock/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "paritylock/linalg.hpp"
#include "paritylock/parallel.hpp"
#include "paritylock/random.hpp"

namespace paritylock {

void RabiFlopRecord::validate() const {
    if (times.size() != pg.size()) throw Error(ErrorKind::InvalidArgument, "times and pg lengths differ");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw Error(ErrorKind::InvalidArgument, "times must be strictly increasing");
    for (double p : pg)
        if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "pg values must lie in [0, 1]");
    if (shots_per_point < 1) throw Error(ErrorKind::InvalidArgument, "shots_per_point must be >= 1");
}

void FlopModel::validate() const {
    if (!(omega0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega0 must be > 0");
    if (!(gamma0 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma0 must be >= 0");
}

double FlopModel::omega(int n) const { return omega0 * rabi_frequency(n, +1, rabi_model); }
double FlopModel::gamma(int n) const { return gamma0 * std::pow(n + 1.0, gamma_exponent); }

std::vector<double> default_flop_times(int points, double t_max_ms) {
    std::vector<double> t(points);
    for (int i = 0; i < points; ++i) t[i] = t_max_ms * i / (points - 1);
    return t;
}

namespace {

Eigen::MatrixXd design_matrix(const FlopModel& model, const std::vector<double>& times, int n_cols) {
    Eigen::MatrixXd M(times.size(), n_cols);
    for (int n = 0; n < n_cols; ++n) {
        const double w = model.omega(n), g = model.gamma(n);
        for (std::size_t i = 0; i < times.size(); ++i) M(i, n) = std::cos(w * times[i]) * std::exp(-g * times[i]);
    }
    return M;
}

}  // namespace

std::vector<double> flop_curve(const std::vector<double>& probs, const FlopModel& model, const std::vector<double>& times) {
    model.validate();
    const Eigen::MatrixXd M = design_matrix(model, times, static_cast<int>(probs.size()));
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(probs.data(), probs.size());
    Eigen::VectorXd y = 0.5 * (Eigen::VectorXd::Ones(times.size()) + M * p);
    return {y.data(), y.data() + y.size()};
}

RabiFlopRecord simulate_rabi_flop(const FockDistribution& dist, const FlopModel& model, const std::vector<double>& times,
                                  int shots, std::uint64_t seed) {
    RabiFlopRecord r;
    r.times = times;
    r.pg = flop_curve(dist.probs, model, times);
    r.shots_per_point = shots > 0 ? shots : 1;
    if (shots > 0) {
        Rng rng(seed);
        for (double& p : r.pg) {
            std::binomial_distribution<int> b(shots, std::clamp(p, 0.0, 1.0));
            p = double(b(rng.engine())) / shots;
        }
    }
    for (double& p : r.pg) p = std::clamp(p, 0.0, 1.0);
    return r;
}

PhononFit fit_phonon_distribution(const RabiFlopRecord& record, const FlopModel& model, int n_fit_max, int resamples,
                                  std::uint64_t seed) {
    record.validate();
    model.validate();
    const int cols = n_fit_max + 1;
    if (static_cast<int>(record.times.size()) < n_fit_max + 2)
        throw Error(ErrorKind::InvalidArgument, "record needs at least n_fit_max + 2 points");
    const Eigen::MatrixXd M = design_matrix(model, record.times, cols);

    Eigen::VectorXd norms = M.colwise().norm();
    if (norms.minCoeff() == 0.0) throw Error(ErrorKind::UnresolvedFrequencies, "a model column vanishes");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M * norms.cwiseInverse().asDiagonal());
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (!(cond < 1e10))
        throw Error(ErrorKind::UnresolvedFrequencies,
                    "design condition number " + std::to_string(cond) + "; extend the record to separate the frequencies");

    auto solve = [&](const std::vector<double>& pg) {
        Eigen::VectorXd y(pg.size());
        for (std::size_t i = 0; i < pg.size(); ++i) y(i) = 2 * pg[i] - 1;
        return nnls(M, y);
    };

    PhononFit fit;
    const Eigen::VectorXd p = solve(record.pg);
    fit.probs.assign(p.data(), p.data() + p.size());
    const auto model_pg = flop_curve(fit.probs, model, record.times);
    double ss = 0.0;
    for (std::size_t i = 0; i < model_pg.size(); ++i) ss += std::pow(model_pg[i] - record.pg[i], 2);
    fit.residual = std::sqrt(ss / model_pg.size());

    std::vector<Eigen::VectorXd> reps(resamples);
    const int shots = record.shots_per_point;
    parallel_for(resamples, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        std::vector<double> pg(record.pg.size());
        for (std::size_t i = 0; i < pg.size(); ++i) {
            std::binomial_distribution<int> b(shots, record.pg[i]);
            pg[i] = double(b(rng.engine())) / shots;
        }
        reps[r] = solve(pg);
    });
    fit.uncertainties.assign(cols, 0.0);
    if (resamples > 1)
        for (int n = 0; n < cols; ++n) {
            double m = 0.0, v = 0.0;
            for (auto& x : reps) m += x(n);
            m /= resamples;
            for (auto& x : reps) v += (x(n) - m) * (x(n) - m);
            fit.uncertainties[n] = std::sqrt(v / (resamples - 1));
        }
    const double total = p.sum();
    if (std::abs(total - 1.0) > 0.1)
        fit.flags.push_back("probabilities sum to " + std::to_string(total) + "; record carries little coherent signal");
    return fit;
}

namespace {

FockDistribution conditional_from(int n_max, Qubit outcome, bool flip, auto&& pop) {
    const Qubit s = flip ? (outcome == Qubit::g ? Qubit::e : Qubit::g) : outcome;
    std::vector<double> p(n_max + 1);
    double tot = 0.0;
    for (int n = 0; n <= n_max; ++n) tot += (p[n] = pop(s, n));
    if (tot < 1e-12) throw Error(ErrorKind::ZeroProbability, "outcome has zero probability");
    for (double& x : p) x /= tot;
    return FockDistribution::from_probs(std::move(p));
}

}  // namespace

FockDistribution conditional_distribution(const JointDensity& rho, Qubit outcome, bool carrier_flip) {
    return conditional_from(rho.n_max(), outcome, carrier_flip, [&](Qubit s, int n) {
        const auto i = flat_index(s, n);
        return rho(i, i).real();
    });
}

FockDistribution conditional_distribution(const JointState& psi, Qubit outcome, bool carrier_flip) {
    return conditional_from(psi.n_max(), outcome, carrier_flip,
                            [&](Qubit s, int n) { return std::norm(psi.amp(s, n)); });
}

Fringe1D fringe_1d(const FringeSurface& f) {
    if (f.grid2.size() != 1) throw Error(ErrorKind::InvalidArgument, "expected a single-pulse fringe");
    Fringe1D r;
    r.phases = f.grid1;
    for (Eigen::Index i = 0; i < f.pg.rows(); ++i) r.pg.push_back(f.pg(i, 0));
    return r;
}

namespace {

struct PairModel {
    std::vector<double> pg_joint, pe_joint;  // parity-locked joint populations
};

PairModel joint_from(const FockDistribution& d, int n_max) {
    PairModel m;
    m.pg_joint.assign(n_max + 2, 0.0);
    m.pe_joint.assign(n_max + 2, 0.0);
    for (std::size_t n = 0; n < d.probs.size() && static_cast<int>(n) <= n_max; ++n)
        (n % 2 == 0 ? m.pg_joint : m.pe_joint)[n] = d.probs[n];
    return m;
}

// DC level and ideal (w = 1, single-pathway) fringe amplitude of a lone pulse
std::pair<double, double> pulse_dc_amp(const PairModel& m, PulseKind kind, double area, const RabiModel& model,
                                       int n_max, int* pathways = nullptr) {
    const auto ang = mixing_angles(kind, area, model, n_max);
    double dc = 0.0, amp = 0.0;
    int paths = 0;
    for (int n = 0; n <= n_max; ++n) {
        const double pg = m.pg_joint[n];
        const int p = detail::partner(kind, n);
        if (ang[n] == 0.0 || p < 0) {
            dc += pg;
            continue;
        }
        const double pe = m.pe_joint[p];
        const double c = std::cos(ang[n]), s = std::sin(ang[n]);
        dc += c * c * pg + s * s * pe;
        const double a = std::abs(2 * c * s) * std::sqrt(pg * pe);
        amp += a;
        if (pg > 1e-9 && pe > 1e-9) ++paths;
    }
    if (pathways) *pathways = paths;
    return {dc, amp};
}

}  // namespace

WEstimate estimate_w(const Fringe1D& fr, const FockDistribution& known, PulseKind kind, double nominal_area,
                     const RabiModel& model) {
    const std::size_t G = fr.phases.size();
    if (G < 4 || fr.pg.size() != G) throw Error(ErrorKind::InvalidArgument, "fringe needs >= 4 matching samples");
    const double step = 2 * std::numbers::pi / G;
    for (std::size_t i = 0; i < G; ++i)
        if (std::abs(fr.phases[i] - fr.phases[0] - step * i) > 1e-9)
            throw Error(ErrorKind::InvalidArgument, "fringe must sample one full period uniformly");
    if (kind == PulseKind::Carrier) throw Error(ErrorKind::InvalidArgument, "w estimation needs a sideband readout");

    WEstimate est;
    double dc = 0.0;
    cplx f1 = 0.0;
    for (std::size_t i = 0; i < G; ++i) {
        dc += fr.pg[i];
        f1 += fr.pg[i] * std::polar(1.0, -fr.phases[i]);
    }
    est.measured_dc = dc / G;
    est.measured_amplitude = 2 * std::abs(f1) / G;

    const int n_max = std::max<int>(known.probs.size() + 2, 4);
    const PairModel pm = joint_from(known, n_max);
    auto dc_at = [&](double t) { return pulse_dc_amp(pm, kind, t, model, n_max).first; };

    // area from the DC level: nearest root to the nominal area inside [0.5, 1.5] x nominal
    const int K = 2000;
    const double lo = 0.5 * nominal_area, hi = 1.5 * nominal_area;
    double dmin = 1e300, dmax = -1e300, best_t = nominal_area, best_gap = 1e300;
    double root = -1.0;
    double prev_t = lo, prev_v = dc_at(lo) - est.measured_dc;
    for (int k = 0; k <= K; ++k) {
        const double t = lo + (hi - lo) * k / K;
        const double v = dc_at(t) - est.measured_dc;
        dmin = std::min(dmin, v + est.measured_dc);
        dmax = std::max(dmax, v + est.measured_dc);
        if (std::abs(v) < best_gap) {
            best_gap = std::abs(v);
            best_t = t;
        }
        if (k > 0 && (v == 0.0 || (prev_v < 0) != (v < 0))) {
            double a = prev_t, b = t, fa = prev_v;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = dc_at(mid) - est.measured_dc;
                if ((fm < 0) == (fa < 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            const double r = 0.5 * (a + b);
            if (root < 0 || std::abs(r - nominal_area) < std::abs(root - nominal_area)) root = r;
        }
        prev_t = t;
        prev_v = v;
    }
    if (dmax - dmin < 0.05) {
        est.area_hat = nominal_area;
        est.area_fallback = true;
        est.flags.push_back("DC level insensitive to the verification area; nominal area used");
    } else if (root >= 0) {
        est.area_hat = root;
    } else if (best_gap < 0.02) {
        est.area_hat = best_t;
        est.flags.push_back("DC level at the edge of the achievable range");
    } else {
        throw Error(ErrorKind::InconsistentPopulations, "measured DC level " + std::to_string(est.measured_dc) +
                                                            " is not reachable with the given populations");
    }

    int paths = 0;
    est.ideal_amplitude = pulse_dc_amp(pm, kind, est.area_hat, model, n_max, &paths).second;
    est.multi_pathway = paths > 1;
    if (est.multi_pathway) est.flags.push_back("several coupled pairs: ideal amplitude is an upper bound");
    if (est.ideal_amplitude < 1e-12) throw Error(ErrorKind::InconsistentPopulations, "ideal modulation amplitude vanishes");
    est.w_raw = est.measured_amplitude / est.ideal_amplitude;
    est.w_hat = std::clamp(est.w_raw, 0.0, 1.0);
    est.clipped = est.w_hat != est.w_raw;
    if (est.clipped) est.flags.push_back("w estimate clipped to [0, 1]");
    return est;
}

PulseKind w_readout_kind(int N) { return N == 1 ? PulseKind::BSB : PulseKind::RSB; }

// N = 1 reads (g,0)<->(e,1); longer sequences read (g,2)<->(e,1) with the red sideband
double w_readout_area(int N) { return N == 1 ? kHalfTransferArea : kHalfTransferArea / std::sqrt(2.0); }

WEstimate run_w_scenario(const WScenario& s) {
    const auto phases = sample_phase_vectors(s.N, 1, s.seed)[0];
    const auto areas = s.areas.empty() ? uniform_areas(s.N) : s.areas;
    const JointState psi = prepare(build_sequence(areas, phases), s.n_max);
    const JointDensity rho = apply_model(psi, DecoherenceModel::make(DecoherenceModel::Kind::WMixture, s.w));
    const PulseKind kind = w_readout_kind(s.N);
    const double nominal = s.verification_area > 0 ? s.verification_area : w_readout_area(s.N);
    auto spec = VerificationSpec::single_pulse(nominal * (1.0 + s.area_error), s.grid, kind);
    Fringe1D fr = fringe_1d(scan_fringe(rho, spec));
    if (s.shots > 0) {
        Rng rng(derive_seed(s.seed, 0x5eed));
        for (double& p : fr.pg) {
            std::binomial_distribution<int> b(s.shots, std::clamp(p, 0.0, 1.0));
            p = double(b(rng.engine())) / s.shots;
        }
    }
    return estimate_w(fr, fock_distribution(psi), kind, nominal);
}

std::vector<WLedgerRow> fit_w_ledger(const std::vector<WScenario>& scenarios) {
    std::vector<WLedgerRow> rows;
    for (const auto& s : scenarios) {
        WLedgerRow r;
        r.N = s.N;
        r.w_true = s.w;
        r.estimate = run_w_scenario(s);
        r.one_minus_w = 1.0 - r.estimate.w_hat;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace paritylock
