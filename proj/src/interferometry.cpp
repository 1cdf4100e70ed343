#include "paritylock/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "paritylock/parallel.hpp"

namespace paritylock {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Readout {
    double x = 0.0;  // phase-independent part
    cplx y = 0.0;    // P_g(phi) = x + Re(e^{-i phi} y)
    double at(double phi) const { return x + (std::polar(1.0, -phi) * y).real(); }
};

// ground population after a BSB with angles beta, as a function of its phase
Readout bsb_readout(const cplx* a, int n_max, const std::vector<double>& beta) {
    Readout r;
    for (int n = 0; n <= n_max; ++n) {
        const cplx g = a[flat_index(Qubit::g, n)];
        if (beta[n] == 0.0) {
            r.x += std::norm(g);
            continue;
        }
        const cplx e = a[flat_index(Qubit::e, n + 1)];
        const double c = std::cos(beta[n]), s = std::sin(beta[n]);
        r.x += c * c * std::norm(g) + s * s * std::norm(e);
        r.y += -2.0 * c * s * e * std::conj(g);
    }
    return r;
}

Readout bsb_readout(const Eigen::MatrixXcd& m, int n_max, const std::vector<double>& beta) {
    Readout r;
    for (int n = 0; n <= n_max; ++n) {
        const auto gi = static_cast<Eigen::Index>(flat_index(Qubit::g, n));
        if (beta[n] == 0.0) {
            r.x += m(gi, gi).real();
            continue;
        }
        const auto ei = static_cast<Eigen::Index>(flat_index(Qubit::e, n + 1));
        const double c = std::cos(beta[n]), s = std::sin(beta[n]);
        r.x += c * c * m(gi, gi).real() + s * s * m(ei, ei).real();
        r.y += -2.0 * c * s * m(ei, gi);
    }
    return r;
}

double ground_population(const cplx* a, int n_max) {
    double p = 0.0;
    for (int n = 0; n <= n_max; ++n) p += std::norm(a[flat_index(Qubit::g, n)]);
    return p;
}

double ground_population(const Eigen::MatrixXcd& m, int n_max) {
    double p = 0.0;
    for (int n = 0; n <= n_max; ++n) p += m(2 * n, 2 * n).real();
    return p;
}

// Evaluates P_g(phi1, phi2) for one input; the RSB stage is cached per distinct phi1.
class FringeEngine {
public:
    FringeEngine(const JointState* psi, const JointDensity* rho, const VerificationSpec& spec)
        : psi_(psi), rho_(rho), spec_(spec), n_max_(psi ? psi->n_max() : rho->n_max()) {
        const bool single = spec.mode == VerificationSpec::Mode::SinglePulse;
        if (single && spec.single_kind == PulseKind::BSB) {
            red_area_ = 0.0;
            blue_area_ = spec.t1;
        } else if (single && spec.single_kind == PulseKind::Carrier) {
            throw Error(ErrorKind::InvalidArgument, "carrier verification is not supported");
        } else {
            red_area_ = spec.t1;
            blue_area_ = single ? 0.0 : spec.t2;
        }
        alpha_ = mixing_angles(PulseKind::RSB, red_area_, spec.rabi_model, n_max_);
        beta_ = mixing_angles(PulseKind::BSB, blue_area_, spec.rabi_model, n_max_);
    }

    // two-pulse (or single RSB / single BSB) readout at (phi1, phi2)
    double pg(double phi1, double phi2) {
        const bool blue_only = spec_.mode == VerificationSpec::Mode::SinglePulse && spec_.single_kind == PulseKind::BSB;
        if (blue_only) return stage(0.0).at(phi1);
        return stage(phi1).at(phi2);
    }

private:
    const Readout& stage(double phi1) {
        const auto key = std::llround(wrap_phase(phi1) * 1e9);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        Readout r;
        if (psi_) {
            std::vector<cplx> a(psi_->amps().begin(), psi_->amps().end());
            if (red_area_ > 0) detail::rotate_state(a.data(), n_max_, PulseKind::RSB, alpha_, phi1);
            r = blue_area_ > 0 ? bsb_readout(a.data(), n_max_, beta_) : Readout{ground_population(a.data(), n_max_), 0.0};
        } else {
            Eigen::MatrixXcd m = rho_->matrix();
            if (red_area_ > 0) detail::rotate_density(m, n_max_, PulseKind::RSB, alpha_, phi1);
            r = blue_area_ > 0 ? bsb_readout(m, n_max_, beta_) : Readout{ground_population(m, n_max_), 0.0};
        }
        return cache_.emplace(key, r).first->second;
    }

    const JointState* psi_;
    const JointDensity* rho_;
    const VerificationSpec& spec_;
    int n_max_;
    double red_area_ = 0.0, blue_area_ = 0.0;
    std::vector<double> alpha_, beta_;
    std::unordered_map<long long, Readout> cache_;
};

AxisFringe make_axis(FringeEngine& eng, int G, bool sum_axis) {
    AxisFringe ax;
    const auto s_grid = uniform_grid(G);
    const auto d_grid = uniform_grid(G, std::numbers::pi);
    ax.scan = sum_axis ? s_grid : d_grid;
    ax.constants = sum_axis ? d_grid : s_grid;
    ax.pg.resize(G, G);
    double csum = 0.0, vsum = 0.0;
    for (int c = 0; c < G; ++c) {
        for (int k = 0; k < G; ++k) {
            const double s = sum_axis ? ax.scan[k] : ax.constants[c];
            const double d = sum_axis ? ax.constants[c] : ax.scan[k];
            ax.pg(c, k) = eng.pg(s + d, s - d);
        }
        Eigen::VectorXd row = ax.pg.row(c);
        const auto e = fringe_extrema(row.data(), G);
        csum += e.contrast;
        vsum += e.visibility;
    }
    ax.mean_contrast = csum / G;
    ax.mean_visibility = vsum / G;
    return ax;
}

FringeSurface scan_impl(const JointState* psi, const JointDensity* rho, const VerificationSpec& spec) {
    spec.validate();
    FringeEngine eng(psi, rho, spec);
    FringeSurface f;
    const bool single = spec.mode == VerificationSpec::Mode::SinglePulse;
    f.grid1 = spec.grid1;
    f.grid2 = single ? std::vector<double>{0.0} : spec.grid2;
    f.pg.resize(f.grid1.size(), f.grid2.size());
    for (std::size_t i = 0; i < f.grid1.size(); ++i)
        for (std::size_t j = 0; j < f.grid2.size(); ++j) f.pg(i, j) = eng.pg(f.grid1[i], f.grid2[j]);
    const auto e = fringe_extrema(f.pg.data(), static_cast<std::size_t>(f.pg.size()));
    f.contrast = e.contrast;
    f.visibility = e.visibility;
    if (!single && spec.axes) {
        const int G = static_cast<int>(spec.grid1.size());
        f.sum_axis = make_axis(eng, G, true);
        f.diff_axis = make_axis(eng, G, false);
    }
    return f;
}

bool is_uniform_period(const std::vector<double>& g) {
    const double step = kTwoPi / g.size();
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g[i] - g[0] - step * i) > 1e-9) return false;
    return true;
}

}  // namespace

std::vector<double> uniform_grid(int points, double period) {
    if (points < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one point");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = period * i / points;
    return g;
}

VerificationSpec VerificationSpec::two_pulse(double t1, double t2, int grid) {
    VerificationSpec s;
    s.t1 = t1;
    s.t2 = t2;
    s.grid1 = s.grid2 = uniform_grid(grid);
    return s;
}

VerificationSpec VerificationSpec::single_pulse(double t1, int grid, PulseKind kind) {
    VerificationSpec s;
    s.mode = Mode::SinglePulse;
    s.t1 = t1;
    s.t2 = 0.0;
    s.grid1 = uniform_grid(grid);
    s.grid2 = {0.0};
    s.single_kind = kind;
    return s;
}

void VerificationSpec::validate() const {
    auto check = [](const std::vector<double>& g, const char* name) {
        if (g.empty()) throw Error(ErrorKind::InvalidArgument, std::string(name) + " is empty");
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(g[i] >= 0.0 && g[i] < kTwoPi)) throw Error(ErrorKind::InvalidArgument, std::string(name) + " leaves [0, 2pi)");
            if (i > 0 && !(g[i] > g[i - 1])) throw Error(ErrorKind::InvalidArgument, std::string(name) + " is not increasing");
        }
    };
    check(grid1, "grid1");
    if (mode == Mode::TwoPulse) check(grid2, "grid2");
    if (!(t1 >= 0.0 && t2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "verification areas must be >= 0");
    if (mode == Mode::SinglePulse && t2 != 0.0) throw Error(ErrorKind::InvalidArgument, "single-pulse mode needs t2 = 0");
}

Extrema fringe_extrema(const double* pg, std::size_t n) {
    const auto [lo, hi] = std::minmax_element(pg, pg + n);
    const double c = *hi - *lo;
    const double s = *hi + *lo;
    if (!(s > 0.0)) throw Error(ErrorKind::UndefinedVisibility, "P_max + P_min = 0");
    return {c, c / s};
}

double measure_pg(const JointDensity& rho, double t1, double t2, double phi1, double phi2, const RabiModel& model) {
    JointDensity r = rho;
    if (t1 > 0) r = apply_pulse_density(r, PulseSpec::make(PulseKind::RSB, t1, phi1, model));
    if (t2 > 0) r = apply_pulse_density(r, PulseSpec::make(PulseKind::BSB, t2, phi2, model));
    return qubit_populations(r).first;
}

double measure_pg(const JointState& psi, double t1, double t2, double phi1, double phi2, const RabiModel& model) {
    JointState s = psi;
    if (t1 > 0) s = apply_pulse(s, PulseSpec::make(PulseKind::RSB, t1, phi1, model));
    if (t2 > 0) s = apply_pulse(s, PulseSpec::make(PulseKind::BSB, t2, phi2, model));
    return qubit_populations(s).first;
}

FringeSurface scan_fringe(const JointDensity& rho, const VerificationSpec& spec) { return scan_impl(nullptr, &rho, spec); }
FringeSurface scan_fringe(const JointState& psi, const VerificationSpec& spec) { return scan_impl(&psi, nullptr, spec); }

std::vector<double> PrepConfig::resolved_areas() const {
    if (areas.empty()) return uniform_areas(N);
    if (static_cast<int>(areas.size()) != N) throw Error(ErrorKind::InvalidArgument, "areas length must equal N");
    return areas;
}

AveragedMetrics averaged_metrics(const PrepConfig& prep, const std::optional<DecoherenceModel>& noise,
                                 const VerificationSpec& spec, int samples, std::uint64_t seed) {
    if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
    spec.validate();
    const auto phases = sample_phase_vectors(prep.N, samples, seed);
    const auto areas = prep.resolved_areas();
    const bool two = spec.mode == VerificationSpec::Mode::TwoPulse && spec.axes;
    std::vector<std::array<double, 6>> per(samples);
    parallel_for(samples, [&](std::size_t i) {
        const JointState psi = prepare(build_sequence(areas, phases[i], prep.rabi_model), prep.n_max);
        FringeSurface f = noise ? scan_fringe(apply_model(psi, *noise), spec) : scan_fringe(psi, spec);
        per[i] = {f.contrast, f.visibility, 0, 0, 0, 0};
        if (two)
            per[i] = {f.contrast, f.visibility, f.sum_axis.mean_contrast, f.sum_axis.mean_visibility,
                      f.diff_axis.mean_contrast, f.diff_axis.mean_visibility};
    });
    auto stat = [&](int k, double& mean, double& se) {
        double s = 0.0;
        for (auto& p : per) s += p[k];
        mean = s / samples;
        double v = 0.0;
        for (auto& p : per) v += (p[k] - mean) * (p[k] - mean);
        se = samples > 1 ? std::sqrt(v / (samples - 1) / samples) : 0.0;
    };
    AveragedMetrics m;
    m.samples = samples;
    stat(0, m.total.contrast, m.total.contrast_stderr);
    stat(1, m.total.visibility, m.total.visibility_stderr);
    if (two) {
        stat(2, m.sum_axis.contrast, m.sum_axis.contrast_stderr);
        stat(3, m.sum_axis.visibility, m.sum_axis.visibility_stderr);
        stat(4, m.diff_axis.contrast, m.diff_axis.contrast_stderr);
        stat(5, m.diff_axis.visibility, m.diff_axis.visibility_stderr);
    }
    return m;
}

std::pair<double, double> overlap_metrics(cplx alpha_e, cplx alpha_o) {
    const double den = std::norm(alpha_e) + std::norm(alpha_o);
    if (den == 0.0) throw Error(ErrorKind::UndefinedVisibility, "both overlaps vanish");
    const double c = std::abs(alpha_e * std::conj(alpha_o));
    return {c, 2 * c / den};
}

// ---- POVM in closed form --------------------------------------------------

namespace {

// <chi_m| = <g,m| U_B U_R: bra coefficients at zero phase plus their harmonic
struct Component {
    std::size_t idx;
    double coef;
    Harmonic h;
};

std::vector<std::array<Component, 4>> povm_rows(double t1, double t2, int n_max, const RabiModel& model, std::vector<int>& count) {
    const auto alpha = mixing_angles(PulseKind::RSB, t1, model, n_max);
    const auto beta = mixing_angles(PulseKind::BSB, t2, model, n_max);
    std::vector<std::array<Component, 4>> rows(n_max + 1);
    count.assign(n_max + 1, 0);
    for (int m = 0; m <= n_max; ++m) {
        const double cb = std::cos(beta[m]), sb = std::sin(beta[m]);
        const double am = alpha[m];
        const double a2 = m + 2 <= n_max ? alpha[m + 2] : 0.0;
        auto& r = rows[m];
        int k = 0;
        r[k++] = {flat_index(Qubit::g, m), cb * std::cos(am), {0, 0}};
        if (m >= 1) r[k++] = {flat_index(Qubit::e, m - 1), -cb * std::sin(am), {-1, 0}};
        if (m + 1 <= n_max) r[k++] = {flat_index(Qubit::e, m + 1), -sb * std::cos(a2), {0, -1}};
        if (m + 2 <= n_max) r[k++] = {flat_index(Qubit::g, m + 2), -sb * std::sin(a2), {1, -1}};
        count[m] = k;
    }
    return rows;
}

int order_of(Harmonic h) {
    const int k = std::abs(h.first), l = std::abs(h.second);
    if (k == 0 && l == 0) return 0;
    if (k + l == 1) return 1;
    if (k == 1 && l == 1) return 2;
    return 3;
}

}  // namespace

std::map<Harmonic, Eigen::MatrixXcd> povm_harmonics(double t1, double t2, int n_max, const RabiModel& model) {
    std::vector<int> count;
    const auto rows = povm_rows(t1, t2, n_max, model, count);
    const int d = 2 * (n_max + 1);
    std::map<Harmonic, Eigen::MatrixXcd> out;
    for (int m = 0; m <= n_max; ++m)
        for (int a = 0; a < count[m]; ++a)
            for (int b = 0; b < count[m]; ++b) {
                const auto& x = rows[m][a];
                const auto& y = rows[m][b];
                const double v = x.coef * y.coef;
                if (v == 0.0) continue;
                const Harmonic h{y.h.first - x.h.first, y.h.second - x.h.second};
                auto it = out.find(h);
                if (it == out.end()) it = out.emplace(h, Eigen::MatrixXcd::Zero(d, d)).first;
                it->second(x.idx, y.idx) += v;
            }
    return out;
}

PovmTerms povm_ground(double t1, double t2, double phi1, double phi2, int n_max, const RabiModel& model) {
    if (!(t1 >= 0.0 && t2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "areas must be >= 0");
    const int d = 2 * (n_max + 1);
    PovmTerms p{Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d),
                Eigen::MatrixXcd::Zero(d, d)};
    Eigen::MatrixXcd* slot[4] = {&p.dc, &p.pi1, &p.pi2, &p.pi3};
    for (const auto& [h, M] : povm_harmonics(t1, t2, n_max, model))
        *slot[order_of(h)] += std::polar(1.0, h.first * phi1 + h.second * phi2) * M;
    return p;
}

cplx povm_element(double t1, double t2, double phi1, double phi2, std::size_t y, std::size_t x, int n_max,
                  const RabiModel& model) {
    // the rows containing a flat index are among m in {n-2, .., n+1} for its Fock label n
    std::vector<int> count;
    const auto rows = povm_rows(t1, t2, n_max, model, count);
    cplx s = 0.0;
    const int ny = static_cast<int>(y / 2);
    for (int m = std::max(0, ny - 2); m <= std::min(n_max, ny + 1); ++m) {
        const Component *cy = nullptr, *cx = nullptr;
        for (int a = 0; a < count[m]; ++a) {
            if (rows[m][a].idx == y) cy = &rows[m][a];
            if (rows[m][a].idx == x) cx = &rows[m][a];
        }
        if (!cy || !cx) continue;
        const int hk = cx->h.first - cy->h.first, hl = cx->h.second - cy->h.second;
        s += cy->coef * cx->coef * std::polar(1.0, hk * phi1 + hl * phi2);
    }
    return s;
}

cplx offdiag_contribution(TermType term, int n, int m, double kappa, double theta, double Theta, ReadoutMode mode,
                          int n_max) {
    if (n < 0 || m < 0) throw Error(ErrorKind::InvalidArgument, "Fock indices must be >= 0");
    if (n_max < 0) n_max = std::max(n, m) + 4;
    if (std::max(n, m) > n_max) return 0.0;
    const Qubit sx = term == TermType::g_g ? Qubit::g : Qubit::e;
    const Qubit sy = term == TermType::e_e ? Qubit::e : Qubit::g;
    const double t1 = mode == ReadoutMode::SingleBlue ? 0.0 : 2 * kappa;
    const double t2 = mode == ReadoutMode::SingleRed ? 0.0 : 2 * kappa;
    const PhaseRotation rot{theta, Theta};
    auto factor = [&](Qubit s, int k) {
        return std::polar(1.0, 0.5 * theta * (s == Qubit::e ? 1.0 : -1.0) + rot.Theta * k);
    };
    const cplx pi_yx = povm_element(t1, t2, 0.0, 0.0, flat_index(sy, m), flat_index(sx, n), n_max);
    return pi_yx * factor(sx, n) * std::conj(factor(sy, m));
}

// ---- Fourier spectra --------------------------------------------------------

namespace {

CoherenceSpectrum spectrum_from(const std::map<Harmonic, cplx>& F, double dc) {
    CoherenceSpectrum s;
    s.dc = dc;
    for (const auto& [h, f] : F) {
        s.A[h] = 2 * f.real();
        s.B[h] = -2 * f.imag();
    }
    auto R = [&](Harmonic h) {
        auto it = F.find(h);
        return it == F.end() ? 0.0 : 2 * std::abs(it->second);
    };
    s.R1_prime = R({0, 1});
    s.R1 = R({1, 0});
    s.R2 = R({1, -1});
    s.R3 = R({2, -1});
    return s;
}

}  // namespace

cplx dft_coefficient(const FringeSurface& f, int k, int l) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < f.grid1.size(); ++i)
        for (std::size_t j = 0; j < f.grid2.size(); ++j)
            s += f.pg(i, j) * std::polar(1.0, -(k * f.grid1[i] + l * f.grid2[j]));
    return s / double(f.grid1.size() * f.grid2.size());
}

CoherenceSpectrum fourier_spectrum(const FringeSurface& f) {
    const bool single = f.grid2.size() == 1;
    const std::size_t need1 = single ? 8 : 16, need2 = 8;
    if (f.grid1.size() < need1 || (!single && f.grid2.size() < need2))
        throw Error(ErrorKind::AliasingError, "grid " + std::to_string(f.grid1.size()) + "x" +
                                                  std::to_string(f.grid2.size()) + " is too coarse; need at least " +
                                                  std::to_string(need1) + "x" + std::to_string(single ? 1 : need2));
    if (!is_uniform_period(f.grid1) || (!single && !is_uniform_period(f.grid2)))
        throw Error(ErrorKind::AliasingError, "harmonic extraction needs uniform full-period grids");
    std::map<Harmonic, cplx> F;
    if (single) {
        F[{1, 0}] = dft_coefficient(f, 1, 0);
    } else {
        for (auto h : kHarmonics) F[h] = dft_coefficient(f, h.first, h.second);
    }
    return spectrum_from(F, f.pg.mean());
}

CoherenceSpectrum fourier_spectrum(const JointDensity& rho, double t1, double t2, const RabiModel& model) {
    const auto H = povm_harmonics(t1, t2, rho.n_max(), model);
    std::map<Harmonic, cplx> F;
    double dc = 0.0;
    for (const auto& [h, M] : H) {
        const cplx v = (M * rho.matrix()).trace();
        if (h == Harmonic{0, 0}) dc = v.real();
        for (auto k : kHarmonics)
            if (h == k) F[h] = v;
    }
    for (auto k : kHarmonics) F.try_emplace(k, 0.0);
    return spectrum_from(F, dc);
}

double predicted_max(const CoherenceSpectrum& s, const std::array<double, 4>& c) {
    const auto R = s.R();
    return c[0] * R[0] + c[1] * R[1] + c[2] * R[2] + c[3] * R[3];
}

}  // namespace paritylock
