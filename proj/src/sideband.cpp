#include "paritylock/sideband.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "paritylock/linalg.hpp"

namespace paritylock {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct DisplacementTable {
    std::vector<double> sideband;  // |<n+1|D|n>|
    std::vector<double> carrier;   // |<n|D|n>|
};

// Matrix elements of D = exp(i eta (a + a^dag)) on a truncated Fock space
// of size >= 3 * (n_top + 1) + 20; cached per (eta, n_top).
const DisplacementTable& displacement_table(double eta, int n_top) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, DisplacementTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(eta, n_top);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const int M = 3 * (n_top + 1) + 20;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(M, M);
    for (int k = 0; k + 1 < M; ++k) X(k, k + 1) = X(k + 1, k) = std::sqrt(double(k + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
    const auto& V = es.eigenvectors();
    const auto& lam = es.eigenvalues();

    DisplacementTable t;
    t.sideband.resize(n_top + 1);
    t.carrier.resize(n_top + 1);
    for (int n = 0; n <= n_top; ++n) {
        cplx sb = 0.0, cr = 0.0;
        for (int k = 0; k < M; ++k) {
            cplx ph = std::polar(1.0, eta * lam(k));
            sb += V(n + 1, k) * V(n, k) * ph;
            cr += V(n, k) * V(n, k) * ph;
        }
        t.sideband[n] = std::abs(sb);
        t.carrier[n] = std::abs(cr);
    }
    return cache.emplace(key, std::move(t)).first->second;
}

void check_model(const RabiModel& m) {
    if (m.type == RabiModel::Type::BeyondLD && !(m.eta > 0.0 && std::isfinite(m.eta)))
        throw Error(ErrorKind::InvalidArgument, "BeyondLD requires eta > 0");
}

}  // namespace

double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

const char* to_string(PulseKind k) {
    switch (k) {
        case PulseKind::RSB: return "RSB";
        case PulseKind::BSB: return "BSB";
        case PulseKind::Carrier: return "Carrier";
    }
    return "?";
}

PulseKind pulse_kind_from_string(const std::string& s) {
    if (s == "RSB" || s == "rsb" || s == "R") return PulseKind::RSB;
    if (s == "BSB" || s == "bsb" || s == "B") return PulseKind::BSB;
    if (s == "Carrier" || s == "carrier" || s == "C") return PulseKind::Carrier;
    throw Error(ErrorKind::InvalidArgument, "unknown pulse kind '" + s + "'");
}

PulseSpec PulseSpec::make(PulseKind kind, double area, double phase, RabiModel model) {
    if (!(std::isfinite(area) && area >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pulse area must be finite and >= 0");
    if (!std::isfinite(phase)) throw Error(ErrorKind::InvalidArgument, "pulse phase must be finite");
    check_model(model);
    return PulseSpec{kind, area, wrap_phase(phase), model};
}

double rabi_frequency(int n, int l, const RabiModel& model) {
    if (n < 0 || (l != 1 && l != -1)) throw Error(ErrorKind::InvalidArgument, "rabi_frequency needs n >= 0 and l = +-1");
    if (l == -1 && n == 0) throw Error(ErrorKind::NoTransition, "no red sideband transition from n = 0");
    check_model(model);
    const int lower = l == 1 ? n : n - 1;
    if (model.type == RabiModel::Type::LambDicke) return std::sqrt(double(lower + 1));
    return displacement_table(model.eta, lower).sideband[lower];
}

double carrier_frequency(int n, const RabiModel& model) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "carrier_frequency needs n >= 0");
    check_model(model);
    if (model.type == RabiModel::Type::LambDicke) return 1.0;
    return displacement_table(model.eta, n).carrier[n];
}

std::vector<double> mixing_angles(PulseKind kind, double area, const RabiModel& model, int n_max) {
    check_model(model);
    std::vector<double> ang(n_max + 1, 0.0);
    const bool bld = model.type == RabiModel::Type::BeyondLD;
    const DisplacementTable* tab = bld ? &displacement_table(model.eta, n_max) : nullptr;
    for (int n = 0; n <= n_max; ++n) {
        const int p = detail::partner(kind, n);
        if (p < 0 || p > n_max) continue;
        double f;
        if (kind == PulseKind::Carrier) {
            f = bld ? tab->carrier[n] : 1.0;
        } else {
            const int m = std::max(n, p);
            f = bld ? tab->sideband[m - 1] / model.eta : std::sqrt(double(m));
        }
        ang[n] = 0.5 * area * f;
    }
    return ang;
}

namespace detail {

void rotate_state(cplx* a, int n_max, PulseKind kind, const std::vector<double>& angles, double phase) {
    const cplx eph = std::polar(1.0, phase);
    for (int n = 0; n <= n_max; ++n) {
        if (angles[n] == 0.0) continue;
        const int p = partner(kind, n);
        const double c = std::cos(angles[n]), s = std::sin(angles[n]);
        cplx& g = a[flat_index(Qubit::g, n)];
        cplx& e = a[flat_index(Qubit::e, p)];
        const cplx g0 = g, e0 = e;
        g = c * g0 - std::conj(eph) * s * e0;
        e = eph * s * g0 + c * e0;
    }
}

void rotate_density(Eigen::MatrixXcd& m, int n_max, PulseKind kind, const std::vector<double>& angles, double phase) {
    const cplx eph = std::polar(1.0, phase);
    const Eigen::Index d = m.rows();
    for (int n = 0; n <= n_max; ++n) {
        if (angles[n] == 0.0) continue;
        const int p = partner(kind, n);
        const double c = std::cos(angles[n]), s = std::sin(angles[n]);
        const cplx ugg = c, uge = -std::conj(eph) * s, ueg = eph * s, uee = c;
        const auto i = static_cast<Eigen::Index>(flat_index(Qubit::g, n));
        const auto j = static_cast<Eigen::Index>(flat_index(Qubit::e, p));
        for (Eigen::Index k = 0; k < d; ++k) {
            const cplx ri = m(i, k), rj = m(j, k);
            m(i, k) = ugg * ri + uge * rj;
            m(j, k) = ueg * ri + uee * rj;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            const cplx ci = m(k, i), cj = m(k, j);
            m(k, i) = ci * std::conj(ugg) + cj * std::conj(uge);
            m(k, j) = ci * std::conj(ueg) + cj * std::conj(uee);
        }
    }
}

}  // namespace detail

JointState apply_pulse(const JointState& psi, const PulseSpec& pulse) {
    if (pulse.area == 0.0) return psi;
    std::vector<cplx> a(psi.amps().begin(), psi.amps().end());
    const double before = edge_population(a);
    detail::rotate_state(a.data(), psi.n_max(), pulse.kind,
                         mixing_angles(pulse.kind, pulse.area, pulse.rabi_model, psi.n_max()), pulse.phase);
    if (edge_population(a) - before > kLeakTol)
        throw Error(ErrorKind::CutoffViolation, "population reached the top Fock levels; raise n_max");
    return JointState(psi.n_max(), std::move(a));
}

JointDensity apply_pulse_density(const JointDensity& rho, const PulseSpec& pulse) {
    if (pulse.area == 0.0) return rho;
    const double before = edge_population(rho);
    Eigen::MatrixXcd m = rho.matrix();
    detail::rotate_density(m, rho.n_max(), pulse.kind,
                           mixing_angles(pulse.kind, pulse.area, pulse.rabi_model, rho.n_max()), pulse.phase);
    JointDensity out(rho.n_max(), std::move(m));
    if (edge_population(out) - before > kLeakTol)
        throw Error(ErrorKind::CutoffViolation, "population reached the top Fock levels; raise n_max");
    return out;
}

namespace {
cplx rotation_factor(const PhaseRotation& rot, int s, int n) {
    const double sz = s == 1 ? 1.0 : -1.0;
    return std::polar(1.0, 0.5 * rot.theta * sz + rot.Theta * n);
}
}  // namespace

JointState apply_phase_rotation(const JointState& psi, const PhaseRotation& rot) {
    std::vector<cplx> a(psi.amps().begin(), psi.amps().end());
    for (int n = 0; n <= psi.n_max(); ++n)
        for (int s = 0; s < 2; ++s) a[2 * n + s] *= rotation_factor(rot, s, n);
    return JointState(psi.n_max(), std::move(a));
}

JointDensity apply_phase_rotation(const JointDensity& rho, const PhaseRotation& rot) {
    Eigen::VectorXcd f = phase_rotation_matrix(rot, rho.n_max()).diagonal();
    Eigen::MatrixXcd m = f.asDiagonal() * rho.matrix() * f.conjugate().asDiagonal();
    return JointDensity(rho.n_max(), std::move(m));
}

Eigen::MatrixXcd phase_rotation_matrix(const PhaseRotation& rot, int n_max) {
    const int d = 2 * (n_max + 1);
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n <= n_max; ++n)
        for (int s = 0; s < 2; ++s) R(2 * n + s, 2 * n + s) = rotation_factor(rot, s, n);
    return R;
}

Eigen::MatrixXcd pulse_matrix(const PulseSpec& pulse, int n_max) {
    check_cutoff(n_max);
    const int d = 2 * (n_max + 1);
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(d, d);
    auto ang = mixing_angles(pulse.kind, pulse.area, pulse.rabi_model, n_max);
    const cplx eph = std::polar(1.0, pulse.phase);
    for (int n = 0; n <= n_max; ++n) {
        if (ang[n] == 0.0) continue;
        const int p = detail::partner(pulse.kind, n);
        const auto i = static_cast<Eigen::Index>(flat_index(Qubit::g, n));
        const auto j = static_cast<Eigen::Index>(flat_index(Qubit::e, p));
        const double c = std::cos(ang[n]), s = std::sin(ang[n]);
        U(i, i) = c;
        U(i, j) = -std::conj(eph) * s;
        U(j, i) = eph * s;
        U(j, j) = c;
    }
    return U;
}

Eigen::MatrixXcd hamiltonian_form_unitary(PulseKind kind, double kappa, double phi, int n_max) {
    if (kind == PulseKind::Carrier) throw Error(ErrorKind::InvalidArgument, "hamiltonian form defined for sidebands only");
    const int d = 2 * (n_max + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
    const cplx ph = std::polar(1.0, -phi);
    for (int n = 0; n <= n_max; ++n) {
        const int p = detail::partner(kind, n);
        if (p < 0 || p > n_max) continue;
        const double amp = std::sqrt(double(std::max(n, p)));
        const auto i = static_cast<Eigen::Index>(flat_index(Qubit::g, n));
        const auto j = static_cast<Eigen::Index>(flat_index(Qubit::e, p));
        H(j, i) = ph * amp;  // sigma+ a e^{-i phi}: |e,p><g,n|
        H(i, j) = std::conj(ph) * amp;
    }
    return expm_i_hermitian(H, kappa);
}

const char* to_string(Identity id) {
    switch (id) {
        case Identity::E1_rsb_theta: return "E1";
        case Identity::E2_rsb_Theta: return "E2";
        case Identity::E3_bsb_theta: return "E3";
        case Identity::E4_bsb_Theta: return "E4";
    }
    return "?";
}

double verify_commutation_identity(Identity id, double A, double angle, int n_max, bool flip_shift) {
    const double kappa = 0.5 * A;
    const double phi = 0.37;  // generic reference phase; the identities hold for every phi
    PulseKind kind = PulseKind::RSB;
    PhaseRotation rot;
    double shift = 0.0;
    switch (id) {
        case Identity::E1_rsb_theta: rot.theta = angle; shift = angle; break;
        case Identity::E2_rsb_Theta: rot.Theta = angle; shift = -angle; break;
        case Identity::E3_bsb_theta: kind = PulseKind::BSB; rot.theta = angle; shift = angle; break;
        case Identity::E4_bsb_Theta: kind = PulseKind::BSB; rot.Theta = angle; shift = angle; break;
    }
    if (flip_shift) shift = -shift;
    const Eigen::MatrixXcd R = phase_rotation_matrix(rot, n_max);
    const Eigen::MatrixXcd lhs = hamiltonian_form_unitary(kind, kappa, phi, n_max) * R;
    const Eigen::MatrixXcd rhs = R * hamiltonian_form_unitary(kind, kappa, phi + shift, n_max);
    const int interior = 2 * (n_max - 1);
    return (lhs - rhs).topLeftCorner(interior, interior).cwiseAbs().maxCoeff();
}

}  // namespace paritylock
