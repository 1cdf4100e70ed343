#include "paritylock/fockspace.hpp"

#include <cmath>
#include <string>

namespace paritylock {

void check_cutoff(int n_max) {
    if (n_max < 2) throw Error(ErrorKind::InvalidCutoff, "n_max must be >= 2, got " + std::to_string(n_max));
}

JointState::JointState(int n_max, std::vector<cplx> amps) : n_max_(n_max), amps_(std::move(amps)) {
    check_cutoff(n_max);
    if (amps_.size() != 2 * static_cast<std::size_t>(n_max + 1))
        throw Error(ErrorKind::DimensionMismatch, "amplitude vector length does not match n_max");
}

JointState JointState::ground(int n_max) { return basis(n_max, Qubit::g, 0); }

JointState JointState::basis(int n_max, Qubit s, int n) {
    check_cutoff(n_max);
    if (n < 0 || n > n_max) throw Error(ErrorKind::InvalidArgument, "Fock index out of range");
    std::vector<cplx> a(2 * static_cast<std::size_t>(n_max + 1), 0.0);
    a[flat_index(s, n)] = 1.0;
    return JointState(n_max, std::move(a));
}

double JointState::norm_squared() const {
    double s = 0.0;
    for (auto& a : amps_) s += std::norm(a);
    return s;
}

Eigen::VectorXcd JointState::to_vector() const {
    return Eigen::Map<const Eigen::VectorXcd>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

JointState JointState::from_vector(int n_max, const Eigen::VectorXcd& v) {
    return JointState(n_max, std::vector<cplx>(v.data(), v.data() + v.size()));
}

JointDensity::JointDensity(int n_max, Eigen::MatrixXcd matrix) : n_max_(n_max), m_(std::move(matrix)) {
    check_cutoff(n_max);
    const auto d = 2 * static_cast<Eigen::Index>(n_max + 1);
    if (m_.rows() != d || m_.cols() != d)
        throw Error(ErrorKind::DimensionMismatch, "density shape does not match n_max");
}

JointDensity JointDensity::pure(const JointState& psi) {
    Eigen::VectorXcd v = psi.to_vector();
    return JointDensity(psi.n_max(), v * v.adjoint());
}

double JointDensity::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool JointDensity::is_valid(double herm_tol, double trace_tol, double eig_tol) const {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
    if (std::abs(trace() - 1.0) > trace_tol) return false;
    return min_eigenvalue() >= -eig_tol;
}

FockDistribution FockDistribution::from_probs(std::vector<double> probs) {
    FockDistribution d;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        m1 += n * probs[n];
        m2 += double(n) * double(n) * probs[n];
    }
    d.probs = std::move(probs);
    d.mean = m1;
    d.std = std::sqrt(std::max(0.0, m2 - m1 * m1));
    return d;
}

JointState new_ground(int n_max) { return JointState::ground(n_max); }

FockDistribution fock_distribution(const JointState& psi) {
    std::vector<double> p(psi.n_max() + 1);
    for (int n = 0; n <= psi.n_max(); ++n) p[n] = std::norm(psi.amp(Qubit::g, n)) + std::norm(psi.amp(Qubit::e, n));
    return FockDistribution::from_probs(std::move(p));
}

FockDistribution fock_distribution(const JointDensity& rho) {
    std::vector<double> p(rho.n_max() + 1);
    for (int n = 0; n <= rho.n_max(); ++n)
        p[n] = rho(2 * n, 2 * n).real() + rho(2 * n + 1, 2 * n + 1).real();
    return FockDistribution::from_probs(std::move(p));
}

namespace {

double parity_from_diag(int n_max, Condition c, auto&& pop) {
    double num = 0.0, den = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        double w = 0.0;
        if (c != Condition::e) w += pop(Qubit::g, n);
        if (c != Condition::g) w += pop(Qubit::e, n);
        num += (n % 2 == 0 ? w : -w);
        den += w;
    }
    if (c != Condition::none && den < 1e-12)
        throw Error(ErrorKind::UndefinedConditional, "conditioning on an outcome with zero probability");
    return c == Condition::none ? num : num / den;
}

}  // namespace

double parity_expectation(const JointState& psi, Condition c) {
    return parity_from_diag(psi.n_max(), c, [&](Qubit s, int n) { return std::norm(psi.amp(s, n)); });
}

double parity_expectation(const JointDensity& rho, Condition c) {
    return parity_from_diag(rho.n_max(), c, [&](Qubit s, int n) {
        auto i = flat_index(s, n);
        return rho(i, i).real();
    });
}

std::pair<double, double> qubit_populations(const JointState& psi) {
    double pg = 0.0, pe = 0.0;
    for (int n = 0; n <= psi.n_max(); ++n) {
        pg += std::norm(psi.amp(Qubit::g, n));
        pe += std::norm(psi.amp(Qubit::e, n));
    }
    return {pg, pe};
}

std::pair<double, double> qubit_populations(const JointDensity& rho) {
    double pg = 0.0, pe = 0.0;
    for (int n = 0; n <= rho.n_max(); ++n) {
        pg += rho(2 * n, 2 * n).real();
        pe += rho(2 * n + 1, 2 * n + 1).real();
    }
    return {pg, pe};
}

Eigen::MatrixXcd reduce_oscillator(const JointDensity& rho) {
    const int d = rho.n_max() + 1;
    Eigen::MatrixXcd r(d, d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) r(n, m) = rho(2 * n, 2 * m) + rho(2 * n + 1, 2 * m + 1);
    return r;
}

Eigen::Matrix2cd reduce_qubit(const JointDensity& rho) {
    Eigen::Matrix2cd q = Eigen::Matrix2cd::Zero();
    for (int n = 0; n <= rho.n_max(); ++n)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) q(s, t) += rho(2 * n + s, 2 * n + t);
    return q;
}

cplx overlap(const JointState& a, const JointState& b) {
    if (a.n_max() != b.n_max()) throw Error(ErrorKind::DimensionMismatch, "overlap of states with different n_max");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amps()[i]) * b.amps()[i];
    return s;
}

double edge_population(std::span<const cplx> amps) {
    const std::size_t d = amps.size();
    double s = 0.0;
    for (std::size_t i = d - 4; i < d; ++i) s += std::norm(amps[i]);
    return s;
}

double edge_population(const JointDensity& rho) {
    const std::size_t d = rho.dim();
    double s = 0.0;
    for (std::size_t i = d - 4; i < d; ++i) s += rho(i, i).real();
    return s;
}

}  // namespace paritylock
