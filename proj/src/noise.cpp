#include "paritylock/noise.hpp"

#include <cmath>

namespace paritylock {

DecoherenceModel DecoherenceModel::make(Kind kind, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorKind::InvalidArgument, "w must lie in [0, 1]");
    return DecoherenceModel{kind, w};
}

const char* to_string(DecoherenceModel::Kind k) {
    using K = DecoherenceModel::Kind;
    switch (k) {
        case K::WMixture: return "w-mixture";
        case K::WPower: return "w-power";
        case K::QubitDephase: return "qubit-dephase";
        case K::FullDephase: return "full-dephase";
        case K::ClassicalMixture: return "classical-mixture";
    }
    return "?";
}

DecoherenceModel::Kind decoherence_kind_from_string(const std::string& s) {
    using K = DecoherenceModel::Kind;
    for (K k : {K::WMixture, K::WPower, K::QubitDephase, K::FullDephase, K::ClassicalMixture})
        if (s == to_string(k)) return k;
    throw Error(ErrorKind::InvalidArgument, "unknown decoherence model '" + s + "'");
}

bool is_parity_locked(const JointDensity& rho, double tol) {
    for (int n = 0; n <= rho.n_max(); ++n) {
        const auto i = flat_index(n % 2 == 0 ? Qubit::e : Qubit::g, n);
        if (rho(i, i).real() > tol) return false;
    }
    return true;
}

namespace {

Eigen::MatrixXcd diag_part(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    d.diagonal() = m.diagonal();
    return d;
}

Eigen::MatrixXcd qubit_dephased(const JointDensity& rho) {
    if (!is_parity_locked(rho))
        throw Error(ErrorKind::NotParityLocked, "qubit dephasing needs the qubit-parity structure");
    Eigen::MatrixXcd m = rho.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if ((i % 2) != (j % 2)) m(i, j) = 0.0;
    return m;
}

}  // namespace

JointDensity apply_model(const JointDensity& rho, const DecoherenceModel& model) {
    using K = DecoherenceModel::Kind;
    const double w = model.w;
    const Eigen::MatrixXcd& m = rho.matrix();
    switch (model.kind) {
        case K::WMixture: return JointDensity(rho.n_max(), w * m + (1 - w) * diag_part(m));
        case K::WPower: {
            Eigen::MatrixXcd out = m;
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j) {
                    const int k = std::abs(int(i / 2) - int(j / 2));
                    if (k > 0) out(i, j) *= std::pow(w, k);
                }
            return JointDensity(rho.n_max(), std::move(out));
        }
        case K::QubitDephase: return JointDensity(rho.n_max(), qubit_dephased(rho));
        case K::FullDephase: return JointDensity(rho.n_max(), diag_part(m));
        case K::ClassicalMixture: return JointDensity(rho.n_max(), w * m + (1 - w) * qubit_dephased(rho));
    }
    return rho;
}

JointDensity apply_model(const JointState& psi, const DecoherenceModel& model) {
    return apply_model(JointDensity::pure(psi), model);
}

double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }
double purity(const JointDensity& rho) { return purity(rho.matrix()); }

}  // namespace paritylock
