#pragma once

#include <string>

#include "paritylock/fockspace.hpp"

namespace paritylock {

struct DecoherenceModel {
    enum class Kind { WMixture, WPower, QubitDephase, FullDephase, ClassicalMixture };
    Kind kind = Kind::WMixture;
    double w = 1.0;

    static DecoherenceModel make(Kind kind, double w = 1.0);
};

const char* to_string(DecoherenceModel::Kind k);
DecoherenceModel::Kind decoherence_kind_from_string(const std::string& s);

// WMixture: w rho + (1-w) diag(rho). WPower: element (n,m) scaled by w^|n-m|.
// QubitDephase: qubit coherences removed, each parity branch keeps its oscillator coherence.
// FullDephase: diag(rho). ClassicalMixture: w rho + (1-w) QubitDephase(rho).
JointDensity apply_model(const JointState& psi, const DecoherenceModel& model);
JointDensity apply_model(const JointDensity& rho, const DecoherenceModel& model);

double purity(const JointDensity& rho);
double purity(const Eigen::MatrixXcd& rho);

bool is_parity_locked(const JointDensity& rho, double tol = 1e-12);

}  // namespace paritylock
