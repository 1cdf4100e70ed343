#pragma once

#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paritylock/fockspace.hpp"

namespace paritylock {

enum class PulseKind { RSB, BSB, Carrier };

struct RabiModel {
    enum class Type { LambDicke, BeyondLD };
    Type type = Type::LambDicke;
    double eta = 0.0;

    static RabiModel lamb_dicke() { return {}; }
    static RabiModel beyond_ld(double eta) { return {Type::BeyondLD, eta}; }
};

// Area giving 50% transfer on (g,0)<->(e,1): mixing angle (A/2)*sqrt(1) = pi/4.
inline constexpr double kHalfTransferArea = std::numbers::pi / 2;

struct PulseSpec {
    PulseKind kind = PulseKind::BSB;
    double area = 0.0;
    double phase = 0.0;
    RabiModel rabi_model{};

    // validates the area and wraps the phase into [0, 2pi)
    static PulseSpec make(PulseKind kind, double area, double phase, RabiModel model = {});
};

struct PhaseRotation {
    double theta = 0.0;
    double Theta = 0.0;
};

double wrap_phase(double phi);
const char* to_string(PulseKind k);
PulseKind pulse_kind_from_string(const std::string& s);

// Per-g-Fock mixing angle of the pair containing (g,n); zero where (g,n) is uncoupled.
// RSB pairs (g,n)<->(e,n-1), BSB pairs (g,n)<->(e,n+1), carrier pairs (g,n)<->(e,n).
std::vector<double> mixing_angles(PulseKind kind, double area, const RabiModel& model, int n_max);

JointState apply_pulse(const JointState& psi, const PulseSpec& pulse);
JointDensity apply_pulse_density(const JointDensity& rho, const PulseSpec& pulse);

// l = +1 (blue) or -1 (red); units eta*Omega0 for LambDicke, Omega0 for BeyondLD
double rabi_frequency(int n, int l, const RabiModel& model);
// |<n|exp(i eta (a + a^dag))|n>| in units of Omega0 (1 in the Lamb-Dicke limit)
double carrier_frequency(int n, const RabiModel& model);

JointState apply_phase_rotation(const JointState& psi, const PhaseRotation& rot);
JointDensity apply_phase_rotation(const JointDensity& rho, const PhaseRotation& rot);

// dense matrices on the joint space
Eigen::MatrixXcd pulse_matrix(const PulseSpec& pulse, int n_max);
Eigen::MatrixXcd phase_rotation_matrix(const PhaseRotation& rot, int n_max);
// exp[i kappa (sigma+ a e^{-i phi} + h.c.)] (RSB) or with a^dag (BSB), by eigendecomposition
Eigen::MatrixXcd hamiltonian_form_unitary(PulseKind kind, double kappa, double phi, int n_max);

enum class Identity { E1_rsb_theta, E2_rsb_Theta, E3_bsb_theta, E4_bsb_Theta };
const char* to_string(Identity id);

// Max interior deviation between pulse*rotation and rotation*shifted pulse.
// flip_shift negates the phase shift, used as a negative control.
double verify_commutation_identity(Identity id, double A, double angle, int n_max, bool flip_shift = false);

namespace detail {
// in-place pulse on a raw amplitude buffer of length 2(n_max+1)
void rotate_state(cplx* amps, int n_max, PulseKind kind, const std::vector<double>& angles, double phase);
void rotate_density(Eigen::MatrixXcd& m, int n_max, PulseKind kind, const std::vector<double>& angles, double phase);
// e-Fock index paired with (g,n) for the given kind
inline int partner(PulseKind kind, int n) {
    return kind == PulseKind::RSB ? n - 1 : kind == PulseKind::BSB ? n + 1 : n;
}
}  // namespace detail

}  // namespace paritylock
