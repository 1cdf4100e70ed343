#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "paritylock/noise.hpp"
#include "paritylock/preparation.hpp"

namespace paritylock {

// Full transfer on (g,0)<->(e,1); see README for why this differs from the preparation area.
inline constexpr double kDefaultVerificationArea = std::numbers::pi;
inline constexpr int kDefaultGrid = 32;

std::vector<double> uniform_grid(int points, double period = 2 * std::numbers::pi);

struct VerificationSpec {
    enum class Mode { SinglePulse, TwoPulse };
    Mode mode = Mode::TwoPulse;
    double t1 = kDefaultVerificationArea;
    double t2 = kDefaultVerificationArea;
    std::vector<double> grid1 = uniform_grid(kDefaultGrid);
    std::vector<double> grid2 = uniform_grid(kDefaultGrid);
    // single-pulse mode only: kind of the lone pulse (area t1, phase phi1)
    PulseKind single_kind = PulseKind::RSB;
    RabiModel rabi_model{};
    bool axes = true;  // compute sum/diff projections in two-pulse mode

    static VerificationSpec two_pulse(double t1 = kDefaultVerificationArea, double t2 = kDefaultVerificationArea,
                                      int grid = kDefaultGrid);
    static VerificationSpec single_pulse(double t1 = kDefaultVerificationArea, int grid = kDefaultGrid,
                                         PulseKind kind = PulseKind::RSB);
    void validate() const;
};

struct AxisFringe {
    std::vector<double> scan;       // scanned combination
    std::vector<double> constants;  // held combination
    Eigen::MatrixXd pg;             // rows: constants, cols: scan
    double mean_contrast = 0.0;
    double mean_visibility = 0.0;
};

struct FringeSurface {
    std::vector<double> grid1, grid2;
    Eigen::MatrixXd pg;  // rows: grid1 (phi1), cols: grid2 (phi2)
    double contrast = 0.0;
    double visibility = 0.0;
    // sum axis: phi1 = s + d, phi2 = s - d, s scanned over [0, 2pi) at each held d in [0, pi)
    // diff axis: d scanned over [0, pi) at each held s in [0, 2pi)
    AxisFringe sum_axis, diff_axis;
};

struct Extrema {
    double contrast, visibility;
};
Extrema fringe_extrema(const double* pg, std::size_t n);

double measure_pg(const JointDensity& rho, double t1, double t2, double phi1, double phi2, const RabiModel& model = {});
double measure_pg(const JointState& psi, double t1, double t2, double phi1, double phi2, const RabiModel& model = {});

FringeSurface scan_fringe(const JointDensity& rho, const VerificationSpec& spec);
FringeSurface scan_fringe(const JointState& psi, const VerificationSpec& spec);

struct PrepConfig {
    int N = 8;
    std::vector<double> areas;  // empty: uniform half-transfer
    int n_max = kDefaultNMax;
    RabiModel rabi_model{};
    std::vector<double> resolved_areas() const;
};

struct MetricPair {
    double contrast = 0.0, visibility = 0.0;
    double contrast_stderr = 0.0, visibility_stderr = 0.0;
};

struct AveragedMetrics {
    MetricPair total;  // extrema of the full (phi1, phi2) surface, or the 1-D fringe in single-pulse mode
    MetricPair sum_axis;   // qubit-oscillator
    MetricPair diff_axis;  // internal oscillator
    int samples = 0;
};

AveragedMetrics averaged_metrics(const PrepConfig& prep, const std::optional<DecoherenceModel>& noise,
                                 const VerificationSpec& spec, int samples, std::uint64_t seed);

std::pair<double, double> overlap_metrics(cplx alpha_e, cplx alpha_o);

// Ground-state POVM after RSB(t1, phi1) then BSB(t2, phi2), split by phase harmonic.
struct PovmTerms {
    Eigen::MatrixXcd dc;   // phase independent, diagonal
    Eigen::MatrixXcd pi1;  // e^{+-i phi1}, e^{+-i phi2}: Fock distance 1
    Eigen::MatrixXcd pi2;  // e^{+-i(phi1 - phi2)}: equal qubit, Fock distance 2
    Eigen::MatrixXcd pi3;  // e^{+-i(2 phi1 - phi2)}: Fock distance 3
    Eigen::MatrixXcd total() const { return dc + pi1 + pi2 + pi3; }
};

PovmTerms povm_ground(double t1, double t2, double phi1, double phi2, int n_max, const RabiModel& model = {});

using Harmonic = std::pair<int, int>;
inline const std::array<Harmonic, 4> kHarmonics = {{{0, 1}, {1, 0}, {1, -1}, {2, -1}}};

// Pi(phi) = sum over (k,l) of e^{i(k phi1 + l phi2)} M_kl, including (0,0) and negative harmonics
std::map<Harmonic, Eigen::MatrixXcd> povm_harmonics(double t1, double t2, int n_max, const RabiModel& model = {});

struct CoherenceSpectrum {
    double dc = 0.0;
    // P_g = dc + sum A_kl cos(k phi1 + l phi2) + B_kl sin(k phi1 + l phi2)
    std::map<Harmonic, double> A, B;
    double R1_prime = 0.0;  // (0,1)
    double R1 = 0.0;        // (1,0)
    double R2 = 0.0;        // (1,-1)
    double R3 = 0.0;        // (2,-1)
    std::array<double, 4> R() const { return {R1_prime, R1, R2, R3}; }
};

// from a sampled surface (uniform full-period grids); throws aliasing-error when under-sampled
CoherenceSpectrum fourier_spectrum(const FringeSurface& surface);
// analytic route: tr(M_kl rho)
CoherenceSpectrum fourier_spectrum(const JointDensity& rho, double t1, double t2, const RabiModel& model = {});

// full 2-D DFT coefficient at (k,l)
cplx dft_coefficient(const FringeSurface& surface, int k, int l);

// coefficients for (R1', R1, R2, R3)
inline constexpr std::array<double, 4> kRegressionCoefficients = {1.73, 1.07, 1.87, 1.14};
double predicted_max(const CoherenceSpectrum& s, const std::array<double, 4>& coef = kRegressionCoefficients);

enum class TermType { e_g, e_e, g_g };
enum class ReadoutMode { SingleRed, SingleBlue, RedBlue };

// P_g contribution of the unit element |x><y| of the state after PhaseRotation(theta, Theta),
// with x = (e|g, n), y = (g|e, m) per the term type, read out by pulses of area 2 kappa at zero phase.
cplx offdiag_contribution(TermType term, int n, int m, double kappa, double theta, double Theta,
                          ReadoutMode mode = ReadoutMode::RedBlue, int n_max = -1);

// <y| Pi |x> for flat indices, summed in closed form
cplx povm_element(double t1, double t2, double phi1, double phi2, std::size_t y, std::size_t x, int n_max,
                  const RabiModel& model = {});

}  // namespace paritylock
