#pragma once

#include <cstdint>
#include <vector>

#include "paritylock/interferometry.hpp"
#include "paritylock/random.hpp"

namespace paritylock {

// exp[(A/2)(G_R(phi_r) + G_B(phi_b))] with G_R = e^{i phi} sigma+ a - h.c., G_B = e^{i phi} sigma+ a^dag - h.c.
// Phases follow the pulse convention of apply_pulse; duration is in pulse-area units.
struct RabiGateSpec {
    double duration = kHalfTransferArea;
    double phi_r = 0.0;
    double phi_b = 0.0;
    int trotter_steps = 64;
    double dphi = 0.0;
    double tolerance = 0.0;  // > 0: compute the Trotter error bound and compare

    void validate() const;
};

struct RabiGateResult {
    JointState state;
    double offset_r = 0.0, offset_b = 0.0;
    double trotter_error = -1.0;  // operator norm vs the dense exponential, when computed
    bool within_tolerance = true;
};

// offsets uniform in [-dphi, dphi] drawn from rng, one per gate call
RabiGateResult apply_rabi_gate(const JointState& psi, const RabiGateSpec& spec, Rng& rng);

Eigen::MatrixXcd rabi_gate_dense(double duration, double phi_r, double phi_b, int n_max);
// product of `steps` micro-pulse pairs, BSB then RSB within each step
Eigen::MatrixXcd rabi_gate_trotter(double duration, double phi_r, double phi_b, int steps, int n_max);
double rabi_trotter_error(const RabiGateSpec& spec, int n_max);

enum class InstabilityMethod { Sideband, RabiGate };

struct InstabilityOptions {
    double prep_area = kHalfTransferArea;
    double verification_area = kDefaultVerificationArea;
    int grid = 16;
    int trotter_steps = 64;
    int n_max = 0;  // 0: 32 for sideband, 80 for Rabi gates
};

struct InstabilityRow {
    double dphi = 0.0;
    double mean_contrast = 0.0;    // mean over realizations of the max contrast on the grid
    double mean_visibility = 0.0;
    double stderr_contrast = 0.0;
    double mean_phonons = 0.0;     // of the prepared state
};

std::vector<InstabilityRow> instability_sweep(InstabilityMethod method, int N, const std::vector<double>& dphi_grid,
                                              int samples, std::uint64_t seed, const InstabilityOptions& opt = {});

struct CatSpec {
    cplx alpha = 0.0, beta = 0.0;
    double weight = 0.5;
    double rel_phase = 0.0;
};

struct CatMetrics {
    double a = 0.0, b = 0.0, C = 0.0, V = 0.0;
};

// <alpha|beta> for coherent states
cplx coherent_overlap(cplx alpha, cplx beta);
int coherent_cutoff(cplx alpha);
Eigen::VectorXcd coherent_state(cplx alpha, int cutoff);

// F(phi) = |<M|Psi(phi)>|^2 = a + b cos(phi + const) with phi the relative phase of the state
CatMetrics cat_metrics(const CatSpec& state, const CatSpec& measurement);
// same quantities from truncated Fock vectors
CatMetrics cat_metrics_truncated(const CatSpec& state, const CatSpec& measurement, int cutoff = 0);

struct DetectionResult {
    double mean_visibility = 0.0, mean_contrast = 0.0;
    double baseline_visibility = 0.0, baseline_contrast = 0.0;
    std::vector<std::vector<double>> areas;  // optimized areas per realization
    std::vector<double> visibility, baseline;  // per realization
};

// detection kinds alternate starting with the kind of the last preparation pulse
std::vector<PulseKind> detection_kinds(int N);

// budget: golden-section iterations per one-dimensional search (>= 1)
DetectionResult optimize_detection_areas(int N, int samples, std::uint64_t seed, int optimizer_budget = 30,
                                         int grid = kDefaultGrid, int n_max = kDefaultNMax);

}  // namespace paritylock
