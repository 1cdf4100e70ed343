#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paritylock/interferometry.hpp"

namespace paritylock {

struct RabiFlopRecord {
    std::vector<double> times;  // ms
    std::vector<double> pg;
    int shots_per_point = 100;

    void validate() const;
};

// P_g(t) = 1/2 [1 + sum_n P_n cos(Omega_n t) exp(-gamma_n t)], gamma_n = gamma0 (n+1)^gamma_exponent.
// Omega_n = omega0 * rabi_frequency(n, +1, rabi_model): omega0 is eta*Omega0 in the Lamb-Dicke model
// and the carrier Rabi frequency Omega0 for BeyondLD.
struct FlopModel {
    double omega0 = 2 * std::numbers::pi * 21.7;  // rad/ms
    double gamma0 = 0.1;                          // 1/ms
    double gamma_exponent = 0.7;
    RabiModel rabi_model = RabiModel::beyond_ld(0.0629);

    void validate() const;
    double omega(int n) const;
    double gamma(int n) const;
};

struct PhononFit {
    std::vector<double> probs;
    std::vector<double> uncertainties;
    double residual = 0.0;  // rms of data - model
    std::vector<std::string> flags;
};

std::vector<double> default_flop_times(int points = 200, double t_max_ms = 4.0);

std::vector<double> flop_curve(const std::vector<double>& probs, const FlopModel& model, const std::vector<double>& times);

// shots <= 0 returns the exact model curve
RabiFlopRecord simulate_rabi_flop(const FockDistribution& dist, const FlopModel& model, const std::vector<double>& times,
                                  int shots, std::uint64_t seed);

inline constexpr int kDefaultFitNMax = 12;
inline constexpr int kDefaultResamples = 100;

PhononFit fit_phonon_distribution(const RabiFlopRecord& record, const FlopModel& model, int n_fit_max = kDefaultFitNMax,
                                  int resamples = kDefaultResamples, std::uint64_t seed = 1);

FockDistribution conditional_distribution(const JointDensity& rho, Qubit outcome, bool carrier_flip = false);
FockDistribution conditional_distribution(const JointState& psi, Qubit outcome, bool carrier_flip = false);

struct Fringe1D {
    std::vector<double> phases;  // uniform over one full period
    std::vector<double> pg;
};

Fringe1D fringe_1d(const FringeSurface& single_pulse_surface);

struct WEstimate {
    double w_hat = 0.0;  // clipped to [0, 1]
    double w_raw = 0.0;
    double area_hat = 0.0;
    double measured_dc = 0.0, measured_amplitude = 0.0, ideal_amplitude = 0.0;
    bool clipped = false;
    bool area_fallback = false;  // DC insensitive to the area; nominal area used
    bool multi_pathway = false;  // more than one coupled pair: ideal amplitude is an upper bound
    std::vector<std::string> flags;
};

// Single-pulse fringe of kind `kind` with nominal area; known_probs from an independent fit,
// mapped onto the parity-locked joint populations (even n with g, odd n with e).
WEstimate estimate_w(const Fringe1D& fringe, const FockDistribution& known_probs, PulseKind kind, double nominal_area,
                     const RabiModel& model = {});

struct WScenario {
    int N = 1;
    double w = 1.0;
    std::vector<double> areas;  // preparation areas; empty: half-transfer
    double verification_area = 0.0;  // 0: w_readout_area(N)
    double area_error = 0.0;    // relative error of the true verification area
    int shots = 0;              // 0: noiseless
    int grid = 64;
    std::uint64_t seed = 1;
    int n_max = kDefaultNMax;
};

// pulse kind used to read out an N-pulse preparation: BSB for N = 1, RSB otherwise
PulseKind w_readout_kind(int N);
// area putting the coupled pair at maximal mixing, where the ideal amplitude is stationary in the area
double w_readout_area(int N);

WEstimate run_w_scenario(const WScenario& s);

struct WLedgerRow {
    int N = 0;
    double w_true = 0.0;
    double one_minus_w = 0.0;
    WEstimate estimate;
};
std::vector<WLedgerRow> fit_w_ledger(const std::vector<WScenario>& scenarios);

}  // namespace paritylock
