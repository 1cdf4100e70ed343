#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "paritylock/sideband.hpp"

namespace paritylock {

inline constexpr int kDefaultSamples = 512;

struct SequenceSpec {
    std::vector<PulseSpec> pulses;
    int n_prep = 0;
    std::vector<double> phase_vector;
};

// pulse j (1-based) is BSB for odd j, RSB for even j
PulseKind prep_kind(int j);

SequenceSpec build_half_transfer_sequence(int N, const std::vector<double>& phases, RabiModel model = {});
SequenceSpec build_sequence(const std::vector<double>& areas, const std::vector<double>& phases, RabiModel model = {});

// A_j = (pi/2)/sqrt(j): half transfer on the topmost pair reached by pulse j
std::vector<double> compensated_areas(int N);
std::vector<double> uniform_areas(int N, double area = kHalfTransferArea);

JointState prepare(const SequenceSpec& seq, int n_max = kDefaultNMax);

std::vector<std::vector<double>> sample_phase_vectors(int N, int count, std::uint64_t seed);

struct GrowthPoint {
    int N = 0;
    double mean = 0.0;      // <n> of the phase-averaged distribution
    double std = 0.0;       // Delta n of the phase-averaged distribution
    double mean_stderr = 0.0;
    FockDistribution averaged;
};

using AreaPolicy = std::function<std::vector<double>(int)>;

std::vector<GrowthPoint> growth_curve(const std::vector<int>& N_list, int samples, std::uint64_t seed,
                                      const AreaPolicy& areas = {}, int n_max = kDefaultNMax);

// Fock indices m <= m_max whose sideband pair completes a full cycle at this area
// (transfer sin^2((A/2) sqrt(m)) below tol)
std::vector<int> full_cycle_levels(double area, int m_max, double tol = 1e-3);

}  // namespace paritylock
