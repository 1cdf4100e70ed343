#include "paritylock/preparation.hpp"

#include <cmath>
#include <numbers>

#include "paritylock/parallel.hpp"
#include "paritylock/random.hpp"

namespace paritylock {

PulseKind prep_kind(int j) { return j % 2 == 1 ? PulseKind::BSB : PulseKind::RSB; }

SequenceSpec build_sequence(const std::vector<double>& areas, const std::vector<double>& phases, RabiModel model) {
    if (areas.empty()) throw Error(ErrorKind::InvalidArgument, "sequence needs N >= 1");
    if (phases.size() != areas.size())
        throw Error(ErrorKind::InvalidPhases, "expected " + std::to_string(areas.size()) + " phases, got " +
                                                  std::to_string(phases.size()));
    SequenceSpec s;
    s.n_prep = static_cast<int>(areas.size());
    for (int j = 1; j <= s.n_prep; ++j) {
        s.pulses.push_back(PulseSpec::make(prep_kind(j), areas[j - 1], phases[j - 1], model));
        s.phase_vector.push_back(s.pulses.back().phase);
    }
    return s;
}

SequenceSpec build_half_transfer_sequence(int N, const std::vector<double>& phases, RabiModel model) {
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "sequence needs N >= 1");
    if (phases.size() != static_cast<std::size_t>(N))
        throw Error(ErrorKind::InvalidPhases,
                    "expected " + std::to_string(N) + " phases, got " + std::to_string(phases.size()));
    return build_sequence(uniform_areas(N), phases, model);
}

std::vector<double> compensated_areas(int N) {
    std::vector<double> a(N);
    for (int j = 1; j <= N; ++j) a[j - 1] = kHalfTransferArea / std::sqrt(double(j));
    return a;
}

std::vector<double> uniform_areas(int N, double area) { return std::vector<double>(N, area); }

JointState prepare(const SequenceSpec& seq, int n_max) {
    std::vector<cplx> a(2 * static_cast<std::size_t>(n_max + 1), 0.0);
    check_cutoff(n_max);
    a[0] = 1.0;
    for (const auto& p : seq.pulses) {
        if (p.area == 0.0) continue;
        detail::rotate_state(a.data(), n_max, p.kind, mixing_angles(p.kind, p.area, p.rabi_model, n_max), p.phase);
    }
    if (edge_population(a) > kLeakTol)
        throw Error(ErrorKind::CutoffViolation, "prepared state reaches the top Fock levels; raise n_max");
    return JointState(n_max, std::move(a));
}

std::vector<std::vector<double>> sample_phase_vectors(int N, int count, std::uint64_t seed) {
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "count must be >= 1");
    Rng rng(seed);
    std::vector<std::vector<double>> out(count, std::vector<double>(N));
    for (auto& v : out)
        for (auto& x : v) x = 2 * std::numbers::pi * rng.uniform();
    return out;
}

std::vector<GrowthPoint> growth_curve(const std::vector<int>& N_list, int samples, std::uint64_t seed,
                                      const AreaPolicy& areas, int n_max) {
    std::vector<GrowthPoint> out;
    for (int N : N_list) {
        const auto phases = sample_phase_vectors(N, samples, derive_seed(seed, N));
        const auto A = areas ? areas(N) : uniform_areas(N);
        std::vector<std::vector<double>> probs(samples);
        parallel_for(samples, [&](std::size_t i) {
            probs[i] = fock_distribution(prepare(build_sequence(A, phases[i]), n_max)).probs;
        });
        std::vector<double> avg(n_max + 1, 0.0);
        std::vector<double> means(samples);
        for (int i = 0; i < samples; ++i) {
            double m = 0.0;
            for (int n = 0; n <= n_max; ++n) {
                avg[n] += probs[i][n] / samples;
                m += n * probs[i][n];
            }
            means[i] = m;
        }
        GrowthPoint g;
        g.N = N;
        g.averaged = FockDistribution::from_probs(avg);
        g.mean = g.averaged.mean;
        g.std = g.averaged.std;
        double var = 0.0;
        for (double m : means) var += (m - g.mean) * (m - g.mean);
        g.mean_stderr = samples > 1 ? std::sqrt(var / (samples - 1) / samples) : 0.0;
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<int> full_cycle_levels(double area, int m_max, double tol) {
    std::vector<int> out;
    for (int m = 1; m <= m_max; ++m) {
        const double s = std::sin(0.5 * area * std::sqrt(double(m)));
        if (s * s < tol) out.push_back(m);
    }
    return out;
}

}  // namespace paritylock
