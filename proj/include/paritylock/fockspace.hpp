#pragma once

// Truncated qubit (x) Fock space. Flat index i = 2n + s, s = 0 for g, 1 for e.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "paritylock/error.hpp"

namespace paritylock {

using cplx = std::complex<double>;

enum class Qubit { g = 0, e = 1 };

inline constexpr int kDefaultNMax = 32;
inline constexpr double kNormTol = 1e-9;
inline constexpr double kLeakTol = 1e-8;

inline constexpr std::size_t flat_index(Qubit s, int n) {
    return 2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(s);
}

class JointState {
public:
    JointState(int n_max, std::vector<cplx> amps);

    static JointState ground(int n_max);
    static JointState basis(int n_max, Qubit s, int n);

    int n_max() const { return n_max_; }
    std::size_t dim() const { return amps_.size(); }
    cplx amp(Qubit s, int n) const { return amps_[flat_index(s, n)]; }
    std::span<const cplx> amps() const { return amps_; }
    double norm_squared() const;

    Eigen::VectorXcd to_vector() const;
    static JointState from_vector(int n_max, const Eigen::VectorXcd& v);

private:
    int n_max_;
    std::vector<cplx> amps_;
};

class JointDensity {
public:
    JointDensity(int n_max, Eigen::MatrixXcd matrix);

    static JointDensity pure(const JointState& psi);

    int n_max() const { return n_max_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    double trace() const { return m_.trace().real(); }

    // Hermiticity, trace and spectrum checks from the type contract
    bool is_valid(double herm_tol = 1e-12, double trace_tol = kNormTol, double eig_tol = 1e-10) const;
    double min_eigenvalue() const;

private:
    int n_max_;
    Eigen::MatrixXcd m_;
};

struct FockDistribution {
    std::vector<double> probs;
    double mean = 0.0;
    double std = 0.0;

    static FockDistribution from_probs(std::vector<double> probs);
};

enum class Condition { none, g, e };

JointState new_ground(int n_max);

FockDistribution fock_distribution(const JointState& psi);
FockDistribution fock_distribution(const JointDensity& rho);

double parity_expectation(const JointState& psi, Condition c = Condition::none);
double parity_expectation(const JointDensity& rho, Condition c = Condition::none);

// qubit populations (P_g, P_e)
std::pair<double, double> qubit_populations(const JointState& psi);
std::pair<double, double> qubit_populations(const JointDensity& rho);

Eigen::MatrixXcd reduce_oscillator(const JointDensity& rho);
Eigen::Matrix2cd reduce_qubit(const JointDensity& rho);

cplx overlap(const JointState& a, const JointState& b);

// population in the two highest Fock levels
double edge_population(std::span<const cplx> amps);
double edge_population(const JointDensity& rho);

void check_cutoff(int n_max);

}  // namespace paritylock
