#pragma once

#include <Eigen/Dense>

namespace paritylock {

// exp(i t H) for Hermitian H via eigendecomposition
Eigen::MatrixXcd expm_i_hermitian(const Eigen::MatrixXcd& H, double t);

// largest singular value
double operator_norm(const Eigen::MatrixXcd& M);

// Lawson-Hanson nonnegative least squares: min |A x - b|, x >= 0
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0);

// ordinary least squares through the origin, returns coefficients and R^2 (uncentered if no intercept)
struct LinearFit {
    Eigen::VectorXd coef;
    double r2 = 0.0;
};
LinearFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace paritylock
