#include "paritylock/linalg.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace paritylock {

Eigen::MatrixXcd expm_i_hermitian(const Eigen::MatrixXcd& H, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd ph(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) ph(k) = std::polar(1.0, t * lam(k));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double operator_norm(const Eigen::MatrixXcd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter) {
    const Eigen::Index n = A.cols();
    if (max_iter <= 0) max_iter = static_cast<int>(30 * n + 100);
    const double tol = 10 * std::numeric_limits<double>::epsilon() * A.norm() * std::max<Eigen::Index>(A.rows(), n);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);

    auto solve_passive = [&](Eigen::VectorXd& z) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[j]) idx.push_back(j);
        z.setZero(n);
        if (idx.empty()) return;
        Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
        Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
        for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(k);
    };

    Eigen::VectorXd w = A.transpose() * (b - A * x);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::Index best = -1;
        double wmax = tol;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[j] && w(j) > wmax) {
                wmax = w(j);
                best = j;
            }
        if (best < 0) break;
        passive[best] = true;

        Eigen::VectorXd z;
        for (;;) {
            solve_passive(z);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && z(j) <= 0) feasible = false;
            if (feasible) break;
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && z(j) <= 0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && std::abs(x(j)) <= tol) {
                    passive[j] = false;
                    x(j) = 0.0;
                }
        }
        x = z;
        w = A.transpose() * (b - A * x);
    }
    return x;
}

LinearFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    LinearFit f;
    f.coef = X.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd r = y - X * f.coef;
    const double ybar = y.mean();
    const double ss_tot = (y.array() - ybar).square().sum();
    f.r2 = ss_tot > 0 ? 1.0 - r.squaredNorm() / ss_tot : 0.0;
    return f;
}

}  // namespace paritylock
