#include "ni/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ni {

Eigen::VectorXd balance_scaling(const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    Eigen::MatrixXd A = M;

    bool converged = false;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double r = A.row(i).lpNorm<1>() - std::abs(A(i, i));
            double c = A.col(i).lpNorm<1>() - std::abs(A(i, i));
            if (r == 0.0 || c == 0.0) continue;
            double f = 1.0;
            const double s = r + c;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s && f != 1.0) {
                converged = false;
                d(i) *= f;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
    return d;
}

std::vector<std::complex<double>> eigvals(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("eigvals: matrix must be square");
    const int n = static_cast<int>(M.rows());
    if (n == 0) return {};
    if (!M.allFinite()) throw std::invalid_argument("eigvals: matrix has non-finite entries");

    Eigen::VectorXd d = balance_scaling(M);
    Eigen::MatrixXd B = d.cwiseInverse().asDiagonal() * M * d.asDiagonal();

    Eigen::EigenSolver<Eigen::MatrixXd> solver(B, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigvals: QR iteration failed");

    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace ni
