#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ni {

/// Full complex spectrum of a square real matrix, with multiplicity.
/// The matrix is balanced (power-of-two diagonal similarity) before the QR
/// iteration, which matters for badly scaled inputs such as companion
/// matrices of wide-dynamic-range polynomials.
std::vector<std::complex<double>> eigvals(const Eigen::MatrixXd& M);

/// Parlett-Reinsch balancing with power-of-two scale factors. Returns D such
/// that D^{-1} M D is closer to having equal row/column norms; exact in
/// floating point since only exponents change.
Eigen::VectorXd balance_scaling(const Eigen::MatrixXd& M);

}  // namespace ni
