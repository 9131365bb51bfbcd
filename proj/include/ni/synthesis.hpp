#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "ni/rational.hpp"
#include "ni/statespace.hpp"

namespace ni {

/// Feedthrough assumptions on the plant: the control channel must couple into
/// the output (C1 B2 != 0, scale-relative) and the disturbance coupling
/// R = C1 B1 + (C1 B1)^T must be positive (scalar case: 2 C1 B1 > 0).
struct AssumptionCheck {
    double control_coupling = 0.0;      // C1 B2
    double disturbance_coupling = 0.0;  // R = 2 C1 B1
    bool control_coupling_ok = false;
    bool disturbance_coupling_ok = false;
};
AssumptionCheck check_assumptions(const StateSpaceModel& sys);

/// Projector Q = I - B2 (C1 B2)^{-1} C1 annihilating the control channel,
/// the projected state matrix Aq = Q A, and its shifted variant
/// Ar = Q (A + eps I) = Aq + eps Q.
struct ProjectionSet {
    Eigen::MatrixXd Q;
    Eigen::MatrixXd Aq;
    Eigen::MatrixXd Ar;
    double epsilon = 0.0;
};
ProjectionSet build_projection(const StateSpaceModel& sys, double epsilon);

/// Real Schur form T = U^T M U reordered so eigenvalues with real part
/// <= axis tolerance come first (the leading stable_dim states); the trailing
/// block is anti-stable. Eigenvalues within the tolerance band of the axis
/// count as stable and are noted.
struct OrderedSchur {
    Eigen::MatrixXd U;
    Eigen::MatrixXd T;
    int stable_dim = 0;
    std::vector<std::string> notes;
};
OrderedSchur ordered_real_schur(const Eigen::MatrixXd& M, double tol = 1e-9);

/// Block data of the shifted projected matrix in ordered real Schur
/// coordinates, with the disturbance/control images and the indefinite
/// quadratic-term matrix Z = B R^{-1} B^T - C R C^T expressed in the same
/// basis. Analysis output only.
struct SchurBlocks {
    Eigen::MatrixXd U;
    Eigen::MatrixXd Atil;
    Eigen::MatrixXd Btil;
    Eigen::MatrixXd Ctil;
    Eigen::MatrixXd Ztil;
    double R = 0.0;
    int stable_dim = 0;
    std::vector<std::string> notes;

    Eigen::MatrixXd A11() const { return Atil.topLeftCorner(stable_dim, stable_dim); }
    Eigen::MatrixXd A12() const {
        return Atil.topRightCorner(stable_dim, Atil.cols() - stable_dim);
    }
    Eigen::MatrixXd A22() const {
        const auto k = Atil.rows() - stable_dim;
        return Atil.bottomRightCorner(k, k);
    }
};
SchurBlocks schur_blocks(const StateSpaceModel& sys, double epsilon, double tol = 1e-9);

struct SynthesisCertificate {
    double annihilation_residual = 0.0;  // ||C1 (A + eps I + B2 K)|| / max(1, ||C1 A||)
    bool output_row_annihilated = false;
    double ar_max_re = 0.0;
    bool ar_stable = false;
    std::vector<std::complex<double>> closed_loop_poles;
    double closed_loop_max_re = 0.0;
    bool degree_of_stability_ok = false;  // max Re <= -eps + 1e-7
};

struct SynthesisResult {
    Eigen::RowVectorXd K;
    double epsilon = 0.0;
    StateSpaceModel closed_loop;       // (A + B2 K, B1, B2, C1)
    RationalFunction closed_loop_tf;   // w -> z with monic denominator, unreduced
    SynthesisCertificate certificate;
};

/// State feedback gain K = -(C1 B2)^{-1} (C1 A + eps C1), which forces
/// C1 (A + eps I + B2 K) = 0 and shifts every closed-loop pole at least eps
/// into the left half plane. Preconditions: the feedthrough assumptions,
/// eps > 0, and no unstable eigenvalues of Aq or Ar. Throws
/// PreconditionError listing {control_coupling, disturbance_coupling,
/// epsilon_positive, projected_stability, shifted_stability} entries.
SynthesisResult synthesize(const StateSpaceModel& sys, double epsilon, double tol = 1e-9);

/// Admissible degree-of-stability range (0, gamma) derived from the spectrum
/// of Aq: gamma = -Re of the slowest nonzero eigenvalue. The spectrum is
/// returned ordered by ascending real part with the structural origin
/// eigenvalue last. `extended_gamma` (-Re of the next eigenvalue, NaN when
/// absent) marks where a second eigenvalue would cross; shifts beyond gamma
/// are not certified here.
struct EpsilonRange {
    double gamma = 0.0;
    std::vector<std::complex<double>> spectrum;
    bool distinct = true;
    double origin_eigenvalue_magnitude = 0.0;
    double extended_gamma = 0.0;
    std::vector<std::string> notes;
};
EpsilonRange admissible_epsilon_range(const StateSpaceModel& sys);

/// Dual-path consistency check: the eigenvalues of Aq must equal the zeros of
/// the control-to-output transfer function plus one zero at the origin.
struct ProjectedSpectrumReport {
    std::vector<std::complex<double>> projected_eigenvalues;
    std::vector<std::complex<double>> zeros_plus_origin;
    double max_deviation = 0.0;
    bool pass = false;  // max deviation <= 1e-6 * max(1, spectral radius)
};
ProjectedSpectrumReport check_projected_spectrum(const StateSpaceModel& sys);

/// Greedy nearest-neighbour matching distance between two equally sized
/// complex multisets; +inf when the sizes differ.
double multiset_match_distance(std::vector<std::complex<double>> a,
                               std::vector<std::complex<double>> b);

}  // namespace ni
