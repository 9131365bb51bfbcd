#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ni/linalg.hpp"
#include "ni/rational.hpp"

namespace ni {

/// Linear plant
///   x' = A x + B1 w + B2 u,   z = C1 x
/// with a disturbance channel w and a control channel u. Dimensions are
/// validated on construction; synthesis requires the SISO case
/// (one disturbance, one control, one output).
struct StateSpaceModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B1;
    Eigen::MatrixXd B2;
    Eigen::MatrixXd C1;

    StateSpaceModel(Eigen::MatrixXd A_, Eigen::MatrixXd B1_, Eigen::MatrixXd B2_,
                    Eigen::MatrixXd C1_);

    int n() const { return static_cast<int>(A.rows()); }
    int m1() const { return static_cast<int>(B1.cols()); }
    int m2() const { return static_cast<int>(B2.cols()); }
    int p() const { return static_cast<int>(C1.rows()); }
    bool is_siso() const { return m1() == 1 && m2() == 1 && p() == 1; }
};

enum class InputChannel { Disturbance, Control };

/// Transfer function of the selected SISO channel,
/// C1 adj(sI - A) B / det(sI - A), computed with the resolvent recursion.
/// The result is unreduced: the denominator has degree n.
RationalFunction tf_from_ss(const StateSpaceModel& sys, InputChannel channel);

/// Single-input companion-form realization of a strictly proper function.
/// Returns (A, b, c) with b = e_n and c holding the numerator coefficients.
struct Realization {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::RowVectorXd c;
};
Realization controllable_canonical(const RationalFunction& rf);

/// Frequency grid for scanning "for all omega >= 0" conditions pointwise.
struct FrequencyGrid {
    std::vector<double> points;        // strictly increasing, all >= 0
    double exclusion_radius = 0.0;     // extra absolute half-width around axis poles

    FrequencyGrid() = default;
    FrequencyGrid(std::vector<double> pts, double excl);

    static FrequencyGrid logspace(double lo, double hi, int count, double excl = 0.0);
};

}  // namespace ni
