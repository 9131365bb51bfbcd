#include "ni/statespace.hpp"

#include <cmath>
#include <stdexcept>

namespace ni {

StateSpaceModel::StateSpaceModel(Eigen::MatrixXd A_, Eigen::MatrixXd B1_, Eigen::MatrixXd B2_,
                                 Eigen::MatrixXd C1_)
    : A(std::move(A_)), B1(std::move(B1_)), B2(std::move(B2_)), C1(std::move(C1_)) {
    if (A.rows() != A.cols()) throw std::invalid_argument("state matrix must be square");
    if (B1.rows() != A.rows() || B2.rows() != A.rows())
        throw std::invalid_argument("input matrix row count must match the state dimension");
    if (C1.cols() != A.rows())
        throw std::invalid_argument("output matrix column count must match the state dimension");
    if (!A.allFinite() || !B1.allFinite() || !B2.allFinite() || !C1.allFinite())
        throw std::invalid_argument("state space matrices must be finite");
}

RationalFunction tf_from_ss(const StateSpaceModel& sys, InputChannel channel) {
    const Eigen::MatrixXd& B = channel == InputChannel::Disturbance ? sys.B1 : sys.B2;
    if (sys.p() != 1 || B.cols() != 1)
        throw std::invalid_argument("tf_from_ss: selected channel must be SISO");
    const int n = sys.n();
    if (n < 1) throw std::invalid_argument("tf_from_ss: empty state space");

    // Resolvent recursion: (sI - A)^{-1} = sum_k N_k s^{n-1-k} / det(sI - A),
    // N_0 = I, M_k = A N_{k-1}, c_k = -tr(M_k)/k, N_k = M_k + c_k I.
    std::vector<double> den(static_cast<size_t>(n) + 1, 0.0);
    std::vector<double> num(static_cast<size_t>(n), 0.0);
    std::vector<double> num_scale(static_cast<size_t>(n), 0.0);
    den[0] = 1.0;

    Eigen::MatrixXd N = Eigen::MatrixXd::Identity(n, n);
    const Eigen::RowVectorXd c1 = sys.C1.row(0);
    const Eigen::VectorXd b = B.col(0);
    num[0] = c1 * b;
    num_scale[0] = c1.norm() * b.norm();
    for (int k = 1; k <= n; ++k) {
        const Eigen::MatrixXd M = sys.A * N;
        const double ck = -M.trace() / k;
        den[static_cast<size_t>(k)] = ck;
        if (k < n) {
            N = M + ck * Eigen::MatrixXd::Identity(n, n);
            num[static_cast<size_t>(k)] = c1 * N * b;
            num_scale[static_cast<size_t>(k)] = c1.norm() * N.norm() * b.norm();
        }
    }

    // Structurally-zero high-order numerator coefficients come out as rounding
    // residue of the k-th recursion step; strip them against that scale.
    size_t first = 0;
    while (first + 1 < num.size() && std::abs(num[first]) <= 1e-12 * num_scale[first]) ++first;
    num.erase(num.begin(), num.begin() + static_cast<long>(first));
    return {Polynomial(std::move(num)), Polynomial(std::move(den))};
}

Realization controllable_canonical(const RationalFunction& rf) {
    const RationalFunction r = rf.reduce();
    if (!r.is_strictly_proper())
        throw std::invalid_argument("controllable_canonical: function must be strictly proper");
    const int n = r.den().degree();
    if (n < 1) throw std::invalid_argument("controllable_canonical: constant function");

    const auto& d = r.den().coeffs();  // monic after reduce()
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) A(n - 1, j) = -d[static_cast<size_t>(n - j)];

    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;

    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(n);
    const auto& nc = r.num().coeffs();
    const int nn = r.num().degree();
    if (!r.is_zero())
        for (int j = 0; j <= nn; ++j) c(nn - j) = nc[static_cast<size_t>(j)];
    return {std::move(A), std::move(b), std::move(c)};
}

FrequencyGrid::FrequencyGrid(std::vector<double> pts, double excl)
    : points(std::move(pts)), exclusion_radius(excl) {
    if (exclusion_radius < 0.0) throw std::invalid_argument("exclusion radius must be >= 0");
    for (size_t i = 0; i < points.size(); ++i) {
        if (!(points[i] >= 0.0)) throw std::invalid_argument("grid frequencies must be >= 0");
        if (i > 0 && points[i] <= points[i - 1])
            throw std::invalid_argument("grid frequencies must be strictly increasing");
    }
}

FrequencyGrid FrequencyGrid::logspace(double lo, double hi, int count, double excl) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw std::invalid_argument("logspace: need 0 < lo < hi and count >= 2");
    std::vector<double> pts(static_cast<size_t>(count));
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < count; ++i)
        pts[static_cast<size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (count - 1));
    pts.front() = lo;
    pts.back() = hi;
    return {std::move(pts), excl};
}

}  // namespace ni
