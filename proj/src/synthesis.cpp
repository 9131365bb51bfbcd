#include "ni/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ni/errors.hpp"
#include "ni/linalg.hpp"

namespace ni {

namespace {

void require_synthesis_shape(const StateSpaceModel& sys) {
    if (!sys.is_siso())
        throw std::invalid_argument("synthesis requires one disturbance, one control, one output");
}

double spectral_radius(const std::vector<std::complex<double>>& eigs) {
    double r = 0.0;
    for (const auto& e : eigs) r = std::max(r, std::abs(e));
    return r;
}

double max_real_part(const std::vector<std::complex<double>>& eigs) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : eigs) m = std::max(m, e.real());
    return m;
}

// Axis-classification band: the structural origin eigenvalue of a projected
// matrix is only resolved to a rounding multiple of the matrix norm, so the
// band scales with it.
double stability_band(double tol, double matrix_norm) {
    return std::max(tol, 1e-9 * matrix_norm);
}

bool spectrum_unstable(const std::vector<std::complex<double>>& eigs, double tol,
                       double matrix_norm) {
    const double band = stability_band(tol, matrix_norm);
    for (const auto& e : eigs)
        if (e.real() > band) return true;
    return false;
}

}  // namespace

AssumptionCheck check_assumptions(const StateSpaceModel& sys) {
    require_synthesis_shape(sys);
    AssumptionCheck out;
    out.control_coupling = (sys.C1 * sys.B2)(0, 0);
    out.disturbance_coupling = 2.0 * (sys.C1 * sys.B1)(0, 0);
    const double scale = std::max(1.0, sys.C1.norm() * sys.B2.norm());
    out.control_coupling_ok = std::abs(out.control_coupling) > 1e-12 * scale;
    out.disturbance_coupling_ok = out.disturbance_coupling > 0.0;
    return out;
}

ProjectionSet build_projection(const StateSpaceModel& sys, double epsilon) {
    require_synthesis_shape(sys);
    if (epsilon < 0.0) throw std::invalid_argument("stability shift must be >= 0");
    const AssumptionCheck a = check_assumptions(sys);
    if (!a.control_coupling_ok) throw PreconditionError({"control_coupling"});

    const int n = sys.n();
    ProjectionSet out;
    out.epsilon = epsilon;
    out.Q = Eigen::MatrixXd::Identity(n, n) - sys.B2 * sys.C1 / a.control_coupling;
    out.Aq = out.Q * sys.A;
    out.Ar = out.Aq + epsilon * out.Q;

    const double qn = std::max(1.0, out.Q.norm());
    if ((out.Q * sys.B2).norm() > 1e-10 * qn * std::max(1.0, sys.B2.norm()))
        throw std::runtime_error("projection invariant failed: Q B2 != 0");
    if ((out.Q * out.Q - out.Q).norm() > 1e-10 * qn * qn)
        throw std::runtime_error("projection invariant failed: Q not idempotent");
    return out;
}

namespace {

struct Block {
    int start = 0;
    int size = 1;
    std::complex<double> eig;  // representative (one of the pair for 2x2)
    bool anti_stable = false;
    bool marginal = false;
};

std::vector<Block> diagonal_blocks(const Eigen::MatrixXd& T, double tol) {
    const int n = static_cast<int>(T.rows());
    std::vector<Block> blocks;
    int i = 0;
    while (i < n) {
        Block b;
        b.start = i;
        if (i + 1 < n && T(i + 1, i) != 0.0) {
            b.size = 2;
            const double tr = T(i, i) + T(i + 1, i + 1);
            const double det = T(i, i) * T(i + 1, i + 1) - T(i, i + 1) * T(i + 1, i);
            const double disc = tr * tr / 4.0 - det;
            const double re = tr / 2.0;
            const double im = disc < 0.0 ? std::sqrt(-disc) : 0.0;
            b.eig = {re, im};
        } else {
            b.size = 1;
            b.eig = {T(i, i), 0.0};
        }
        blocks.push_back(b);
        i += b.size;
    }
    const double band = stability_band(tol, T.norm());
    for (auto& b : blocks) {
        b.anti_stable = b.eig.real() > band;
        b.marginal = std::abs(b.eig.real()) <= band;
    }
    return blocks;
}

// Orthogonal swap of two adjacent diagonal blocks of a quasi-triangular T,
// applied in place to T and accumulated into U. Solves the small Sylvester
// equation A11 X - X A22 = A12 and rotates [ -X ; I ] into the leading
// columns.
void swap_adjacent_blocks(Eigen::MatrixXd& T, Eigen::MatrixXd& U, int p, int b1, int b2) {
    const int m = b1 + b2;
    const Eigen::MatrixXd A11 = T.block(p, p, b1, b1);
    const Eigen::MatrixXd A12 = T.block(p, p + b1, b1, b2);
    const Eigen::MatrixXd A22 = T.block(p + b1, p + b1, b2, b2);

    Eigen::MatrixXd S(b1 * b2, b1 * b2);
    Eigen::VectorXd rhs(b1 * b2);
    const Eigen::MatrixXd I1 = Eigen::MatrixXd::Identity(b1, b1);
    const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(b2, b2);
    // Column-major vec: vec(A11 X - X A22) = (I2 (x) A11 - A22^T (x) I1) vec(X).
    for (int j = 0; j < b2; ++j)
        for (int i = 0; i < b1; ++i) {
            rhs(j * b1 + i) = A12(i, j);
            for (int l = 0; l < b2; ++l)
                for (int k = 0; k < b1; ++k)
                    S(j * b1 + i, l * b1 + k) = I2(l, j) * A11(i, k) - A22(l, j) * I1(i, k);
        }
    const Eigen::VectorXd x = S.fullPivLu().solve(rhs);

    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, b2);
    for (int j = 0; j < b2; ++j) {
        for (int i = 0; i < b1; ++i) W(i, j) = -x(j * b1 + i);
        W(b1 + j, j) = 1.0;
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
    const Eigen::MatrixXd G = qr.householderQ();

    T.middleRows(p, m) = G.transpose() * T.middleRows(p, m);
    T.middleCols(p, m) = T.middleCols(p, m) * G;
    U.middleCols(p, m) = U.middleCols(p, m) * G;

    // The (2,1) block is zero in exact arithmetic; clear the rounding residue.
    T.block(p + b2, p, b1, b2).setZero();
}

}  // namespace

OrderedSchur ordered_real_schur(const Eigen::MatrixXd& M, double tol) {
    if (M.rows() != M.cols()) throw std::invalid_argument("ordered_real_schur: matrix not square");
    OrderedSchur out;
    const int n = static_cast<int>(M.rows());
    if (n == 0) {
        out.U.resize(0, 0);
        out.T.resize(0, 0);
        return out;
    }

    Eigen::RealSchur<Eigen::MatrixXd> schur(M);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("ordered_real_schur: Schur iteration failed to converge");
    out.T = schur.matrixT();
    out.U = schur.matrixU();

    // Bubble stable(-or-marginal) blocks above anti-stable ones.
    bool swapped = true;
    while (swapped) {
        swapped = false;
        auto blocks = diagonal_blocks(out.T, tol);
        for (size_t k = 0; k + 1 < blocks.size(); ++k) {
            if (blocks[k].anti_stable && !blocks[k + 1].anti_stable) {
                swap_adjacent_blocks(out.T, out.U, blocks[k].start, blocks[k].size,
                                     blocks[k + 1].size);
                swapped = true;
                break;
            }
        }
    }

    const auto blocks = diagonal_blocks(out.T, tol);
    out.stable_dim = 0;
    for (const auto& b : blocks) {
        if (!b.anti_stable) out.stable_dim += b.size;
        if (b.marginal)
            out.notes.push_back("eigenvalue near the imaginary axis (Re = " +
                                std::to_string(b.eig.real()) +
                                ") assigned to the stable block");
    }
    return out;
}

SchurBlocks schur_blocks(const StateSpaceModel& sys, double epsilon, double tol) {
    const AssumptionCheck a = check_assumptions(sys);
    std::vector<std::string> failed;
    if (!a.control_coupling_ok) failed.push_back("control_coupling");
    if (!a.disturbance_coupling_ok) failed.push_back("disturbance_coupling");
    if (!failed.empty()) throw PreconditionError(failed);

    const ProjectionSet proj = build_projection(sys, epsilon);
    OrderedSchur os = ordered_real_schur(proj.Ar, tol);

    SchurBlocks out;
    out.U = std::move(os.U);
    out.Atil = std::move(os.T);
    out.stable_dim = os.stable_dim;
    out.notes = std::move(os.notes);
    out.R = a.disturbance_coupling;
    out.Btil = out.U.transpose() * sys.B1;
    out.Ctil = out.U.transpose() * (sys.B2 / a.control_coupling - sys.B1 / out.R);
    out.Ztil = out.Btil * out.Btil.transpose() / out.R - out.Ctil * out.Ctil.transpose() * out.R;
    return out;
}

SynthesisResult synthesize(const StateSpaceModel& sys, double epsilon, double tol) {
    require_synthesis_shape(sys);
    const AssumptionCheck a = check_assumptions(sys);

    std::vector<std::string> failed;
    if (!(epsilon > 0.0)) failed.push_back("epsilon_positive");
    if (!a.control_coupling_ok) failed.push_back("control_coupling");
    if (!a.disturbance_coupling_ok) failed.push_back("disturbance_coupling");
    if (!a.control_coupling_ok) throw PreconditionError(failed);

    const ProjectionSet proj = build_projection(sys, std::max(epsilon, 0.0));
    const auto aq_eigs = eigvals(proj.Aq);
    const auto ar_eigs = eigvals(proj.Ar);
    if (spectrum_unstable(aq_eigs, tol, proj.Aq.norm())) failed.push_back("projected_stability");
    if (spectrum_unstable(ar_eigs, tol, proj.Ar.norm())) failed.push_back("shifted_stability");
    if (!failed.empty()) throw PreconditionError(failed);

    SynthesisResult out{Eigen::RowVectorXd(), epsilon,
                        StateSpaceModel(sys.A, sys.B1, sys.B2, sys.C1), RationalFunction(), {}};
    const Eigen::RowVectorXd c1 = sys.C1.row(0);
    out.K = -(c1 * sys.A + epsilon * c1) / a.control_coupling;

    const int n = sys.n();
    const Eigen::MatrixXd A_cl = sys.A + sys.B2 * out.K;
    out.closed_loop = StateSpaceModel(A_cl, sys.B1, sys.B2, sys.C1);
    out.closed_loop_tf = tf_from_ss(out.closed_loop, InputChannel::Disturbance).normalized();

    SynthesisCertificate& cert = out.certificate;
    const Eigen::RowVectorXd annihilated =
        c1 * (sys.A + epsilon * Eigen::MatrixXd::Identity(n, n) + sys.B2 * out.K);
    cert.annihilation_residual = annihilated.norm() / std::max(1.0, (c1 * sys.A).norm());
    cert.output_row_annihilated = cert.annihilation_residual <= 1e-9;
    cert.ar_max_re = max_real_part(ar_eigs);
    cert.ar_stable = !spectrum_unstable(ar_eigs, tol, proj.Ar.norm());
    cert.closed_loop_poles = eigvals(A_cl);
    cert.closed_loop_max_re = max_real_part(cert.closed_loop_poles);
    cert.degree_of_stability_ok = cert.closed_loop_max_re <= -epsilon + 1e-7;
    return out;
}

EpsilonRange admissible_epsilon_range(const StateSpaceModel& sys) {
    const ProjectionSet proj = build_projection(sys, 0.0);
    const auto eigs = eigvals(proj.Aq);

    EpsilonRange out;

    // The structural origin eigenvalue is the one of smallest magnitude.
    size_t origin = 0;
    for (size_t i = 1; i < eigs.size(); ++i)
        if (std::abs(eigs[i]) < std::abs(eigs[origin])) origin = i;
    out.origin_eigenvalue_magnitude = std::abs(eigs[origin]);
    if (out.origin_eigenvalue_magnitude > 1e-7 * std::max(1.0, proj.Aq.norm()))
        out.notes.push_back(
            "no eigenvalue of the projected matrix is numerically at the origin; the "
            "projection structure looks violated");

    std::vector<std::complex<double>> rest;
    for (size_t i = 0; i < eigs.size(); ++i)
        if (i != origin) rest.push_back(eigs[i]);
    const double band = stability_band(1e-9, proj.Aq.norm());
    for (const auto& e : rest)
        if (e.real() > band) throw PreconditionError({"projected_stability"});

    std::sort(rest.begin(), rest.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });

    for (size_t i = 0; i < eigs.size(); ++i)
        for (size_t j = i + 1; j < eigs.size(); ++j)
            if (std::abs(eigs[i] - eigs[j]) <=
                1e-6 * std::max(1.0, std::max(std::abs(eigs[i]), std::abs(eigs[j])))) {
                out.distinct = false;
                out.notes.push_back("repeated eigenvalues within clustering tolerance; the "
                                    "admissible range is not guaranteed");
            }

    out.spectrum = rest;
    out.spectrum.push_back(eigs[origin]);
    out.gamma = rest.empty() ? 0.0 : -rest.back().real();
    out.extended_gamma = rest.size() >= 2 ? -rest[rest.size() - 2].real()
                                          : std::numeric_limits<double>::quiet_NaN();
    if (rest.size() >= 2 && std::isfinite(out.extended_gamma))
        out.notes.push_back(
            "between gamma and the next eigenvalue bound exactly one projected eigenvalue "
            "crosses the axis; shifts beyond gamma are not certified");
    return out;
}

ProjectedSpectrumReport check_projected_spectrum(const StateSpaceModel& sys) {
    const ProjectionSet proj = build_projection(sys, 0.0);

    ProjectedSpectrumReport rep;
    rep.projected_eigenvalues = eigvals(proj.Aq);

    const RationalFunction t_uz = tf_from_ss(sys, InputChannel::Control).reduce();
    if (const auto z = zeros(t_uz)) rep.zeros_plus_origin = *z;
    rep.zeros_plus_origin.emplace_back(0.0, 0.0);

    rep.max_deviation = multiset_match_distance(rep.projected_eigenvalues, rep.zeros_plus_origin);
    rep.pass = rep.max_deviation <=
               1e-6 * std::max(1.0, spectral_radius(rep.projected_eigenvalues));
    return rep;
}

double multiset_match_distance(std::vector<std::complex<double>> a,
                               std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& x : a) {
        size_t best = b.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - b[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_d);
    }
    return worst;
}

}  // namespace ni
