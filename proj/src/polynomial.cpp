#include "ni/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ni/linalg.hpp"

namespace ni {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        coeffs_ = {0.0};
        return;
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient not finite");
    }
    size_t first = 0;
    while (first + 1 < coeffs_.size() && coeffs_[first] == 0.0) ++first;
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(first));
}

Polynomial Polynomial::from_roots(const std::vector<std::complex<double>>& roots,
                                  double leading) {
    std::vector<double> coeffs{leading};
    auto mul_factor = [&coeffs](const std::vector<double>& f) {
        std::vector<double> out(coeffs.size() + f.size() - 1, 0.0);
        for (size_t i = 0; i < coeffs.size(); ++i)
            for (size_t j = 0; j < f.size(); ++j) out[i + j] += coeffs[i] * f[j];
        coeffs = std::move(out);
    };

    // Split into (numerically) real roots and conjugate pairs.
    std::vector<std::complex<double>> pending;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) <= 1e-12 * (1.0 + std::abs(r))) {
            mul_factor({1.0, -r.real()});
        } else {
            pending.push_back(r);
        }
    }
    std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<bool> used(pending.size(), false);
    for (size_t i = 0; i < pending.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        // Nearest unused root of opposite imaginary sign is the conjugate partner.
        size_t best = pending.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = i + 1; j < pending.size(); ++j) {
            if (used[j] || pending[j].imag() * pending[i].imag() > 0.0) continue;
            double d = std::abs(pending[j] - std::conj(pending[i]));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == pending.size()) {
            // No partner: fall back to treating the root as real.
            mul_factor({1.0, -pending[i].real()});
            continue;
        }
        used[best] = true;
        double re = 0.5 * (pending[i].real() + pending[best].real());
        double im = 0.5 * (std::abs(pending[i].imag()) + std::abs(pending[best].imag()));
        mul_factor({1.0, -2.0 * re, re * re + im * im});
    }
    return Polynomial(std::move(coeffs));
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
    std::complex<double> acc = coeffs_.front();
    for (size_t i = 1; i < coeffs_.size(); ++i) acc = acc * s + coeffs_[i];
    return acc;
}

double Polynomial::operator()(double s) const {
    double acc = coeffs_.front();
    for (size_t i = 1; i < coeffs_.size(); ++i) acc = acc * s + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) return Polynomial();
    std::vector<double> d(coeffs_.size() - 1);
    const int n = degree();
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = coeffs_[static_cast<size_t>(i)] * (n - i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) throw std::invalid_argument("cannot normalize the zero polynomial");
    return scaled(1.0 / leading());
}

Polynomial Polynomial::scaled(double factor) const {
    std::vector<double> c = coeffs_;
    for (double& x : c) x *= factor;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::trimmed(double tol) const {
    const double cut = tol * max_abs_coeff();
    size_t first = 0;
    while (first + 1 < coeffs_.size() && std::abs(coeffs_[first]) <= cut) ++first;
    return Polynomial(std::vector<double>(coeffs_.begin() + static_cast<long>(first), coeffs_.end()));
}

std::vector<std::complex<double>> Polynomial::roots() const {
    const int n = degree();
    if (is_zero()) throw std::invalid_argument("roots of the zero polynomial are undefined");
    if (n == 0) return {};
    if (n == 1) return {{-coeffs_[1] / coeffs_[0], 0.0}};

    // Substitute s = alpha*t with a power-of-two alpha near the geometric mean
    // of the root magnitudes, so the companion matrix is well scaled.
    double alpha = 1.0;
    const double c0 = std::abs(coeffs_.front());
    const double cn = std::abs(coeffs_.back());
    if (cn > 0.0) {
        alpha = std::pow(cn / c0, 1.0 / n);
        alpha = std::exp2(std::round(std::log2(alpha)));
        if (!(alpha > 0.0) || !std::isfinite(alpha)) alpha = 1.0;
    }

    std::vector<double> c(coeffs_.begin(), coeffs_.end());
    double scale = 1.0;
    for (int k = 1; k <= n; ++k) {
        scale /= alpha;
        c[static_cast<size_t>(k)] *= scale;  // coefficient of t^{n-k}
    }

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -c[static_cast<size_t>(i + 1)] / c[0];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;

    std::vector<std::complex<double>> out = eigvals(companion);
    for (auto& r : out) r *= alpha;
    return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const auto &ca = a.coeffs_, &cb = b.coeffs_;
    std::vector<double> out(std::max(ca.size(), cb.size()), 0.0);
    for (size_t i = 0; i < ca.size(); ++i) out[out.size() - ca.size() + i] += ca[i];
    for (size_t i = 0; i < cb.size(); ++i) out[out.size() - cb.size() + i] += cb[i];
    return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + b.scaled(-1.0);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
        for (size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
    if (a.degree() < b.degree()) return {Polynomial(), a};

    std::vector<double> rem = a.coeffs();
    const auto& d = b.coeffs();
    const int qn = a.degree() - b.degree();
    std::vector<double> quot(static_cast<size_t>(qn) + 1, 0.0);
    for (int k = 0; k <= qn; ++k) {
        const double q = rem[static_cast<size_t>(k)] / d[0];
        quot[static_cast<size_t>(k)] = q;
        for (size_t j = 0; j < d.size(); ++j) rem[static_cast<size_t>(k) + j] -= q * d[j];
    }
    rem.erase(rem.begin(), rem.begin() + qn + 1);
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

}  // namespace ni
