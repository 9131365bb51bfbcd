#include "ni/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ni/errors.hpp"

namespace ni {

namespace {

// Deterministic ordering for root lists.
bool root_less(const std::complex<double>& a, const std::complex<double>& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::invalid_argument("rational function with zero denominator");
}

double RationalFunction::value_at_infinity() const {
    if (is_zero()) return 0.0;
    const int rd = relative_degree();
    if (rd < 0) throw std::invalid_argument("value_at_infinity: improper function");
    return rd > 0 ? 0.0 : num_.leading() / den_.leading();
}

RationalFunction RationalFunction::reduce(double cluster_tol) const {
    if (num_.is_zero()) return {Polynomial(), Polynomial::constant(1.0)};
    if (num_.degree() == 0 || den_.degree() == 0) return normalized();

    auto zn = num_.roots();
    auto zd = den_.roots();
    std::sort(zd.begin(), zd.end(), root_less);

    std::vector<bool> num_used(zn.size(), false);
    std::vector<std::complex<double>> cancel_num, cancel_den;
    for (const auto& p : zd) {
        size_t best = zn.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < zn.size(); ++i) {
            if (num_used[i]) continue;
            const double d = std::abs(zn[i] - p);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        if (best == zn.size()) break;
        if (best_d <= cluster_tol * std::max(1.0, std::max(std::abs(p), std::abs(zn[best])))) {
            num_used[best] = true;
            cancel_num.push_back(zn[best]);
            cancel_den.push_back(p);
        }
    }
    if (cancel_den.empty()) return normalized();

    // Divide each side by the factor built from its own matched roots; the
    // remainder is rounding-level by construction and is discarded.
    const Polynomial fn = Polynomial::from_roots(cancel_num);
    const Polynomial fd = Polynomial::from_roots(cancel_den);
    Polynomial rn = divmod(num_, fn).first;
    Polynomial rd = divmod(den_, fd).first;
    return RationalFunction(std::move(rn), std::move(rd)).normalized();
}

RationalFunction RationalFunction::normalized(double trim_tol) const {
    // Trimming against the largest coefficient is only safe when asked for
    // explicitly: legitimate polynomials here span many orders of magnitude.
    Polynomial n = trim_tol > 0.0 ? num_.trimmed(trim_tol) : num_;
    Polynomial d = trim_tol > 0.0 ? den_.trimmed(trim_tol) : den_;
    if (d.is_zero()) throw std::invalid_argument("normalized: denominator vanished");
    const double lead = d.leading();
    return {n.scaled(1.0 / lead), d.scaled(1.0 / lead)};
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::invalid_argument("division by the zero function");
    return {a.num_ * b.den_, a.den_ * b.num_};
}

std::vector<std::complex<double>> poles(const RationalFunction& rf) {
    return rf.reduce().den().roots();
}

std::optional<std::vector<std::complex<double>>> zeros(const RationalFunction& rf) {
    const RationalFunction r = rf.reduce();
    if (r.is_zero()) return std::nullopt;
    return r.num().roots();
}

double pole_exclusion_band(double omega_pole, double exclusion_radius) {
    return std::max(exclusion_radius, 1e-6 * std::max(1.0, std::abs(omega_pole)));
}

std::complex<double> eval_freq(const RationalFunction& rf, double omega,
                               double exclusion_radius,
                               const std::vector<std::complex<double>>* pole_hint) {
    std::vector<std::complex<double>> local;
    if (pole_hint == nullptr) {
        local = poles(rf);
        pole_hint = &local;
    }
    for (const auto& p : *pole_hint) {
        // Only imaginary-axis poles force an exclusion band.
        if (std::abs(p.real()) > 1e-9 * std::max(1.0, std::abs(p))) continue;
        const double w0 = p.imag();
        if (std::abs(omega - w0) < pole_exclusion_band(w0, exclusion_radius))
            throw NearPoleError(omega, w0);
    }
    return rf(std::complex<double>(0.0, omega));
}

RationalFunction positive_feedback_tf(const RationalFunction& M, const RationalFunction& N) {
    const double loop_inf = 1.0 - M.value_at_infinity() * N.value_at_infinity();
    if (std::abs(loop_inf) < 1e-12)
        throw std::invalid_argument("positive_feedback_tf: ill-posed loop, 1 - M(inf)N(inf) = 0");
    // M/(1 - M N) over the common denominator dm*dn.
    const Polynomial num = M.num() * N.den();
    const Polynomial den = M.den() * N.den() - M.num() * N.num();
    return RationalFunction(num, den).reduce();
}

}  // namespace ni
