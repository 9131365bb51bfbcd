#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ni/polynomial.hpp"

namespace ni {

/// Ratio of two real polynomials. The stored form need not be coprime;
/// `reduce()` produces the coprime form with monic denominator.
class RationalFunction {
  public:
    RationalFunction() : num_(), den_(Polynomial::constant(1.0)) {}
    RationalFunction(Polynomial num, Polynomial den);

    static RationalFunction constant(double c) {
        return {Polynomial::constant(c), Polynomial::constant(1.0)};
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    int relative_degree() const { return den_.degree() - num_.degree(); }
    bool is_proper() const { return is_zero() || relative_degree() >= 0; }
    bool is_strictly_proper() const { return is_zero() || relative_degree() >= 1; }

    std::complex<double> operator()(std::complex<double> s) const { return num_(s) / den_(s); }

    /// Value of the function as |s| -> infinity: the leading-coefficient
    /// ratio when biproper, 0 when strictly proper. Throws for improper input.
    double value_at_infinity() const;

    /// Coprime form with monic denominator. Common roots are matched with a
    /// clustering tolerance relative to root magnitude and divided out.
    RationalFunction reduce(double cluster_tol = 1e-7) const;

    /// Monic denominator without any pole/zero cancellation. A positive
    /// trim_tol additionally strips leading coefficients below
    /// trim_tol * max|coeff| (off by default: coefficients legitimately span
    /// many orders of magnitude here).
    RationalFunction normalized(double trim_tol = 0.0) const;

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

  private:
    Polynomial num_;
    Polynomial den_;
};

/// Roots of the reduced denominator, with multiplicity.
std::vector<std::complex<double>> poles(const RationalFunction& rf);

/// Roots of the reduced numerator; empty for constant numerators and
/// `nullopt` for the identically-zero function.
std::optional<std::vector<std::complex<double>>> zeros(const RationalFunction& rf);

/// Value at s = j*omega. Throws NearPoleError when omega falls inside the
/// exclusion band of an imaginary-axis pole: half-width
/// max(exclusion_radius, 1e-6 * max(1, |omega_pole|)). A precomputed pole
/// list may be supplied to avoid recomputing roots per call.
std::complex<double> eval_freq(const RationalFunction& rf, double omega,
                               double exclusion_radius = 0.0,
                               const std::vector<std::complex<double>>* pole_hint = nullptr);

/// Transfer function w1 -> y1 of the positive feedback loop of M and N,
/// i.e. M / (1 - M*N), reduced. Throws for an ill-posed loop
/// (1 - M(inf)N(inf) = 0).
RationalFunction positive_feedback_tf(const RationalFunction& M, const RationalFunction& N);

/// Half-width of the evaluation exclusion band around a pole at omega_pole.
double pole_exclusion_band(double omega_pole, double exclusion_radius);

}  // namespace ni
