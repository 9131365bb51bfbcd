#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace ni {

/// Univariate polynomial with real coefficients stored in descending degree
/// order. Leading zeros are stripped on construction; the zero polynomial is
/// kept as a single zero coefficient.
class Polynomial {
  public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c) { return Polynomial({c}); }

    /// Real-coefficient polynomial `leading * prod (s - r_i)`. Complex roots
    /// must come in (approximately) conjugate pairs; each pair becomes one
    /// quadratic factor so the coefficients stay real.
    static Polynomial from_roots(const std::vector<std::complex<double>>& roots,
                                 double leading = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    double leading() const { return coeffs_.front(); }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double max_abs_coeff() const;

    std::complex<double> operator()(std::complex<double> s) const;
    double operator()(double s) const;

    Polynomial derivative() const;
    Polynomial monic() const;
    Polynomial scaled(double factor) const;

    /// Copy with leading coefficients below `tol * max_abs_coeff()` removed.
    Polynomial trimmed(double tol) const;

    /// All complex roots with multiplicity, via scaled + balanced
    /// companion-matrix eigenvalues. Empty for constants.
    std::vector<std::complex<double>> roots() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    bool operator==(const Polynomial& other) const { return coeffs_ == other.coeffs_; }

  private:
    std::vector<double> coeffs_;
};

/// Quotient and remainder of a / b (b nonzero).
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

}  // namespace ni
