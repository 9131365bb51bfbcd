#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ni/rational.hpp"

namespace ni {

/// One second-order resonant mode Γ / (s^2 + γ s + δ), with γ = 2 ζ ω and
/// δ = ω^2. Lightly damped by assumption: 0 <= ζ < 1.
struct Mode {
    double gain = 1.0;     // Γ > 0
    double damping = 0.0;  // γ >= 0
    double delta = 1.0;    // δ = ω^2 > 0

    double omega() const { return std::sqrt(delta); }
    double zeta() const { return damping / (2.0 * omega()); }

    RationalFunction tf() const;
};

/// Ordered collection of modes. Unless `sort_by_frequency` is disabled the
/// modes are kept in ascending natural frequency, ties broken by input order.
class ModalModel {
  public:
    explicit ModalModel(std::vector<Mode> modes, std::string name = "",
                        bool sort_by_frequency = true);

    const std::vector<Mode>& modes() const { return modes_; }
    const std::string& name() const { return name_; }
    size_t size() const { return modes_.size(); }
    const Mode& mode(size_t i) const { return modes_.at(i); }
    bool is_undamped() const;

  private:
    std::vector<Mode> modes_;
    std::string name_;
};

/// Sum of the mode transfer functions over a common denominator, reduced.
/// Strictly proper with relative degree two.
RationalFunction modal_tf(const ModalModel& model);

/// Splits into (first m modes, remaining modes); the two parts add back to
/// the full response. Requires 1 <= m < size.
std::pair<ModalModel, ModalModel> split_additive(const ModalModel& model, size_t m);

/// Relative uncertainty of truncating to the first m modes,
/// (tail sum) / (head sum), reduced. The model must be undamped (call
/// `undamp` first if needed); m = size yields the zero function.
RationalFunction multiplicative_delta(const ModalModel& model, size_t m);

/// Copy with all damping coefficients set to zero.
ModalModel undamp(const ModalModel& model);

/// Parses the modal parameter file format:
///   name = "optional model name"
///   [[mode]]
///   gamma_gain = <Γ>
///   gamma_damp = <γ>
///   delta      = <δ>
/// Unknown fields are rejected. Throws ParseError with a line diagnostic, or
/// std::invalid_argument naming the offending mode for invariant violations.
ModalModel load_modal(std::istream& in);
ModalModel load_modal_file(const std::string& path);

}  // namespace ni
