#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ni/rational.hpp"
#include "ni/statespace.hpp"

namespace ni {

/// One failed condition: where it failed (a pole location, or (omega, 0) for
/// grid conditions), which condition, and the offending value.
struct Violation {
    std::string condition;
    std::complex<double> location;
    double measured;
};

/// Outcome of the frequency-domain property checks. All three flags are
/// computed from one shared analysis pass; `violations` carries one entry per
/// failed condition, tagged with the flag it belongs to ("ni.", "sni.",
/// "lni." prefixes).
///
/// is_lni is judged from pole locations (no open-right-half-plane poles,
/// simple axis poles, origin multiplicity at most two) plus a vanishing
/// imaginary part on the grid; residue signs at finite resonances feed only
/// the is_ni flag.
struct NIVerdict {
    bool is_ni = false;
    bool is_sni = false;
    bool is_lni = false;
    std::vector<Violation> violations;
    FrequencyGrid checked_grid;
};

/// 2000 log-spaced points spanning [1e-3 * w_min, 1e3 * w_max] where
/// w_min/w_max bracket the nonzero pole/zero magnitudes of rf;
/// falls back to [1e-3, 1e6] when there are none.
FrequencyGrid default_grid(const RationalFunction& rf, int count = 2000);

/// Negative-imaginary test: no open-RHP poles, -2 Im G(jw) >= -tol on the
/// grid, simple axis poles with real residue matrix >= -tol, origin pole of
/// multiplicity <= 2 with lim s^2 G >= -tol when double.
NIVerdict check_ni(const RationalFunction& rf, const FrequencyGrid& grid, double tol = 1e-8);

/// Strict variant: all poles strictly in the open left half plane and
/// -2 Im G(jw) > tol * max(1, |G(jw)|) at every grid point inside the
/// dynamic range. For strictly proper functions the structurally vanishing
/// tail beyond the dynamics is not counted against strictness as long as the
/// sign stays correct.
NIVerdict check_sni(const RationalFunction& rf, const FrequencyGrid& grid, double tol = 1e-8);

/// Lossless variant: |Im G(jw)| <= tol at every non-excluded grid point
/// w > 0, with the pole-location conditions described on NIVerdict.
NIVerdict check_lni(const RationalFunction& rf, const FrequencyGrid& grid, double tol = 1e-8);

/// Scalar internal-stability test for the positive feedback loop of M and N:
///   cond1 (well-posedness)  1 - M(inf)N(inf) != 0
///   cond2                   (M(inf)N(0) - 1) / (1 - M(inf)N(inf)) < 0
///   cond3                   (M(0)N(0) - 1) / (1 - N(0)M(inf))     < 0
/// M must have no pole at the origin. N is expected to be strictly negative
/// imaginary; if the check fails, a warning is recorded and the verdict is
/// reported anyway (it is then not a stability certificate).
struct StabilityReport {
    bool well_posed = false;
    double cond2 = 0.0;
    double cond3 = 0.0;
    bool internally_stable = false;
    double m_dc = 0.0, n_dc = 0.0;
    double m_inf = 0.0, n_inf = 0.0;
    std::vector<std::string> warnings;
};

StabilityReport check_internal_stability(const RationalFunction& M, const RationalFunction& N,
                                         double tol = 1e-8);

}  // namespace ni
