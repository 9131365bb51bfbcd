#include "ni/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ni/errors.hpp"

namespace ni {

namespace {

struct PoleGroup {
    std::complex<double> value;  // cluster representative
    int multiplicity = 0;
    bool on_axis = false;    // |Re| within the axis band
    bool unstable = false;   // Re beyond the axis band
    bool at_origin = false;  // on axis and |value| within the origin band
};

double axis_band(const std::complex<double>& p, double tol) {
    return std::max(tol, 1e-9 * std::abs(p));
}

std::vector<PoleGroup> classify_poles(const std::vector<std::complex<double>>& raw, double tol) {
    std::vector<std::complex<double>> sorted = raw;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    std::vector<PoleGroup> groups;
    for (const auto& p : sorted) {
        bool joined = false;
        for (auto& g : groups) {
            const double cluster = 1e-7 * std::max(1.0, std::max(std::abs(p), std::abs(g.value)));
            if (std::abs(p - g.value) <= cluster) {
                g.value = (g.value * static_cast<double>(g.multiplicity) + p) /
                          static_cast<double>(g.multiplicity + 1);
                ++g.multiplicity;
                joined = true;
                break;
            }
        }
        if (!joined) groups.push_back({p, 1, false, false, false});
    }

    double scale = 0.0;
    for (const auto& g : groups) scale = std::max(scale, std::abs(g.value));
    for (auto& g : groups) {
        const double band = axis_band(g.value, tol);
        g.on_axis = std::abs(g.value.real()) <= band;
        g.unstable = g.value.real() > band;
        g.at_origin = g.on_axis && std::abs(g.value) <= std::max(tol, 1e-9 * std::max(1.0, scale));
    }
    return groups;
}

// Quotient value q(s0) where den = (s - root) q(s) + r, via synthetic division.
std::complex<double> deflated_value(const Polynomial& den, std::complex<double> root,
                                    std::complex<double> s0) {
    const auto& c = den.coeffs();
    std::complex<double> b = c[0];
    std::complex<double> acc = b;  // Horner for q at s0, built as we deflate
    for (size_t k = 1; k + 1 < c.size(); ++k) {
        b = b * root + c[k];
        acc = acc * s0 + b;
    }
    return acc;
}

// Locate an imaginary-part sign change between two frequencies by bisection,
// down to a relative interval width of 1e-9.
double refine_im_crossing(const RationalFunction& r, double lo, double hi) {
    double flo = r(std::complex<double>(0.0, lo)).imag();
    for (int it = 0; it < 200 && (hi - lo) > 1e-9 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = r(std::complex<double>(0.0, mid)).imag();
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct GridSample {
    double omega;
    std::complex<double> value;
    bool excluded;
};

}  // namespace

FrequencyGrid default_grid(const RationalFunction& rf, int count) {
    const RationalFunction r = rf.reduce();
    std::vector<double> mags;
    auto absorb = [&mags](const std::vector<std::complex<double>>& roots) {
        for (const auto& z : roots) {
            const double m = std::abs(z);
            if (m > 1e-12) mags.push_back(m);
        }
    };
    if (!r.is_zero() && r.num().degree() > 0) absorb(r.num().roots());
    if (r.den().degree() > 0) absorb(r.den().roots());

    double lo = 1e-3, hi = 1e6;
    if (!mags.empty()) {
        lo = 1e-3 * *std::min_element(mags.begin(), mags.end());
        hi = 1e3 * *std::max_element(mags.begin(), mags.end());
    }
    return FrequencyGrid::logspace(lo, hi, count);
}

namespace {

NIVerdict run_checks(const RationalFunction& rf, const FrequencyGrid& grid, double tol) {
    if (!rf.is_proper()) throw std::invalid_argument("NI checks require a proper function");

    NIVerdict v;
    v.checked_grid = grid;

    const RationalFunction r = rf.reduce();
    const auto raw_poles = r.den().roots();
    const auto groups = classify_poles(raw_poles, tol);

    // Grid evaluation with exclusion bands around axis-pole frequencies.
    std::vector<GridSample> samples;
    samples.reserve(grid.points.size());
    for (double w : grid.points) {
        bool excluded = false;
        for (const auto& g : groups) {
            if (!g.on_axis) continue;
            const double w0 = std::abs(g.value.imag());
            if (std::abs(w - w0) < pole_exclusion_band(w0, grid.exclusion_radius)) {
                excluded = true;
                break;
            }
        }
        std::complex<double> val = 0.0;
        if (!excluded) val = r(std::complex<double>(0.0, w));
        samples.push_back({w, val, excluded});
    }

    // ---- NI conditions ----
    bool ni_ok = true;
    for (const auto& g : groups) {
        if (g.unstable) {
            v.violations.push_back({"ni.pole_location", g.value, g.value.real()});
            ni_ok = false;
        }
    }

    // Imaginary-part sign on the grid; refine boundaries of violating runs.
    const GridSample* prev_ok = nullptr;
    for (const auto& s : samples) {
        if (s.excluded) continue;
        const double against = -2.0 * s.value.imag();
        if (against < -tol) {
            double where = s.omega;
            if (prev_ok != nullptr && prev_ok->value.imag() * s.value.imag() < 0.0)
                where = refine_im_crossing(r, prev_ok->omega, s.omega);
            v.violations.push_back({"ni.im_sign", {where, 0.0}, against});
            ni_ok = false;
        } else {
            prev_ok = &s;
        }
    }

    for (const auto& g : groups) {
        if (!g.on_axis || g.at_origin || g.value.imag() <= 0.0) continue;
        if (g.multiplicity > 1) {
            v.violations.push_back(
                {"ni.axis_pole_simple", g.value, static_cast<double>(g.multiplicity)});
            ni_ok = false;
            continue;
        }
        // Residue matrix K = lim (s - jw0) j G(s); must be (numerically) real
        // and >= -tol for the NI property.
        const std::complex<double> jw0(0.0, std::abs(g.value.imag()));
        const std::complex<double> q = deflated_value(r.den(), jw0, jw0);
        const std::complex<double> K = std::complex<double>(0.0, 1.0) * r.num()(jw0) / q;
        const double rtol = tol * std::max(1.0, std::abs(K));
        if (std::abs(K.imag()) > rtol) {
            v.violations.push_back({"ni.residue_hermitian", g.value, K.imag()});
            ni_ok = false;
        }
        if (K.real() < -rtol) {
            v.violations.push_back({"ni.residue_sign", g.value, K.real()});
            ni_ok = false;
        }
    }

    bool origin_ok = true;  // shared by the NI and LNI branches
    for (const auto& g : groups) {
        if (!g.at_origin) continue;
        if (g.multiplicity > 2) {
            v.violations.push_back(
                {"ni.origin_multiplicity", g.value, static_cast<double>(g.multiplicity)});
            origin_ok = false;
        } else if (g.multiplicity == 2) {
            // lim s^2 G(s) = num(0) / q(0) with den = s^2 q(s).
            const auto [q, rem] = divmod(r.den(), Polynomial({1.0, 0.0, 0.0}));
            (void)rem;
            const double limit = r.num()(0.0) / q(0.0);
            if (!(limit >= -tol)) {
                v.violations.push_back({"ni.origin_limit", g.value, limit});
                origin_ok = false;
            }
        }
    }
    ni_ok = ni_ok && origin_ok;
    v.is_ni = ni_ok;

    // ---- SNI conditions ----
    bool sni_ok = true;
    for (const auto& g : groups) {
        if (g.value.real() >= -axis_band(g.value, tol)) {
            v.violations.push_back({"sni.pole_location", g.value, g.value.real()});
            sni_ok = false;
        }
    }

    // Strict margin is demanded inside the dynamic range; beyond it a strictly
    // proper response vanishes structurally and only the sign is checked.
    double dyn_max = 0.0;
    for (const auto& p : raw_poles) dyn_max = std::max(dyn_max, std::abs(p));
    if (!r.is_zero() && r.num().degree() > 0)
        for (const auto& z : r.num().roots()) dyn_max = std::max(dyn_max, std::abs(z));

    for (const auto& s : samples) {
        if (s.excluded || s.omega <= 0.0) continue;
        const double against = -2.0 * s.value.imag();
        const double scale = std::max(1.0, std::abs(s.value));
        const bool in_range = s.omega <= dyn_max || !r.is_strictly_proper();
        const bool fails = in_range ? (against <= tol * scale) : (against <= -tol * scale);
        if (fails) {
            v.violations.push_back({"sni.im_margin", {s.omega, 0.0}, against});
            sni_ok = false;
        }
    }
    v.is_sni = sni_ok;

    // ---- LNI conditions ----
    bool lni_ok = origin_ok;
    for (const auto& g : groups) {
        if (g.unstable) {
            v.violations.push_back({"lni.pole_location", g.value, g.value.real()});
            lni_ok = false;
        }
        if (g.on_axis && !g.at_origin && g.value.imag() > 0.0 && g.multiplicity > 1) {
            v.violations.push_back(
                {"lni.axis_pole_simple", g.value, static_cast<double>(g.multiplicity)});
            lni_ok = false;
        }
    }
    for (const auto& s : samples) {
        if (s.excluded || s.omega <= 0.0) continue;
        if (std::abs(s.value.imag()) > tol) {
            v.violations.push_back({"lni.im_nonzero", {s.omega, 0.0}, s.value.imag()});
            lni_ok = false;
        }
    }
    v.is_lni = lni_ok;

    return v;
}

}  // namespace

NIVerdict check_ni(const RationalFunction& rf, const FrequencyGrid& grid, double tol) {
    return run_checks(rf, grid, tol);
}

NIVerdict check_sni(const RationalFunction& rf, const FrequencyGrid& grid, double tol) {
    return run_checks(rf, grid, tol);
}

NIVerdict check_lni(const RationalFunction& rf, const FrequencyGrid& grid, double tol) {
    return run_checks(rf, grid, tol);
}

StabilityReport check_internal_stability(const RationalFunction& M, const RationalFunction& N,
                                         double tol) {
    if (!M.is_proper() || !N.is_proper())
        throw std::invalid_argument("internal stability check requires proper functions");

    const RationalFunction mr = M.reduce();
    const RationalFunction nr = N.reduce();

    for (const auto& g : classify_poles(mr.den().roots(), tol)) {
        if (g.at_origin)
            throw std::invalid_argument(
                "internal stability check: forward block has a pole at the origin");
    }
    if (std::abs(nr.den()(0.0)) <= 1e-12 * nr.den().max_abs_coeff())
        throw std::invalid_argument(
            "internal stability check: feedback block cannot be evaluated at s = 0");

    StabilityReport rep;
    const NIVerdict nv = check_sni(nr, default_grid(nr), tol);
    if (!nv.is_sni)
        rep.warnings.push_back(
            "feedback block failed the strict negative imaginary check; the gain-condition "
            "verdict is not a stability certificate");

    rep.m_inf = mr.value_at_infinity();
    rep.n_inf = nr.value_at_infinity();
    rep.m_dc = mr(0.0).real();
    rep.n_dc = nr(0.0).real();

    const double loop_inf = 1.0 - rep.m_inf * rep.n_inf;
    rep.well_posed = std::abs(loop_inf) > tol;
    if (rep.well_posed) {
        rep.cond2 = (rep.m_inf * rep.n_dc - 1.0) / loop_inf;
        rep.cond3 = (rep.m_dc * rep.n_dc - 1.0) / (1.0 - rep.n_dc * rep.m_inf);
    } else {
        rep.cond2 = std::numeric_limits<double>::quiet_NaN();
        rep.cond3 = std::numeric_limits<double>::quiet_NaN();
    }
    rep.internally_stable = rep.well_posed && rep.cond2 < 0.0 && rep.cond3 < 0.0;
    return rep;
}

}  // namespace ni
