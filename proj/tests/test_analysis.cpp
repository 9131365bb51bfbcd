#include <doctest.h>

#include <random>

#include "ni/analysis.hpp"
#include "ni/modal.hpp"
#include "oracles.hpp"

using ni::check_internal_stability;
using ni::check_lni;
using ni::check_ni;
using ni::check_sni;
using ni::default_grid;
using ni::FrequencyGrid;
using ni::ModalModel;
using ni::Mode;
using ni::Polynomial;
using ni::RationalFunction;
using oracles::cd;

namespace {

RationalFunction make_rf(std::vector<double> num, std::vector<double> den) {
    return {Polynomial(std::move(num)), Polynomial(std::move(den))};
}

// Scaled damped modal sum: strictly negative imaginary with stable poles.
RationalFunction random_damped_sum(std::mt19937_64& rng, int modes, double dc_target) {
    std::uniform_real_distribution<double> omega(0.7, 15.0);
    std::uniform_real_distribution<double> zeta(0.05, 0.4);
    std::vector<Mode> ms;
    for (int i = 0; i < modes; ++i) {
        const double w = omega(rng);
        ms.push_back({1.0, 2.0 * zeta(rng) * w, w * w});
    }
    const ModalModel model(std::move(ms));
    const RationalFunction g = ni::modal_tf(model);
    const double dc = g(cd(0.0, 0.0)).real();
    return {g.num().scaled(dc_target / dc), g.den()};
}

bool has_condition(const ni::NIVerdict& v, const std::string& prefix) {
    for (const auto& viol : v.violations)
        if (viol.condition.rfind(prefix, 0) == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("default grid spans the dynamics and falls back for constants") {
    const RationalFunction g = make_rf({64.06}, {1.0, 0.0, 8.096e4});
    const FrequencyGrid grid = default_grid(g);
    const double w0 = std::sqrt(8.096e4);
    CHECK(grid.points.size() == 2000);
    CHECK(grid.points.front() == doctest::Approx(1e-3 * w0));
    CHECK(grid.points.back() == doctest::Approx(1e3 * w0));

    const FrequencyGrid fallback = default_grid(RationalFunction::constant(2.0));
    CHECK(fallback.points.front() == doctest::Approx(1e-3));
    CHECK(fallback.points.back() == doctest::Approx(1e6));
}

TEST_CASE("undamped mode is NI with a passing residue check") {
    const RationalFunction g = make_rf({64.06}, {1.0, 0.0, 8.096e4});
    const auto v = check_ni(g, default_grid(g));
    CHECK(v.is_ni);
    CHECK(!v.is_sni);  // axis poles
    CHECK(v.is_lni);
    CHECK(!has_condition(v, "ni."));
}

TEST_CASE("double integrator is NI through the origin-pole branch") {
    const RationalFunction g = make_rf({1.0}, {1.0, 0.0, 0.0});
    const auto v = check_ni(g, default_grid(g));
    CHECK(v.is_ni);
}

TEST_CASE("triple origin pole is rejected") {
    const RationalFunction g = make_rf({1.0}, {1.0, 0.0, 0.0, 0.0});
    const auto v = check_ni(g, default_grid(g));
    CHECK(!v.is_ni);
    CHECK(has_condition(v, "ni.origin_multiplicity"));
}

TEST_CASE("s/(s+1) has positive imaginary part and is not NI") {
    const RationalFunction g = make_rf({1.0, 0.0}, {1.0, 1.0});
    const auto v = check_ni(g, default_grid(g));
    CHECK(!v.is_ni);
    CHECK(has_condition(v, "ni.im_sign"));
}

TEST_CASE("first-order lag is SNI") {
    const RationalFunction g = make_rf({1.0}, {1.0, 1.0});
    const auto v = check_sni(g, default_grid(g));
    CHECK(v.is_sni);
    CHECK(v.is_ni);
    CHECK(!v.is_lni);
}

TEST_CASE("the closed-loop cubic is SNI") {
    const RationalFunction g = make_rf({12.81, 448.4, 3203.0}, {1.0, 44.5, 582.5, 2375.0});
    const auto v = check_sni(g, default_grid(g));
    CHECK(v.is_sni);
}

TEST_CASE("undamped oscillator is not SNI but is LNI") {
    const RationalFunction g = make_rf({1.0}, {1.0, 0.0, 1.0});
    const auto v = check_sni(g, default_grid(g));
    CHECK(!v.is_sni);
    CHECK(has_condition(v, "sni.pole_location"));
    CHECK(v.is_lni);
    CHECK(v.is_ni);
}

TEST_CASE("lossless quotient with sign-indefinite residues: lossless but not NI") {
    // (s^2+1)/(s^2+4): real on the whole axis, residue at +-2j is negative.
    const RationalFunction g = make_rf({1.0, 0.0, 1.0}, {1.0, 0.0, 4.0});
    const auto v = check_lni(g, default_grid(g));
    CHECK(v.is_lni);
    CHECK(!v.is_ni);
    CHECK(has_condition(v, "ni.residue_sign"));
}

TEST_CASE("lag fails the lossless test") {
    const RationalFunction g = make_rf({1.0}, {1.0, 1.0});
    const auto v = check_lni(g, default_grid(g));
    CHECK(!v.is_lni);
    CHECK(has_condition(v, "lni.im_nonzero"));
}

TEST_CASE("verdicts are deterministic") {
    const RationalFunction g = make_rf({12.81, 448.4, 3203.0}, {1.0, 44.5, 582.5, 2375.0});
    const auto grid = default_grid(g);
    const auto a = check_sni(g, grid);
    const auto b = check_sni(g, grid);
    CHECK(a.is_ni == b.is_ni);
    CHECK(a.is_sni == b.is_sni);
    CHECK(a.is_lni == b.is_lni);
    CHECK(a.violations.size() == b.violations.size());
}

TEST_CASE("SNI implies NI on a randomized damped corpus") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dc(0.2, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const RationalFunction g = random_damped_sum(rng, 1 + (trial % 2), dc(rng));
        const auto v = check_sni(g, default_grid(g));
        REQUIRE(v.is_sni);
        CHECK(v.is_ni);
    }
}

TEST_CASE("undamped modal sums are lossless on the grid") {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> omega(0.7, 40.0);
    std::uniform_real_distribution<double> gain(0.5, 30.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Mode> ms;
        for (int i = 0; i < 3; ++i) {
            const double w = omega(rng);
            ms.push_back({gain(rng), 0.0, w * w});
        }
        const RationalFunction g = ni::modal_tf(ModalModel(std::move(ms)));
        const auto v = check_lni(g, default_grid(g), 1e-8);
        CHECK(v.is_lni);
        CHECK(v.is_ni);
    }
}

TEST_CASE("internal stability: strictly proper forward block reduces to a DC gain test") {
    // M strictly proper: cond2 = -1, cond3 = M(0)N(0) - 1.
    const RationalFunction m = make_rf({1.0}, {1.0, 1.0});  // DC gain 1
    const RationalFunction n = make_rf({0.5}, {1.0, 1.0});  // DC gain 0.5
    const auto rep = check_internal_stability(m, n);
    CHECK(rep.well_posed);
    CHECK(rep.m_inf == 0.0);
    CHECK(rep.cond2 == doctest::Approx(-1.0));
    CHECK(rep.cond3 == doctest::Approx(0.5 - 1.0));
    CHECK(rep.internally_stable);
    CHECK(rep.warnings.empty());
}

TEST_CASE("internal stability: DC gain product above one fails") {
    const RationalFunction m = make_rf({2.0}, {1.0, 1.0});
    const RationalFunction n = make_rf({1.0}, {1.0, 1.0});
    const auto rep = check_internal_stability(m, n);
    CHECK(rep.cond3 == doctest::Approx(1.0));
    CHECK(!rep.internally_stable);
}

TEST_CASE("internal stability rejects a forward block with an origin pole") {
    const RationalFunction m = make_rf({1.0}, {1.0, 0.0});
    const RationalFunction n = make_rf({0.5}, {1.0, 1.0});
    CHECK_THROWS_AS(check_internal_stability(m, n), std::invalid_argument);
}

TEST_CASE("internal stability records a warning for a non-SNI feedback block") {
    const RationalFunction m = make_rf({0.5}, {1.0, 1.0});
    const RationalFunction n = make_rf({0.5}, {1.0, 0.0, 1.0});  // lossless, not SNI
    const auto rep = check_internal_stability(m, n);
    CHECK(!rep.warnings.empty());
}

TEST_CASE("gain conditions agree with the direct pole test on an admissible corpus") {
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    std::uniform_real_distribution<double> pole(0.5, 10.0);
    int stable_seen = 0, unstable_seen = 0;
    for (int trial = 0; trial < 25; ++trial) {
        // DC products sampled away from the marginal boundary.
        const double product = pick(rng) < 0.5 ? 0.2 + 0.6 * pick(rng) : 1.3 + 1.7 * pick(rng);
        const RationalFunction m = random_damped_sum(rng, 1 + (trial % 2), 1.0);
        const double a = pole(rng);
        const RationalFunction n = make_rf({product * a}, {1.0, a});  // DC gain = product

        const auto rep = check_internal_stability(m, n);
        REQUIRE(rep.warnings.empty());

        const auto loop_poles = ni::poles(ni::positive_feedback_tf(m, n));
        double max_re = -1e300;
        for (const auto& z : loop_poles) max_re = std::max(max_re, z.real());
        const bool pole_stable = max_re < 0.0;

        CHECK(rep.internally_stable == pole_stable);
        (pole_stable ? stable_seen : unstable_seen)++;
    }
    CHECK(stable_seen > 0);
    CHECK(unstable_seen > 0);
}

TEST_CASE("excluded grid points near resonances do not fail the lossless test") {
    std::vector<double> pts;
    for (double w = 0.5; w <= 3.5; w += 0.25) pts.push_back(w);
    const FrequencyGrid grid(pts, 0.3);  // wide exclusion band around the pole at 2.0
    const RationalFunction g = make_rf({1.0}, {1.0, 0.0, 4.0});
    const auto v = check_lni(g, grid, 1e-8);
    CHECK(v.is_lni);
}
