#include <doctest.h>

#include <random>

#include "ni/augmentation.hpp"
#include "ni/errors.hpp"
#include "ni/synthesis.hpp"
#include "oracles.hpp"

using ni::AugmentedSystem;
using ni::Mode;
using ni::PidGains;
using ni::Polynomial;
using ni::RationalFunction;
using oracles::cd;

namespace {

const Mode kNominal{64.06, 0.0, 8.096e4};  // undamped first cantilever mode
const PidGains kGains{-7.0, -50.0, -0.2};

}  // namespace

TEST_CASE("integrator augmentation of a unit mode") {
    const AugmentedSystem a = ni::augment_integrator({1.0, 0.0, 1.0}, -1.0);
    Eigen::MatrixXd expected(3, 3);
    expected << 0, -1, 1, 1, 0, 0, 0, 1, 0;
    CHECK((a.sys.A - expected).norm() == 0.0);
    CHECK((a.sys.C1 * a.sys.B2)(0, 0) == -1.0);
    CHECK((a.sys.C1 * a.sys.B1)(0, 0) == 1.0);
}

TEST_CASE("integrator augmentation rejects nonnegative gain") {
    CHECK_THROWS_AS(ni::augment_integrator({1.0, 0.0, 1.0}, 1.0), ni::PreconditionError);
    CHECK_THROWS_AS(ni::augment_integrator({1.0, 0.0, 1.0}, 0.0), ni::PreconditionError);
}

TEST_CASE("integrator-augmented projected matrix is block triangular") {
    // Aq = [[A~, b~], [0, 0]]: spectrum of the mode block plus one zero.
    const Mode mode{64.06, 2.089, 8.096e4};
    const AugmentedSystem a = ni::augment_integrator(mode, -2.0);
    const ni::ProjectionSet proj = ni::build_projection(a.sys, 0.0);
    CHECK(proj.Aq.row(2).norm() == 0.0);

    const double alpha = mode.damping / 2.0;
    const double beta = mode.omega() * std::sqrt(1.0 - mode.zeta() * mode.zeta());
    const std::vector<cd> expected{{0.0, 0.0}, {-alpha, beta}, {-alpha, -beta}};
    CHECK(oracles::match_distance(expected, ni::eigvals(proj.Aq)) <= 1e-8 * mode.omega());
}

TEST_CASE("integrator margin is half the damping coefficient") {
    CHECK(ni::integrator_margin({64.06, 2.089, 8.096e4}) == doctest::Approx(1.0445));
    CHECK(ni::integrator_margin({1.0, 0.0, 1.0}) == 0.0);
}

TEST_CASE("PID augmentation reproduces the cantilever matrices") {
    const AugmentedSystem a = ni::augment_pid(kNominal, kGains);
    Eigen::MatrixXd expected(3, 3);
    expected << 0, 1, 0, 0, 0, 1, 3203.0, -80511.58, 12.812;
    CHECK((a.sys.A - expected).norm() <= 1e-12 * expected.norm());
    CHECK(a.sys.C1(0, 0) == doctest::Approx(-3203.0));
    CHECK(a.sys.C1(0, 1) == doctest::Approx(-448.42));
    CHECK(a.sys.C1(0, 2) == doctest::Approx(-12.812));
    CHECK(a.sys.B2(2, 0) == 1.0);
    CHECK(a.sys.B1(2, 0) == -1.0);
}

TEST_CASE("PID augmentation of a unit mode") {
    const AugmentedSystem a = ni::augment_pid({1.0, 0.0, 1.0}, {0.0, 0.0, -1.0});
    CHECK(a.sys.A(2, 0) == 0.0);
    CHECK(a.sys.A(2, 1) == -1.0);
    CHECK(a.sys.A(2, 2) == 1.0);
    CHECK(a.sys.C1(0, 0) == 0.0);
    CHECK(a.sys.C1(0, 1) == 0.0);
    CHECK(a.sys.C1(0, 2) == -1.0);
}

TEST_CASE("PID augmentation preconditions") {
    CHECK_THROWS_AS(ni::augment_pid(kNominal, {1.0, 1.0, 0.2}), ni::PreconditionError);
    CHECK_THROWS_AS(ni::augment_pid({64.06, 2.089, 8.096e4}, kGains), ni::PreconditionError);
}

TEST_CASE("control-channel transfer function equals n_L/(n_L + d_L)") {
    const AugmentedSystem a = ni::augment_pid(kNominal, kGains);
    const RationalFunction t_uz = tf_from_ss(a.sys, ni::InputChannel::Control);

    const Polynomial n_l({64.06 * -0.2, 64.06 * -7.0, 64.06 * -50.0});
    const Polynomial d_l({1.0, 0.0, 8.096e4, 0.0});
    const RationalFunction expected(n_l, n_l + d_l);

    std::mt19937_64 rng(301);
    std::uniform_real_distribution<double> coord(1.0, 200.0);
    for (int k = 0; k < 10; ++k) {
        const cd s(coord(rng), coord(rng));
        CHECK(std::abs(t_uz(s) - expected(s)) <= 1e-9 * std::max(1.0, std::abs(expected(s))));
    }
}

TEST_CASE("disturbance-channel transfer function equals -L/(1+L)") {
    const AugmentedSystem a = ni::augment_pid(kNominal, kGains);
    const RationalFunction t_wz = tf_from_ss(a.sys, ni::InputChannel::Disturbance);
    const RationalFunction L = ni::pid_open_loop(kNominal, kGains);

    std::mt19937_64 rng(307);
    std::uniform_real_distribution<double> coord(1.0, 200.0);
    for (int k = 0; k < 10; ++k) {
        const cd s(coord(rng), coord(rng));
        const cd expected = -L(s) / (1.0 + L(s));
        CHECK(std::abs(t_wz(s) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("PID open loop") {
    const RationalFunction L = ni::pid_open_loop(kNominal, kGains);
    CHECK(L.den().degree() == 3);
    CHECK(L.den().coeffs()[0] == doctest::Approx(1.0));
    CHECK(L.den().coeffs()[2] == doctest::Approx(8.096e4));
    CHECK(L.num().coeffs()[0] == doctest::Approx(64.06 * -0.2));
    CHECK(L.num().coeffs()[1] == doctest::Approx(64.06 * -7.0));
    CHECK(L.num().coeffs()[2] == doctest::Approx(64.06 * -50.0));

    // Derivative-only path: the origin zero cancels the integrator pole.
    const RationalFunction Ld = ni::pid_open_loop({2.0, 0.0, 9.0}, {0.0, 0.0, -0.5});
    CHECK(Ld.num().degree() == 1);
    CHECK(Ld.den().degree() == 2);
    CHECK(Ld.num().coeffs()[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(Ld.den().coeffs()[2] == doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("pid_open_loop matches pointwise series evaluation") {
    std::mt19937_64 rng(311);
    std::uniform_real_distribution<double> coord(0.5, 20.0);
    const Mode mode{2.5, 0.0, 25.0};
    const PidGains g{-1.0, -4.0, -0.3};
    const RationalFunction L = ni::pid_open_loop(mode, g);
    for (int k = 0; k < 10; ++k) {
        const cd s(coord(rng), coord(rng));
        const cd c = (g.kd * s * s + g.kp * s + g.ki) / s;
        const cd gn = mode.gain / (s * s + mode.delta);
        CHECK(std::abs(L(s) - c * gn) <= 1e-12 * std::abs(c * gn));
    }
}

TEST_CASE("achievable epsilon from the paper gains") {
    const auto rep = ni::achievable_epsilon(kGains, 64.06);
    CHECK(rep.all_stable);
    CHECK(rep.gamma == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(oracles::match_distance({{-10.0, 0.0}, {-25.0, 0.0}}, rep.zero_locations) <= 1e-9);
}

TEST_CASE("achievable epsilon with marginal zeros is zero") {
    const auto rep = ni::achievable_epsilon({0.0, 0.0, -1.0}, 1.0);
    CHECK(!rep.all_stable);
    CHECK(rep.gamma == 0.0);
    CHECK(rep.obstructions.size() == 2);
    CHECK_THROWS_AS(ni::achievable_epsilon({1.0, 1.0, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("achievable epsilon recovers planted quadratic roots") {
    std::mt19937_64 rng(313);
    std::uniform_real_distribution<double> mag(0.5, 20.0);
    std::bernoulli_distribution complex_pair(0.5);
    for (int trial = 0; trial < 20; ++trial) {
        double r1_re, r2_re;
        PidGains g;
        g.kd = -mag(rng);
        if (complex_pair(rng)) {
            const double re = -mag(rng), im = mag(rng);
            r1_re = r2_re = re;
            g.kp = g.kd * (-2.0 * re);
            g.ki = g.kd * (re * re + im * im);
        } else {
            const double a = -mag(rng), b = -mag(rng);
            r1_re = a;
            r2_re = b;
            g.kp = g.kd * (-(a + b));
            g.ki = g.kd * (a * b);
        }
        const auto rep = ni::achievable_epsilon(g, 1.0 + mag(rng));
        CHECK(rep.all_stable);
        CHECK(rep.gamma == doctest::Approx(-std::max(r1_re, r2_re)).epsilon(1e-8));
    }
}

TEST_CASE("projected spectrum of PID augmentations equals the planted zeros plus origin") {
    std::mt19937_64 rng(317);
    std::uniform_real_distribution<double> mag(0.5, 15.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = -mag(rng), b = -mag(rng);
        PidGains g;
        g.kd = -mag(rng);
        g.kp = g.kd * (-(a + b));
        g.ki = g.kd * (a * b);
        const Mode mode{mag(rng), 0.0, mag(rng) * mag(rng)};
        const AugmentedSystem aug = ni::augment_pid(mode, g);

        const ni::ProjectionSet proj = ni::build_projection(aug.sys, 0.0);
        const std::vector<cd> expected{{a, 0.0}, {b, 0.0}, {0.0, 0.0}};
        const double scale = std::max(1.0, std::max(std::abs(a), std::abs(b)));
        CHECK(oracles::match_distance(expected, ni::eigvals(proj.Aq)) <= 1e-7 * scale);
    }
}

TEST_CASE("feedthrough assumptions hold for every constructed augmentation") {
    std::mt19937_64 rng(331);
    std::uniform_real_distribution<double> mag(0.1, 40.0);
    std::uniform_real_distribution<double> zeta(0.0, 0.8);
    for (int trial = 0; trial < 30; ++trial) {
        const double w = mag(rng);
        const Mode damped{mag(rng), 2.0 * zeta(rng) * w, w * w};
        const auto ai = ni::augment_integrator(damped, -mag(rng));
        const auto ca = ni::check_assumptions(ai.sys);
        CHECK(ca.control_coupling_ok);
        CHECK(ca.disturbance_coupling_ok);

        const Mode undamped{mag(rng), 0.0, w * w};
        const auto ap = ni::augment_pid(undamped, {mag(rng) - 20.0, mag(rng) - 20.0, -mag(rng)});
        const auto cp = ni::check_assumptions(ap.sys);
        CHECK(cp.control_coupling_ok);
        CHECK(cp.disturbance_coupling_ok);
    }
}
