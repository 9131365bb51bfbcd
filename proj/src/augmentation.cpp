#include "ni/augmentation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ni/errors.hpp"
#include "ni/synthesis.hpp"

namespace ni {

namespace {

void verify_assumptions(const StateSpaceModel& sys) {
    const AssumptionCheck a = check_assumptions(sys);
    std::vector<std::string> failed;
    if (!a.control_coupling_ok) failed.push_back("control_coupling");
    if (!a.disturbance_coupling_ok) failed.push_back("disturbance_coupling");
    if (!failed.empty()) throw PreconditionError(failed);
}

}  // namespace

AugmentedSystem augment_integrator(const Mode& mode, double ktilde) {
    if (!(ktilde < 0.0)) throw PreconditionError({"integrator_gain_negative"});

    // Two-state mode realization (A~, b~, c~) with c~ = [0, gain].
    Eigen::MatrixXd A(3, 3);
    A << -mode.damping, -mode.delta, 1.0,
          1.0,           0.0,        0.0,
          0.0,          -ktilde * mode.gain, 0.0;
    Eigen::MatrixXd B1(3, 1), B2(3, 1), C1(1, 3);
    B1 << 0.0, 0.0, -ktilde;
    B2 << 0.0, 0.0, ktilde;
    C1 << 0.0, 0.0, 1.0;

    AugmentedSystem out{StateSpaceModel(std::move(A), std::move(B1), std::move(B2), std::move(C1)),
                        AugmentationKind::Integrator, mode, ktilde, {}};
    verify_assumptions(out.sys);
    return out;
}

double integrator_margin(const Mode& mode) { return mode.damping / 2.0; }

AugmentedSystem augment_pid(const Mode& mode, const PidGains& g) {
    std::vector<std::string> failed;
    if (mode.damping != 0.0) failed.push_back("undamped_mode");
    if (!(g.kd < 0.0)) failed.push_back("derivative_gain_negative");
    if (!failed.empty()) throw PreconditionError(failed);

    const double G = mode.gain;
    Eigen::MatrixXd A(3, 3);
    A << 0.0,       1.0,                      0.0,
         0.0,       0.0,                      1.0,
        -G * g.ki, -(G * g.kp + mode.delta), -G * g.kd;
    Eigen::MatrixXd B1(3, 1), B2(3, 1), C1(1, 3);
    B2 << 0.0, 0.0, 1.0;
    B1 << 0.0, 0.0, -1.0;
    C1 << G * g.ki, G * g.kp, G * g.kd;

    AugmentedSystem out{StateSpaceModel(std::move(A), std::move(B1), std::move(B2), std::move(C1)),
                        AugmentationKind::Pid, mode, 0.0, g};
    verify_assumptions(out.sys);
    return out;
}

RationalFunction pid_open_loop(const Mode& mode, const PidGains& g) {
    const double G = mode.gain;
    Polynomial num({G * g.kd, G * g.kp, G * g.ki});
    Polynomial den({1.0, 0.0, mode.delta, 0.0});
    return RationalFunction(std::move(num), std::move(den)).reduce();
}

EpsilonReport achievable_epsilon(const PidGains& g, double gain) {
    if (g.kd == 0.0) throw std::invalid_argument("achievable_epsilon: derivative gain must be nonzero");

    EpsilonReport rep;
    const Polynomial numerator({gain * g.kd, gain * g.kp, gain * g.ki});
    rep.zero_locations = numerator.roots();

    double max_re = -std::numeric_limits<double>::infinity();
    rep.all_stable = true;
    for (const auto& r : rep.zero_locations) {
        max_re = std::max(max_re, r.real());
        if (!(r.real() < 0.0)) {
            rep.all_stable = false;
            rep.obstructions.push_back("zero at (" + std::to_string(r.real()) + ", " +
                                       std::to_string(r.imag()) + ") has Re >= 0");
        }
    }
    rep.gamma = rep.all_stable ? -max_re : 0.0;
    return rep;
}

}  // namespace ni
