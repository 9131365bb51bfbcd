#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ni/modal.hpp"
#include "ni/statespace.hpp"

namespace ni {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;  // must be negative for the feedthrough assumptions
};

enum class AugmentationKind { Integrator, Pid };

/// A nominal mode augmented with a controller so that the feedthrough
/// assumptions hold and state feedback synthesis applies.
struct AugmentedSystem {
    StateSpaceModel sys;
    AugmentationKind kind;
    Mode source;
    double integrator_gain = 0.0;  // set for Integrator
    PidGains pid;                  // set for Pid
};

/// Integral augmentation of one mode: states (x1, x2, x3 = z) with
///   A = [ A~  b~ ; -k c~  0 ],  B1 = [0;0;-k],  B2 = [0;0;k],  C1 = [0 0 1]
/// where (A~, b~, c~) realizes the mode. Requires ktilde < 0.
AugmentedSystem augment_integrator(const Mode& mode, double ktilde);

/// Supremum of the degree of stability reachable through the integral
/// augmentation: zeta * omega = damping / 2 of the nominal mode.
double integrator_margin(const Mode& mode);

/// PID augmentation of an undamped mode in companion coordinates:
///   A = [0 1 0; 0 0 1; -G ki  -(G kp + w^2)  -G kd],
///   B2 = e3, B1 = -e3, C1 = [G ki, G kp, G kd].
/// Requires an undamped mode and kd < 0.
AugmentedSystem augment_pid(const Mode& mode, const PidGains& g);

/// Loop transfer function of the PID path in series with the undamped mode:
///   G (kd s^2 + kp s + ki) / (s (s^2 + w^2)), reduced.
RationalFunction pid_open_loop(const Mode& mode, const PidGains& g);

/// Stability margin available from a PID choice: the roots of
/// gain * (kd s^2 + kp s + ki) become the invariant closed-loop zeros, so the
/// reachable degree-of-stability interval is (0, -max Re root) when all roots
/// are strictly stable, and empty (gamma = 0) otherwise.
struct EpsilonReport {
    double gamma = 0.0;
    std::vector<std::complex<double>> zero_locations;
    bool all_stable = false;
    std::vector<std::string> obstructions;
};
EpsilonReport achievable_epsilon(const PidGains& g, double gain);

}  // namespace ni
