#pragma once

#include "cfq/slh.hpp"

#include <string>
#include <vector>

namespace cfq {

// Which form of the loop correction enters the effective controller
// linewidth p1. The two forms differ in the prefactor of the
// sqrt(gamma gamma_f) term: (4 sqrt(gamma) + sqrt(gamma_f))^2 for
// four_gamma, (sqrt(gamma) + sqrt(gamma_f))^2 for gamma_sum. four_gamma is
// the default; gamma_sum is the form consistent with mean_field_rhs, so the
// dynamical routines (hysteresis, fixed-point checks) should use it. The
// validate report prints both.
enum class P1Form { four_gamma, gamma_sum };

std::string to_string(P1Form f);
P1Form p1_form_from_string(const std::string& s);

struct BistabilityCoefficients {
    double p1 = 0;   // effective linewidth of the controller
    double p2 = 0;   // effective detuning of the controller
};

BistabilityCoefficients bistability_coefficients(const CircuitParams& p,
                                                 P1Form form = P1Form::four_gamma);

struct CubicRoot {
    double X = 0;       // |C0|^2
    double A0_sq = 0;   // |A0|^2
    cxd C0;
    cxd A0;
    bool stable = false;
    double leading_eigenvalue = 0;   // largest real part over the drift Jacobian spectrum
};

enum class Regime { monostable, bistable_capable, bistable_at_this_drive };
std::string to_string(Regime r);

struct BistabilityResult {
    double p1 = 0, p2 = 0;
    std::vector<CubicRoot> roots;   // ascending in X
    Regime regime = Regime::monostable;
    double threshold_eps_sq = 0;    // sqrt(3) p1^3 / chi
};

// d<a>/dt and d<c>/dt of the mean-field equations at (A, C) = (ac[0], ac[1])
Eigen::Vector2cd mean_field_rhs(const CircuitParams& p, const Eigen::Vector2cd& ac);

// real 4x4 Jacobian of the mean-field flow at (A, C),
// basis (Re A, Im A, Re C, Im C)
Eigen::Matrix4d mean_field_jacobian(const CircuitParams& p, cxd A, cxd C);

// steady amplitudes from the cubic in X = |C0|^2:
//   4 chi^2 X^3 - 4 p2 chi X^2 + (p1^2 + p2^2) X = eps^2
// solved by companion-matrix eigenvalues; stability from the drift Jacobian
BistabilityResult steady_roots(const CircuitParams& p, P1Form form = P1Form::four_gamma);

struct DriveSweep {
    std::vector<double> eps;
    std::vector<BistabilityResult> results;
    bool has_window = false;
    double window_lo = 0;   // eps range with three roots
    double window_hi = 0;
};

DriveSweep drive_sweep(const CircuitParams& p, const std::vector<double>& eps_grid,
                       P1Form form = P1Form::four_gamma);

struct HysteresisTrace {
    std::vector<double> eps;
    std::vector<double> a_sq_up, a_sq_down;   // |A|^2 settled along the up and down sweeps
    std::vector<double> c_sq_up, c_sq_down;
};

// continuation sweep of the mean-field flow: each point starts from the
// previous settled state and integrates until ||rhs|| < 1e-9
HysteresisTrace hysteresis(const CircuitParams& p, const std::vector<double>& eps_grid,
                           P1Form form = P1Form::four_gamma);

} // namespace cfq
