#pragma once

#include "cfq/slh.hpp"

#include <Eigen/Dense>

namespace cfq {

// Complex detunings of the driven two-mode circuit once the collective decay
// is folded into an effective non-Hermitian Hamiltonian. Both imaginary parts
// are non-positive (decaying ansatz).
struct ComplexDetunings {
    cxd delta_s_c;   // source mode: delta_s - i*gamma_a/2
    cxd delta_c;     // driven mode: delta - i*kappa/2
    double gamma_a;  // total source linewidth (gamma + gamma_f + 2*sqrt(gamma*gamma_f)) + kappa
};

ComplexDetunings complex_detunings(const CircuitParams& p);

// Stationary amplitudes of the truncated pure-state ansatz on a (3,3) space,
// gauge-fixed by C(0,0) = 1. Row = source-mode excitation, column = driven-mode
// excitation.
struct AmplitudeTable {
    Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();
    bool strong_drive_warning = false;  // epsilon above 0.3*kappa

    cxd at(int n_a, int n_c) const { return c(n_a, n_c); }
};

AmplitudeTable solve_amplitudes(const CircuitParams& p);

// Occupation weights of the source mode, P_n = sum_m |C(n, m)|^2, i.e. the
// probability of finding n photons in the source mode irrespective of the
// driven mode.
struct ExcitationWeights {
    double p1 = 0;
    double p2 = 0;
};

ExcitationWeights occupations(const AmplitudeTable& table);

// Leading-order single-path weights. Compact closed forms that keep only the
// dominant excitation path; valid near delta = -chi.
ExcitationWeights occupations_leading_order(const CircuitParams& p);

double g2_from_occupations(const ExcitationWeights& w);

double g2_weak_drive(const CircuitParams& p);

// Drive-independent closed form for g2 of the source mode at K = delta/chi + 1.
double g2_closed_form(const CircuitParams& p, double k);

} // namespace cfq
