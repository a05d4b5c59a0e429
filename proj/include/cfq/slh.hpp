#pragma once

#include "cfq/fock.hpp"

#include <optional>
#include <vector>

namespace cfq {

// One component of an input-output network: scattering matrix S (scalar
// entries), coupling operator vector L, internal Hamiltonian H, all on a
// shared ModeSpace.
struct SlhTriple {
    Matrix S;                      // n x n complex scalars, unitary
    std::vector<FockOperator> L;   // n coupling operators
    FockOperator H;

    int n_channels() const { return static_cast<int>(L.size()); }
    const ModeSpace& space() const { return H.space(); }

    // S unitary and H Hermitian within tol, all L on the shared space
    void validate(double tol = 1e-12) const;
};

// feed the output field of g1 into the input of g2
SlhTriple series(const SlhTriple& g1, const SlhTriple& g2);

// close a component's own output onto its input
SlhTriple direct_feedback(const SlhTriple& g);

struct QubitParams {
    double g = 0;         // qubit-cavity coupling
    double omega = 0;     // qubit drive
    double delta_qT = 0;  // qubit-cavity detuning
};

// All rates and detunings of the feedback circuit, in one consistent
// angular-frequency unit.
struct CircuitParams {
    double gamma = 0;     // controlled-cavity input-channel decay
    double gamma_f = 0;   // feedback-channel decay
    double kappa = 0;     // controller cavity decay
    double chi = 0;       // Kerr coefficient
    double delta_s = 0;   // controlled-cavity detuning
    double delta = 0;     // controller detuning
    double epsilon = 0;   // drive amplitude, real and nonnegative
    std::optional<QubitParams> qubit;

    double sqrt_gamma_sum() const;  // sqrt(gamma) + sqrt(gamma_f)
    double feedback_coupling() const;  // sqrt(kappa gamma) - sqrt(kappa gamma_f)

    double k() const;       // K = delta / chi + 1 (chi != 0)
    void set_k(double k);   // delta = (k - 1) chi

    void validate() const;
};

struct KerrFromQubit {
    double chi = 0;
    double ratio_g2_omega = 0;      // g^2 / (delta_qT * omega)
    double ratio_g_detuning = 0;    // g / delta_qT
    bool validity_warning = false;  // either ratio above 0.1
};

// chi = g^4 / (2 omega delta_qT^2), with dispersive-validity ratios
KerrFromQubit kerr_from_qubit(double g, double omega, double delta_qT);

// H_tot = delta_s n_a + delta n_c - chi (c^+)^2 c^2 - eps (c^+ + c)
//         + (i/2)(sqrt(kappa gamma) - sqrt(kappa gamma_f)) (a^+ c - c^+ a)
FockOperator rotating_frame_hamiltonian(const CircuitParams& p, const ModeSpace& space);

// The feedback loop flattened to a single component: the controlled cavity's
// output passes through the Kerr controller and re-enters through the
// feedback port. Built by two series compositions; the closed form above is
// the test oracle, not the construction.
SlhTriple build_circuit(const CircuitParams& p, const ModeSpace& space);

struct DriftCoefficients {
    Eigen::Matrix2cd m;   // linear part of (d<a>/dt, d<c>/dt) in the basis (<a>, <c>)
    Eigen::Vector2cd b;   // constant (drive) part
    cxd kerr;             // coefficient of c^+cc in d<c>/dt
};

// Heisenberg drift of the mode means under the triple, extracted numerically
// from matrix elements of i[H,x] + L^+ x L - (1/2){L^+L, x}
DriftCoefficients mean_drift_coefficients(const SlhTriple& g);

} // namespace cfq
