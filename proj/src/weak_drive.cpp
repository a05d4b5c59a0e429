#include "cfq/weak_drive.hpp"

#include "cfq/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace cfq {

ComplexDetunings complex_detunings(const CircuitParams& p) {
    double s = p.sqrt_gamma_sum();
    double gamma_a = s * s + p.kappa;
    return {cxd(p.delta_s, -0.5 * gamma_a), cxd(p.delta, -0.5 * p.kappa), gamma_a};
}

AmplitudeTable solve_amplitudes(const CircuitParams& p) {
    if (p.epsilon <= 0)
        throw std::domain_error("solve_amplitudes: drive strength must be positive");
    p.validate();

    ModeSpace space({3, 3});
    double s = p.sqrt_gamma_sum();
    Matrix heff = rotating_frame_hamiltonian(p, space).matrix();
    heff -= cxd(0, 0.5) * (s * s * number_operator(space, 0).matrix() +
                           p.kappa * number_operator(space, 1).matrix());

    // gauge C(0,0) = 1; the vacuum row is not stationary and is dropped
    Eigen::Matrix<cxd, 8, 8> a = heff.block(1, 1, 8, 8);
    Eigen::Matrix<cxd, 8, 1> b = -heff.block(1, 0, 8, 1);
    Eigen::ColPivHouseholderQR<Eigen::Matrix<cxd, 8, 8>> qr(a);
    if (qr.rank() < 8)
        throw std::runtime_error(
            "solve_amplitudes: stationary amplitude system is singular at these parameters");
    Eigen::Matrix<cxd, 8, 1> x = qr.solve(b);

    AmplitudeTable table;
    table.strong_drive_warning = p.epsilon > 0.3 * p.kappa;
    table.c(0, 0) = 1;
    for (int idx = 1; idx < 9; ++idx) table.c(idx / 3, idx % 3) = x(idx - 1);
    return table;
}

ExcitationWeights occupations(const AmplitudeTable& t) {
    // occupation of the controlled mode alone, traced over the controller
    ExcitationWeights w;
    w.p1 = std::norm(t.at(1, 0)) + std::norm(t.at(1, 1)) + std::norm(t.at(1, 2));
    w.p2 = std::norm(t.at(2, 0)) + std::norm(t.at(2, 1)) + std::norm(t.at(2, 2));
    return w;
}

ExcitationWeights occupations_leading_order(const CircuitParams& p) {
    ComplexDetunings d = complex_detunings(p);
    cxd dsc = d.delta_s_c;
    cxd dc = d.delta_c;
    double chi = p.chi;
    cxd eta_eps = p.feedback_coupling() * p.epsilon;

    ExcitationWeights w;
    w.p1 = std::norm(eta_eps) / std::norm((dc - chi) * dsc);
    double num2 = std::norm(eta_eps) * std::norm(eta_eps) * std::norm(dsc - 2.0 * chi + dc);
    double den2 = 2.0 * std::norm((dc - chi) * (dc - 2.0 * chi) * (dsc + dc - chi) * dsc * dsc);
    if (den2 == 0)
        throw std::runtime_error("occupations_leading_order: degenerate detunings");
    w.p2 = num2 / den2;
    return w;
}

double g2_from_occupations(const ExcitationWeights& w) {
    if (w.p1 <= 0)
        throw std::domain_error("g2_from_occupations: single-excitation weight is zero");
    double nbar = w.p1 + 2.0 * w.p2;
    return 2.0 * w.p2 / (nbar * nbar);
}

double g2_weak_drive(const CircuitParams& p) {
    return g2_from_occupations(occupations(solve_amplitudes(p)));
}

double g2_closed_form(const CircuitParams& p, double k) {
    if (p.chi == 0)
        throw std::invalid_argument("g2_closed_form: requires a nonzero Kerr coefficient");
    double s = p.sqrt_gamma_sum();
    double gamma_a = s * s + p.kappa;
    cxd i_half_ga(0, 0.5 * gamma_a);
    cxd i_half_k(0, 0.5 * p.kappa);

    double num = std::norm(cxd(p.delta_s + (k - 2.0) * p.chi, 0) - i_half_ga) *
                 std::norm(cxd((k - 1.0) * p.chi, 0) - i_half_k);
    double den = std::norm((cxd((k - 2.0) * p.chi, 0) - i_half_k) *
                           (cxd(p.delta_s + (k - 1.0) * p.chi, 0) - i_half_ga));
    if (den == 0)
        throw std::runtime_error("g2_closed_form: denominator vanishes at these parameters");
    return num / den;
}

} // namespace cfq
