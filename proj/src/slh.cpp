#include "cfq/slh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfq {

void SlhTriple::validate(double tol) const {
    int n = n_channels();
    if (S.rows() != n || S.cols() != n)
        throw std::invalid_argument("SlhTriple: S is " + std::to_string(S.rows()) + "x" +
                                    std::to_string(S.cols()) + " but there are " + std::to_string(n) +
                                    " coupling operators");
    Matrix eye = Matrix::Identity(n, n);
    if ((S.adjoint() * S - eye).norm() > tol || (S * S.adjoint() - eye).norm() > tol)
        throw std::invalid_argument("SlhTriple: scattering matrix is not unitary");
    if (!H.is_hermitian(tol))
        throw std::invalid_argument("SlhTriple: Hamiltonian is not Hermitian within " +
                                    std::to_string(tol));
    for (const auto& l : L) require_same_space(l, H, "SlhTriple");
}

SlhTriple series(const SlhTriple& g1, const SlhTriple& g2) {
    int n = g1.n_channels();
    if (g2.n_channels() != n)
        throw std::invalid_argument("series: channel counts differ (" + std::to_string(n) + " vs " +
                                    std::to_string(g2.n_channels()) + ")");
    require_same_space(g1.H, g2.H, "series");

    Matrix s = g2.S * g1.S;

    std::vector<FockOperator> l;
    l.reserve(n);
    for (int i = 0; i < n; ++i) {
        FockOperator li = g2.L[i];
        for (int j = 0; j < n; ++j) li += g2.S(i, j) * g1.L[j];
        l.push_back(std::move(li));
    }

    // H' = H1 + H2 + (i/2)(L1^+ S2^+ L2 - L2^+ S2 L1)
    FockOperator cross = zero_operator(g1.space());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cross += std::conj(g2.S(j, i)) * (g1.L[i].adjoint() * g2.L[j]);
    FockOperator h = g1.H + g2.H + cxd(0, 0.5) * (cross - cross.adjoint());

    return {std::move(s), std::move(l), std::move(h)};
}

SlhTriple direct_feedback(const SlhTriple& g) {
    int n = g.n_channels();
    Matrix s = g.S * g.S;

    std::vector<FockOperator> l;
    l.reserve(n);
    for (int i = 0; i < n; ++i) {
        FockOperator li = g.L[i];
        for (int j = 0; j < n; ++j) li += g.S(i, j) * g.L[j];
        l.push_back(std::move(li));
    }

    // H~ = H + (i/2) L^+ (S^+ - S) L
    FockOperator corr = zero_operator(g.space());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            corr += (std::conj(g.S(j, i)) - g.S(i, j)) * (g.L[i].adjoint() * g.L[j]);
    FockOperator h = g.H + cxd(0, 0.5) * corr;

    return {std::move(s), std::move(l), std::move(h)};
}

double CircuitParams::sqrt_gamma_sum() const { return std::sqrt(gamma) + std::sqrt(gamma_f); }

double CircuitParams::feedback_coupling() const {
    return std::sqrt(kappa * gamma) - std::sqrt(kappa * gamma_f);
}

double CircuitParams::k() const {
    if (chi == 0) throw std::domain_error("CircuitParams::k: chi is zero");
    return delta / chi + 1.0;
}

void CircuitParams::set_k(double k) {
    if (chi == 0) throw std::domain_error("CircuitParams::set_k: chi is zero");
    delta = (k - 1.0) * chi;
}

void CircuitParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("CircuitParams: field ") + name +
                                        " must be finite and nonnegative, got " + std::to_string(v));
    };
    nonneg(gamma, "gamma");
    nonneg(gamma_f, "gamma_f");
    nonneg(kappa, "kappa");
    nonneg(epsilon, "epsilon");
    for (auto [v, name] : {std::pair{chi, "chi"}, {delta_s, "delta_s"}, {delta, "delta"}})
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string("CircuitParams: field ") + name + " is not finite");
}

KerrFromQubit kerr_from_qubit(double g, double omega, double delta_qT) {
    if (!(omega > 0))
        throw std::invalid_argument("kerr_from_qubit: omega must be positive, got " +
                                    std::to_string(omega));
    if (!(delta_qT > 0))
        throw std::invalid_argument("kerr_from_qubit: delta_qT must be positive, got " +
                                    std::to_string(delta_qT));
    KerrFromQubit r;
    r.chi = std::pow(g, 4) / (2.0 * omega * delta_qT * delta_qT);
    r.ratio_g2_omega = g * g / (delta_qT * omega);
    r.ratio_g_detuning = g / delta_qT;
    r.validity_warning = r.ratio_g2_omega > 0.1 || r.ratio_g_detuning > 0.1;
    return r;
}

FockOperator rotating_frame_hamiltonian(const CircuitParams& p, const ModeSpace& space) {
    if (space.n_modes() != 2)
        throw std::invalid_argument("rotating_frame_hamiltonian: space must have exactly 2 modes");
    p.validate();
    FockOperator a = annihilator(space, 0);
    FockOperator c = annihilator(space, 1);
    FockOperator ad = a.adjoint();
    FockOperator cd = c.adjoint();

    FockOperator h = p.delta_s * (ad * a) + p.delta * (cd * c) - p.chi * (cd * cd * c * c) -
                     p.epsilon * (cd + c);
    h += cxd(0, 0.5) * p.feedback_coupling() * (ad * c - cd * a);
    return h;
}

SlhTriple build_circuit(const CircuitParams& p, const ModeSpace& space) {
    if (space.n_modes() != 2)
        throw std::invalid_argument("build_circuit: space must have exactly 2 modes");
    p.validate();
    FockOperator a = annihilator(space, 0);
    FockOperator c = annihilator(space, 1);
    FockOperator cd = c.adjoint();
    Matrix s1 = Matrix::Identity(1, 1);

    SlhTriple input{s1, {std::sqrt(p.gamma) * a}, p.delta_s * (a.adjoint() * a)};
    SlhTriple controller{
        s1,
        {std::sqrt(p.kappa) * c},
        p.delta * (cd * c) - p.chi * (cd * cd * c * c) - p.epsilon * (cd + c)};
    // the loop re-enters the same physical cavity, whose Hamiltonian is
    // already carried by the input component
    SlhTriple feedback_port{s1, {std::sqrt(p.gamma_f) * a}, zero_operator(space)};

    SlhTriple out = series(series(input, controller), feedback_port);
    out.validate();
    return out;
}

DriftCoefficients mean_drift_coefficients(const SlhTriple& g) {
    const ModeSpace& sp = g.space();
    if (sp.n_modes() != 2 || sp.dim(0) < 2 || sp.dim(1) < 3)
        throw std::invalid_argument("mean_drift_coefficients: need a 2-mode space with dims >= (2,3)");

    auto drift = [&](const FockOperator& x) {
        FockOperator d = cxd(0, 1) * commutator(g.H, x);
        for (const auto& l : g.L) {
            FockOperator ld = l.adjoint();
            d += ld * x * l - 0.5 * (ld * l * x + x * (ld * l));
        }
        return d;
    };

    auto idx = [&](int na, int nc) { return na * sp.dim(1) + nc; };

    FockOperator da = drift(annihilator(sp, 0));
    FockOperator dc = drift(annihilator(sp, 1));

    DriftCoefficients out;
    out.m(0, 0) = da.matrix()(idx(0, 0), idx(1, 0));
    out.m(0, 1) = da.matrix()(idx(0, 0), idx(0, 1));
    out.b(0) = da.matrix()(idx(0, 0), idx(0, 0));
    out.m(1, 0) = dc.matrix()(idx(0, 0), idx(1, 0));
    out.m(1, 1) = dc.matrix()(idx(0, 0), idx(0, 1));
    out.b(1) = dc.matrix()(idx(0, 0), idx(0, 0));

    // <0,1| c^+cc |0,2> = sqrt(2); subtract the linear part's contribution
    double s2 = std::sqrt(2.0);
    out.kerr = (dc.matrix()(idx(0, 1), idx(0, 2)) - out.m(1, 1) * s2) / s2;
    return out;
}

} // namespace cfq
