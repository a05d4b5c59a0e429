#include "cfq/semiclassical.hpp"

#include <boost/numeric/odeint.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfq {

std::string to_string(P1Form f) {
    return f == P1Form::four_gamma ? "four-gamma" : "gamma-sum";
}

P1Form p1_form_from_string(const std::string& s) {
    if (s == "four-gamma") return P1Form::four_gamma;
    if (s == "gamma-sum") return P1Form::gamma_sum;
    throw std::invalid_argument("p1_form: expected four-gamma or gamma-sum, got '" + s + "'");
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::monostable: return "monostable";
        case Regime::bistable_capable: return "bistable-capable";
        case Regime::bistable_at_this_drive: return "bistable-at-this-drive";
    }
    return "?";
}

BistabilityCoefficients bistability_coefficients(const CircuitParams& p, P1Form form) {
    p.validate();
    double s = p.sqrt_gamma_sum();
    double d_den = 4.0 * p.delta_s * p.delta_s + std::pow(s, 4);
    if (d_den <= 0)
        throw std::domain_error("bistability_coefficients: delta_s and the decay sum both vanish");
    double root_ggf = std::sqrt(p.gamma * p.gamma_f);
    double pref = form == P1Form::four_gamma
                      ? std::pow(4.0 * std::sqrt(p.gamma) + std::sqrt(p.gamma_f), 2)
                      : s * s;
    BistabilityCoefficients out;
    out.p1 = p.kappa / 2.0 - 2.0 * p.kappa * root_ggf * pref / d_den;
    out.p2 = p.delta + 4.0 * p.kappa * root_ggf * p.delta_s / d_den;
    return out;
}

Eigen::Vector2cd mean_field_rhs(const CircuitParams& p, const Eigen::Vector2cd& ac) {
    const cxd i(0, 1);
    cxd A = ac(0), C = ac(1);
    double s = p.sqrt_gamma_sum();
    Eigen::Vector2cd d;
    d(0) = -(i * p.delta_s + s * s / 2.0) * A - std::sqrt(p.kappa * p.gamma_f) * C;
    d(1) = -(i * p.delta + p.kappa / 2.0) * C + 2.0 * i * p.chi * std::norm(C) * C -
           std::sqrt(p.kappa * p.gamma) * A + i * p.epsilon;
    return d;
}

namespace {

// 2x2 real block of the flow df = mu dz + nu d(conj z)
Eigen::Matrix2d wirtinger_block(cxd mu, cxd nu) {
    Eigen::Matrix2d b;
    b << (mu + nu).real(), -(mu - nu).imag(),
         (mu + nu).imag(),  (mu - nu).real();
    return b;
}

} // namespace

Eigen::Matrix4d mean_field_jacobian(const CircuitParams& p, cxd A, cxd C) {
    (void)A;
    const cxd i(0, 1);
    double s = p.sqrt_gamma_sum();
    Eigen::Matrix4d j;
    j.block<2, 2>(0, 0) = wirtinger_block(-(i * p.delta_s + s * s / 2.0), 0);
    j.block<2, 2>(0, 2) = wirtinger_block(-std::sqrt(p.kappa * p.gamma_f), 0);
    j.block<2, 2>(2, 0) = wirtinger_block(-std::sqrt(p.kappa * p.gamma), 0);
    j.block<2, 2>(2, 2) = wirtinger_block(
        -(i * p.delta + p.kappa / 2.0) + 4.0 * i * p.chi * std::norm(C), 2.0 * i * p.chi * C * C);
    return j;
}

namespace {

std::vector<double> positive_real_cubic_roots(double p1, double p2, double chi, double eps_sq) {
    std::vector<double> roots;
    double lin = p1 * p1 + p2 * p2;
    if (chi == 0) {
        if (lin <= 0)
            throw std::domain_error("steady_roots: degenerate linear steady-state equation");
        roots.push_back(eps_sq / lin);
        return roots;
    }
    // monic form X^3 + b X^2 + c X + d
    double a3 = 4.0 * chi * chi;
    double b = -4.0 * p2 * chi / a3;
    double c = lin / a3;
    double d = -eps_sq / a3;
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(1, 0) = 1;
    comp(2, 1) = 1;
    comp(0, 2) = -d;
    comp(1, 2) = -c;
    comp(2, 2) = -b;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
    double scale = std::max({1.0, std::abs(b), std::abs(c), std::abs(d)});
    auto cubic = [&](double x) { return ((x + b) * x + c) * x + d; };
    auto dcubic = [&](double x) { return (3.0 * x + 2.0 * b) * x + c; };
    for (int k = 0; k < 3; ++k) {
        cxd z = es.eigenvalues()(k);
        if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z.real()))) continue;
        double x = z.real();
        // two Newton polish steps sharpen the eigenvalue root
        for (int it = 0; it < 2; ++it) {
            double der = dcubic(x);
            if (der != 0) x -= cubic(x) / der;
        }
        if (x < -1e-12 * scale) continue;
        roots.push_back(std::max(x, 0.0));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace

BistabilityResult steady_roots(const CircuitParams& p, P1Form form) {
    auto [p1, p2] = bistability_coefficients(p, form);
    double eps_sq = p.epsilon * p.epsilon;

    BistabilityResult out;
    out.p1 = p1;
    out.p2 = p2;
    out.threshold_eps_sq = p.chi != 0 ? std::sqrt(3.0) * std::pow(p1, 3) / p.chi
                                      : std::numeric_limits<double>::infinity();

    double s = p.sqrt_gamma_sum();
    cxd w(s * s / 2.0, p.delta_s);   // i delta_s + s^2/2
    const cxd i(0, 1);

    for (double x : positive_real_cubic_roots(p1, p2, p.chi, eps_sq)) {
        double resid = 4.0 * p.chi * p.chi * x * x * x - 4.0 * p2 * p.chi * x * x +
                       (p1 * p1 + p2 * p2) * x - eps_sq;
        if (std::abs(resid) > 1e-9 * std::max(1.0, eps_sq))
            throw std::runtime_error("steady_roots: cubic residual " + std::to_string(resid) +
                                     " exceeds tolerance");
        CubicRoot r;
        r.X = x;
        cxd den = p1 + i * (p2 - 2.0 * p.chi * x);
        r.C0 = std::abs(den) > 1e-150 ? i * p.epsilon / den : cxd(std::sqrt(x), 0);
        if (std::abs(w) > 1e-150)
            r.A0 = -std::sqrt(p.kappa * p.gamma_f) * r.C0 / w;
        else
            r.A0 = 0;
        r.A0_sq = std::norm(r.A0);
        Eigen::EigenSolver<Eigen::Matrix4d> es(mean_field_jacobian(p, r.A0, r.C0));
        r.leading_eigenvalue = es.eigenvalues().real().maxCoeff();
        r.stable = r.leading_eigenvalue < 0;
        out.roots.push_back(r);
    }

    if (out.roots.size() == 3)
        out.regime = Regime::bistable_at_this_drive;
    else if (p2 > std::sqrt(3.0) * p1)
        out.regime = Regime::bistable_capable;
    else
        out.regime = Regime::monostable;
    return out;
}

DriveSweep drive_sweep(const CircuitParams& p, const std::vector<double>& eps_grid, P1Form form) {
    DriveSweep out;
    out.eps = eps_grid;
    out.results.reserve(eps_grid.size());
    for (double e : eps_grid) {
        CircuitParams q = p;
        q.epsilon = e;
        out.results.push_back(steady_roots(q, form));
    }
    for (size_t k = 0; k < out.results.size(); ++k) {
        if (out.results[k].roots.size() == 3) {
            if (!out.has_window) out.window_lo = eps_grid[k];
            out.window_hi = eps_grid[k];
            out.has_window = true;
        }
    }
    return out;
}

namespace {

using ode_state = std::array<double, 4>;

double settle(const CircuitParams& p, ode_state& z, double t_cap) {
    namespace odeint = boost::numeric::odeint;
    auto rhs = [&p](const ode_state& y, ode_state& dy, double) {
        Eigen::Vector2cd ac(cxd(y[0], y[1]), cxd(y[2], y[3]));
        Eigen::Vector2cd d = mean_field_rhs(p, ac);
        dy = {d(0).real(), d(0).imag(), d(1).real(), d(1).imag()};
    };
    auto rhs_norm = [&](const ode_state& y) {
        ode_state dy;
        rhs(y, dy, 0.0);
        return std::sqrt(dy[0] * dy[0] + dy[1] * dy[1] + dy[2] * dy[2] + dy[3] * dy[3]);
    };
    auto stepper = odeint::make_controlled(1e-10, 1e-8, odeint::runge_kutta_dopri5<ode_state>());
    double t = 0;
    double chunk = t_cap / 1000.0;
    while (t < t_cap && rhs_norm(z) >= 1e-9) {
        odeint::integrate_adaptive(stepper, rhs, z, t, t + chunk, chunk / 100.0);
        t += chunk;
    }
    return t;
}

} // namespace

HysteresisTrace hysteresis(const CircuitParams& p, const std::vector<double>& eps_grid, P1Form form) {
    p.validate();
    auto [p1, p2] = bistability_coefficients(p, form);
    (void)p2;
    double rate = std::numeric_limits<double>::infinity();
    for (double v : {p.kappa, p.gamma, p.gamma_f, std::abs(p1)})
        if (v > 0) rate = std::min(rate, v);
    if (!std::isfinite(rate)) rate = 1.0;
    double t_cap = 1e4 / rate;

    HysteresisTrace out;
    out.eps = eps_grid;
    size_t n = eps_grid.size();
    out.a_sq_up.resize(n);
    out.a_sq_down.resize(n);
    out.c_sq_up.resize(n);
    out.c_sq_down.resize(n);

    ode_state z = {1e-8, 0, 1e-8, 0};
    for (size_t k = 0; k < n; ++k) {
        CircuitParams q = p;
        q.epsilon = eps_grid[k];
        settle(q, z, t_cap);
        out.a_sq_up[k] = z[0] * z[0] + z[1] * z[1];
        out.c_sq_up[k] = z[2] * z[2] + z[3] * z[3];
    }
    for (size_t k = n; k-- > 0;) {
        CircuitParams q = p;
        q.epsilon = eps_grid[k];
        settle(q, z, t_cap);
        out.a_sq_down[k] = z[0] * z[0] + z[1] * z[1];
        out.c_sq_down[k] = z[2] * z[2] + z[3] * z[3];
    }
    return out;
}

} // namespace cfq
