#include "cfq/semiclassical.hpp"

#include "cfq/scenario.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace cfq;

namespace {

CircuitParams bistable_params() {
    CircuitParams p;
    p.delta_s = 100;
    p.delta = 4.9;
    p.chi = 10;
    p.gamma = 6;
    p.gamma_f = 8;
    p.kappa = 3;
    p.epsilon = 0.5;
    return p;
}

double cubic_residual(const BistabilityResult& r, const CircuitParams& p, double x) {
    double lhs = 4 * p.chi * p.chi * x * x * x - 4 * r.p2 * p.chi * x * x +
                 (r.p1 * r.p1 + r.p2 * r.p2) * x;
    return std::abs(lhs - p.epsilon * p.epsilon);
}

} // namespace

TEST_CASE("coefficient anchors for the printed and drift-consistent forms") {
    CircuitParams p = bistable_params();
    BistabilityCoefficients four = bistability_coefficients(p, P1Form::four_gamma);
    BistabilityCoefficients sum = bistability_coefficients(p, P1Form::gamma_sum);

    CHECK(four.p1 == doctest::Approx(1.337472970).epsilon(1e-3));
    CHECK(four.p2 == doctest::Approx(5.103890722).epsilon(1e-3));
    CHECK(sum.p2 == doctest::Approx(four.p2));
    CHECK(sum.p1 > four.p1);  // the loop cross term enters with a larger weight

    // p2 does not depend on the loop form, p1 collapses to kappa/2-like rate
    // when both feedback decays vanish
    CircuitParams bare = p;
    bare.gamma = 0;
    bare.gamma_f = 0;
    BistabilityCoefficients b4 = bistability_coefficients(bare, P1Form::four_gamma);
    BistabilityCoefficients bs = bistability_coefficients(bare, P1Form::gamma_sum);
    CHECK(b4.p1 == doctest::Approx(bs.p1));
}

TEST_CASE("every cubic root is a fixed point of the mean-field flow") {
    CircuitParams p = bistable_params();
    p.epsilon = 0.9;  // inside the three-root window
    BistabilityResult r = steady_roots(p, P1Form::gamma_sum);
    REQUIRE(r.roots.size() == 3);
    for (const CubicRoot& root : r.roots) {
        Eigen::Vector2cd ac(root.A0, root.C0);
        CHECK(mean_field_rhs(p, ac).norm() < 1e-8);
        CHECK(cubic_residual(r, p, root.X) < 1e-9 * p.epsilon * p.epsilon + 1e-12);
        CHECK(root.A0_sq == doctest::Approx(std::norm(root.A0)));
        CHECK(root.X == doctest::Approx(std::norm(root.C0)));
    }
}

TEST_CASE("roots are invariant under uniform rate scaling") {
    CircuitParams p = bistable_params();
    p.epsilon = 0.9;
    BistabilityResult base = steady_roots(p, P1Form::gamma_sum);
    for (double s : {0.5, 2.0}) {
        CircuitParams q = p;
        q.gamma *= s;
        q.gamma_f *= s;
        q.kappa *= s;
        q.chi *= s;
        q.delta_s *= s;
        q.delta *= s;
        q.epsilon *= s;  // eps^2 scales with the s^2 of the cubic coefficients
        BistabilityResult scaled = steady_roots(q, P1Form::gamma_sum);
        REQUIRE(scaled.roots.size() == base.roots.size());
        for (size_t i = 0; i < base.roots.size(); ++i) {
            CHECK(scaled.roots[i].X == doctest::Approx(base.roots[i].X).epsilon(1e-9));
            CHECK(scaled.roots[i].stable == base.roots[i].stable);
        }
    }
}

TEST_CASE("stability flags agree with the jacobian spectrum") {
    CircuitParams p = bistable_params();
    p.epsilon = 0.9;
    BistabilityResult r = steady_roots(p, P1Form::gamma_sum);
    REQUIRE(r.roots.size() == 3);
    int stable = 0;
    for (const CubicRoot& root : r.roots) {
        Eigen::Matrix4d j = mean_field_jacobian(p, root.A0, root.C0);
        double lead = Eigen::EigenSolver<Eigen::Matrix4d>(j).eigenvalues().real().maxCoeff();
        CHECK(root.leading_eigenvalue == doctest::Approx(lead).epsilon(1e-6));
        CHECK(root.stable == (lead < 0));
        stable += root.stable ? 1 : 0;
    }
    CHECK(stable == 2);
    CHECK(!r.roots[1].stable);  // the middle branch is the unstable one
    CHECK(r.regime == Regime::bistable_at_this_drive);
}

TEST_CASE("three-root window, threshold onset, and the monostable control") {
    CircuitParams p = bistable_params();
    std::vector<double> grid = grid_range(0.02, 0.01, 1.5);
    DriveSweep sweep = drive_sweep(p, grid, P1Form::gamma_sum);
    REQUIRE(sweep.has_window);
    CHECK(sweep.window_lo < sweep.window_hi);

    double thr = std::sqrt(steady_roots(p, P1Form::gamma_sum).threshold_eps_sq);
    CHECK(std::abs(sweep.window_lo - thr) <= 0.01 + 1e-9);

    BistabilityResult at_thr = steady_roots(p, P1Form::gamma_sum);
    CHECK(at_thr.threshold_eps_sq ==
          doctest::Approx(std::sqrt(3.0) * std::pow(at_thr.p1, 3) / p.chi));
    CHECK(at_thr.regime != Regime::monostable);

    CircuitParams mono = p;
    mono.delta = 0;
    BistabilityCoefficients mc = bistability_coefficients(mono, P1Form::gamma_sum);
    CHECK(mc.p2 <= std::sqrt(3.0) * mc.p1);
    for (double eps : grid) {
        CircuitParams q = mono;
        q.epsilon = eps;
        BistabilityResult res = steady_roots(q, P1Form::gamma_sum);
        CHECK(res.roots.size() == 1);
        CHECK(res.regime == Regime::monostable);
    }
}

TEST_CASE("hysteresis traces split inside the window and close outside") {
    CircuitParams p = bistable_params();
    std::vector<double> grid = grid_range(0.02, 0.02, 1.5);
    DriveSweep sweep = drive_sweep(p, grid, P1Form::gamma_sum);
    REQUIRE(sweep.has_window);
    HysteresisTrace tr = hysteresis(p, grid, P1Form::gamma_sum);
    REQUIRE(tr.eps.size() == grid.size());

    double max_split_inside = 0;
    for (size_t i = 0; i < tr.eps.size(); ++i) {
        double split = std::abs(tr.c_sq_up[i] - tr.c_sq_down[i]);
        bool inside = tr.eps[i] > sweep.window_lo - 1e-9 && tr.eps[i] < sweep.window_hi + 1e-9;
        if (inside)
            max_split_inside = std::max(max_split_inside, split);
        else
            CHECK(split <= 1e-6);
    }
    CHECK(max_split_inside > 1e-2);

    // settled traces follow stable branches: the up sweep rides the lower
    // intensity branch until the window closes
    for (size_t i = 0; i + 1 < tr.eps.size(); ++i) {
        CHECK(tr.c_sq_up[i] <= tr.c_sq_up[i + 1] + 1e-9);
        CHECK(tr.c_sq_down[i] <= tr.c_sq_down[i + 1] + 1e-9);
    }
}

TEST_CASE("grid helpers") {
    std::vector<double> g = grid_range(0.02, 0.01, 1.5);
    CHECK(g.size() == 149);
    CHECK(g.front() == doctest::Approx(0.02));
    CHECK(g.back() == doctest::Approx(1.5));
    CHECK_THROWS_AS(grid_range(1.0, -0.1, 2.0), std::invalid_argument);

    std::vector<double> l = linspace(40000, 19000, 15);
    CHECK(l.size() == 15);
    CHECK(l.front() == doctest::Approx(40000));
    CHECK(l.back() == doctest::Approx(19000));
    CHECK(l[1] == doctest::Approx(38500));
}
