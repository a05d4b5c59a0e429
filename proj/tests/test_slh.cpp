#include "cfq/slh.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace cfq;

namespace {

Matrix random_matrix(std::mt19937& rng, int n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cxd(dist(rng), dist(rng));
    return m;
}

SlhTriple random_triple(std::mt19937& rng, const ModeSpace& space, int channels) {
    int n = space.total_dim();
    Matrix s = Eigen::HouseholderQR<Matrix>(random_matrix(rng, channels)).householderQ();
    std::vector<FockOperator> ls;
    for (int c = 0; c < channels; ++c) ls.emplace_back(space, random_matrix(rng, n));
    Matrix h = random_matrix(rng, n);
    return SlhTriple{s, ls, FockOperator(space, 0.5 * (h + Matrix(h.adjoint())))};
}

double triple_difference(const SlhTriple& x, const SlhTriple& y) {
    double d = (x.S - y.S).norm();
    for (int c = 0; c < x.n_channels(); ++c) d = std::max(d, (x.L[c] - y.L[c]).norm());
    return std::max(d, (x.H - y.H).norm());
}

CircuitParams sample_params() {
    CircuitParams p;
    p.gamma = 2;
    p.gamma_f = 2.5;
    p.kappa = 1;
    p.chi = 10;
    p.delta_s = 50;
    p.epsilon = 0.1;
    p.set_k(1.0);
    return p;
}

} // namespace

TEST_CASE("series against a hand-worked scalar example") {
    ModeSpace sp({3});
    FockOperator a = annihilator(sp, 0);
    FockOperator h1 = number_operator(sp, 0);
    FockOperator h2 = 0.5 * number_operator(sp, 0);
    cxd s2 = std::polar(1.0, 0.7);

    SlhTriple g1{Matrix::Identity(1, 1), {a}, h1};
    SlhTriple g2{s2 * Matrix::Identity(1, 1), {2.0 * a}, h2};
    SlhTriple out = series(g1, g2);

    CHECK(std::abs(out.S(0, 0) - s2) < 1e-14);
    CHECK((out.L[0] - (2.0 * a + s2 * a)).norm() < 1e-14);
    FockOperator cross = std::conj(s2) * (a.adjoint() * (2.0 * a));
    FockOperator want_h = h1 + h2 + cxd(0, 0.5) * (cross - cross.adjoint());
    CHECK((out.H - want_h).norm() < 1e-13);
}

TEST_CASE("pure scattering components only rotate the couplings") {
    ModeSpace sp({3});
    FockOperator a = annihilator(sp, 0);
    FockOperator h = number_operator(sp, 0);
    cxd s2 = std::polar(1.0, -1.3);
    SlhTriple g{Matrix::Identity(1, 1), {a}, h};
    SlhTriple rot{s2 * Matrix::Identity(1, 1), {zero_operator(sp)}, zero_operator(sp)};

    SlhTriple after = series(g, rot);
    CHECK(std::abs(after.S(0, 0) - s2) < 1e-14);
    CHECK((after.L[0] - s2 * a).norm() < 1e-14);
    CHECK((after.H - h).norm() < 1e-14);

    SlhTriple before = series(rot, g);
    CHECK((before.L[0] - a).norm() < 1e-14);
    CHECK((before.H - h).norm() < 1e-14);
}

TEST_CASE("direct feedback of an S = i component") {
    ModeSpace sp({3});
    FockOperator l = annihilator(sp, 0);
    FockOperator h = number_operator(sp, 0);
    SlhTriple g{cxd(0, 1) * Matrix::Identity(1, 1), {l}, h};
    SlhTriple fb = direct_feedback(g);

    CHECK(std::abs(fb.S(0, 0) - cxd(-1, 0)) < 1e-14);
    CHECK((fb.L[0] - cxd(1, 1) * l).norm() < 1e-14);
    CHECK((fb.H - (h + l.adjoint() * l)).norm() < 1e-13);
    fb.validate();
}

TEST_CASE("series is associative and preserves the contracts") {
    std::mt19937 rng(46021);
    ModeSpace sp({2, 2});
    double worst = 0;
    for (int draw = 0; draw < 50; ++draw) {
        SlhTriple g1 = random_triple(rng, sp, 2);
        SlhTriple g2 = random_triple(rng, sp, 2);
        SlhTriple g3 = random_triple(rng, sp, 2);
        SlhTriple left = series(series(g1, g2), g3);
        SlhTriple right = series(g1, series(g2, g3));
        worst = std::max(worst, triple_difference(left, right));
        left.validate(1e-10);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("series rejects mismatched channel counts") {
    ModeSpace sp({2});
    SlhTriple one{Matrix::Identity(1, 1), {annihilator(sp, 0)}, zero_operator(sp)};
    SlhTriple two{Matrix::Identity(2, 2),
                  {annihilator(sp, 0), annihilator(sp, 0)},
                  zero_operator(sp)};
    CHECK_THROWS_AS(series(one, two), std::invalid_argument);
}

TEST_CASE("composed circuit matches its closed form") {
    std::mt19937 rng(77103);
    std::uniform_real_distribution<double> pos(0.1, 3.0), sym(-2.0, 2.0);
    ModeSpace sp({3, 3});
    double worst = 0;
    for (int draw = 0; draw < 50; ++draw) {
        CircuitParams p;
        p.gamma = pos(rng);
        p.gamma_f = pos(rng);
        p.kappa = pos(rng);
        p.chi = pos(rng);
        p.delta_s = sym(rng);
        p.delta = sym(rng);
        p.epsilon = pos(rng) / 3;
        SlhTriple g = build_circuit(p, sp);
        double d = (g.H - rotating_frame_hamiltonian(p, sp)).norm();
        d = std::max(d, (g.L[0] - (std::sqrt(p.kappa) * annihilator(sp, 1) +
                                   p.sqrt_gamma_sum() * annihilator(sp, 0))).norm());
        d = std::max(d, (g.S - Matrix::Identity(1, 1)).norm());
        worst = std::max(worst, d);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("mean drift matches the amplitude equations coefficient by coefficient") {
    std::mt19937 rng(90125);
    std::uniform_real_distribution<double> pos(0.1, 3.0), sym(-2.0, 2.0);
    ModeSpace sp({2, 3});
    double worst = 0;
    for (int draw = 0; draw < 20; ++draw) {
        CircuitParams p;
        if (draw == 0) {
            p = sample_params();
        } else {
            p.gamma = pos(rng);
            p.gamma_f = pos(rng);
            p.kappa = pos(rng);
            p.chi = pos(rng);
            p.delta_s = sym(rng);
            p.delta = sym(rng);
            p.epsilon = pos(rng) / 3;
        }
        DriftCoefficients got = mean_drift_coefficients(build_circuit(p, sp));
        cxd iu(0, 1);
        double s = p.sqrt_gamma_sum();
        Eigen::Matrix2cd m;
        m(0, 0) = -(iu * p.delta_s + 0.5 * s * s);
        m(0, 1) = -std::sqrt(p.kappa * p.gamma_f);
        m(1, 0) = -std::sqrt(p.kappa * p.gamma);
        m(1, 1) = -(iu * p.delta + 0.5 * p.kappa);
        Eigen::Vector2cd b(cxd(0, 0), iu * p.epsilon);
        worst = std::max(worst, (got.m - m).cwiseAbs().maxCoeff());
        worst = std::max(worst, (got.b - b).cwiseAbs().maxCoeff());
        worst = std::max(worst, std::abs(got.kerr - 2.0 * iu * p.chi));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("kerr strength from the dispersive qubit") {
    KerrFromQubit k = kerr_from_qubit(1800, 1800, 40000);
    CHECK(k.chi == doctest::Approx(std::pow(1800.0, 4) / (2.0 * 1800 * 40000.0 * 40000.0)));
    CHECK(k.ratio_g_detuning == doctest::Approx(0.045));
    CHECK(k.ratio_g2_omega == doctest::Approx(1800.0 * 1800 / (40000.0 * 1800)));
    CHECK(!k.validity_warning);

    KerrFromQubit tight = kerr_from_qubit(1800, 1800, 15000);
    CHECK(tight.validity_warning);
    CHECK_THROWS_AS(kerr_from_qubit(1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(kerr_from_qubit(1, 1, -2), std::invalid_argument);
}

TEST_CASE("parameter guards") {
    CircuitParams p = sample_params();
    CHECK(p.k() == doctest::Approx(1.0));
    p.set_k(2.5);
    CHECK(p.delta == doctest::Approx(15.0));

    CircuitParams bad = p;
    bad.kappa = -1;
    CHECK_THROWS_WITH_AS(bad.validate(),
                         doctest::Contains("kappa"), std::invalid_argument);
    bad = p;
    bad.chi = 0;
    CHECK_THROWS_AS(bad.k(), std::domain_error);
    CHECK_THROWS_AS(bad.set_k(1.0), std::domain_error);
}
