// Acceptance suite: one line per criterion, exit code = number of failures.
// Tolerances are asserted exactly as stated; failing lines carry the measured
// numbers so the gap is auditable.

#include "cfq/experiments.hpp"
#include "cfq/scenario.hpp"
#include "cfq/semiclassical.hpp"
#include "cfq/steady.hpp"
#include "cfq/weak_drive.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>

using namespace cfq;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", idx, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_criterion(int idx, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
        auto [pass, detail] = fn();
        report(idx, pass, detail);
    } catch (const std::exception& e) {
        report(idx, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CircuitParams quantum_base() {
    CircuitParams p;
    p.chi = 10;
    p.delta_s = 50;
    p.gamma = 2;
    p.gamma_f = 2.5;
    p.kappa = 1;
    p.epsilon = 0.1;
    p.set_k(1.0);
    return p;
}

CircuitParams bistable_base() {
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

double rel(double a, double b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
}

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

// 1. pairwise agreement of the full Liouvillian solve, the truncated-ansatz
//    solve, and the drive-independent closed form on the published parameter
//    set, 20% at eps = 0.1 kappa and 5% at eps = 0.01 kappa
std::pair<bool, std::string> criterion_triangle() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> ks = linspace(0.5, 1.5, 21);
    double worst[2] = {0, 0}, worst_k[2] = {0, 0};
    double eps_fracs[2] = {0.1, 0.01};
    for (int leg = 0; leg < 2; ++leg) {
        for (double k : ks) {
            CircuitParams q = quantum_base();
            q.epsilon = eps_fracs[leg] * q.kappa;
            q.set_k(k);
            double gq = g2_steady(q, default_truncation(q), CavityMode::a).g2;
            double gw = g2_weak_drive(q);
            double gc = g2_closed_form(q, k);
            double w = std::max({rel(gq, gw), rel(gq, gc), rel(gw, gc)});
            if (w > worst[leg]) {
                worst[leg] = w;
                worst_k[leg] = k;
            }
        }
    }
    double dt = seconds_since(t0);
    bool leg20 = worst[0] <= 0.20;
    bool leg5 = worst[1] <= 0.05;
    bool in_time = dt < 120.0;
    return {leg20 && leg5 && in_time,
            "three-route agreement, 21-point K grid on [0.5, 1.5]: eps = 0.1 kappa worst " +
                fmt(100 * worst[0]) + "% at K = " + fmt(worst_k[0]) +
                " (tolerance 20%); eps = 0.01 kappa worst " + fmt(100 * worst[1]) +
                "% at K = " + fmt(worst_k[1]) + " (tolerance 5%); runtime " + fmt(dt) +
                " s (limit 120)"};
}

// 2. the g2(K) minimum sits at K = 1 within one grid step for both published
//    detunings, and g2(K = 1) < 1
std::pair<bool, std::string> criterion_dip() {
    std::vector<double> grid = grid_range(0.0, 0.05, 3.0);
    bool ok = true;
    std::string detail = "grid 0:0.05:3;";
    for (double ds : {50.0, 10.0}) {
        CircuitParams p = quantum_base();
        p.delta_s = ds;
        std::vector<SweepPoint> pts = k_sweep(p, grid, CavityMode::a);
        double best_k = 0, best_g2 = 0, g2_at_1 = 0;
        bool first = true;
        for (const auto& pt : pts) {
            if (pt.failed) continue;
            if (first || pt.g2 < best_g2) {
                best_g2 = pt.g2;
                best_k = pt.x;
                first = false;
            }
            if (std::abs(pt.x - 1.0) < 1e-9) g2_at_1 = pt.g2;
        }
        bool dip_here = std::abs(best_k - 1.0) <= 0.05 + 1e-9 && g2_at_1 < 1.0;
        ok = ok && dip_here && !first;
        detail += " delta_s = " + fmt(ds) + ": minimum at K = " + fmt(best_k) +
                  ", g2(K=1) = " + fmt(g2_at_1) + ";";
    }
    return {ok, detail + " dip required at K = 1 +/- 0.05 with g2 < 1"};
}

// 3. two-photon resonance: g2 < 1 at K = 2 with delta_s/chi = 1; the closed
//    form's K = 2 value is reported, not asserted
std::pair<bool, std::string> criterion_two_photon() {
    CircuitParams p = quantum_base();
    p.delta_s = 10;
    p.set_k(2.0);
    G2Result r = g2_steady(p, default_truncation(p), CavityMode::a);
    double closed = g2_closed_form(p, 2.0);
    return {r.g2 < 1.0, "K = 2, delta_s/chi = 1: Liouvillian g2 = " + fmt(r.g2) +
                            " (must be < 1); closed form gives " + fmt(closed) +
                            " there, reported not asserted"};
}

// 4. classical limit at K = 1: g2 within 0.15 of 1 at eps = 2 kappa, and
//    |g2 - 1| shrinking from eps = 0.1 kappa to eps = 2 kappa
std::pair<bool, std::string> criterion_classical_limit() {
    CircuitParams p = quantum_base();
    std::vector<SweepPoint> pts =
        drive_strength_sweep(p, {0.1 * p.kappa, 2.0 * p.kappa}, 1.0, CavityMode::a);
    if (pts.size() != 2 || pts[0].failed || pts[1].failed)
        return {false, "drive sweep failed: " + (pts.empty() ? "" : pts.back().error)};
    double weak_dev = std::abs(pts[0].g2 - 1.0);
    double strong_dev = std::abs(pts[1].g2 - 1.0);
    bool near_one = strong_dev <= 0.15;
    bool shrinking = strong_dev < weak_dev;
    return {near_one && shrinking,
            "K = 1: g2(eps = 0.1 kappa) = " + fmt(pts[0].g2) + ", g2(eps = 2 kappa) = " +
                fmt(pts[1].g2) + " at truncation (" + std::to_string(pts[1].dims[0]) + "," +
                std::to_string(pts[1].dims[1]) + "); |g2 - 1| must fall within 0.15 (got " +
                fmt(strong_dev) + ") and must shrink from " + fmt(weak_dev) + " (" +
                (shrinking ? "it does" : "it does not") + ")"};
}

// 5. bistability window, threshold onset, hysteresis split, coefficient
//    anchors on the published bistable parameter set, under a minute
std::pair<bool, std::string> criterion_bistability() {
    auto t0 = std::chrono::steady_clock::now();
    CircuitParams p = bistable_base();

    BistabilityCoefficients printed = bistability_coefficients(p, P1Form::four_gamma);
    bool anchors = std::abs(printed.p1 - 1.337) < 1e-3 && std::abs(printed.p2 - 5.104) < 1e-3;

    // window and dynamics in the drift-consistent coefficient form
    std::vector<double> grid = grid_range(0.02, 0.01, 1.5);
    DriveSweep sweep = drive_sweep(p, grid, P1Form::gamma_sum);
    bool has_window = sweep.has_window;
    bool window_roots = false;
    if (has_window) {
        CircuitParams mid = p;
        mid.epsilon = 0.5 * (sweep.window_lo + sweep.window_hi);
        BistabilityResult res = steady_roots(mid, P1Form::gamma_sum);
        int stable = 0;
        for (const auto& root : res.roots) stable += root.stable ? 1 : 0;
        window_roots = res.roots.size() == 3 && stable == 2;
    }
    double thr = std::sqrt(steady_roots(p, P1Form::gamma_sum).threshold_eps_sq);
    bool onset = has_window && std::abs(sweep.window_lo - thr) <= 0.01 + 1e-9;

    HysteresisTrace tr = hysteresis(p, grid, P1Form::gamma_sum);
    double split_in = 0, split_out = 0;
    for (size_t i = 0; i < tr.eps.size(); ++i) {
        double d = std::abs(tr.c_sq_up[i] - tr.c_sq_down[i]);
        bool inside =
            has_window && tr.eps[i] > sweep.window_lo - 1e-9 && tr.eps[i] < sweep.window_hi + 1e-9;
        if (inside)
            split_in = std::max(split_in, d);
        else
            split_out = std::max(split_out, d);
    }
    bool hyst = split_in > 1e-3 && split_out <= 1e-6;
    double dt = seconds_since(t0);
    bool pass = anchors && has_window && window_roots && onset && hyst && dt < 60.0;
    return {pass, "printed-form anchors p1 = " + fmt(printed.p1) + ", p2 = " + fmt(printed.p2) +
                      " (1e-3); drift-form window [" +
                      (has_window ? fmt(sweep.window_lo) + ", " + fmt(sweep.window_hi)
                                  : std::string("none")) +
                      "] with 3 roots (2 stable) at midpoint: " +
                      (window_roots ? "yes" : "no") + "; onset vs threshold " + fmt(thr) +
                      " within one grid step: " + (onset ? "yes" : "no") +
                      "; hysteresis split inside " + fmt(split_in) + ", outside " +
                      fmt(split_out) + " (<= 1e-6); runtime " + fmt(dt) + " s (limit 60)"};
}

// 6. pulling delta to where p2 <= sqrt(3) p1 removes the window entirely
std::pair<bool, std::string> criterion_monostable() {
    CircuitParams p = bistable_base();
    p.delta = 0;
    BistabilityCoefficients bc = bistability_coefficients(p, P1Form::gamma_sum);
    bool capable = bc.p2 <= std::sqrt(3.0) * bc.p1;
    bool single = true;
    for (double eps : grid_range(0.02, 0.01, 1.5)) {
        CircuitParams q = p;
        q.epsilon = eps;
        if (steady_roots(q, P1Form::gamma_sum).roots.size() != 1) single = false;
    }
    return {capable && single, "delta = 0 gives p2 = " + fmt(bc.p2) + " <= sqrt(3) p1 = " +
                                   fmt(std::sqrt(3.0) * bc.p1) + " and " +
                                   (single ? "exactly one root at every drive"
                                           : "multiple roots at some drive")};
}

// 7. the qubit-derived Kerr strength: lowering delta_qT at fixed g and omega
//    strictly lowers g2 at K = 1
std::pair<bool, std::string> criterion_kerr_trend() {
    std::vector<double> dqts = {40000, 33000, 27000, 22000, 19000};
    std::string seq;
    bool strict = true;
    double prev = 0;
    for (size_t i = 0; i < dqts.size(); ++i) {
        CircuitParams p = quantum_base();
        p.chi = kerr_from_qubit(1800, 1800, dqts[i]).chi;
        p.set_k(1.0);
        double g2 = g2_steady(p, default_truncation(p), CavityMode::a).g2;
        if (i > 0 && g2 >= prev) strict = false;
        prev = g2;
        seq += (i ? ", " : "") + fmt(g2);
        seq += " (chi " + fmt(p.chi) + ")";
    }
    return {strict, "delta_qT 40000 -> 19000 at g = omega = 1800: g2 = [" + seq +
                        "], strictly decreasing: " + (strict ? "yes" : "no")};
}

// 8. algebraic suite: composition laws at 1e-12 over 50 draws, Liouvillian
//    trace preservation and steady-state invariants over 100 draws, the
//    kerr-off coherence anchor, the truncated commutator, and the g2 anchors
std::pair<bool, std::string> criterion_algebra() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(505901);
    ModeSpace sp({2, 2});
    double worst_assoc = 0, worst_contract = 0;
    for (int draw = 0; draw < 50; ++draw) {
        SlhTriple g1 = random_triple(rng, sp, 2);
        SlhTriple g2 = random_triple(rng, sp, 2);
        SlhTriple g3 = random_triple(rng, sp, 2);
        SlhTriple left = series(series(g1, g2), g3);
        SlhTriple right = series(g1, series(g2, g3));
        worst_assoc = std::max(worst_assoc, triple_difference(left, right));
        worst_contract = std::max(
            worst_contract,
            (left.S * left.S.adjoint() - Matrix::Identity(2, 2)).norm());
        worst_contract = std::max(worst_contract, (left.H - left.H.adjoint()).norm());
    }

    ModeSpace csp({3, 3});
    std::uniform_real_distribution<double> pos(0.1, 3.0), sym(-2.0, 2.0);
    double worst_circuit = 0;
    for (int draw = 0; draw < 50; ++draw) {
        CircuitParams p;
        p.gamma = pos(rng);
        p.gamma_f = pos(rng);
        p.kappa = pos(rng);
        p.chi = pos(rng);
        p.delta_s = sym(rng);
        p.delta = sym(rng);
        p.epsilon = pos(rng) / 3;
        SlhTriple g = build_circuit(p, csp);
        double d = (g.H - rotating_frame_hamiltonian(p, csp)).norm();
        d = std::max(d, (g.L[0] - collective_lindblad(p, csp)).norm());
        worst_circuit = std::max(worst_circuit, d);
    }
    bool algebra = worst_assoc < 1e-12 && worst_contract < 1e-12 && worst_circuit < 1e-12;

    // trace preservation and steady-state invariants, 100 draws each
    ModeSpace rsp({3, 3});
    int d = rsp.total_dim();
    Vector tr_vec = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) tr_vec(i + i * d) = 1;
    double worst_trace = 0;
    bool invariants = true;
    for (int draw = 0; draw < 100; ++draw) {
        Matrix h = random_matrix(rng, d);
        FockOperator H(rsp, 0.5 * (h + Matrix(h.adjoint())));
        std::vector<FockOperator> ls{FockOperator(rsp, random_matrix(rng, d))};
        Matrix liou = build_liouvillian(H, ls);
        worst_trace = std::max(worst_trace, (liou.adjoint() * tr_vec).norm() / liou.norm());
        SteadyDensityMatrix s = steady_state(liou, rsp);
        invariants = invariants && s.trace_error < 1e-12 && s.min_eigenvalue > -1e-10 &&
                     s.rho.is_hermitian(1e-10) && s.residual < 1e-9 * s.liouvillian_norm;
    }
    bool trace_ok = worst_trace < 1e-12;

    // kerr-off coherence in a space with headroom for the driven mode
    CircuitParams lin = quantum_base();
    lin.chi = 0;
    lin.delta = 0;
    SteadyDensityMatrix lsd = circuit_steady_state(lin, ModeSpace({4, 8}));
    double g2a = g2_of_state(lsd.rho, 0), g2c = g2_of_state(lsd.rho, 1);
    bool kerr_off = std::abs(g2a - 1.0) < 1e-4 && std::abs(g2c - 1.0) < 1e-4;

    // truncated commutator boundary term
    ModeSpace one({6});
    FockOperator a = annihilator(one, 0);
    Matrix comm = commutator(a, a.adjoint()).matrix();
    Matrix want = Matrix::Identity(6, 6);
    want(5, 5) = -5.0;
    bool comm_ok = (comm - want).norm() < 1e-13;

    // anchors: coherent 1, single photon 0, thermal 2
    ModeSpace big({16});
    double kappa = 1.0, delta = 0.7, eps = 0.3;
    FockOperator x = annihilator(big, 0);
    FockOperator hc = delta * (x.adjoint() * x) - eps * (x.adjoint() + x);
    SteadyDensityMatrix coh = steady_state(build_liouvillian(hc, {std::sqrt(kappa) * x}), big);
    double g2_coh = g2_of_state(coh.rho, 0);
    Matrix fock1 = Matrix::Zero(16, 16);
    fock1(1, 1) = 1;
    double g2_fock = g2_of_state(FockOperator(big, fock1), 0);
    Matrix th = Matrix::Zero(16, 16);
    for (int n = 0; n < 16; ++n) th(n, n) = std::pow(0.5, n + 1);
    th /= th.trace().real();
    double g2_th = g2_of_state(FockOperator(big, th), 0);
    bool anchors = std::abs(g2_coh - 1.0) < 1e-6 && std::abs(g2_fock) < 1e-12 &&
                   std::abs(g2_th - 2.0) < 0.02;

    double dt = seconds_since(t0);
    bool pass = algebra && trace_ok && invariants && kerr_off && comm_ok && anchors && dt < 60.0;
    return {pass,
            "composition laws worst " + fmt(std::max({worst_assoc, worst_contract, worst_circuit})) +
                " over 50 draws (1e-12); trace functional worst " + fmt(worst_trace) +
                " and steady invariants " + (invariants ? "hold" : "violated") +
                " over 100 draws; chi = 0 g2 = " + fmt(g2a) + "/" + fmt(g2c) +
                " (1 within 1e-4); truncated commutator " + (comm_ok ? "exact" : "wrong") +
                "; anchors g2 = " + fmt(g2_coh) + ", " + fmt(g2_fock) + ", " + fmt(g2_th) +
                " (1, 0, 2); runtime " + fmt(dt) + " s (limit 60)"};
}

// 9. the driven damped linear cavity against its closed-form coherent state
std::pair<bool, std::string> criterion_linear_cavity() {
    ModeSpace sp({16});
    double kappa = 1.0, delta = 0.7, eps = 0.3;
    FockOperator x = annihilator(sp, 0);
    FockOperator h = delta * (x.adjoint() * x) - eps * (x.adjoint() + x);
    SteadyDensityMatrix s = steady_state(build_liouvillian(h, {std::sqrt(kappa) * x}), sp);
    cxd alpha = cxd(0, eps) / (cxd(0, delta) + 0.5 * kappa);
    double cerr = std::abs(expectation(s.rho, x) - alpha);
    double nerr = std::abs(expectation(s.rho, x.adjoint() * x).real() - std::norm(alpha));
    return {cerr < 1e-8 && nerr < 1e-8, "|<c> - alpha| = " + fmt(cerr) +
                                            ", |<n> - |alpha|^2| = " + fmt(nerr) +
                                            " (both 1e-8)"};
}

} // namespace

int main() {
    run_criterion(1, criterion_triangle);
    run_criterion(2, criterion_dip);
    run_criterion(3, criterion_two_photon);
    run_criterion(4, criterion_classical_limit);
    run_criterion(5, criterion_bistability);
    run_criterion(6, criterion_monostable);
    run_criterion(7, criterion_kerr_trend);
    run_criterion(8, criterion_algebra);
    run_criterion(9, criterion_linear_cavity);
    std::printf("criteria: 9, failed: %d\n", g_failures);
    return g_failures;
}
