#include "cfq/steady.hpp"

#include "cfq/pool.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace cfq {

namespace {

constexpr int dense_total_dim_cutoff = 16;
constexpr int truncation_cap = 12;

void append_kron(std::vector<Eigen::Triplet<cxd>>& trips, const Matrix& a, const Matrix& b, cxd factor) {
    const Eigen::Index n = b.rows();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            cxd av = factor * a(i, j);
            if (av == cxd(0, 0)) continue;
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    cxd bv = b(k, l);
                    if (bv == cxd(0, 0)) continue;
                    trips.emplace_back(int(i * n + k), int(j * n + l), av * bv);
                }
        }
}

template <typename Mat>
double spectral_norm_estimate(const Mat& m, int iters = 30) {
    Eigen::Index n = m.cols();
    Vector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = cxd(1.0 + double(k) / double(n), 0);
    v.normalize();
    double lam = 0;
    for (int it = 0; it < iters; ++it) {
        Vector w = m * v;
        Vector v2 = m.adjoint() * w;
        lam = v2.norm();
        if (lam == 0) return 0;
        v = v2 / lam;
    }
    return std::sqrt(lam);
}

Vector sector_scale_vector(const ModeSpace& space, double w) {
    int n = space.total_dim();
    Vector s(n * n);
    if (w >= 1.0) {
        s.setOnes();
        return s;
    }
    // floor keeps every scaled column within 8 decades of the largest; deeper
    // sectors would otherwise fall below double rounding and feed noise back
    // through the unscaling step
    constexpr double scale_floor = 1e-8;
    std::vector<double> exc(n);
    for (int i = 0; i < n; ++i) exc[i] = double(space.total_excitation(i));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            s(i + j * n) = cxd(std::max(std::pow(w, exc[i] + exc[j]), scale_floor), 0);
    return s;
}

struct NullSolve {
    Vector x;                    // unscaled null vector
    double liouvillian_norm = 0;
    double null_gap = 0;
};

NullSolve dense_null_solve(const Matrix& liou, const Vector& s) {
    const Eigen::Index big_n = liou.rows();

    // uniqueness gate on the physical operator, before any internal rescaling
    Eigen::BDCSVD<Matrix> svd_raw(liou);
    const auto& sv = svd_raw.singularValues();
    double smallest = sv(big_n - 1);
    double second = sv(big_n - 2);
    if (!(second > 1e-6 * sv(0)))
        throw std::runtime_error(
            "steady_state: Liouvillian null space is degenerate; the two smallest singular values are " +
            std::to_string(smallest) + " and " + std::to_string(second));

    // null vector from the sector-scaled, row-equilibrated system, which keeps
    // the weak-drive tail above the rounding floor
    Matrix b = liou;
    for (Eigen::Index k = 0; k < big_n; ++k) b.col(k) *= s(k);
    Eigen::VectorXd rowmax = b.cwiseAbs().rowwise().maxCoeff();
    for (Eigen::Index r = 0; r < big_n; ++r)
        if (rowmax(r) > 0) b.row(r) /= rowmax(r);
    Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);

    NullSolve out;
    out.x = s.cwiseProduct(svd.matrixV().col(big_n - 1));
    out.liouvillian_norm = sv(0);
    out.null_gap = second / sv(0);
    return out;
}

// bordered copy: the row for d(rho_00)/dt is replaced by the trace row
// sum_i w(i(n+1)) x(i(n+1)) = rhs
SparseMatrix border_with_trace_row(const SparseMatrix& b, const Vector& trace_weights) {
    const int big_n = int(b.rows());
    const int n = int(std::lround(std::sqrt(double(big_n))));
    std::vector<Eigen::Triplet<cxd>> trips;
    trips.reserve(size_t(b.nonZeros()) + size_t(n));
    for (int k = 0; k < b.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(b, k); it; ++it)
            if (it.row() != 0) trips.emplace_back(int(it.row()), int(it.col()), it.value());
    for (int i = 0; i < n; ++i) trips.emplace_back(0, i * (n + 1), trace_weights(i * (n + 1)));
    SparseMatrix out(big_n, big_n);
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

Vector ramp_vector(int big_n) {
    Vector v(big_n);
    for (int k = 0; k < big_n; ++k) v(k) = cxd(1.0 + double(k) / double(big_n), 0);
    v.normalize();
    return v;
}

NullSolve sparse_null_solve(const SparseMatrix& liou, const Vector& s) {
    const int big_n = int(liou.rows());
    using Lu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

    // uniqueness gate on the physical operator: bordering deflates the null
    // direction, so the smallest singular value of the bordered matrix
    // estimates the second-smallest of the Liouvillian
    double sigma_max = spectral_norm_estimate(liou);
    SparseMatrix gate = border_with_trace_row(liou, Vector::Ones(big_n));
    Lu gate_lu;
    gate_lu.analyzePattern(gate);
    gate_lu.factorize(gate);
    if (gate_lu.info() != Eigen::Success)
        throw std::runtime_error(
            "steady_state: Liouvillian null space is degenerate; the two smallest singular "
            "values are approximately 0 and 0 (singular bordered factorization)");
    Vector v = ramp_vector(big_n);
    double lam = 0;
    for (int it = 0; it < 12; ++it) {
        Vector t = gate_lu.adjoint().solve(v);
        Vector v2 = gate_lu.solve(t);
        lam = v2.norm();
        if (lam == 0) break;
        v = v2 / lam;
    }
    double sigma2 = lam > 0 ? 1.0 / std::sqrt(lam) : 0.0;
    if (!(sigma2 > 1e-6 * sigma_max)) {
        Vector y0 = gate_lu.solve(Vector::Unit(big_n, 0));
        double sigma1 = y0.norm() > 0 ? (liou * y0).norm() / y0.norm() : 0.0;
        throw std::runtime_error(
            "steady_state: Liouvillian null space is degenerate; the two smallest singular values are "
            "approximately " + std::to_string(std::min(sigma1, sigma2)) + " and " +
            std::to_string(sigma2));
    }

    // null vector from the sector-scaled, row-equilibrated bordered system
    SparseMatrix b = liou;
    for (int k = 0; k < b.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(b, k); it; ++it) it.valueRef() *= s(k);
    Eigen::VectorXd rowmax = Eigen::VectorXd::Zero(big_n);
    for (int k = 0; k < b.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(b, k); it; ++it)
            if (it.row() != 0)
                rowmax(it.row()) = std::max(rowmax(it.row()), std::abs(it.value()));
    for (int k = 0; k < b.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(b, k); it; ++it)
            if (it.row() != 0 && rowmax(it.row()) > 0) it.valueRef() /= rowmax(it.row());

    SparseMatrix bordered = border_with_trace_row(b, s);
    Lu lu;
    lu.analyzePattern(bordered);
    lu.factorize(bordered);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error(
            "steady_state: sparse factorization of the scaled bordered Liouvillian failed");
    Vector rhs = Vector::Unit(big_n, 0);
    Vector y = lu.solve(rhs);
    Vector r = rhs - bordered * y;
    y += lu.solve(r);

    NullSolve out;
    out.x = s.cwiseProduct(y);
    out.liouvillian_norm = sigma_max;
    out.null_gap = sigma2 / sigma_max;
    return out;
}

template <typename LiouvillianT>
SteadyDensityMatrix finalize_state(NullSolve ns, const LiouvillianT& liou, const ModeSpace& space) {
    const int n = space.total_dim();
    Matrix m = Eigen::Map<const Matrix>(ns.x.data(), n, n);

    cxd tr = m.trace();
    if (std::abs(tr) < 1e-12 * m.norm())
        throw std::runtime_error("steady_state: null vector has a vanishing trace");
    m *= std::conj(tr) / std::abs(tr);

    double herm_err = (m - Matrix(m.adjoint())).norm() / m.norm();
    Matrix rho = 0.5 * (m + Matrix(m.adjoint()));
    rho /= rho.trace().real();

    SteadyDensityMatrix out{FockOperator(space, rho),
                            0, 0, 0, herm_err, ns.liouvillian_norm, ns.null_gap};
    cxd tr2 = out.rho.trace();
    out.trace_error = std::abs(tr2 - cxd(1, 0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    Vector vec_rho = Eigen::Map<const Vector>(rho.data(), n * n);
    out.residual = (liou * vec_rho).norm();
    return out;
}

void check_liouvillian_inputs(const FockOperator& h, const std::vector<FockOperator>& l_ops,
                              double herm_tol) {
    if (!h.is_hermitian(herm_tol))
        throw std::invalid_argument("build_liouvillian: Hamiltonian is not Hermitian within " +
                                    std::to_string(herm_tol));
    for (const auto& l : l_ops) require_same_space(l, h, "build_liouvillian");
}

} // namespace

SparseMatrix build_liouvillian_sparse(const FockOperator& h, const std::vector<FockOperator>& l_ops,
                                      double herm_tol) {
    check_liouvillian_inputs(h, l_ops, herm_tol);
    const int n = h.space().total_dim();
    Matrix eye = Matrix::Identity(n, n);

    std::vector<Eigen::Triplet<cxd>> trips;
    append_kron(trips, eye, h.matrix(), cxd(0, -1));
    append_kron(trips, h.matrix().transpose(), eye, cxd(0, 1));
    for (const auto& l : l_ops) {
        Matrix ldl = l.adjoint().matrix() * l.matrix();
        append_kron(trips, l.matrix().conjugate(), l.matrix(), cxd(1, 0));
        append_kron(trips, eye, ldl, cxd(-0.5, 0));
        append_kron(trips, ldl.transpose(), eye, cxd(-0.5, 0));
    }
    SparseMatrix out(n * n, n * n);
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

Matrix build_liouvillian(const FockOperator& h, const std::vector<FockOperator>& l_ops,
                         double herm_tol) {
    return Matrix(build_liouvillian_sparse(h, l_ops, herm_tol));
}

SteadyDensityMatrix steady_state(const Matrix& liou, const ModeSpace& space, double sector_weight) {
    if (liou.rows() != liou.cols() ||
        liou.rows() != Eigen::Index(space.total_dim()) * space.total_dim())
        throw std::invalid_argument("steady_state: superoperator shape does not match the space");
    Vector s = sector_scale_vector(space, sector_weight);
    if (space.total_dim() <= dense_total_dim_cutoff)
        return finalize_state(dense_null_solve(liou, s), liou, space);
    SparseMatrix sp = liou.sparseView();
    return finalize_state(sparse_null_solve(sp, s), sp, space);
}

SteadyDensityMatrix steady_state(const SparseMatrix& liou, const ModeSpace& space,
                                 double sector_weight) {
    if (liou.rows() != liou.cols() ||
        liou.rows() != Eigen::Index(space.total_dim()) * space.total_dim())
        throw std::invalid_argument("steady_state: superoperator shape does not match the space");
    Vector s = sector_scale_vector(space, sector_weight);
    if (space.total_dim() <= dense_total_dim_cutoff)
        return finalize_state(dense_null_solve(Matrix(liou), s), liou, space);
    return finalize_state(sparse_null_solve(liou, s), liou, space);
}

double drive_sector_weight(const CircuitParams& p) {
    double s = p.sqrt_gamma_sum();
    double eps_ref = std::max(p.kappa, s * s) / 2.0;
    if (eps_ref <= 0) return 1.0;
    return std::clamp(p.epsilon / eps_ref, 1e-3, 1.0);
}

FockOperator collective_lindblad(const CircuitParams& p, const ModeSpace& space) {
    return std::sqrt(p.kappa) * annihilator(space, 1) + p.sqrt_gamma_sum() * annihilator(space, 0);
}

SteadyDensityMatrix circuit_steady_state(const CircuitParams& p, const ModeSpace& space) {
    FockOperator h = rotating_frame_hamiltonian(p, space);
    std::vector<FockOperator> ls{collective_lindblad(p, space)};
    SparseMatrix liou = build_liouvillian_sparse(h, ls);
    return steady_state(liou, space, drive_sector_weight(p));
}

std::string to_string(CavityMode m) { return m == CavityMode::a ? "a" : "c"; }

double mean_photon_of_state(const FockOperator& rho, int mode) {
    FockOperator x = annihilator(rho.space(), mode);
    return expectation(rho, x.adjoint() * x).real();
}

double g2_of_state(const FockOperator& rho, int mode) {
    FockOperator x = annihilator(rho.space(), mode);
    FockOperator xd = x.adjoint();
    double nbar = expectation(rho, xd * x).real();
    if (nbar <= 1e-12)
        throw std::domain_error("g2_of_state: mean photon number " + std::to_string(nbar) +
                                " is at the vacuum floor, g2 undefined");
    double num = expectation(rho, xd * xd * x * x).real();
    return num / (nbar * nbar);
}

namespace {

ModeSpace grown(const ModeSpace& space, int by) {
    std::vector<int> d = space.dims();
    for (int& v : d) v += by;
    return ModeSpace(d);
}

struct G2Solved {
    G2Result result;
    double residual = 0;
};

G2Solved g2_solved(const CircuitParams& p, const ModeSpace& space, CavityMode mode) {
    int m = mode == CavityMode::a ? 0 : 1;
    SteadyDensityMatrix sdm = circuit_steady_state(p, space);
    G2Solved out;
    out.result.g2 = g2_of_state(sdm.rho, m);
    out.result.mean_photon = mean_photon_of_state(sdm.rho, m);
    out.result.mode = mode;
    out.result.truncation_used = {space.dim(0), space.dim(1)};
    out.residual = sdm.residual;

    SteadyDensityMatrix sdm2 = circuit_steady_state(p, grown(space, 2));
    double g2b = g2_of_state(sdm2.rho, m);
    out.result.converged = std::abs(g2b - out.result.g2) < 0.01 * std::abs(out.result.g2);
    return out;
}

} // namespace

G2Result g2_steady(const CircuitParams& p, const ModeSpace& space, CavityMode mode) {
    return g2_solved(p, space, mode).result;
}

ModeSpace default_truncation(const CircuitParams& p) {
    bool weak = p.epsilon <= 0.3 * p.kappa;
    int d = weak ? 4 : 8;
    return ModeSpace({d, d});
}

namespace {

ModeSpace sweep_space(const CircuitParams& p, std::array<int, 2> dims_override) {
    if (dims_override[0] > 0 && dims_override[1] > 0)
        return ModeSpace({dims_override[0], dims_override[1]});
    return default_truncation(p);
}

} // namespace

SweepPoint g2_sweep_point(const CircuitParams& p, const ModeSpace& space, CavityMode mode,
                          double x, double y) {
    SweepPoint pt;
    pt.x = x;
    pt.y = y;
    pt.dims = {space.dim(0), space.dim(1)};
    try {
        G2Solved sol = g2_solved(p, space, mode);
        pt.g2 = sol.result.g2;
        pt.mean_photon = sol.result.mean_photon;
        pt.residual = sol.residual;
        pt.converged = sol.result.converged;
    } catch (const std::exception& e) {
        pt.failed = true;
        pt.error = e.what();
    }
    return pt;
}

std::vector<SweepPoint> k_sweep(const CircuitParams& p, const std::vector<double>& k_grid,
                                CavityMode mode, std::array<int, 2> dims_override) {
    if (p.chi == 0) throw std::domain_error("k_sweep: chi is zero, K does not parametrize delta");
    std::vector<SweepPoint> out(k_grid.size());
    parallel_for(int(k_grid.size()), [&](int i) {
        CircuitParams q = p;
        q.set_k(k_grid[i]);
        out[i] = g2_sweep_point(q, sweep_space(q, dims_override), mode, k_grid[i]);
    });
    return out;
}

std::vector<SweepPoint> k_delta_s_map(const CircuitParams& p, const std::vector<double>& k_grid,
                                      const std::vector<double>& delta_s_grid, CavityMode mode,
                                      std::array<int, 2> dims_override) {
    if (p.chi == 0) throw std::domain_error("k_delta_s_map: chi is zero");
    int nk = int(k_grid.size()), nd = int(delta_s_grid.size());
    std::vector<SweepPoint> out(size_t(nk) * nd);
    parallel_for(nk * nd, [&](int i) {
        CircuitParams q = p;
        q.set_k(k_grid[i / nd]);
        q.delta_s = delta_s_grid[i % nd];
        out[i] = g2_sweep_point(q, sweep_space(q, dims_override), mode, k_grid[i / nd], q.delta_s);
    });
    return out;
}

std::vector<SweepPoint> drive_strength_sweep(const CircuitParams& p,
                                             const std::vector<double>& eps_grid, double k_fixed,
                                             CavityMode mode, std::array<int, 2> dims_override) {
    if (p.chi == 0) throw std::domain_error("drive_strength_sweep: chi is zero");
    std::vector<SweepPoint> out(eps_grid.size());
    parallel_for(int(eps_grid.size()), [&](int i) {
        CircuitParams q = p;
        q.set_k(k_fixed);
        q.epsilon = eps_grid[i];
        ModeSpace space = sweep_space(q, dims_override);
        SweepPoint pt = g2_sweep_point(q, space, mode, eps_grid[i]);
        // raise the truncation until the +2 re-solve stops moving g2
        while (!pt.failed && !pt.converged && space.dim(0) + 2 <= truncation_cap &&
               space.dim(1) + 2 <= truncation_cap) {
            space = grown(space, 2);
            pt = g2_sweep_point(q, space, mode, eps_grid[i]);
        }
        out[i] = pt;
    });
    return out;
}

} // namespace cfq
