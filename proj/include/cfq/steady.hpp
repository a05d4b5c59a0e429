#pragma once

#include "cfq/slh.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <string>
#include <vector>

namespace cfq {

using SparseMatrix = Eigen::SparseMatrix<cxd>;

struct SteadyDensityMatrix {
    FockOperator rho;
    double residual = 0;           // ||L vec(rho)||_2 against the unscaled superoperator
    double trace_error = 0;        // |Tr rho - 1| after normalization
    double min_eigenvalue = 0;
    double hermiticity_error = 0;  // relative ||M - M^+|| of the raw null vector, before symmetrization
    double liouvillian_norm = 0;   // 2-norm of the superoperator (exact below, power-iteration estimate above the dense cutoff)
    double null_gap = 0;           // second-smallest singular value / largest; estimate in the sparse path
};

// rho -> -i[H, rho] + sum_k (L rho L^+ - (1/2){L^+L, rho}) under
// column-stacking vectorization: vec index i + j*d, vec(A rho B) = (B^T kron A) vec(rho)
Matrix build_liouvillian(const FockOperator& H, const std::vector<FockOperator>& L_ops,
                         double herm_tol = default_tol);
SparseMatrix build_liouvillian_sparse(const FockOperator& H, const std::vector<FockOperator>& L_ops,
                                      double herm_tol = default_tol);

// Null-space solve. sector_weight w < 1 rescales basis columns by
// w^(total excitation of bra and ket) before solving, so that the weak-drive
// tail of rho stays above the double-precision noise floor; 1 disables the
// rescaling. Spaces up to total dimension 16 go through a dense SVD, larger
// ones through a bordered sparse LU with a trace row.
SteadyDensityMatrix steady_state(const Matrix& liouvillian, const ModeSpace& space,
                                 double sector_weight = 1.0);
SteadyDensityMatrix steady_state(const SparseMatrix& liouvillian, const ModeSpace& space,
                                 double sector_weight = 1.0);

// clamp(eps / eps_ref, 1e-3, 1) with eps_ref = max(kappa, (sqrt gamma + sqrt gamma_f)^2) / 2
double drive_sector_weight(const CircuitParams& p);

// sqrt(kappa) c + (sqrt(gamma) + sqrt(gamma_f)) a, the circuit's single
// collective dissipation channel
FockOperator collective_lindblad(const CircuitParams& p, const ModeSpace& space);

SteadyDensityMatrix circuit_steady_state(const CircuitParams& p, const ModeSpace& space);

enum class CavityMode { a, c };
std::string to_string(CavityMode m);

struct G2Result {
    double g2 = 0;
    double mean_photon = 0;
    CavityMode mode = CavityMode::a;
    std::array<int, 2> truncation_used{0, 0};
    bool converged = false;   // dims -> dims+2 moves g2 by less than 1%
};

// Tr(rho x^+x^+xx) / Tr(rho x^+x)^2 for one mode of an existing state;
// throws on vacuum (mean photon number <= 1e-12)
double g2_of_state(const FockOperator& rho, int mode);
double mean_photon_of_state(const FockOperator& rho, int mode);

// solve at the given dims and at dims+2; the result carries the value at the
// given dims and the convergence flag from the comparison
G2Result g2_steady(const CircuitParams& p, const ModeSpace& space, CavityMode mode);

struct SweepPoint {
    double x = 0;           // grid coordinate (K, eps, delta_s, ...)
    double y = 0;           // second coordinate for 2-D sweeps
    double g2 = 0;
    double mean_photon = 0;
    double residual = 0;
    std::array<int, 2> dims{0, 0};
    bool converged = false;
    bool failed = false;
    std::string error;
};

// (4,4) for eps <= 0.3 kappa, (8,8) above
ModeSpace default_truncation(const CircuitParams& p);

// one solved grid point with its convergence check; exceptions are captured
// into failed/error instead of propagating
SweepPoint g2_sweep_point(const CircuitParams& p, const ModeSpace& space, CavityMode mode,
                          double x, double y = 0);

// per K: delta = (K-1) chi, rebuild, solve, g2. Failed points are flagged in
// place so sweeps can report partial results.
std::vector<SweepPoint> k_sweep(const CircuitParams& p, const std::vector<double>& k_grid,
                                CavityMode mode, std::array<int, 2> dims_override = {0, 0});

// 2-D sweep over (K, delta_s) for the antibunching map
std::vector<SweepPoint> k_delta_s_map(const CircuitParams& p, const std::vector<double>& k_grid,
                                      const std::vector<double>& delta_s_grid, CavityMode mode,
                                      std::array<int, 2> dims_override = {0, 0});

// per eps: solve with the truncation ladder (start at the eps rule, raise by
// 2 per mode until the +2 re-solve moves g2 by < 1%, cap 12); rows that hit
// the cap stay flagged unconverged
std::vector<SweepPoint> drive_strength_sweep(const CircuitParams& p,
                                             const std::vector<double>& eps_grid, double k_fixed,
                                             CavityMode mode = CavityMode::a,
                                             std::array<int, 2> dims_override = {0, 0});

} // namespace cfq
