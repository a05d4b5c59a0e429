#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace cfq {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double default_tol = 1e-10;

// Truncated multi-mode bosonic Fock space. Mode 0 is the controlled cavity
// (a), mode 1 the controller (c). The tensor layout is mode-0-major: for two
// modes the basis state |n0, n1> has index n0 * dims[1] + n1.
class ModeSpace {
public:
    explicit ModeSpace(std::vector<int> dims);

    int n_modes() const { return static_cast<int>(dims_.size()); }
    int dim(int mode) const;
    const std::vector<int>& dims() const { return dims_; }
    int total_dim() const { return total_; }

    // per-mode occupation numbers of a global basis index
    std::vector<int> occupation(int index) const;
    // total occupation across modes of a global basis index
    int total_excitation(int index) const;

    std::string describe() const;   // e.g. "(4,4)"

    bool operator==(const ModeSpace& o) const { return dims_ == o.dims_; }
    bool operator!=(const ModeSpace& o) const { return !(*this == o); }

private:
    std::vector<int> dims_;
    int total_ = 1;
};

// A dense complex matrix tagged with the ModeSpace it acts on. Operators on
// mismatched spaces refuse to combine.
class FockOperator {
public:
    FockOperator(ModeSpace space, Matrix m);

    const ModeSpace& space() const { return space_; }
    const Matrix& matrix() const { return mat_; }
    Matrix& matrix() { return mat_; }

    FockOperator adjoint() const { return {space_, mat_.adjoint()}; }
    cxd trace() const { return mat_.trace(); }
    double norm() const { return mat_.norm(); }
    bool is_hermitian(double tol = default_tol) const;

    FockOperator& operator+=(const FockOperator& o);
    FockOperator& operator-=(const FockOperator& o);
    FockOperator& operator*=(cxd z) { mat_ *= z; return *this; }

private:
    ModeSpace space_;
    Matrix mat_;
};

void require_same_space(const FockOperator& x, const FockOperator& y, const char* what);

FockOperator operator+(FockOperator x, const FockOperator& y);
FockOperator operator-(FockOperator x, const FockOperator& y);
FockOperator operator-(FockOperator x);
FockOperator operator*(const FockOperator& x, const FockOperator& y);
FockOperator operator*(cxd z, FockOperator x);
FockOperator operator*(FockOperator x, cxd z);
FockOperator operator*(double z, FockOperator x);
FockOperator operator*(FockOperator x, double z);

Matrix kron(const Matrix& a, const Matrix& b);

FockOperator identity(const ModeSpace& space);
FockOperator zero_operator(const ModeSpace& space);

// truncated ladder operator on one mode, identity on the rest; entries
// sqrt(n) on the superdiagonal of the embedded mode
FockOperator annihilator(const ModeSpace& space, int mode);
FockOperator number_operator(const ModeSpace& space, int mode);

// `local` acting on the given mode, identity elsewhere
FockOperator embed(const ModeSpace& space, int mode, const Matrix& local);

FockOperator commutator(const FockOperator& x, const FockOperator& y);

// Tr(rho * obs); rho must have unit trace within trace_tol
cxd expectation(const FockOperator& rho, const FockOperator& obs, double trace_tol = default_tol);

} // namespace cfq
