#include "cfq/fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cfq {

ModeSpace::ModeSpace(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty())
        throw std::invalid_argument("ModeSpace: need at least one mode");
    for (int d : dims_) {
        if (d < 2)
            throw std::invalid_argument("ModeSpace: every mode dimension must be >= 2, got " +
                                        std::to_string(d));
        total_ *= d;
    }
}

int ModeSpace::dim(int mode) const {
    if (mode < 0 || mode >= n_modes())
        throw std::out_of_range("ModeSpace: mode index " + std::to_string(mode) +
                                " out of range for " + std::to_string(n_modes()) + " modes");
    return dims_[mode];
}

std::vector<int> ModeSpace::occupation(int index) const {
    if (index < 0 || index >= total_)
        throw std::out_of_range("ModeSpace: basis index out of range");
    std::vector<int> occ(dims_.size());
    for (int m = n_modes() - 1; m >= 0; --m) {
        occ[m] = index % dims_[m];
        index /= dims_[m];
    }
    return occ;
}

int ModeSpace::total_excitation(int index) const {
    int s = 0;
    for (int n : occupation(index)) s += n;
    return s;
}

std::string ModeSpace::describe() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < dims_.size(); ++i) {
        if (i) os << ",";
        os << dims_[i];
    }
    os << ")";
    return os.str();
}

FockOperator::FockOperator(ModeSpace space, Matrix m) : space_(std::move(space)), mat_(std::move(m)) {
    if (mat_.rows() != space_.total_dim() || mat_.cols() != space_.total_dim())
        throw std::invalid_argument("FockOperator: matrix is " + std::to_string(mat_.rows()) + "x" +
                                    std::to_string(mat_.cols()) + " but the space has dimension " +
                                    std::to_string(space_.total_dim()));
}

bool FockOperator::is_hermitian(double tol) const {
    return (mat_ - mat_.adjoint()).norm() <= tol;
}

void require_same_space(const FockOperator& x, const FockOperator& y, const char* what) {
    if (x.space() != y.space())
        throw std::invalid_argument(std::string(what) + ": operators act on different mode spaces " +
                                    x.space().describe() + " vs " + y.space().describe());
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
    require_same_space(*this, o, "operator+");
    mat_ += o.mat_;
    return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
    require_same_space(*this, o, "operator-");
    mat_ -= o.mat_;
    return *this;
}

FockOperator operator+(FockOperator x, const FockOperator& y) { return x += y; }
FockOperator operator-(FockOperator x, const FockOperator& y) { return x -= y; }
FockOperator operator-(FockOperator x) { x.matrix() = -x.matrix(); return x; }

FockOperator operator*(const FockOperator& x, const FockOperator& y) {
    require_same_space(x, y, "operator*");
    return {x.space(), x.matrix() * y.matrix()};
}

FockOperator operator*(cxd z, FockOperator x) { return x *= z; }
FockOperator operator*(FockOperator x, cxd z) { return x *= z; }
FockOperator operator*(double z, FockOperator x) { return x *= cxd(z, 0); }
FockOperator operator*(FockOperator x, double z) { return x *= cxd(z, 0); }

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

FockOperator identity(const ModeSpace& space) {
    return {space, Matrix::Identity(space.total_dim(), space.total_dim())};
}

FockOperator zero_operator(const ModeSpace& space) {
    return {space, Matrix::Zero(space.total_dim(), space.total_dim())};
}

FockOperator embed(const ModeSpace& space, int mode, const Matrix& local) {
    int d = space.dim(mode);
    if (local.rows() != d || local.cols() != d)
        throw std::invalid_argument("embed: local operator is " + std::to_string(local.rows()) + "x" +
                                    std::to_string(local.cols()) + " but mode " + std::to_string(mode) +
                                    " has dimension " + std::to_string(d));
    Matrix out = Matrix::Identity(1, 1);
    for (int m = 0; m < space.n_modes(); ++m) {
        if (m == mode)
            out = kron(out, local);
        else
            out = kron(out, Matrix::Identity(space.dim(m), space.dim(m)));
    }
    return {space, std::move(out)};
}

FockOperator annihilator(const ModeSpace& space, int mode) {
    int d = space.dim(mode);
    Matrix local = Matrix::Zero(d, d);
    for (int n = 0; n + 1 < d; ++n) local(n, n + 1) = std::sqrt(double(n + 1));
    return embed(space, mode, local);
}

FockOperator number_operator(const ModeSpace& space, int mode) {
    int d = space.dim(mode);
    Matrix local = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) local(n, n) = double(n);
    return embed(space, mode, local);
}

FockOperator commutator(const FockOperator& x, const FockOperator& y) {
    return x * y - y * x;
}

cxd expectation(const FockOperator& rho, const FockOperator& obs, double trace_tol) {
    require_same_space(rho, obs, "expectation");
    cxd tr = rho.trace();
    if (std::abs(tr - cxd(1, 0)) > trace_tol)
        throw std::invalid_argument("expectation: density matrix trace is " + std::to_string(tr.real()) +
                                    (tr.imag() < 0 ? "-" : "+") + std::to_string(std::abs(tr.imag())) +
                                    "i, not 1");
    return (rho.matrix() * obs.matrix()).trace();
}

} // namespace cfq
