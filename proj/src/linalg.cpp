#include "linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

namespace cutheat {

std::vector<double> SparseMatrix::matvec(const std::vector<double>& x) const {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
    Eigen::VectorXd y = mat_ * xv;
    return {y.data(), y.data() + y.size()};
}

std::vector<double> SparseMatrix::matvec_transpose(const std::vector<double>& x) const {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
    Eigen::VectorXd y = mat_.transpose() * xv;
    return {y.data(), y.data() + y.size()};
}

double SparseMatrix::max_abs_asymmetry() const {
    Eigen::SparseMatrix<double, Eigen::RowMajor> diff = mat_;
    diff -= Eigen::SparseMatrix<double, Eigen::RowMajor>(mat_.transpose());
    double m = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(diff, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

std::vector<double> solve(const SparseMatrix& A, const std::vector<double>& b, double tol,
                          int max_iter, double* achieved_residual) {
    if (A.rows() != A.cols()) throw std::invalid_argument("solve requires a square matrix");
    if (A.rows() != static_cast<int>(b.size()))
        throw std::invalid_argument("dimension mismatch between matrix and right-hand side");

    Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
    const double bnorm = bv.norm();
    if (bnorm == 0.0) {
        if (achieved_residual) *achieved_residual = 0.0;
        return std::vector<double>(b.size(), 0.0);
    }

    Eigen::SparseMatrix<double> col_major = A.eigen();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(col_major);
    lu.factorize(col_major);
    if (lu.info() != Eigen::Success) throw SolverDivergence(std::numeric_limits<double>::infinity(), tol);

    Eigen::VectorXd x = lu.solve(bv);
    double residual = (col_major * x - bv).norm() / bnorm;
    for (int it = 0; it < max_iter && residual > tol; ++it) {
        Eigen::VectorXd r = bv - col_major * x;
        x += lu.solve(r);
        residual = (col_major * x - bv).norm() / bnorm;
    }
    if (achieved_residual) *achieved_residual = residual;
    if (residual > tol) throw SolverDivergence(residual, tol);
    return {x.data(), x.data() + x.size()};
}

}  // namespace cutheat
