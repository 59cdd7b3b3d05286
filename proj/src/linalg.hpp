#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace cutheat {

class SolverDivergence : public std::runtime_error {
public:
    SolverDivergence(double residual, double tol, int step = -1)
        : std::runtime_error("linear solver failed to reach tolerance: residual " +
                             std::to_string(residual) + " > " + std::to_string(tol) +
                             (step >= 0 ? " at step " + std::to_string(step) : "")),
          residual(residual),
          step(step) {}
    double residual;
    int step;
};

// Compressed-row sparse matrix assembled from triplets. Duplicate entries are
// summed during consolidation.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : mat_(rows, cols) {}

    void set_from_triplets(int rows, int cols, const std::vector<Eigen::Triplet<double>>& triplets) {
        mat_.resize(rows, cols);
        mat_.setFromTriplets(triplets.begin(), triplets.end());
        mat_.makeCompressed();
    }

    int rows() const { return static_cast<int>(mat_.rows()); }
    int cols() const { return static_cast<int>(mat_.cols()); }
    long nonzeros() const { return static_cast<long>(mat_.nonZeros()); }

    std::vector<double> matvec(const std::vector<double>& x) const;
    std::vector<double> matvec_transpose(const std::vector<double>& x) const;

    // row iteration: visit(col, value) over the stored entries of one row
    template <typename Visitor>
    void for_each_in_row(int row, Visitor&& visit) const {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(mat_, row); it; ++it)
            visit(static_cast<int>(it.col()), it.value());
    }

    SparseMatrix& axpy(double alpha, const SparseMatrix& other) {
        mat_ += alpha * other.mat_;
        mat_.makeCompressed();
        return *this;
    }

    SparseMatrix scaled(double alpha) const {
        SparseMatrix out;
        out.mat_ = alpha * mat_;
        return out;
    }

    double max_abs_asymmetry() const;

    const Eigen::SparseMatrix<double, Eigen::RowMajor>& eigen() const { return mat_; }

private:
    Eigen::SparseMatrix<double, Eigen::RowMajor> mat_;
};

// Solves A x = b for a square, possibly nonsymmetric system. Sparse LU with
// iterative refinement; guarantees ||Ax-b||/||b|| <= tol or throws
// SolverDivergence with the achieved residual.
std::vector<double> solve(const SparseMatrix& A, const std::vector<double>& b, double tol = 1e-10,
                          int max_iter = 20, double* achieved_residual = nullptr);

}  // namespace cutheat
