#pragma once

#include <vector>

#include "strokelab/matrix.hpp"

namespace strokelab {

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;  // one eigenvector per row, matching values order
};

/// Cyclic Jacobi rotations; fine for the small (<= a few dozen) matrices
/// this project produces.
SymmetricEigen symmetric_eigen(const Matrix& a, int max_sweeps = 64);

/// Solve the linear system a*x = b for symmetric positive (semi-)definite a
/// by Cholesky. Throws std::runtime_error when not positive definite.
std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b);

struct LeastSquaresResult {
    std::vector<double> coefficients;
    bool used_ridge_fallback = false;  // normal equations were singular
};

/// Ordinary least squares of y on the columns of x (no intercept unless the
/// caller appends a constant column). Singular normal equations fall back to
/// ridge with the given penalty.
LeastSquaresResult least_squares(const Matrix& x, const std::vector<double>& y,
                                 double ridge_fallback = 1e-8);

/// Sample covariance (divide by n-1) of centered data.
Matrix covariance_matrix(const Matrix& x, const std::vector<double>& means);

}  // namespace strokelab
