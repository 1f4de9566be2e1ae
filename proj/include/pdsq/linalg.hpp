#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace pdsq::linalg {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// exp(G) v by a scaled, truncated Taylor series.
///
/// Steps are sized by the 1-norm of the columns the vector currently occupies,
/// and each step's series is summed until the next term falls below
/// double-precision resolution. Trailing components carrying less than 1e-32
/// of the squared norm are left untouched. For banded G acting on a localized
/// vector the cost follows the support of the vector, not the size of G.
Eigen::VectorXcd expm_multiply(const SparseMatrix& g, const Eigen::VectorXcd& v);

/// Maximum absolute column sum.
double norm1(const SparseMatrix& g);

} // namespace pdsq::linalg
