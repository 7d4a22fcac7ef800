#ifndef QGT_LINALG_HPP
#define QGT_LINALG_HPP

#include <vector>

#include "qgt/cmatrix.hpp"

namespace qgt {

// Eigendecomposition of a Hermitian matrix. values are sorted ascending,
// vectors holds the matching orthonormal eigenvectors as columns.
struct HermEig {
    std::vector<double> values;
    CMatrix vectors;
};

inline constexpr double kDefaultEigTol = 1e-10;
inline constexpr double kDefaultSingTol = 1e-12;

// Hermitian eigendecomposition. 2x2 uses the closed form E = eps +- |d|,
// larger matrices use cyclic complex Jacobi sweeps until the off-diagonal
// Frobenius norm drops below tol * ||H||_F.
// Throws NonHermitianError if ||H - H^dag|| exceeds tol relative to ||H||,
// ConvergenceError if Jacobi fails to converge.
HermEig eig_hermitian(const CMatrix& h, double tol = kDefaultEigTol);

// Unitary polar factor U of m = U P (P positive definite): the nearest
// unitary to m in Frobenius norm. Throws SingularMatrixError carrying the
// smallest singular value when m is singular to tau_sing.
CMatrix unitary_align(const CMatrix& m, double tau_sing = kDefaultSingTol);

// Smallest singular value of m (via eigenvalues of m^dag m).
double smallest_singular_value(const CMatrix& m);

} // namespace qgt

#endif
