#include "qgt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qgt/errors.hpp"

namespace qgt {

namespace {

// Eigendecomposition of the Hermitian 2x2 block [[a, b], [conj(b), c]]
// (a, c real) via the Bloch parameterization: H = eps*I + d.sigma,
// E_-+ = eps -+ |d|. Columns of V are (psi_minus, psi_plus).
void eig2x2(double a, cplx b, double c, double& e_lo, double& e_hi, CMatrix& V) {
    const double eps = 0.5 * (a + c);
    const double d3 = 0.5 * (a - c);
    const double d1 = b.real();
    const double d2 = -b.imag();
    const double rho = std::hypot(d1, d2);
    const double r = std::hypot(rho, d3);
    e_lo = eps - r;
    e_hi = eps + r;
    V = CMatrix::identity(2);
    if (r == 0.0) return; // degenerate: any orthonormal pair
    const double theta = std::atan2(rho, d3);
    const double phi = (rho > 0.0) ? std::atan2(d2, d1) : 0.0;
    const cplx eip = std::polar(1.0, phi);
    const double ch = std::cos(0.5 * theta), sh = std::sin(0.5 * theta);
    V(0, 0) = -sh;      V(0, 1) = ch;
    V(1, 0) = eip * ch; V(1, 1) = eip * sh;
}

void sort_ascending(HermEig& eig) {
    const int n = static_cast<int>(eig.values.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return eig.values[i] < eig.values[j]; });
    std::vector<double> vals(n);
    CMatrix vecs(eig.vectors.rows(), n);
    for (int j = 0; j < n; ++j) {
        vals[j] = eig.values[order[j]];
        vecs.set_col(j, eig.vectors.col(order[j]));
    }
    eig.values = std::move(vals);
    eig.vectors = std::move(vecs);
}

double offdiag_norm(const CMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace

HermEig eig_hermitian(const CMatrix& h, double tol) {
    if (!h.is_square()) throw DimensionError("eig_hermitian: non-square matrix");
    if (!h.all_finite()) throw Error("eig_hermitian: non-finite entries");
    const int n = h.rows();
    const double scale = std::max(1.0, fro_norm(h));
    const double defect = hermiticity_defect(h);
    if (defect > tol * scale)
        throw NonHermitianError("eig_hermitian: input not Hermitian (defect " +
                                std::to_string(defect) + ")", defect);

    HermEig out;
    if (n == 1) {
        out.values = {h(0, 0).real()};
        out.vectors = CMatrix::identity(1);
        return out;
    }
    if (n == 2) {
        double lo, hi;
        CMatrix V;
        eig2x2(h(0, 0).real(), 0.5 * (h(0, 1) + std::conj(h(1, 0))), h(1, 1).real(), lo, hi, V);
        out.values = {lo, hi};
        out.vectors = std::move(V);
        return out;
    }

    // Cyclic Jacobi: rotate away each off-diagonal pair per sweep using the
    // closed-form 2x2 diagonalization of the (p,q) subproblem.
    CMatrix A = h;
    // symmetrize against roundoff in the input
    for (int i = 0; i < n; ++i) {
        A(i, i) = cplx(A(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (A(i, j) + std::conj(A(j, i)));
            A(i, j) = v;
            A(j, i) = std::conj(v);
        }
    }
    CMatrix V = CMatrix::identity(n);
    const double target = std::max(tol, 1e-15) * scale;
    const int max_sweeps = 64;
    double off = offdiag_norm(A);
    for (int sweep = 0; sweep < max_sweeps && off > target; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(A(p, q)) <= 1e-300) { A(p, q) = 0.0; A(q, p) = 0.0; continue; }
                double lo, hi;
                CMatrix R;
                eig2x2(A(p, p).real(), A(p, q), A(q, q).real(), lo, hi, R);
                const cplx rpp = R(0, 0), rpq = R(0, 1), rqp = R(1, 0), rqq = R(1, 1);
                // A <- J^dag A J applied to rows/cols p, q
                for (int i = 0; i < n; ++i) {
                    const cplx aip = A(i, p), aiq = A(i, q);
                    A(i, p) = aip * rpp + aiq * rqp;
                    A(i, q) = aip * rpq + aiq * rqq;
                }
                for (int j = 0; j < n; ++j) {
                    const cplx apj = A(p, j), aqj = A(q, j);
                    A(p, j) = std::conj(rpp) * apj + std::conj(rqp) * aqj;
                    A(q, j) = std::conj(rpq) * apj + std::conj(rqq) * aqj;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                A(p, p) = cplx(A(p, p).real(), 0.0);
                A(q, q) = cplx(A(q, q).real(), 0.0);
                for (int i = 0; i < n; ++i) {
                    const cplx vip = V(i, p), viq = V(i, q);
                    V(i, p) = vip * rpp + viq * rqp;
                    V(i, q) = vip * rpq + viq * rqq;
                }
            }
        }
        off = offdiag_norm(A);
    }
    if (off > target)
        throw ConvergenceError("eig_hermitian: Jacobi did not converge (off-diagonal norm " +
                               std::to_string(off) + ")", off);

    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = A(i, i).real();
    out.vectors = std::move(V);
    sort_ascending(out);
    return out;
}

double smallest_singular_value(const CMatrix& m) {
    const HermEig e = eig_hermitian(matmul(adjoint(m), m), 1e-12);
    return std::sqrt(std::max(0.0, e.values.front()));
}

CMatrix unitary_align(const CMatrix& m, double tau_sing) {
    if (!m.is_square()) throw DimensionError("unitary_align: non-square matrix");
    const int n = m.rows();
    const HermEig e = eig_hermitian(matmul(adjoint(m), m), 1e-12);
    const double s_min = std::sqrt(std::max(0.0, e.values.front()));
    if (s_min <= tau_sing)
        throw SingularMatrixError("unitary_align: matrix singular to tolerance (sigma_min " +
                                  std::to_string(s_min) + ")", s_min);
    // U = m (m^dag m)^{-1/2} = m V diag(1/s) V^dag
    CMatrix inv_sqrt(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += e.vectors(i, k) * std::conj(e.vectors(j, k)) / std::sqrt(e.values[k]);
            inv_sqrt(i, j) = acc;
        }
    return matmul(m, inv_sqrt);
}

} // namespace qgt
