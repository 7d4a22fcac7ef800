#include "qgt/cmatrix.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "qgt/errors.hpp"

namespace qgt {

CMatrix::CMatrix(int rows, int cols, std::initializer_list<cplx> entries)
    : rows_(rows), cols_(cols), e_(entries) {
    if (static_cast<int>(e_.size()) != rows * cols)
        throw DimensionError("CMatrix: initializer has " + std::to_string(e_.size()) +
                             " entries, expected " + std::to_string(rows * cols));
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::column(std::initializer_list<cplx> entries) {
    CMatrix m(static_cast<int>(entries.size()), 1);
    int i = 0;
    for (cplx v : entries) m(i++, 0) = v;
    return m;
}

bool CMatrix::all_finite() const {
    for (const cplx& v : e_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

CMatrix CMatrix::col(int j) const { return cols_range(j, j + 1); }

CMatrix CMatrix::cols_range(int j0, int j1) const {
    CMatrix out(rows_, j1 - j0);
    for (int i = 0; i < rows_; ++i)
        for (int j = j0; j < j1; ++j) out(i, j - j0) = (*this)(i, j);
    return out;
}

void CMatrix::set_col(int j, const CMatrix& v) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v(i, 0);
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add: shape mismatch");
    for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub: shape mismatch");
    for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (cplx& v : e_) v *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { a += b; return a; }
CMatrix operator-(CMatrix a, const CMatrix& b) { a -= b; return a; }
CMatrix operator*(cplx s, CMatrix a) { a *= s; return a; }
CMatrix operator*(CMatrix a, cplx s) { a *= s; return a; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    CMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix c(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

cplx det(const CMatrix& a) {
    if (!a.is_square()) throw DimensionError("det: non-square matrix");
    const int n = a.rows();
    CMatrix lu = a;
    cplx result = 1.0;
    for (int k = 0; k < n; ++k) {
        // partial pivoting
        int piv = k;
        double best = std::abs(lu(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > best) { best = std::abs(lu(i, k)); piv = i; }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            result = -result;
        }
        result *= lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cplx f = lu(i, k) / lu(k, k);
            for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return result;
}

cplx trace(const CMatrix& a) {
    if (!a.is_square()) throw DimensionError("trace: non-square matrix");
    cplx t = 0.0;
    for (int i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double fro_norm(const CMatrix& a) {
    double s = 0.0;
    for (const cplx& v : a.entries()) s += std::norm(v);
    return std::sqrt(s);
}

double hermiticity_defect(const CMatrix& a) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    return worst;
}

CMatrix pauli(int alpha) {
    const cplx I(0.0, 1.0);
    switch (alpha) {
        case 0: return CMatrix(2, 2, {1, 0, 0, 1});
        case 1: return CMatrix(2, 2, {0, 1, 1, 0});
        case 2: return CMatrix(2, 2, {0, -I, I, 0});
        case 3: return CMatrix(2, 2, {1, 0, 0, -1});
        default: throw DimensionError("pauli: index must be 0..3");
    }
}

} // namespace qgt
