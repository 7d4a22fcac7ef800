#ifndef QGT_CMATRIX_HPP
#define QGT_CMATRIX_HPP

#include <complex>
#include <initializer_list>
#include <vector>

namespace qgt {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. Sized for small problems (N <= 16);
// everything is by value, no views.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}
    CMatrix(int rows, int cols, std::initializer_list<cplx> entries);

    static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }
    static CMatrix identity(int n);
    // Column vector from entries.
    static CMatrix column(std::initializer_list<cplx> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cplx>& entries() const { return e_; }
    std::vector<cplx>& entries() { return e_; }

    bool is_square() const { return rows_ == cols_; }
    bool all_finite() const;

    CMatrix col(int j) const;                 // single column as rows x 1
    CMatrix cols_range(int j0, int j1) const; // columns [j0, j1)
    void set_col(int j, const CMatrix& v);

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> e_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(CMatrix a, cplx s);
CMatrix operator*(const CMatrix& a, const CMatrix& b); // same as matmul

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
cplx det(const CMatrix& a);
cplx trace(const CMatrix& a);
double fro_norm(const CMatrix& a);

// Largest |a_ij - conj(a_ji)| (zero for exactly Hermitian input).
double hermiticity_defect(const CMatrix& a);

// Pauli matrices and the 2x2 identity, for model building and tests.
CMatrix pauli(int alpha); // alpha in {0 (identity), 1, 2, 3}

} // namespace qgt

#endif
