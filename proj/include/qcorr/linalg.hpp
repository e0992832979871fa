#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qcorr/errors.hpp"

namespace qcorr {

using cdouble = std::complex<double>;

/// Max entrywise |M - M^dagger| accepted before a matrix is rejected as
/// non-Hermitian. Channels applied in floating point drift off exact
/// Hermiticity, so eig_hermitian symmetrizes below this threshold.
inline constexpr double kHermitianTol = 1e-10;

/// Dense complex matrix, row-major. The universal carrier for states,
/// block operators, Pauli matrices and basis unitaries. Dimensions stay
/// small (at most ~16) so everything is plain O(n^3) with explicit
/// dimension checks.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows);

    static ComplexMatrix identity(std::size_t d);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);
    /// Matrix unit |i><j| of dimension d.
    static ComplexMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return entries_.empty(); }

    cdouble& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::vector<cdouble>& data() { return entries_; }
    const std::vector<cdouble>& data() const { return entries_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cdouble scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cdouble s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, cdouble s) { return m *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    cdouble trace() const;
    /// max entrywise |M - M^dagger|; 0 for non-square never happens (throws).
    double hermiticity_defect() const;
    /// max entrywise |a - b| over all entries.
    double max_abs_diff(const ComplexMatrix& other) const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> entries_;
};

/// Coefficients of a 2x2 matrix in the (I, sigma_1, sigma_2, sigma_3)
/// basis; complex in general since block operators are not Hermitian.
struct PauliVector {
    std::array<cdouble, 4> c{};

    cdouble& operator[](std::size_t k) { return c[k]; }
    const cdouble& operator[](std::size_t k) const { return c[k]; }
};

/// Pauli matrix sigma_k, with sigma_0 = I.
const ComplexMatrix& pauli(std::size_t k);

/// Hilbert-Schmidt norm sqrt(Tr(M^dagger M)). Requires a square matrix.
double hs_norm(const ComplexMatrix& m);

/// AB - BA for square matrices of equal dimension.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// d_k = Tr(sigma_k M) / 2 for a 2x2 matrix.
PauliVector pauli_decompose(const ComplexMatrix& m);

/// d0 I + d1 sigma_1 + d2 sigma_2 + d3 sigma_3.
ComplexMatrix pauli_reconstruct(const PauliVector& d);

/// ||[A, B]||_2 from the Pauli coefficients of A and B without forming
/// the commutator: sqrt(2 (|b12|^2 + |b31|^2 + |b23|^2)) with
/// b_mn = 2i (d_m e_n - d_n e_m).
double commutator_norm_pauli(const PauliVector& d, const PauliVector& e);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& m);
ComplexMatrix transpose(const ComplexMatrix& m);

/// Ascending real eigenvalues of a Hermitian matrix (cyclic Jacobi).
/// Rejects inputs whose hermiticity defect exceeds kHermitianTol, then
/// symmetrizes as (M + M^dagger)/2 before iterating.
std::vector<double> eig_hermitian(const ComplexMatrix& m);

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

/// Eigenvalues and eigenvectors of a Hermitian matrix.
EigenSystem eig_hermitian_full(const ComplexMatrix& m);

enum class Subsystem { A, B };

/// Partial trace of a (dA*dB)x(dA*dB) matrix over the discarded factor.
/// Composite index convention: (a, b) -> a*dB + b.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dA, std::size_t dB,
                            Subsystem keep);

/// max |U^dagger U - I| entrywise; the unitarity check used everywhere.
double unitarity_defect(const ComplexMatrix& u);

/// Modified Gram-Schmidt on the columns, run twice so the result is
/// orthonormal near machine precision. Throws ValidityError when a column
/// collapses (rank-deficient input).
void orthonormalize_columns(ComplexMatrix& m);

}  // namespace qcorr
