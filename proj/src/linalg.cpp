#include "qcorr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qcorr {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("ComplexMatrix: entry count " + std::to_string(entries_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DimensionError("ComplexMatrix: ragged initializer rows");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t d) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
    if (i >= d || j >= d) throw DimensionError("matrix_unit: index out of range");
    ComplexMatrix m(d, d);
    m(i, j) = 1.0;
    return m;
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
}

}  // namespace

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("operator*: inner dimensions " + std::to_string(a.cols()) + " vs " +
                             std::to_string(b.rows()));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

cdouble ComplexMatrix::trace() const {
    if (!is_square()) throw DimensionError("trace: matrix is not square");
    cdouble t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) throw DimensionError("hermiticity_defect: matrix is not square");
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    require_same_shape(*this, other, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
    }
    return worst;
}

const ComplexMatrix& pauli(std::size_t k) {
    static const std::array<ComplexMatrix, 4> sigma = {
        ComplexMatrix{{1.0, 0.0}, {0.0, 1.0}},
        ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}},
        ComplexMatrix{{0.0, cdouble(0.0, -1.0)}, {cdouble(0.0, 1.0), 0.0}},
        ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}},
    };
    if (k >= 4) throw DimensionError("pauli: index must be 0..3");
    return sigma[k];
}

double hs_norm(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("hs_norm: matrix is not square");
    double sum = 0.0;
    for (const auto& e : m.data()) sum += std::norm(e);
    return std::sqrt(sum);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
        throw DimensionError("commutator: operands must be square and equal-sized");
    }
    return a * b - b * a;
}

PauliVector pauli_decompose(const ComplexMatrix& m) {
    if (m.rows() != 2 || m.cols() != 2) {
        throw DimensionError("pauli_decompose: matrix must be 2x2");
    }
    PauliVector d;
    // d_k = Tr(sigma_k M)/2, written out so the hot path stays branch-free.
    d[0] = (m(0, 0) + m(1, 1)) * 0.5;
    d[1] = (m(0, 1) + m(1, 0)) * 0.5;
    d[2] = (m(0, 1) - m(1, 0)) * cdouble(0.0, 0.5);
    d[3] = (m(0, 0) - m(1, 1)) * 0.5;
    return d;
}

ComplexMatrix pauli_reconstruct(const PauliVector& d) {
    ComplexMatrix m(2, 2);
    m(0, 0) = d[0] + d[3];
    m(0, 1) = d[1] - cdouble(0.0, 1.0) * d[2];
    m(1, 0) = d[1] + cdouble(0.0, 1.0) * d[2];
    m(1, 1) = d[0] - d[3];
    return m;
}

double commutator_norm_pauli(const PauliVector& d, const PauliVector& e) {
    // [A,B] has no identity part; its sigma components are
    // beta_mn = 2i (d_m e_n - d_n e_m) with (mn) cycling (12),(31),(23),
    // and ||.||_2^2 of a traceless Pauli combination is 2 sum |beta|^2.
    const cdouble b12 = d[1] * e[2] - d[2] * e[1];
    const cdouble b31 = d[3] * e[1] - d[1] * e[3];
    const cdouble b23 = d[2] * e[3] - d[3] * e[2];
    const double s = std::norm(b12) + std::norm(b31) + std::norm(b23);
    return std::sqrt(8.0 * s);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cdouble aij = a(i, j);
            if (aij == cdouble{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = std::conj(m(i, j));
        }
    }
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

namespace {

/// Cyclic Jacobi sweep state for Hermitian diagonalization. Dimensions here
/// never exceed ~16, where Jacobi is both robust and fast enough.
struct JacobiWork {
    ComplexMatrix a;       // current (Hermitian) iterate
    ComplexMatrix v;       // accumulated rotations, columns become eigenvectors
    std::size_t n;

    explicit JacobiWork(const ComplexMatrix& m, bool want_vectors)
        : a(m), v(want_vectors ? ComplexMatrix::identity(m.rows()) : ComplexMatrix()), n(m.rows()) {}

    double offdiag_frobenius() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    }

    /// One complex Jacobi rotation annihilating a(p,q).
    void rotate(std::size_t p, std::size_t q) {
        const cdouble apq = a(p, q);
        const double abs_apq = std::abs(apq);
        if (abs_apq == 0.0) return;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Phase that makes the off-diagonal element real, then a real
        // 2x2 Jacobi rotation on (p, q).
        const cdouble phase = apq / abs_apq;
        const double tau = (aqq - app) / (2.0 * abs_apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cdouble sp = s * phase;  // complex sine absorbing the phase

        for (std::size_t k = 0; k < n; ++k) {
            const cdouble akp = a(k, p);
            const cdouble akq = a(k, q);
            a(k, p) = c * akp - std::conj(sp) * akq;
            a(k, q) = sp * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
            const cdouble apk = a(p, k);
            const cdouble aqk = a(q, k);
            a(p, k) = c * apk - sp * aqk;
            a(q, k) = std::conj(sp) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cdouble(a(p, p).real(), 0.0);
        a(q, q) = cdouble(a(q, q).real(), 0.0);

        if (!v.empty()) {
            for (std::size_t k = 0; k < n; ++k) {
                const cdouble vkp = v(k, p);
                const cdouble vkq = v(k, q);
                v(k, p) = c * vkp - std::conj(sp) * vkq;
                v(k, q) = sp * vkp + c * vkq;
            }
        }
    }
};

EigenSystem jacobi_diagonalize(const ComplexMatrix& m, bool want_vectors) {
    if (!m.is_square()) throw DimensionError("eig_hermitian: matrix is not square");
    const double defect = m.hermiticity_defect();
    if (defect > kHermitianTol) {
        throw ValidityError("eig_hermitian: matrix is not Hermitian (defect " +
                            std::to_string(defect) + ")");
    }
    // Symmetrize so accumulated floating-point noise cannot bias the sweep.
    ComplexMatrix sym = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            sym(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }

    JacobiWork w(sym, want_vectors);
    constexpr double kOffdiagTol = 1e-13;
    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps && w.offdiag_frobenius() > kOffdiagTol; ++sweep) {
        for (std::size_t p = 0; p + 1 < w.n; ++p) {
            for (std::size_t q = p + 1; q < w.n; ++q) {
                w.rotate(p, q);
            }
        }
    }

    EigenSystem out;
    out.values.resize(w.n);
    std::vector<std::size_t> order(w.n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(w.n);
    for (std::size_t i = 0; i < w.n; ++i) diag[i] = w.a(i, i).real();
    std::sort(order.begin(), order.end(),
              [&diag](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });
    for (std::size_t i = 0; i < w.n; ++i) out.values[i] = diag[order[i]];
    if (want_vectors) {
        out.vectors = ComplexMatrix(w.n, w.n);
        for (std::size_t col = 0; col < w.n; ++col) {
            for (std::size_t row = 0; row < w.n; ++row) {
                out.vectors(row, col) = w.v(row, order[col]);
            }
        }
    }
    return out;
}

}  // namespace

std::vector<double> eig_hermitian(const ComplexMatrix& m) {
    return jacobi_diagonalize(m, false).values;
}

EigenSystem eig_hermitian_full(const ComplexMatrix& m) {
    return jacobi_diagonalize(m, true);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dA, std::size_t dB,
                            Subsystem keep) {
    if (!m.is_square() || m.rows() != dA * dB) {
        throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(dA * dB) +
                             "x" + std::to_string(dA * dB));
    }
    if (keep == Subsystem::A) {
        ComplexMatrix out(dA, dA);
        for (std::size_t a = 0; a < dA; ++a)
            for (std::size_t ap = 0; ap < dA; ++ap)
                for (std::size_t b = 0; b < dB; ++b)
                    out(a, ap) += m(a * dB + b, ap * dB + b);
        return out;
    }
    ComplexMatrix out(dB, dB);
    for (std::size_t b = 0; b < dB; ++b)
        for (std::size_t bp = 0; bp < dB; ++bp)
            for (std::size_t a = 0; a < dA; ++a)
                out(b, bp) += m(a * dB + b, a * dB + bp);
    return out;
}

void orthonormalize_columns(ComplexMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                cdouble dot = 0.0;
                for (std::size_t r = 0; r < rows; ++r) dot += std::conj(m(r, k)) * m(r, j);
                for (std::size_t r = 0; r < rows; ++r) m(r, j) -= dot * m(r, k);
            }
            double nrm = 0.0;
            for (std::size_t r = 0; r < rows; ++r) nrm += std::norm(m(r, j));
            nrm = std::sqrt(nrm);
            if (nrm < 1e-300) {
                throw ValidityError("orthonormalize_columns: rank-deficient input");
            }
            for (std::size_t r = 0; r < rows; ++r) m(r, j) /= nrm;
        }
    }
}

double unitarity_defect(const ComplexMatrix& u) {
    if (!u.is_square()) throw DimensionError("unitarity_defect: matrix is not square");
    const ComplexMatrix g = dagger(u) * u;
    double worst = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i) {
        for (std::size_t j = 0; j < u.cols(); ++j) {
            const cdouble expected = (i == j) ? cdouble(1.0) : cdouble(0.0);
            worst = std::max(worst, std::abs(g(i, j) - expected));
        }
    }
    return worst;
}

}  // namespace qcorr
