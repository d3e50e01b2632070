#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "povmkit/errors.hpp"

namespace povmkit {

using Complex = std::complex<double>;

inline constexpr double kValidationTol = 1e-9;
inline constexpr double kOrthoTol = 1e-10;

/// Dense row-major complex matrix. The toolkit works at dimensions small
/// enough (a few dozen at most) that value semantics and plain O(n^3)
/// kernels are the right trade.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_) {
            throw DimensionError("ComplexMatrix: entry count does not match shape");
        }
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    /// u v^dagger outer product.
    static ComplexMatrix outer(const std::vector<Complex>& u, const std::vector<Complex>& v) {
        ComplexMatrix m(u.size(), v.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
        return m;
    }

    static ComplexMatrix outer(const std::vector<Complex>& u) { return outer(u, u); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    const std::vector<Complex>& entries() const { return entries_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "+");
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "-");
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) {
        for (auto& e : entries_) e *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex(s, 0.0); }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s, 0.0); }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Complex trace() const {
        if (!is_square()) throw DimensionError("trace: square matrix required");
        Complex t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& e : entries_) m = std::max(m, std::abs(e));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& e : entries_) s += std::norm(e);
        return std::sqrt(s);
    }

    std::vector<Complex> apply(const std::vector<Complex>& v) const {
        if (v.size() != cols_) throw DimensionError("apply: vector length mismatch");
        std::vector<Complex> r(rows_, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    std::vector<Complex> column(std::size_t j) const {
        std::vector<Complex> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

private:
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw DimensionError(std::string("matrix ") + op + ": shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return m;
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex vec_dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) throw DimensionError("vec_dot: length mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double vec_norm(const std::vector<Complex>& a) {
    double s = 0.0;
    for (const auto& e : a) s += std::norm(e);
    return std::sqrt(s);
}

/// Re <v|M|v>.
inline double quadratic_form(const ComplexMatrix& m, const std::vector<Complex>& v) {
    return vec_dot(v, m.apply(v)).real();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kValidationTol) {
    if (!a.is_square()) throw DimensionError("is_hermitian: square matrix required");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
        }
    }
    return true;
}

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // orthonormal columns; column k pairs with values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues come back ascending; each eigenvector's global
/// phase is fixed by making its largest-modulus component real positive.
inline EigenSystem eigen(const ComplexMatrix& input) {
    if (!input.is_square()) throw DimensionError("eigen: square matrix required");
    if (!is_hermitian(input, kValidationTol)) throw DomainError("eigen: matrix is not Hermitian");

    const std::size_t n = input.rows();
    std::vector<Complex> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = 0.5 * (input(i, j) + std::conj(input(j, i)));
        }
    }
    std::vector<Complex> v(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double amax = 0.0;
    for (const auto& e : a) amax = std::max(amax, std::abs(e));
    const double stop = amax * 1e-15;

    bool converged = false;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p * n + q]));
        if (off <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a[p * n + q];
                const double g = std::abs(apq);
                if (g == 0.0 || g < stop * 1e-2) continue;
                const double app = a[p * n + p].real();
                const double aqq = a[q * n + q].real();
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex s = (apq / g) * (t * c);
                for (std::size_t i = 0; i < n; ++i) {  // A <- A J
                    const Complex x = a[i * n + p], y = a[i * n + q];
                    a[i * n + p] = x * c - y * std::conj(s);
                    a[i * n + q] = x * s + y * c;
                }
                for (std::size_t j = 0; j < n; ++j) {  // A <- J^dagger A
                    const Complex x = a[p * n + j], y = a[q * n + j];
                    a[p * n + j] = c * x - s * y;
                    a[q * n + j] = std::conj(s) * x + c * y;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                a[p * n + p] = Complex(a[p * n + p].real(), 0.0);
                a[q * n + q] = Complex(a[q * n + q].real(), 0.0);
                for (std::size_t i = 0; i < n; ++i) {  // V <- V J
                    const Complex x = v[i * n + p], y = v[i * n + q];
                    v[i * n + p] = x * c - y * std::conj(s);
                    v[i * n + q] = x * s + y * c;
                }
            }
        }
    }
    if (!converged) throw NumericError("eigen: Jacobi iteration did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a[i * n + i].real() < a[j * n + j].real();
    });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        es.values[k] = a[src * n + src].real();
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v[i * n + src]);
            if (m > best) {
                best = m;
                imax = i;
            }
        }
        const Complex pivot = v[imax * n + src];
        const Complex rot = (best > 0.0) ? std::conj(pivot) / best : Complex(1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v[i * n + src] * rot;
    }
    return es;
}

inline double min_eigenvalue(const ComplexMatrix& hermitian) {
    return eigen(hermitian).values.front();
}

inline bool is_psd(const ComplexMatrix& a, double tol = kValidationTol) {
    if (!a.is_square()) throw DimensionError("is_psd: square matrix required");
    if (!is_hermitian(a, tol)) throw DomainError("is_psd: matrix is not Hermitian");
    return min_eigenvalue(a) >= -tol;
}

/// Kronecker product; dimensions multiply.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const Complex aij = a(i1, j1);
            if (aij == Complex(0.0, 0.0)) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    c(i1 * b.rows() + i2, j1 * b.cols() + j2) = aij * b(i2, j2);
        }
    return c;
}

/// A placed in the top-left block of an n x n zero matrix.
inline ComplexMatrix embed_top_left(const ComplexMatrix& a, std::size_t n) {
    if (!a.is_square()) throw DimensionError("embed_top_left: square matrix required");
    if (n < a.rows()) throw DimensionError("embed_top_left: target dimension too small");
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

/// Apply a real scalar function to a Hermitian matrix through its spectrum.
inline ComplexMatrix hermitian_function(const ComplexMatrix& a,
                                        const std::function<Complex(double)>& f) {
    const EigenSystem es = eigen(a);
    const std::size_t n = a.rows();
    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex fk = f(es.values[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += fk * es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    return r;
}

/// exp(iG) for Hermitian G; the result is unitary.
inline ComplexMatrix matrix_exp_i(const ComplexMatrix& hermitian) {
    return hermitian_function(hermitian,
                              [](double x) { return Complex(std::cos(x), std::sin(x)); });
}

/// S^(-1/2) for positive definite S.
inline ComplexMatrix hermitian_inverse_sqrt(const ComplexMatrix& s, double floor = 1e-12) {
    return hermitian_function(s, [floor](double x) -> Complex {
        if (x <= floor) throw NumericError("hermitian_inverse_sqrt: matrix not positive definite");
        return Complex(1.0 / std::sqrt(x), 0.0);
    });
}

}  // namespace povmkit
