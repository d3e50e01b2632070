#pragma once

#include <utility>
#include <vector>

#include "povmkit/povm.hpp"

namespace povmkit {

/// Orthonormal basis of an extended space H (+) H' whose restriction to the
/// first system_dim components reproduces a rank-1 POVM. Column k of `basis`
/// is the extended vector of outcome k; its first system_dim components are
/// the subnormalized system vector, the rest live on the ancilla.
struct NaimarkExtension {
    std::size_t system_dim = 0;
    std::size_t ext_dim = 0;
    ComplexMatrix basis;

    std::size_t ancilla_dim() const { return ext_dim - system_dim; }

    ComplexMatrix projector() const {
        return embed_top_left(ComplexMatrix::identity(system_dim), ext_dim);
    }

    std::vector<Complex> basis_vector(std::size_t k) const { return basis.column(k); }

    std::vector<Complex> system_part(std::size_t k) const {
        std::vector<Complex> v(system_dim);
        for (std::size_t i = 0; i < system_dim; ++i) v[i] = basis(i, k);
        return v;
    }

    std::vector<Complex> ancilla_part(std::size_t k) const {
        std::vector<Complex> v(ancilla_dim());
        for (std::size_t i = 0; i < ancilla_dim(); ++i) v[i] = basis(system_dim + i, k);
        return v;
    }
};

/// Unitary acting on the ancilla summand only.
struct AncillaUnitary {
    ComplexMatrix matrix;

    explicit AncillaUnitary(ComplexMatrix m) : matrix(std::move(m)) {
        if (!matrix.is_square()) throw DimensionError("AncillaUnitary: square matrix required");
        if (max_abs_diff(matrix * matrix.adjoint(), ComplexMatrix::identity(matrix.rows())) >
            kOrthoTol) {
            throw DomainError("AncillaUnitary: matrix is not unitary");
        }
    }

    std::size_t dim() const { return matrix.rows(); }
};

/// Extended unitary 1_d (+) u acting trivially on the system block.
inline ComplexMatrix embed_ancilla_unitary(const AncillaUnitary& u, std::size_t system_dim) {
    const std::size_t n = system_dim + u.dim();
    ComplexMatrix full = embed_top_left(ComplexMatrix::identity(system_dim), n);
    for (std::size_t i = 0; i < u.dim(); ++i)
        for (std::size_t j = 0; j < u.dim(); ++j)
            full(system_dim + i, system_dim + j) = u.matrix(i, j);
    return full;
}

namespace detail {

/// Modified Gram-Schmidt of v against the columns collected so far, applied
/// twice for orthogonality at working precision.
inline void orthogonalize(std::vector<Complex>& v,
                          const std::vector<std::vector<Complex>>& columns) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& c : columns) {
            const Complex coeff = vec_dot(c, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coeff * c[i];
        }
    }
}

}  // namespace detail

/// Minimal Naimark extension of a rank-1 POVM by isometry completion. The
/// n x d matrix of outcome bras is an isometry whenever the POVM is complete;
/// its column space is completed to a unitary with orthonormal complement
/// vectors chosen by a pivoted pass over the canonical basis, which makes the
/// construction reproducible run to run. Elements of rank above one are
/// split into rank-1 pieces first.
inline NaimarkExtension extend(const Povm& povm, double tol = kOrthoTol) {
    const std::size_t d = povm.dim();
    const auto pieces = rank1_pieces(povm, {}, tol);
    const std::size_t n = pieces.size();
    if (n < d) throw NumericError("extend: fewer rank-1 pieces than the dimension");

    // columns[j][k] = conj(s_k[j]): the j-th column of the bra matrix V.
    std::vector<std::vector<Complex>> columns;
    columns.reserve(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Complex> col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = std::conj(pieces[k].vector[j]);
        columns.push_back(std::move(col));
    }

    // Complete with canonical basis vectors, largest residual first.
    std::vector<bool> used(n, false);
    while (columns.size() < n) {
        double best_norm = -1.0;
        std::size_t best_index = 0;
        std::vector<Complex> best_vec;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            std::vector<Complex> cand(n, Complex(0.0, 0.0));
            cand[i] = 1.0;
            detail::orthogonalize(cand, columns);
            const double nrm = vec_norm(cand);
            if (nrm > best_norm) {
                best_norm = nrm;
                best_index = i;
                best_vec = std::move(cand);
            }
        }
        if (best_norm < 1e-8) throw NumericError("extend: complement completion failed");
        used[best_index] = true;
        for (auto& e : best_vec) e *= 1.0 / best_norm;
        columns.push_back(std::move(best_vec));
    }

    NaimarkExtension ext;
    ext.system_dim = d;
    ext.ext_dim = n;
    ext.basis = ComplexMatrix(n, n);
    // |m_tilde_k>[j] = conj(W[k][j]) where W's columns were just built.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) ext.basis(j, k) = std::conj(columns[j][k]);

    const ComplexMatrix gram = ext.basis.adjoint() * ext.basis;
    if (max_abs_diff(gram, ComplexMatrix::identity(n)) > tol) {
        throw NumericError("extend: extension basis is not orthonormal within tolerance");
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto s = ext.system_part(k);
        double res = 0.0;
        for (std::size_t i = 0; i < d; ++i) res = std::max(res, std::abs(s[i] - pieces[k].vector[i]));
        if (res > tol) throw NumericError("extend: restriction does not reproduce the POVM");
    }
    return ext;
}

inline NaimarkExtension extend(const ValuedPovm& vp, double tol = kOrthoTol) {
    return extend(vp.povm(), tol);
}

/// Transform the ancilla block of every basis vector by u. System parts are
/// untouched, so the restricted POVM is exactly preserved.
inline NaimarkExtension apply_ancilla_unitary(const NaimarkExtension& ext,
                                              const AncillaUnitary& u) {
    if (u.dim() != ext.ancilla_dim()) {
        throw DimensionError("apply_ancilla_unitary: ancilla dimension mismatch");
    }
    NaimarkExtension out = ext;
    for (std::size_t k = 0; k < ext.ext_dim; ++k) {
        const auto a = ext.ancilla_part(k);
        const auto ta = u.matrix.apply(a);
        for (std::size_t i = 0; i < ta.size(); ++i) out.basis(ext.system_dim + i, k) = ta[i];
    }
    return out;
}

/// M_E = sum_k mu_k |m_tilde_k><m_tilde_k| on the extended space.
inline ComplexMatrix extended_operator(const NaimarkExtension& ext,
                                       const std::vector<double>& values) {
    if (values.size() != ext.ext_dim) {
        throw DimensionError("extended_operator: one value per extended outcome required");
    }
    ComplexMatrix m(ext.ext_dim, ext.ext_dim);
    for (std::size_t k = 0; k < ext.ext_dim; ++k) {
        m += ComplexMatrix::outer(ext.basis_vector(k)) * values[k];
    }
    return m;
}

struct RobertsonPair {
    ComplexMatrix direct;           // from the extension as given
    ComplexMatrix ancilla_rotated;  // from the extension with ancilla parts times i
};

/// Two valued extension operators built from the same POVM: one from the
/// basis as given, one from the basis whose ancilla components are multiplied
/// by i (also a valid extension; verified orthonormal here).
inline RobertsonPair robertson_pair(const NaimarkExtension& ext,
                                    const std::vector<double>& values) {
    if (values.size() != ext.ext_dim) {
        throw DimensionError("robertson_pair: one value per extended outcome required");
    }
    NaimarkExtension rotated = ext;
    for (std::size_t k = 0; k < ext.ext_dim; ++k) {
        for (std::size_t i = ext.system_dim; i < ext.ext_dim; ++i) {
            rotated.basis(i, k) *= Complex(0.0, 1.0);
        }
    }
    const ComplexMatrix gram = rotated.basis.adjoint() * rotated.basis;
    if (max_abs_diff(gram, ComplexMatrix::identity(ext.ext_dim)) > kOrthoTol) {
        throw NumericError("robertson_pair: rotated basis lost orthonormality");
    }
    return {extended_operator(ext, values), extended_operator(rotated, values)};
}

}  // namespace povmkit
