#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "povmkit/complex_matrix.hpp"
#include "povmkit/random.hpp"

namespace povmkit {

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return c.name;
        return {};
    }
};

/// Check a candidate POVM: shapes, per-element Hermiticity and positivity,
/// completeness, label bookkeeping. Failures are report entries, never throws.
inline ValidationReport validate_povm(std::size_t dim,
                                      const std::vector<ComplexMatrix>& elements,
                                      const std::vector<std::string>& labels,
                                      double tol = kValidationTol) {
    ValidationReport report;
    report.checks.push_back({"element_count_positive", !elements.empty(),
                             static_cast<double>(elements.size())});
    report.checks.push_back({"label_count_matches", labels.size() == elements.size(),
                             static_cast<double>(labels.size())});
    {
        std::set<std::string> distinct(labels.begin(), labels.end());
        report.checks.push_back({"labels_distinct", distinct.size() == labels.size(), 0.0});
    }
    bool shapes_ok = dim > 0;
    for (const auto& m : elements) {
        if (m.rows() != dim || m.cols() != dim) shapes_ok = false;
    }
    report.checks.push_back({"element_shapes", shapes_ok, static_cast<double>(dim)});
    if (!shapes_ok) return report;

    ComplexMatrix sum(dim, dim);
    for (std::size_t k = 0; k < elements.size(); ++k) {
        const std::string tag = (k < labels.size() && !labels[k].empty())
                                    ? labels[k]
                                    : ("#" + std::to_string(k));
        const ComplexMatrix& m = elements[k];
        double herm_res = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                herm_res = std::max(herm_res, std::abs(m(i, j) - std::conj(m(j, i))));
        report.checks.push_back({"hermitian(" + tag + ")", herm_res <= tol, herm_res});
        if (herm_res <= tol) {
            const double lo = min_eigenvalue(m);
            report.checks.push_back({"psd(" + tag + ")", lo >= -tol, lo});
        } else {
            report.checks.push_back({"psd(" + tag + ")", false, 0.0});
        }
        sum += m;
    }
    const double comp = max_abs_diff(sum, ComplexMatrix::identity(dim));
    report.checks.push_back({"completeness", comp <= tol, comp});
    return report;
}

/// Positive operators summing to the identity, with distinct outcome labels.
/// Construction validates; an invalid candidate throws with the failed check.
class Povm {
public:
    Povm(std::size_t dim, std::vector<ComplexMatrix> elements, std::vector<std::string> labels,
         double tol = kValidationTol)
        : dim_(dim), elements_(std::move(elements)), labels_(std::move(labels)) {
        const ValidationReport report = validate_povm(dim_, elements_, labels_, tol);
        if (!report.all_passed()) {
            throw DomainError("invalid POVM: check failed: " + report.first_failure());
        }
    }

    static Povm from_elements(std::vector<ComplexMatrix> elements, double tol = kValidationTol) {
        const std::size_t dim = elements.empty() ? 0 : elements.front().rows();
        std::vector<std::string> labels;
        labels.reserve(elements.size());
        for (std::size_t k = 0; k < elements.size(); ++k) labels.push_back("m" + std::to_string(k));
        return Povm(dim, std::move(elements), std::move(labels), tol);
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<ComplexMatrix>& elements() const { return elements_; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::size_t dim_;
    std::vector<ComplexMatrix> elements_;
    std::vector<std::string> labels_;
};

inline ValidationReport validate(const Povm& povm, double tol = kValidationTol) {
    return validate_povm(povm.dim(), povm.elements(), povm.labels(), tol);
}

/// Pure state vector or density matrix on the system space.
class QuantumState {
public:
    static QuantumState pure(std::vector<Complex> amplitudes, double tol = kOrthoTol) {
        const double n = vec_norm(amplitudes);
        if (std::abs(n - 1.0) > tol) throw DomainError("pure state: vector is not normalized");
        QuantumState s;
        s.dim_ = amplitudes.size();
        s.pure_ = std::move(amplitudes);
        return s;
    }

    static QuantumState density(ComplexMatrix rho, double tol = kValidationTol) {
        if (!rho.is_square()) throw DimensionError("density state: square matrix required");
        if (!is_hermitian(rho, tol)) throw DomainError("density state: not Hermitian");
        if (min_eigenvalue(rho) < -tol) throw DomainError("density state: not positive");
        if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol) {
            throw DomainError("density state: trace is not 1");
        }
        QuantumState s;
        s.dim_ = rho.rows();
        s.rho_ = std::move(rho);
        s.is_pure_ = false;
        return s;
    }

    std::size_t dim() const { return dim_; }
    bool is_pure() const { return is_pure_; }

    const std::vector<Complex>& amplitudes() const {
        if (!is_pure_) throw DomainError("state is not pure");
        return pure_;
    }

    ComplexMatrix density_matrix() const {
        if (is_pure_) return ComplexMatrix::outer(pure_);
        return rho_;
    }

    double expectation(const ComplexMatrix& op) const {
        if (op.rows() != dim_ || op.cols() != dim_) {
            throw DimensionError("expectation: operator dimension mismatch");
        }
        if (is_pure_) return quadratic_form(op, pure_);
        return (rho_ * op).trace().real();
    }

private:
    QuantumState() = default;

    std::size_t dim_ = 0;
    bool is_pure_ = true;
    std::vector<Complex> pure_;
    ComplexMatrix rho_;
};

struct OutcomeDistribution {
    std::vector<double> probabilities;
    std::vector<std::string> labels;
};

/// Born probabilities p(k) = <psi|m_k|psi> (trace form for density states).
/// Roundoff slightly below zero is clamped; anything beyond the validation
/// band signals a broken input and throws.
inline OutcomeDistribution outcome_distribution(const Povm& povm, const QuantumState& state,
                                                double tol = kValidationTol) {
    if (povm.dim() != state.dim()) {
        throw DimensionError("outcome_distribution: state and POVM dimensions differ");
    }
    OutcomeDistribution dist;
    dist.labels = povm.labels();
    dist.probabilities.reserve(povm.size());
    double sum = 0.0;
    for (const auto& m : povm.elements()) {
        double p = state.expectation(m);
        if (p < -tol || p > 1.0 + tol) {
            throw NumericError("outcome_distribution: probability out of range");
        }
        p = std::min(1.0, std::max(0.0, p));
        dist.probabilities.push_back(p);
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw NumericError("outcome_distribution: probabilities do not sum to 1");
    }
    return dist;
}

/// True when every element is an orthogonal projector: m^2 = m and
/// m_i m_j = 0 for i != j, all within tol.
inline bool is_pvm(const Povm& povm, double tol = kValidationTol) {
    const auto& els = povm.elements();
    for (const auto& m : els) {
        if (max_abs_diff(m * m, m) > tol) return false;
    }
    for (std::size_t i = 0; i < els.size(); ++i) {
        for (std::size_t j = i + 1; j < els.size(); ++j) {
            if ((els[i] * els[j]).max_abs() > tol) return false;
        }
    }
    return true;
}

/// POVM with one real outcome value per element.
class ValuedPovm {
public:
    ValuedPovm(Povm povm, std::vector<double> values)
        : povm_(std::move(povm)), values_(std::move(values)) {
        if (values_.size() != povm_.size()) {
            throw DimensionError("ValuedPovm: one value per element required");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) throw DomainError("ValuedPovm: values must be finite");
        }
    }

    const Povm& povm() const { return povm_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t dim() const { return povm_.dim(); }
    std::size_t size() const { return povm_.size(); }

private:
    Povm povm_;
    std::vector<double> values_;
};

struct RankOnePiece {
    std::vector<Complex> vector;  // subnormalized: piece = |v><v|
    double value = 0.0;
    std::string label;
    std::size_t parent = 0;
};

/// Split each element into rank-1 pieces lambda |u><u| via its spectrum,
/// dropping eigenvalues below rank_tol. Pieces inherit the parent's value.
/// Within one element pieces are ordered by descending eigenvalue.
inline std::vector<RankOnePiece> rank1_pieces(const Povm& povm,
                                              const std::vector<double>& values,
                                              double rank_tol = kOrthoTol) {
    if (!values.empty() && values.size() != povm.size()) {
        throw DimensionError("rank1_pieces: value count mismatch");
    }
    std::vector<RankOnePiece> pieces;
    for (std::size_t k = 0; k < povm.size(); ++k) {
        const EigenSystem es = eigen(povm.elements()[k]);
        std::vector<std::size_t> kept;
        for (std::size_t j = es.values.size(); j-- > 0;) {
            if (es.values[j] > rank_tol) kept.push_back(j);
        }
        for (std::size_t piece_idx = 0; piece_idx < kept.size(); ++piece_idx) {
            const std::size_t j = kept[piece_idx];
            RankOnePiece piece;
            piece.vector = es.vectors.column(j);
            const double scale = std::sqrt(es.values[j]);
            for (auto& c : piece.vector) c *= scale;
            piece.value = values.empty() ? 0.0 : values[k];
            piece.parent = k;
            piece.label = (kept.size() == 1)
                              ? povm.labels()[k]
                              : povm.labels()[k] + "." + std::to_string(piece_idx);
            pieces.push_back(std::move(piece));
        }
    }
    return pieces;
}

inline ValuedPovm rank1_refine(const ValuedPovm& vp, double rank_tol = kOrthoTol) {
    const auto pieces = rank1_pieces(vp.povm(), vp.values(), rank_tol);
    std::vector<ComplexMatrix> elements;
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& piece : pieces) {
        elements.push_back(ComplexMatrix::outer(piece.vector));
        labels.push_back(piece.label);
        values.push_back(piece.value);
    }
    return ValuedPovm(Povm(vp.dim(), std::move(elements), std::move(labels)), std::move(values));
}

/// Convex combination: realize a with probability p and b with probability
/// 1-p. Elements are scaled accordingly; zero-probability branches are pruned.
inline ValuedPovm mix(double p, const ValuedPovm& a, const ValuedPovm& b) {
    if (a.dim() != b.dim()) throw DimensionError("mix: POVM dimensions differ");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mix: probability must lie in [0, 1]");
    const double q = 1.0 - p;
    std::vector<ComplexMatrix> elements;
    std::vector<std::string> labels;
    std::vector<double> values;
    if (p > 0.0) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            elements.push_back(a.povm().elements()[i] * p);
            labels.push_back(a.povm().labels()[i] + ".L");
            values.push_back(a.values()[i]);
        }
    }
    if (q > 0.0) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            elements.push_back(b.povm().elements()[j] * q);
            labels.push_back(b.povm().labels()[j] + ".R");
            values.push_back(b.values()[j]);
        }
    }
    return ValuedPovm(Povm(a.dim(), std::move(elements), std::move(labels)), std::move(values));
}

/// Product measurement: elements m_i (x) n_j, value of outcome (i, j) is the
/// sum of the branch values.
inline ValuedPovm tensor_povm(const ValuedPovm& a, const ValuedPovm& b) {
    std::vector<ComplexMatrix> elements;
    std::vector<std::string> labels;
    std::vector<double> values;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            elements.push_back(tensor(a.povm().elements()[i], b.povm().elements()[j]));
            labels.push_back(a.povm().labels()[i] + "\xE2\x8A\x97" + b.povm().labels()[j]);
            values.push_back(a.values()[i] + b.values()[j]);
        }
    }
    return ValuedPovm(Povm(a.dim() * b.dim(), std::move(elements), std::move(labels)),
                      std::move(values));
}

/// Random valued POVM: Wishart blocks whitened by the inverse square root of
/// their sum. Needs outcomes * rank >= dim so the sum is invertible; any such
/// draw is valid. Values are standard Gaussian.
inline ValuedPovm random_valued_povm(std::size_t dim, std::size_t outcomes, std::size_t rank,
                                     Rng& rng) {
    if (outcomes * rank < dim) {
        throw DomainError("random_valued_povm: outcomes * rank must reach the dimension");
    }
    std::vector<ComplexMatrix> blocks;
    ComplexMatrix sum(dim, dim);
    for (std::size_t k = 0; k < outcomes; ++k) {
        ComplexMatrix g(dim, rank);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < rank; ++j) g(i, j) = rng.complex_gaussian();
        ComplexMatrix block = g * g.adjoint();
        sum += block;
        blocks.push_back(std::move(block));
    }
    const ComplexMatrix w = hermitian_inverse_sqrt(sum);
    std::vector<ComplexMatrix> elements;
    std::vector<std::string> labels;
    std::vector<double> values;
    for (std::size_t k = 0; k < outcomes; ++k) {
        elements.push_back(w * blocks[k] * w);
        labels.push_back("m" + std::to_string(k));
        values.push_back(rng.gaussian());
    }
    return ValuedPovm(Povm(dim, std::move(elements), std::move(labels)), std::move(values));
}

}  // namespace povmkit
