#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "povmkit/naimark.hpp"
#include "povmkit/optimize.hpp"
#include "povmkit/povm.hpp"

namespace povmkit {

/// Shannon entropy in bits; probabilities below 1e-15 contribute zero.
inline double entropy_bits(const std::vector<double>& probabilities) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p > 1e-15) h -= p * std::log2(p);
    }
    return h;
}

inline double outcome_entropy(const Povm& povm, const QuantumState& state) {
    return entropy_bits(outcome_distribution(povm, state).probabilities);
}

struct BoundCertificate {
    std::optional<ComplexMatrix> ancilla_unitary;
    std::optional<std::pair<int, int>> achieving_pair;
    std::optional<int> achieving_index;
    std::optional<std::vector<Complex>> minimizing_state;
};

/// A named entropy lower bound in bits, together with whatever certificate
/// produced it. overlap_exponent records whether overlaps entered as |o| (1)
/// or |o|^2 (2); bounds that do not involve overlaps use the default 2.
struct BoundReport {
    std::string bound_name;
    double value_bits = 0.0;
    int overlap_exponent = 2;
    BoundCertificate certificate;
};

namespace detail {

inline double clamp_bound_bits(double bits) {
    if (bits < 0.0) {
        if (bits < -1e-9) throw NumericError("entropy bound came out negative");
        return 0.0;
    }
    return bits;
}

/// Subnormalized vectors of a POVM whose elements must all be exactly rank 1.
inline std::vector<std::vector<Complex>> rank1_vectors(const Povm& povm,
                                                       double tol = kOrthoTol) {
    std::vector<std::vector<Complex>> vectors;
    for (std::size_t k = 0; k < povm.size(); ++k) {
        const EigenSystem es = eigen(povm.elements()[k]);
        std::size_t kept = 0;
        for (double v : es.values) {
            if (v > tol) ++kept;
        }
        if (kept != 1) {
            throw DomainError("rank-1 POVM required: element " + povm.labels()[k] +
                              " has rank " + std::to_string(kept));
        }
        auto v = es.vectors.column(es.values.size() - 1);
        const double scale = std::sqrt(es.values.back());
        for (auto& c : v) c *= scale;
        vectors.push_back(std::move(v));
    }
    return vectors;
}

struct OverlapScan {
    double max_modulus2 = 0.0;
    std::pair<int, int> argmax{0, 0};
};

/// Largest |<a_k| U_full |b_l>|^2 over all outcome pairs; ties keep the
/// lexicographically first pair.
inline OverlapScan max_overlap2(const ComplexMatrix& bras_a, const ComplexMatrix& kets_b) {
    const ComplexMatrix cross = bras_a * kets_b;
    OverlapScan scan;
    scan.max_modulus2 = -1.0;
    for (std::size_t k = 0; k < cross.rows(); ++k) {
        for (std::size_t l = 0; l < cross.cols(); ++l) {
            const double m2 = std::norm(cross(k, l));
            if (m2 > scan.max_modulus2) {
                scan.max_modulus2 = m2;
                scan.argmax = {static_cast<int>(k), static_cast<int>(l)};
            }
        }
    }
    return scan;
}

inline std::vector<double> all_overlap2(const ComplexMatrix& bras_a, const ComplexMatrix& kets_b) {
    const ComplexMatrix cross = bras_a * kets_b;
    std::vector<double> out;
    out.reserve(cross.entries().size());
    for (const auto& e : cross.entries()) out.push_back(std::norm(e));
    return out;
}

inline double bits_from_overlap2(double max2, int convention, double prefactor) {
    // prefactor 1 for two-measurement bounds, 1/2 for the single-POVM bound
    const double exponent = (convention == 1) ? 0.5 : 1.0;
    return clamp_bound_bits(-prefactor * exponent * std::log2(max2));
}

inline void require_convention(int convention) {
    if (convention != 1 && convention != 2) {
        throw DomainError("overlap convention must be 1 or 2");
    }
}

}  // namespace detail

/// H >= -log2(largest eigenvalue over all elements). Zero exactly when some
/// element has a unit eigenvalue.
inline BoundReport bound_max_eigenvalue(const Povm& povm) {
    double lam = 0.0;
    int arg = 0;
    for (std::size_t k = 0; k < povm.size(); ++k) {
        const double top = eigen(povm.elements()[k]).values.back();
        if (top > lam) {
            lam = top;
            arg = static_cast<int>(k);
        }
    }
    if (lam <= 0.0) throw NumericError("bound_max_eigenvalue: degenerate POVM");
    BoundReport report;
    report.bound_name = "max_eigenvalue";
    report.value_bits = detail::clamp_bound_bits(-std::log2(lam));
    report.certificate.achieving_index = arg;
    return report;
}

/// H(a) + H(b) >= -log2 max |<a_k|b_l>|^c for rank-1 POVMs on one space,
/// with subnormalized vectors used as they come.
inline BoundReport bound_pair_rank1(const Povm& a, const Povm& b, int convention = 2) {
    detail::require_convention(convention);
    if (a.dim() != b.dim()) throw DimensionError("bound_pair_rank1: dimensions differ");
    const auto va = detail::rank1_vectors(a);
    const auto vb = detail::rank1_vectors(b);
    ComplexMatrix bras(va.size(), a.dim());
    for (std::size_t k = 0; k < va.size(); ++k)
        for (std::size_t j = 0; j < a.dim(); ++j) bras(k, j) = std::conj(va[k][j]);
    ComplexMatrix kets(b.dim(), vb.size());
    for (std::size_t l = 0; l < vb.size(); ++l)
        for (std::size_t j = 0; j < b.dim(); ++j) kets(j, l) = vb[l][j];
    const auto scan = detail::max_overlap2(bras, kets);
    if (scan.max_modulus2 <= 0.0) throw NumericError("bound_pair_rank1: all overlaps vanish");

    BoundReport report;
    report.bound_name = "pair_rank1";
    report.overlap_exponent = convention;
    report.value_bits = detail::bits_from_overlap2(scan.max_modulus2, convention, 1.0);
    report.certificate.achieving_pair = scan.argmax;
    return report;
}

namespace detail {

struct ExtensionOverlapProblem {
    ComplexMatrix bras;  // rows: extension basis bras of the first POVM
    ComplexMatrix kets;  // columns: extension basis kets of the second POVM
    std::size_t system_dim = 0;
    std::size_t ancilla_dim = 0;

    ComplexMatrix transformed_kets(const ComplexMatrix& ancilla_unitary) const {
        ComplexMatrix full = embed_top_left(ComplexMatrix::identity(system_dim),
                                            system_dim + ancilla_dim);
        for (std::size_t i = 0; i < ancilla_dim; ++i)
            for (std::size_t j = 0; j < ancilla_dim; ++j)
                full(system_dim + i, system_dim + j) = ancilla_unitary(i, j);
        return full * kets;
    }

    OverlapScan scan_at(const ComplexMatrix& ancilla_unitary) const {
        return max_overlap2(bras, transformed_kets(ancilla_unitary));
    }

    double smoothed_max2(const ComplexMatrix& ancilla_unitary, double alpha) const {
        return log_sum_exp_max(all_overlap2(bras, transformed_kets(ancilla_unitary)), alpha);
    }
};

inline ExtensionOverlapProblem extension_overlaps(const NaimarkExtension& a,
                                                  const NaimarkExtension& b) {
    ExtensionOverlapProblem prob;
    prob.system_dim = a.system_dim;
    prob.ancilla_dim = a.ancilla_dim();
    prob.bras = a.basis.adjoint();
    prob.kets = b.basis;
    return prob;
}

}  // namespace detail

/// Exact bound value for one fixed ancilla unitary on the second extension.
inline BoundReport pair_naimark_value_at(const NaimarkExtension& ea, const NaimarkExtension& eb,
                                         const AncillaUnitary& u, int convention = 2) {
    detail::require_convention(convention);
    if (ea.ext_dim != eb.ext_dim || ea.system_dim != eb.system_dim) {
        throw DimensionError("pair_naimark_value_at: extensions are incompatible");
    }
    if (u.dim() != eb.ancilla_dim()) {
        throw DimensionError("pair_naimark_value_at: ancilla unitary dimension mismatch");
    }
    const auto prob = detail::extension_overlaps(ea, eb);
    const auto scan = prob.scan_at(u.matrix);
    BoundReport report;
    report.bound_name = "pair_naimark";
    report.overlap_exponent = convention;
    report.value_bits = detail::bits_from_overlap2(scan.max_modulus2, convention, 1.0);
    report.certificate.ancilla_unitary = u.matrix;
    report.certificate.achieving_pair = scan.argmax;
    return report;
}

inline BoundReport single_naimark_value_at(const NaimarkExtension& ext, const AncillaUnitary& u,
                                           int convention = 2) {
    BoundReport report = pair_naimark_value_at(ext, ext, u, convention);
    report.bound_name = "single_naimark";
    report.value_bits = detail::clamp_bound_bits(0.5 * report.value_bits);
    return report;
}

namespace detail {

/// Shared engine for the extension-overlap bounds: maximize the bound over
/// ancilla unitaries of the second extension, annealing a log-sum-exp
/// surrogate of the max overlap before polishing the exact objective.
inline BoundReport optimize_extension_bound(const NaimarkExtension& ea,
                                            const NaimarkExtension& eb, int convention,
                                            double prefactor, const std::string& name,
                                            const OptimizerConfig& config) {
    const auto prob = extension_overlaps(ea, eb);
    BoundReport report;
    report.bound_name = name;
    report.overlap_exponent = convention;
    if (prob.ancilla_dim == 0) {
        const auto scan = prob.scan_at(ComplexMatrix(0, 0));
        report.value_bits = bits_from_overlap2(scan.max_modulus2, convention, prefactor);
        report.certificate.achieving_pair = scan.argmax;
        return report;
    }
    const auto objective = [&](const ComplexMatrix& u) {
        return bits_from_overlap2(prob.scan_at(u).max_modulus2, convention, prefactor);
    };
    const auto smoothed = [&](const ComplexMatrix& u, double alpha) {
        // soft max of the squared moduli keeps the gradient alive near ties
        const double exponent = (convention == 1) ? 0.5 : 1.0;
        return -prefactor * exponent * std::log2(std::max(prob.smoothed_max2(u, alpha), 1e-300));
    };
    const auto opt = maximize_over_ancilla_unitaries(objective, prob.ancilla_dim, config, smoothed);
    const auto scan = prob.scan_at(opt.best_point);
    report.value_bits = clamp_bound_bits(opt.best_value);
    report.certificate.ancilla_unitary = opt.best_point;
    report.certificate.achieving_pair = scan.argmax;
    return report;
}

}  // namespace detail

/// H(a) + H(b) >= max over ancilla unitaries of the extension overlap bound.
/// Both POVMs must be rank 1 with the same outcome count so their minimal
/// extensions share one extended space; the unitary acts on b's ancilla.
inline BoundReport bound_pair_naimark(const Povm& a, const Povm& b, int convention = 2,
                                      const OptimizerConfig& config = {}) {
    detail::require_convention(convention);
    if (a.dim() != b.dim()) throw DimensionError("bound_pair_naimark: dimensions differ");
    if (a.size() != b.size()) {
        throw DomainError("bound_pair_naimark: outcome counts differ, extensions incompatible");
    }
    detail::rank1_vectors(a);
    detail::rank1_vectors(b);
    return detail::optimize_extension_bound(extend(a), extend(b), convention, 1.0,
                                            "pair_naimark", config);
}

/// Entropic bound for a single rank-1 POVM: two extensions of the same POVM
/// differing by an ancilla unitary, best case over the unitary. The max over
/// outcome pairs includes the diagonal.
inline BoundReport bound_single_naimark(const Povm& povm, int convention = 2,
                                        const OptimizerConfig& config = {}) {
    detail::require_convention(convention);
    detail::rank1_vectors(povm);
    const auto ext = extend(povm);
    return detail::optimize_extension_bound(ext, ext, convention, 0.5, "single_naimark", config);
}

/// Bound for the equal mixture of two non-degenerate projective measurements:
/// the coin contributes one full bit on top of the pair bound.
inline BoundReport bound_pvm_mixture(const Povm& a, const Povm& b) {
    if (a.dim() != b.dim()) throw DimensionError("bound_pvm_mixture: dimensions differ");
    if (!is_pvm(a) || a.size() != a.dim() || !is_pvm(b) || b.size() != b.dim()) {
        throw DomainError("bound_pvm_mixture: non-degenerate projective measurements required");
    }
    const BoundReport pair = bound_pair_rank1(a, b, 2);
    BoundReport report;
    report.bound_name = "pvm_mixture";
    report.overlap_exponent = 2;
    report.value_bits = detail::clamp_bound_bits(1.0 + 0.5 * pair.value_bits);
    report.certificate.achieving_pair = pair.certificate.achieving_pair;
    return report;
}

/// Numerical tightness probe: multi-start minimization of the outcome entropy
/// over pure states.
inline std::pair<QuantumState, double> min_entropy_over_states(const Povm& povm,
                                                               const OptimizerConfig& config = {}) {
    const auto& elements = povm.elements();
    const auto objective = [&](const std::vector<Complex>& psi) {
        double h = 0.0;
        for (const auto& m : elements) {
            const double p = std::max(0.0, quadratic_form(m, psi));
            if (p > 1e-15) h -= p * std::log2(p);
        }
        return h;
    };
    const auto opt = minimize_over_pure_states(objective, povm.dim(), config);
    return {QuantumState::pure(opt.best_point), opt.best_value};
}

}  // namespace povmkit
