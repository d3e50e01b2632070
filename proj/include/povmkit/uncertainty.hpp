#pragma once

#include <string>
#include <utility>
#include <vector>

#include "povmkit/naimark.hpp"
#include "povmkit/povm.hpp"

namespace povmkit {

inline ComplexMatrix mean_operator(const ValuedPovm& vp) {
    ComplexMatrix m(vp.dim(), vp.dim());
    for (std::size_t k = 0; k < vp.size(); ++k) {
        m += vp.povm().elements()[k] * vp.values()[k];
    }
    return m;
}

struct UncertaintyReport {
    ComplexMatrix mean_operator;
    ComplexMatrix uncertainty_operator;
    double min_eigenvalue = 0.0;
    double trace = 0.0;  // equals the minimal operator distance to the POVM
};

/// The noise a POVM adds beyond a projective measurement of its mean
/// operator: sum_k mu_k^2 m_k - M^2. Cross-checked against the manifestly
/// positive form sum_k (M - mu_k) m_k (M - mu_k); disagreement beyond
/// tolerance means a broken input and throws.
inline UncertaintyReport uncertainty_operator(const ValuedPovm& vp,
                                              double cross_check_tol = kOrthoTol) {
    const std::size_t d = vp.dim();
    const ComplexMatrix m = mean_operator(vp);
    ComplexMatrix second_moment(d, d);
    for (std::size_t k = 0; k < vp.size(); ++k) {
        second_moment += vp.povm().elements()[k] * (vp.values()[k] * vp.values()[k]);
    }
    const ComplexMatrix delta = second_moment - m * m;

    ComplexMatrix positive_form(d, d);
    const ComplexMatrix id = ComplexMatrix::identity(d);
    for (std::size_t k = 0; k < vp.size(); ++k) {
        const ComplexMatrix shifted = m - id * vp.values()[k];
        positive_form += shifted * vp.povm().elements()[k] * shifted;
    }
    if (max_abs_diff(delta, positive_form) > cross_check_tol) {
        throw NumericError("uncertainty_operator: the two closed forms disagree");
    }

    UncertaintyReport report;
    report.mean_operator = m;
    report.uncertainty_operator = delta;
    report.min_eigenvalue = min_eigenvalue(delta);
    report.trace = delta.trace().real();
    return report;
}

struct VarianceDecomposition {
    double total = 0.0;            // Var(mu) from the outcome distribution
    double mean_value = 0.0;       // mu_bar
    double projective_part = 0.0;  // <M^2> - mu_bar^2
    double povm_excess = 0.0;      // <Delta M^2>
};

/// Variance of the outcome values split into the projective part and the
/// POVM excess. The split must reproduce the directly computed total.
inline VarianceDecomposition variance(const ValuedPovm& vp, const QuantumState& state,
                                      double identity_tol = kOrthoTol) {
    const OutcomeDistribution dist = outcome_distribution(vp.povm(), state);
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t k = 0; k < vp.size(); ++k) {
        mean += vp.values()[k] * dist.probabilities[k];
        second += vp.values()[k] * vp.values()[k] * dist.probabilities[k];
    }
    const UncertaintyReport u = uncertainty_operator(vp);

    VarianceDecomposition out;
    out.total = second - mean * mean;
    out.mean_value = mean;
    out.projective_part = state.expectation(u.mean_operator * u.mean_operator) - mean * mean;
    out.povm_excess = state.expectation(u.uncertainty_operator);
    if (std::abs(out.total - out.projective_part - out.povm_excess) > identity_tol) {
        throw NumericError("variance: decomposition identity violated");
    }
    return out;
}

struct PropertyCheck {
    std::string id;
    std::string status;  // "pass", "fail", "not-applicable", "delegated"
    double metric = 0.0;
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;

    bool all_ok() const {
        for (const auto& c : checks)
            if (c.status == "fail") return false;
        return true;
    }
};

/// Structural properties of the uncertainty operator for one valued POVM.
///   positivity            min eigenvalue of Delta >= -1e-9
///   pvm_vanishing         Delta = 0 for projective measurements (1e-10)
///   strict_positivity     a delta valuation on the first non-projector
///                         element witnesses Delta != 0 (> 1e-6)
///   classical_reduction   elements proportional to the identity reduce to a
///                         classical variance (1e-10)
/// Tensor additivity and convex mixing are covered by the dedicated residual
/// checks and only referenced here.
inline PropertyReport property_report(const ValuedPovm& vp, double tol = kValidationTol) {
    PropertyReport report;
    const UncertaintyReport u = uncertainty_operator(vp);
    const bool pvm = is_pvm(vp.povm(), tol);
    const std::size_t d = vp.dim();

    report.checks.push_back({"positivity", u.min_eigenvalue >= -1e-9 ? "pass" : "fail",
                             u.min_eigenvalue, "min eigenvalue of the uncertainty operator"});

    if (pvm) {
        const double norm = u.uncertainty_operator.max_abs();
        report.checks.push_back({"pvm_vanishing", norm <= 1e-10 ? "pass" : "fail", norm,
                                 "uncertainty operator of a projective measurement"});
        report.checks.push_back({"strict_positivity", "not-applicable", 0.0, ""});
    } else {
        report.checks.push_back({"pvm_vanishing", "not-applicable", 0.0, ""});
        std::size_t witness = vp.size();
        for (std::size_t k = 0; k < vp.size(); ++k) {
            const ComplexMatrix& m = vp.povm().elements()[k];
            if (max_abs_diff(m * m, m) > tol) {
                witness = k;
                break;
            }
        }
        if (witness == vp.size()) {
            // every element idempotent yet not a PVM: orthogonality failed
            report.checks.push_back({"strict_positivity", "fail", 0.0,
                                     "no non-projector element found"});
        } else {
            std::vector<double> delta_values(vp.size(), 0.0);
            delta_values[witness] = 1.0;
            const UncertaintyReport w =
                uncertainty_operator(ValuedPovm(vp.povm(), delta_values));
            const double norm = eigen(w.uncertainty_operator).values.back();
            report.checks.push_back({"strict_positivity", norm > 1e-6 ? "pass" : "fail", norm,
                                     "witness valuation on element " +
                                         vp.povm().labels()[witness]});
        }
    }

    bool classical = true;
    double classical_var = 0.0;
    {
        double mean = 0.0, second = 0.0;
        for (std::size_t k = 0; k < vp.size(); ++k) {
            const ComplexMatrix& m = vp.povm().elements()[k];
            const double c = m.trace().real() / static_cast<double>(d);
            if (max_abs_diff(m, ComplexMatrix::identity(d) * c) > tol) {
                classical = false;
                break;
            }
            mean += c * vp.values()[k];
            second += c * vp.values()[k] * vp.values()[k];
        }
        classical_var = second - mean * mean;
    }
    if (classical) {
        const double res = max_abs_diff(u.uncertainty_operator,
                                        ComplexMatrix::identity(d) * classical_var);
        report.checks.push_back({"classical_reduction", res <= 1e-10 ? "pass" : "fail", res,
                                 "scalar elements reduce to a classical variance"});
    } else {
        report.checks.push_back({"classical_reduction", "not-applicable", 0.0, ""});
    }

    report.checks.push_back({"tensor_additivity", "delegated", 0.0, "check_tensor_additivity"});
    report.checks.push_back({"convex_combination", "delegated", 0.0, "check_convex_combination"});
    return report;
}

/// Residual of Delta(M (x) N)^2 = Delta M^2 (x) 1 + 1 (x) Delta N^2 for the
/// product measurement of a and b.
inline double check_tensor_additivity(const ValuedPovm& a, const ValuedPovm& b) {
    const ValuedPovm prod = tensor_povm(a, b);
    const ComplexMatrix lhs = uncertainty_operator(prod).uncertainty_operator;
    const ComplexMatrix rhs =
        tensor(uncertainty_operator(a).uncertainty_operator, ComplexMatrix::identity(b.dim())) +
        tensor(ComplexMatrix::identity(a.dim()), uncertainty_operator(b).uncertainty_operator);
    return max_abs_diff(lhs, rhs);
}

/// Residual of Delta(pM + qN)^2 = p Delta M^2 + q Delta N^2 + pq (M - N)^2.
inline double check_convex_combination(double p, const ValuedPovm& a, const ValuedPovm& b) {
    const double q = 1.0 - p;
    const ValuedPovm mixed = mix(p, a, b);
    const ComplexMatrix lhs = uncertainty_operator(mixed).uncertainty_operator;
    const ComplexMatrix gap = mean_operator(a) - mean_operator(b);
    const ComplexMatrix rhs = uncertainty_operator(a).uncertainty_operator * p +
                              uncertainty_operator(b).uncertainty_operator * q +
                              gap * gap * (p * q);
    return max_abs_diff(lhs, rhs);
}

/// Operator distance tr[P (M_E - A)^2 P] from a Hermitian system operator A
/// to the measurement realized by the extension. Minimized by the mean
/// operator, where it equals tr Delta M^2.
inline double distance_to_povm(const ComplexMatrix& a, const NaimarkExtension& ext,
                               const std::vector<double>& values) {
    if (a.rows() != ext.system_dim || a.cols() != ext.system_dim) {
        throw DimensionError("distance_to_povm: operator must act on the system space");
    }
    const ComplexMatrix diff = extended_operator(ext, values) - embed_top_left(a, ext.ext_dim);
    const ComplexMatrix sq = diff * diff;
    double tr = 0.0;
    for (std::size_t i = 0; i < ext.system_dim; ++i) tr += sq(i, i).real();
    return tr;
}

/// <psi|(M_E - A)^2|psi> for a state supported on the system space.
inline double statistical_distance(const ComplexMatrix& a, const NaimarkExtension& ext,
                                   const std::vector<double>& values, const QuantumState& state) {
    if (a.rows() != ext.system_dim || a.cols() != ext.system_dim) {
        throw DimensionError("statistical_distance: operator must act on the system space");
    }
    if (state.dim() != ext.system_dim) {
        throw DimensionError("statistical_distance: state must live on the system space");
    }
    const ComplexMatrix diff = extended_operator(ext, values) - embed_top_left(a, ext.ext_dim);
    const ComplexMatrix sq = diff * diff;
    if (state.is_pure()) {
        std::vector<Complex> embedded(ext.ext_dim, Complex(0.0, 0.0));
        const auto& amps = state.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) embedded[i] = amps[i];
        return quadratic_form(sq, embedded);
    }
    const ComplexMatrix rho = embed_top_left(state.density_matrix(), ext.ext_dim);
    return (rho * sq).trace().real();
}

}  // namespace povmkit
