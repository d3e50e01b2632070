#pragma once

#include <array>
#include <optional>
#include <string>

#include "povmkit/qubit.hpp"
#include "povmkit/uncertainty.hpp"

namespace povmkit {

/// Four-outcome qubit measurement m_zx = 1/4 + v_zx . sigma that jointly
/// estimates the z and x spin components. Unbiased by construction: on the
/// maximally mixed state every outcome has probability 1/4. Outcome order is
/// ++, +-, -+, -- in (z, x).
struct JointQubitPovm {
    std::array<BlochVector, 4> vectors;

    static constexpr std::array<const char*, 4> kLabels = {"++", "+-", "-+", "--"};
    static constexpr std::array<int, 4> kZSigns = {+1, +1, -1, -1};
    static constexpr std::array<int, 4> kXSigns = {+1, -1, +1, -1};

    Povm povm() const {
        std::vector<ComplexMatrix> elements;
        std::vector<std::string> labels;
        const ComplexMatrix quarter = ComplexMatrix::identity(2) * 0.25;
        for (std::size_t k = 0; k < 4; ++k) {
            elements.push_back(quarter + bloch_operator(vectors[k]));
            labels.emplace_back(kLabels[k]);
        }
        return Povm(2, std::move(elements), std::move(labels));
    }

    ValuedPovm z_valued() const {
        return ValuedPovm(povm(), {+1.0, +1.0, -1.0, -1.0});
    }

    ValuedPovm x_valued() const {
        return ValuedPovm(povm(), {+1.0, -1.0, +1.0, -1.0});
    }
};

/// The one-parameter family v_zx = (x sin(theta), 0, z cos(theta)) / 4.
inline JointQubitPovm build_mzx(double theta) {
    const double c = std::cos(theta) / 4.0;
    const double s = std::sin(theta) / 4.0;
    JointQubitPovm p;
    for (std::size_t k = 0; k < 4; ++k) {
        p.vectors[k] = BlochVector{JointQubitPovm::kXSigns[k] * s, 0.0,
                                   JointQubitPovm::kZSigns[k] * c};
    }
    return p;
}

/// Validate an arbitrary unbiased quadruple: each |v| <= 1/4 and the four
/// vectors sum to zero. Violations throw naming every failed condition.
inline JointQubitPovm build_unbiased(const std::array<BlochVector, 4>& vectors) {
    std::string failures;
    for (std::size_t k = 0; k < 4; ++k) {
        if (vectors[k].norm() > 0.25 + 1e-12) {
            failures += std::string(failures.empty() ? "" : "; ") + "|v_" +
                        JointQubitPovm::kLabels[k] + "| exceeds 1/4";
        }
    }
    const BlochVector sum = vectors[0] + vectors[1] + vectors[2] + vectors[3];
    if (sum.norm() > 1e-12) {
        failures += std::string(failures.empty() ? "" : "; ") + "vectors do not sum to zero";
    }
    if (!failures.empty()) throw DomainError("unbiased joint POVM rejected: " + failures);
    return JointQubitPovm{vectors};
}

struct FaithfulReport {
    bool faithful = false;
    std::array<std::string, 4> outcome_status;  // "ok", "wrong-sign", "boundary"
};

/// A joint estimate is faithful when every v_zx points strictly into its
/// outcome's (z, x) quadrant. A vanishing component is reported as a
/// boundary case and counts as unfaithful.
inline FaithfulReport faithful_check(const JointQubitPovm& p) {
    FaithfulReport report;
    report.faithful = true;
    for (std::size_t k = 0; k < 4; ++k) {
        const double zc = JointQubitPovm::kZSigns[k] * p.vectors[k].z;
        const double xc = JointQubitPovm::kXSigns[k] * p.vectors[k].x;
        if (zc == 0.0 || xc == 0.0) {
            report.outcome_status[k] = "boundary";
            report.faithful = false;
        } else if (zc < 0.0 || xc < 0.0) {
            report.outcome_status[k] = "wrong-sign";
            report.faithful = false;
        } else {
            report.outcome_status[k] = "ok";
        }
    }
    return report;
}

struct JointAnalysis {
    ComplexMatrix z_operator;
    ComplexMatrix x_operator;
    ComplexMatrix delta_z2;
    ComplexMatrix delta_x2;
    double sum_min_eigenvalue = 0.0;
    double ddd_rhs = 0.0;  // 2 - 2|v++ - v--|^2 - 2|v+- - v-+|^2
    double identity_residual = 0.0;
};

/// Uncertainty operators of the z and x estimates. Unbiasedness forces
/// Delta Z^2 + Delta X^2 to be rhs times the identity with rhs >= 1; both
/// facts are recomputed and enforced here.
inline JointAnalysis analyze(const JointQubitPovm& p) {
    const auto uz = uncertainty_operator(p.z_valued());
    const auto ux = uncertainty_operator(p.x_valued());

    JointAnalysis a;
    a.z_operator = uz.mean_operator;
    a.x_operator = ux.mean_operator;
    a.delta_z2 = uz.uncertainty_operator;
    a.delta_x2 = ux.uncertainty_operator;

    const BlochVector d1 = p.vectors[0] - p.vectors[3];  // v++ - v--
    const BlochVector d2 = p.vectors[1] - p.vectors[2];  // v+- - v-+
    a.ddd_rhs = 2.0 - 2.0 * d1.dot(d1) - 2.0 * d2.dot(d2);

    const ComplexMatrix sum = a.delta_z2 + a.delta_x2;
    a.identity_residual = max_abs_diff(sum, ComplexMatrix::identity(2) * a.ddd_rhs);
    if (a.identity_residual > 1e-10) {
        throw NumericError("analyze: uncertainty sum is not the expected multiple of 1");
    }
    a.sum_min_eigenvalue = min_eigenvalue(sum);
    if (a.sum_min_eigenvalue < 1.0 - 1e-9) {
        throw NumericError("analyze: uncertainty sum dropped below 1");
    }
    return a;
}

/// Var(Z) + Var(X) on a state, both through the direct outcome statistics.
inline double variance_sum(const JointQubitPovm& p, const QuantumState& state) {
    return variance(p.z_valued(), state).total + variance(p.x_valued(), state).total;
}

struct OptimalityReport {
    bool pair_pp_mm_antipodal = false;
    bool pair_pm_mp_antipodal = false;
    bool radii_quarter = false;
    bool conditions_hold = false;
    double pair_pp_mm_residual = 0.0;
    double pair_pm_mp_residual = 0.0;
    double radius_residual = 0.0;
    double operator_sum_residual = 0.0;  // distance of Delta Z^2 + Delta X^2 from 1
    bool operator_sum_is_identity = false;
    bool realization_built = false;
    double realization_residual = 0.0;
};

/// The least-noise joint estimates: antipodal outcome pairs at Bloch radius
/// exactly 1/4. When the conditions hold the POVM is rebuilt as an equal
/// mixture of two projective spin measurements and compared elementwise.
inline OptimalityReport optimality_check(const JointQubitPovm& p, double tol = kValidationTol) {
    OptimalityReport report;
    report.pair_pp_mm_residual = (p.vectors[0] + p.vectors[3]).norm();
    report.pair_pm_mp_residual = (p.vectors[1] + p.vectors[2]).norm();
    report.radius_residual = 0.0;
    for (const auto& v : p.vectors) {
        report.radius_residual = std::max(report.radius_residual, std::abs(v.norm() - 0.25));
    }
    report.pair_pp_mm_antipodal = report.pair_pp_mm_residual <= tol;
    report.pair_pm_mp_antipodal = report.pair_pm_mp_residual <= tol;
    report.radii_quarter = report.radius_residual <= tol;
    report.conditions_hold =
        report.pair_pp_mm_antipodal && report.pair_pm_mp_antipodal && report.radii_quarter;

    const auto analysis = analyze(p);
    report.operator_sum_residual = max_abs_diff(analysis.delta_z2 + analysis.delta_x2,
                                                ComplexMatrix::identity(2));
    report.operator_sum_is_identity = report.operator_sum_residual <= tol;

    if (report.conditions_hold) {
        const double r0 = p.vectors[0].norm();
        const double r1 = p.vectors[1].norm();
        const auto first = pvm_along(p.vectors[0] * (1.0 / r0));
        const auto second = pvm_along(p.vectors[1] * (1.0 / r1));
        const auto mixture = mix(0.5, first, second);
        // branch order: first+, first-, second+, second- maps to ++, --, +-, -+
        const auto target = p.povm();
        const std::size_t map[4] = {0, 3, 1, 2};
        double res = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            res = std::max(res, max_abs_diff(mixture.povm().elements()[k],
                                             target.elements()[map[k]]));
        }
        report.realization_built = true;
        report.realization_residual = res;
    }
    return report;
}

/// Uniform-ish sampler over valid unbiased quadruples: independent draws in
/// the radius-1/4 ball, projected onto the zero-sum hyperplane, then rescaled
/// as a whole if any vector pokes out. Degenerate draws are resampled.
inline JointQubitPovm random_unbiased(Rng& rng) {
    for (;;) {
        std::array<BlochVector, 4> v;
        for (auto& w : v) {
            // rejection sample the ball
            for (;;) {
                w = BlochVector{rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25),
                                rng.uniform(-0.25, 0.25)};
                if (w.norm() <= 0.25) break;
            }
        }
        const BlochVector mean = (v[0] + v[1] + v[2] + v[3]) * 0.25;
        double max_norm = 0.0;
        for (auto& w : v) {
            w = w - mean;
            max_norm = std::max(max_norm, w.norm());
        }
        if (max_norm < 1e-12) continue;
        if (max_norm > 0.25) {
            const double scale = 0.25 / max_norm;
            for (auto& w : v) w = w * scale;
        }
        return JointQubitPovm{v};
    }
}

}  // namespace povmkit
