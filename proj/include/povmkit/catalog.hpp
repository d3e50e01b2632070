#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "povmkit/naimark.hpp"
#include "povmkit/qubit_joint.hpp"

namespace povmkit {

/// A built-in measurement family instance: the POVM, every named valuation,
/// and (where one exists in closed form) a reference Naimark extension.
struct CatalogEntry {
    std::string name;
    std::map<std::string, double> parameters;
    Povm povm;
    std::map<std::string, std::vector<double>> value_maps;
    std::string default_value_map;
    std::optional<NaimarkExtension> reference_extension;

    ValuedPovm valued() const { return ValuedPovm(povm, value_maps.at(default_value_map)); }
    ValuedPovm valued(const std::string& map_name) const {
        const auto it = value_maps.find(map_name);
        if (it == value_maps.end()) {
            throw DomainError("unknown value map: " + map_name);
        }
        return ValuedPovm(povm, it->second);
    }
};

inline std::vector<std::string> catalog_names() {
    return {"mzx", "pvm-x", "pvm-z", "tetrahedron", "trine"};
}

namespace detail {

inline NaimarkExtension trivial_extension(const Povm& pvm_input) {
    return extend(pvm_input);
}

/// Symmetric-subspace coordinates of |u>|u> for a qubit u, in the fixed basis
/// {|uu>, (|ud> + |du>)/sqrt(2), |dd>}.
inline std::vector<Complex> symmetric_pair_state(const Complex& u0, const Complex& u1) {
    return {u0 * u0, std::sqrt(2.0) * u0 * u1, u1 * u1};
}

inline CatalogEntry build_tetrahedron() {
    constexpr double kPi = 3.14159265358979323846;
    const double r3 = std::sqrt(3.0);

    std::vector<std::vector<Complex>> dirs;
    dirs.push_back(symmetric_pair_state(1.0, 0.0));
    for (int j = 1; j <= 3; ++j) {
        const Complex phase = std::polar(1.0, 2.0 * kPi * j / 3.0);
        dirs.push_back(symmetric_pair_state(Complex(1.0 / r3, 0.0),
                                            phase * (std::sqrt(2.0) / r3)));
    }

    std::vector<ComplexMatrix> elements;
    std::vector<std::string> labels;
    for (int j = 0; j < 4; ++j) {
        elements.push_back(ComplexMatrix::outer(dirs[j]) * 0.75);
        labels.push_back("t" + std::to_string(j));
    }

    CatalogEntry entry{
        "tetrahedron", {}, Povm(3, std::move(elements), std::move(labels)),
        {{"index", {0.0, 1.0, 2.0, 3.0}}}, "index", std::nullopt};

    // Closed-form extension: system part (sqrt(3)/2) |dir_j>, ancilla
    // component +1/2 for outcome 0 and -1/2 for the rest.
    NaimarkExtension ref;
    ref.system_dim = 3;
    ref.ext_dim = 4;
    ref.basis = ComplexMatrix(4, 4);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 3; ++i) ref.basis(i, j) = dirs[j][i] * (r3 / 2.0);
        ref.basis(3, j) = (j == 0) ? 0.5 : -0.5;
    }
    entry.reference_extension = ref;
    return entry;
}

}  // namespace detail

/// Build a catalog measurement by name. The mzx family takes a "theta"
/// parameter in radians; every other entry takes none.
inline CatalogEntry catalog_build(const std::string& name,
                                  const std::map<std::string, double>& parameters = {}) {
    const auto require_no_params = [&]() {
        if (!parameters.empty()) {
            throw DomainError("catalog entry '" + name + "' takes no parameters");
        }
    };

    if (name == "pvm-z") {
        require_no_params();
        Povm p(2, {ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0})},
               {"+z", "-z"});
        CatalogEntry entry{name, {}, p, {{"Z", {1.0, -1.0}}}, "Z", std::nullopt};
        entry.reference_extension = detail::trivial_extension(entry.povm);
        return entry;
    }
    if (name == "pvm-x") {
        require_no_params();
        const double r = 1.0 / std::sqrt(2.0);
        const std::vector<Complex> plus = {r, r};
        const std::vector<Complex> minus = {r, -r};
        Povm p(2, {ComplexMatrix::outer(plus), ComplexMatrix::outer(minus)}, {"+x", "-x"});
        CatalogEntry entry{name, {}, p, {{"X", {1.0, -1.0}}}, "X", std::nullopt};
        entry.reference_extension = detail::trivial_extension(entry.povm);
        return entry;
    }
    if (name == "mzx") {
        const auto it = parameters.find("theta");
        if (it == parameters.end()) throw DomainError("catalog entry 'mzx' requires theta");
        if (parameters.size() != 1) throw DomainError("catalog entry 'mzx' takes only theta");
        const JointQubitPovm joint = build_mzx(it->second);
        return CatalogEntry{name,
                            {{"theta", it->second}},
                            joint.povm(),
                            {{"X", {1.0, -1.0, 1.0, -1.0}}, {"Z", {1.0, 1.0, -1.0, -1.0}}},
                            "Z",
                            std::nullopt};
    }
    if (name == "trine") {
        require_no_params();
        constexpr double kPi = 3.14159265358979323846;
        std::vector<ComplexMatrix> elements;
        for (int k = 0; k < 3; ++k) {
            const double a = 2.0 * kPi * k / 3.0;
            const std::vector<Complex> e = {std::cos(a), std::sin(a)};
            elements.push_back(ComplexMatrix::outer(e) * (2.0 / 3.0));
        }
        return CatalogEntry{name,
                            {},
                            Povm(2, std::move(elements), {"e0", "e1", "e2"}),
                            {{"indicator", {1.0, 0.0, 0.0}}, {"index", {0.0, 1.0, 2.0}}},
                            "indicator",
                            std::nullopt};
    }
    if (name == "tetrahedron") {
        require_no_params();
        return detail::build_tetrahedron();
    }
    throw DomainError("unknown catalog entry: " + name);
}

struct ReferenceExtensionCheck {
    double orthonormality_residual = 0.0;
    double restriction_residual = 0.0;
    double alignment_residual = 0.0;
};

/// Verify a catalog entry's closed-form extension: orthonormality, that the
/// system restriction reproduces the POVM, and that some ancilla unitary maps
/// the constructed extension onto the reference (after matching the per
/// outcome phases of the system parts).
inline ReferenceExtensionCheck verify_reference_extension(
    const std::string& name, const std::map<std::string, double>& parameters = {}) {
    const CatalogEntry entry = catalog_build(name, parameters);
    if (!entry.reference_extension) {
        throw DomainError("catalog entry '" + name + "' has no reference extension");
    }
    const NaimarkExtension& ref = *entry.reference_extension;
    ReferenceExtensionCheck check;

    check.orthonormality_residual =
        max_abs_diff(ref.basis.adjoint() * ref.basis, ComplexMatrix::identity(ref.ext_dim));

    const auto pieces = rank1_pieces(entry.povm, {});
    if (pieces.size() != ref.ext_dim) {
        throw NumericError("reference extension has the wrong outcome count");
    }
    for (std::size_t k = 0; k < ref.ext_dim; ++k) {
        const auto s = ref.system_part(k);
        check.restriction_residual =
            std::max(check.restriction_residual,
                     max_abs_diff(ComplexMatrix::outer(s), entry.povm.elements()[k]));
    }

    // Align the construction with the reference: per-outcome phases from the
    // system parts, then the ancilla unitary u = B A^dagger.
    const NaimarkExtension mine = extend(entry.povm);
    const std::size_t adim = ref.ancilla_dim();
    std::vector<std::vector<Complex>> phased_anc(ref.ext_dim);
    double residual = 0.0;
    std::vector<Complex> phases(ref.ext_dim);
    for (std::size_t k = 0; k < ref.ext_dim; ++k) {
        const auto sm = mine.system_part(k);
        const auto sr = ref.system_part(k);
        const Complex inner = vec_dot(sm, sr);
        const double mag = std::abs(inner);
        const Complex phase = (mag > 0.0) ? inner / mag : Complex(1.0, 0.0);
        phases[k] = phase;
        for (std::size_t i = 0; i < ref.system_dim; ++i) {
            residual = std::max(residual, std::abs(sm[i] * phase - sr[i]));
        }
        auto anc = mine.ancilla_part(k);
        for (auto& c : anc) c *= phase;
        phased_anc[k] = std::move(anc);
    }
    if (adim > 0) {
        ComplexMatrix a(adim, ref.ext_dim), b(adim, ref.ext_dim);
        for (std::size_t k = 0; k < ref.ext_dim; ++k) {
            const auto anc_ref = ref.ancilla_part(k);
            for (std::size_t i = 0; i < adim; ++i) {
                a(i, k) = phased_anc[k][i];
                b(i, k) = anc_ref[i];
            }
        }
        const ComplexMatrix u = b * a.adjoint();
        residual = std::max(residual, max_abs_diff(u * u.adjoint(),
                                                   ComplexMatrix::identity(adim)));
        residual = std::max(residual, max_abs_diff(u * a, b));
    }
    check.alignment_residual = residual;
    return check;
}

}  // namespace povmkit
