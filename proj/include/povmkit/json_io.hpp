#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "povmkit/catalog.hpp"
#include "povmkit/entropy.hpp"
#include "povmkit/naimark.hpp"
#include "povmkit/povm.hpp"
#include "povmkit/uncertainty.hpp"
#include "povmkit/version.hpp"

namespace povmkit {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x, int significant_digits) {
    if (x == 0.0) return "0";  // collapse the sign of zero so round-trips are stable
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, x);
    return buf;
}

namespace detail {

inline void escape_json_string(const std::string& s, std::string& out) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

inline void dump_json_impl(const Json& j, int sig, int indent, std::string& out) {
    const std::string pad(2 * indent, ' ');
    const std::string pad_in(2 * (indent + 1), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                escape_json_string(key, out);
                out += ": ";
                dump_json_impl(value, sig, indent + 1, out);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // flat arrays of numbers stay on one line
            bool scalars_only = true;
            for (const auto& v : j) {
                if (v.is_structured()) {
                    scalars_only = false;
                    break;
                }
            }
            if (scalars_only) {
                out += "[";
                bool first = true;
                for (const auto& v : j) {
                    if (!first) out += ", ";
                    first = false;
                    dump_json_impl(v, sig, indent, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_json_impl(v, sig, indent + 1, out);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::string:
            escape_json_string(j.get_ref<const std::string&>(), out);
            return;
        case Json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        case Json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            return;
        case Json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            return;
        case Json::value_t::number_float:
            out += format_double(j.get<double>(), sig);
            return;
        default:
            out += "null";
            return;
    }
}

}  // namespace detail

/// Deterministic serializer: insertion-ordered keys, floats printed with a
/// fixed number of significant digits (17 round-trips doubles exactly).
inline std::string dump_json(const Json& j, int significant_digits = 17) {
    std::string out;
    detail::dump_json_impl(j, significant_digits, 0, out);
    out += "\n";
    return out;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json state_to_json(const std::vector<Complex>& psi) {
    Json arr = Json::array();
    for (const auto& c : psi) arr.push_back(Json::array({c.real(), c.imag()}));
    return arr;
}

/// The shared POVM document: dimension, labels, row-major elements as
/// [re, im] pairs, and any number of named outcome valuations.
struct PovmDocument {
    std::size_t dim = 0;
    std::vector<std::string> labels;
    std::vector<ComplexMatrix> elements;
    std::map<std::string, std::vector<double>> values;
    std::string name;                           // optional
    std::map<std::string, double> parameters;   // optional
};

namespace detail {

inline double number_at(const Json& j, const char* where) {
    if (!j.is_number()) throw ParseError(std::string("expected a number at ") + where);
    return j.get<double>();
}

inline ComplexMatrix matrix_from_json(const Json& j, std::size_t dim, const char* where) {
    if (!j.is_array() || j.size() != dim) {
        throw ParseError(std::string("element at ") + where + " must have " +
                         std::to_string(dim) + " rows");
    }
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != dim) {
            throw ParseError(std::string("element row at ") + where + " has the wrong length");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            const Json& pair = row[c];
            if (!pair.is_array() || pair.size() != 2) {
                throw ParseError(std::string("entries at ") + where + " must be [re, im] pairs");
            }
            m(r, c) = Complex(number_at(pair[0], where), number_at(pair[1], where));
        }
    }
    return m;
}

}  // namespace detail

inline PovmDocument document_from_json(const Json& root) {
    if (!root.is_object()) throw ParseError("POVM document must be a JSON object");
    if (!root.contains("dim") || !root["dim"].is_number_integer() ||
        root["dim"].get<long long>() <= 0) {
        throw ParseError("POVM document needs a positive integer \"dim\"");
    }
    if (!root.contains("elements") || !root["elements"].is_array() ||
        root["elements"].empty()) {
        throw ParseError("POVM document needs a non-empty \"elements\" array");
    }
    PovmDocument doc;
    doc.dim = root["dim"].get<std::size_t>();
    const auto& els = root["elements"];
    for (std::size_t k = 0; k < els.size(); ++k) {
        doc.elements.push_back(
            detail::matrix_from_json(els[k], doc.dim, ("elements[" + std::to_string(k) + "]").c_str()));
    }
    if (root.contains("labels")) {
        if (!root["labels"].is_array() || root["labels"].size() != doc.elements.size()) {
            throw ParseError("\"labels\" must list one string per element");
        }
        for (const auto& l : root["labels"]) {
            if (!l.is_string()) throw ParseError("\"labels\" must list one string per element");
            doc.labels.push_back(l.get<std::string>());
        }
    } else {
        for (std::size_t k = 0; k < doc.elements.size(); ++k) {
            doc.labels.push_back("m" + std::to_string(k));
        }
    }
    if (root.contains("values")) {
        if (!root["values"].is_object()) {
            throw ParseError("\"values\" must map names to value lists");
        }
        for (const auto& [name, list] : root["values"].items()) {
            if (!list.is_array() || list.size() != doc.elements.size()) {
                throw ParseError("value map \"" + name + "\" must list one value per element");
            }
            std::vector<double> vs;
            for (const auto& v : list) vs.push_back(detail::number_at(v, name.c_str()));
            doc.values[name] = std::move(vs);
        }
    }
    if (root.contains("name")) {
        if (!root["name"].is_string()) throw ParseError("\"name\" must be a string");
        doc.name = root["name"].get<std::string>();
    }
    if (root.contains("parameters")) {
        if (!root["parameters"].is_object()) throw ParseError("\"parameters\" must be an object");
        for (const auto& [key, v] : root["parameters"].items()) {
            doc.parameters[key] = detail::number_at(v, key.c_str());
        }
    }
    return doc;
}

inline PovmDocument document_from_json_text(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return document_from_json(root);
}

inline Json document_to_json(const PovmDocument& doc) {
    Json root;
    if (!doc.name.empty()) root["name"] = doc.name;
    if (!doc.parameters.empty()) {
        Json params;
        for (const auto& [key, v] : doc.parameters) params[key] = v;
        root["parameters"] = std::move(params);
    }
    root["dim"] = doc.dim;
    Json labels = Json::array();
    for (const auto& l : doc.labels) labels.push_back(l);
    root["labels"] = std::move(labels);
    Json elements = Json::array();
    for (const auto& m : doc.elements) elements.push_back(matrix_to_json(m));
    root["elements"] = std::move(elements);
    if (!doc.values.empty()) {
        Json values;
        for (const auto& [name, vs] : doc.values) {
            Json list = Json::array();
            for (double v : vs) list.push_back(v);
            values[name] = std::move(list);
        }
        root["values"] = std::move(values);
    }
    return root;
}

inline PovmDocument document_from_catalog(const CatalogEntry& entry) {
    PovmDocument doc;
    doc.dim = entry.povm.dim();
    doc.labels = entry.povm.labels();
    doc.elements = entry.povm.elements();
    doc.values = entry.value_maps;
    doc.name = entry.name;
    doc.parameters = entry.parameters;
    return doc;
}

inline Povm to_povm(const PovmDocument& doc, double tol = kValidationTol) {
    return Povm(doc.dim, doc.elements, doc.labels, tol);
}

inline ValuedPovm to_valued(const PovmDocument& doc, const std::string& value_name,
                            double tol = kValidationTol) {
    const auto it = doc.values.find(value_name);
    if (it == doc.values.end()) {
        throw DomainError("document has no value map named \"" + value_name + "\"");
    }
    return ValuedPovm(to_povm(doc, tol), it->second);
}

/// State document: {"pure": [[re,im], ...]} or {"density": [[[re,im],...],...]}.
inline QuantumState state_from_json_text(const std::string& text, std::size_t expected_dim) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid state JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("state must be a JSON object");
    if (root.contains("pure")) {
        const Json& arr = root["pure"];
        if (!arr.is_array() || arr.size() != expected_dim) {
            throw ParseError("\"pure\" must list one [re, im] pair per dimension");
        }
        std::vector<Complex> psi;
        for (const auto& pair : arr) {
            if (!pair.is_array() || pair.size() != 2) {
                throw ParseError("state amplitudes must be [re, im] pairs");
            }
            psi.emplace_back(detail::number_at(pair[0], "pure"),
                             detail::number_at(pair[1], "pure"));
        }
        return QuantumState::pure(std::move(psi));
    }
    if (root.contains("density")) {
        return QuantumState::density(
            detail::matrix_from_json(root["density"], expected_dim, "density"));
    }
    throw ParseError("state needs a \"pure\" or \"density\" field");
}

/// Joint-estimate input: either the compact Bloch form
/// {"bloch": {"++": [x,y,z], "+-": ..., "-+": ..., "--": ...}} or a full
/// four-outcome qubit POVM document, whose elements are converted back to
/// Bloch vectors (and must be unbiased).
inline JointQubitPovm joint_from_json_text(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (root.is_object() && root.contains("bloch")) {
        const Json& bloch = root["bloch"];
        if (!bloch.is_object()) throw ParseError("\"bloch\" must map outcomes to 3-vectors");
        std::array<BlochVector, 4> vectors{};
        for (std::size_t k = 0; k < 4; ++k) {
            const char* key = JointQubitPovm::kLabels[k];
            if (!bloch.contains(key)) {
                throw ParseError(std::string("\"bloch\" is missing outcome ") + key);
            }
            const Json& v = bloch[key];
            if (!v.is_array() || v.size() != 3) {
                throw ParseError(std::string("bloch vector ") + key + " must be [x, y, z]");
            }
            vectors[k] = BlochVector{detail::number_at(v[0], key), detail::number_at(v[1], key),
                                     detail::number_at(v[2], key)};
        }
        return build_unbiased(vectors);
    }
    const auto doc = document_from_json(root);
    if (doc.dim != 2 || doc.elements.size() != 4) {
        throw DomainError("joint analysis needs a four-outcome qubit POVM");
    }
    to_povm(doc);  // full validation first
    std::array<BlochVector, 4> vectors{};
    for (std::size_t k = 0; k < 4; ++k) {
        const ComplexMatrix& m = doc.elements[k];
        if (std::abs(m.trace().real() - 0.5) > kValidationTol) {
            throw DomainError("joint analysis needs unbiased elements with trace 1/2");
        }
        vectors[k] = BlochVector{(m * pauli_x()).trace().real() / 2.0,
                                 (m * pauli_y()).trace().real() / 2.0,
                                 (m * pauli_z()).trace().real() / 2.0};
    }
    return build_unbiased(vectors);
}

inline Json joint_analysis_to_json(const JointAnalysis& a) {
    Json j;
    j["z_operator"] = matrix_to_json(a.z_operator);
    j["x_operator"] = matrix_to_json(a.x_operator);
    j["delta_z2"] = matrix_to_json(a.delta_z2);
    j["delta_x2"] = matrix_to_json(a.delta_x2);
    j["sum_min_eigenvalue"] = a.sum_min_eigenvalue;
    j["ddd_rhs"] = a.ddd_rhs;
    j["identity_residual"] = a.identity_residual;
    return j;
}

inline Json extension_to_json(const NaimarkExtension& ext) {
    Json j;
    j["system_dim"] = ext.system_dim;
    j["ext_dim"] = ext.ext_dim;
    Json basis = Json::array();
    for (std::size_t k = 0; k < ext.ext_dim; ++k) basis.push_back(state_to_json(ext.basis_vector(k)));
    j["basis"] = std::move(basis);
    return j;
}

inline Json validation_report_to_json(const ValidationReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json item;
        item["name"] = c.name;
        item["passed"] = c.passed;
        item["residual"] = c.residual;
        checks.push_back(std::move(item));
    }
    Json j;
    j["checks"] = std::move(checks);
    j["all_passed"] = report.all_passed();
    return j;
}

inline Json uncertainty_report_to_json(const UncertaintyReport& report) {
    Json j;
    j["mean_operator"] = matrix_to_json(report.mean_operator);
    j["uncertainty_operator"] = matrix_to_json(report.uncertainty_operator);
    j["min_eigenvalue"] = report.min_eigenvalue;
    j["trace"] = report.trace;
    return j;
}

inline Json property_report_to_json(const PropertyReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json item;
        item["id"] = c.id;
        item["status"] = c.status;
        item["metric"] = c.metric;
        if (!c.detail.empty()) item["detail"] = c.detail;
        checks.push_back(std::move(item));
    }
    Json j;
    j["checks"] = std::move(checks);
    j["all_ok"] = report.all_ok();
    return j;
}

inline Json variance_to_json(const VarianceDecomposition& v) {
    Json j;
    j["total"] = v.total;
    j["mean_value"] = v.mean_value;
    j["projective_part"] = v.projective_part;
    j["povm_excess"] = v.povm_excess;
    return j;
}

inline Json bound_report_to_json(const BoundReport& report) {
    Json j;
    j["bound_name"] = report.bound_name;
    j["value_bits"] = report.value_bits;
    j["overlap_exponent"] = report.overlap_exponent;
    Json cert;
    if (report.certificate.achieving_index) {
        cert["achieving_index"] = *report.certificate.achieving_index;
    }
    if (report.certificate.achieving_pair) {
        cert["achieving_pair"] = Json::array(
            {report.certificate.achieving_pair->first, report.certificate.achieving_pair->second});
    }
    if (report.certificate.ancilla_unitary) {
        cert["ancilla_unitary"] = matrix_to_json(*report.certificate.ancilla_unitary);
    }
    if (report.certificate.minimizing_state) {
        cert["minimizing_state"] = state_to_json(*report.certificate.minimizing_state);
    }
    j["certificate"] = std::move(cert);
    return j;
}

}  // namespace povmkit
