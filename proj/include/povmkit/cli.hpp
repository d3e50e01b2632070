#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "povmkit/json_io.hpp"
#include "povmkit/scan.hpp"

namespace povmkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitParse = 2;

namespace detail {

inline std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline Json report_skeleton(const std::string& command) {
    Json report;
    report["command"] = command;
    Json versions;
    versions["artifact"] = kVersion;
    versions["schema"] = kSchemaVersion;
    report["versions"] = std::move(versions);
    return report;
}

struct CommonFlags {
    double tol = kValidationTol;
    std::uint64_t seed = 0;
    int starts = 32;
    int convention = 2;
};

inline OptimizerConfig optimizer_config(const CommonFlags& flags) {
    OptimizerConfig config;
    config.seed = flags.seed;
    config.starts = flags.starts;
    return config;
}

inline int cmd_validate(const std::string& file, double tol, std::ostream& out) {
    const auto doc = document_from_json_text(read_input(file));
    const auto report = validate_povm(doc.dim, doc.elements, doc.labels, tol);

    Json j = report_skeleton("validate");
    Json inputs;
    inputs["file"] = file;
    inputs["tol"] = tol;
    j["inputs"] = std::move(inputs);
    j["results"] = validation_report_to_json(report);
    out << dump_json(j);
    return report.all_passed() ? kExitOk : kExitDomain;
}

inline int cmd_analyze(const std::string& file, const std::string& values_name,
                       const std::string& state_text, double tol, std::ostream& out) {
    const auto doc = document_from_json_text(read_input(file));
    const auto vp = to_valued(doc, values_name, tol);

    Json j = report_skeleton("analyze");
    Json inputs;
    inputs["file"] = file;
    inputs["values"] = values_name;
    if (!state_text.empty()) inputs["state"] = state_text;
    inputs["tol"] = tol;
    j["inputs"] = std::move(inputs);

    Json results;
    results["uncertainty"] = uncertainty_report_to_json(uncertainty_operator(vp));
    results["properties"] = property_report_to_json(property_report(vp, tol));
    if (!state_text.empty()) {
        const auto state = state_from_json_text(state_text, vp.dim());
        results["variance"] = variance_to_json(variance(vp, state));
    }
    j["results"] = std::move(results);
    out << dump_json(j);
    return kExitOk;
}

inline int cmd_entropy(const std::string& file, const std::string& bound,
                       const std::string& with_file, bool minimize_states,
                       const CommonFlags& flags, std::ostream& out) {
    const auto doc = document_from_json_text(read_input(file));
    const Povm povm = to_povm(doc, flags.tol);

    std::optional<Povm> second;
    if (!with_file.empty()) {
        second = to_povm(document_from_json_text(read_input(with_file)), flags.tol);
    }
    const auto require_second = [&]() -> const Povm& {
        if (!second) {
            throw DomainError("bound '" + bound + "' needs a second POVM via --with");
        }
        return *second;
    };

    const auto config = optimizer_config(flags);
    BoundReport primary;
    std::optional<double> alternate_bits;
    if (bound == "hm1") {
        primary = bound_max_eigenvalue(povm);
    } else if (bound == "pair") {
        primary = bound_pair_rank1(povm, require_second(), flags.convention);
        alternate_bits =
            bound_pair_rank1(povm, *second, flags.convention == 2 ? 1 : 2).value_bits;
    } else if (bound == "naimark") {
        primary = bound_pair_naimark(povm, require_second(), flags.convention, config);
        alternate_bits =
            bound_pair_naimark(povm, *second, flags.convention == 2 ? 1 : 2, config).value_bits;
    } else if (bound == "single") {
        primary = bound_single_naimark(povm, flags.convention, config);
        alternate_bits =
            bound_single_naimark(povm, flags.convention == 2 ? 1 : 2, config).value_bits;
    } else if (bound == "mixture") {
        primary = bound_pvm_mixture(povm, require_second());
    } else {
        throw DomainError("unknown bound: " + bound);
    }

    Json j = report_skeleton("entropy");
    Json inputs;
    inputs["file"] = file;
    if (!with_file.empty()) inputs["with"] = with_file;
    inputs["bound"] = bound;
    inputs["convention"] = flags.convention;
    inputs["seed"] = flags.seed;
    inputs["starts"] = flags.starts;
    inputs["tol"] = flags.tol;
    j["inputs"] = std::move(inputs);

    Json results;
    results["report"] = bound_report_to_json(primary);
    if (alternate_bits) {
        Json alt;
        alt["overlap_exponent"] = flags.convention == 2 ? 1 : 2;
        alt["value_bits"] = *alternate_bits;
        results["alternate_convention"] = std::move(alt);
        results["convention_note"] =
            "overlap exponent 2 squares the overlaps before the log; both values are "
            "reported because the two readings differ by a factor of 2 in bits";
    }
    if (minimize_states) {
        const auto [state, bits] = min_entropy_over_states(povm, config);
        Json min_entropy;
        min_entropy["value_bits"] = bits;
        min_entropy["state"] = state_to_json(state.amplitudes());
        results["min_entropy"] = std::move(min_entropy);
    }
    j["results"] = std::move(results);
    out << dump_json(j);
    return kExitOk;
}

inline int cmd_scan(const std::string& family, const std::string& param, double from, double to,
                    int steps, const std::string& csv_path, const CommonFlags& flags,
                    std::ostream& out) {
    if (family != "mzx") throw DomainError("unknown scan family: " + family);
    if (param != "theta") throw DomainError("unknown scan parameter: " + param);
    const auto rows = scan_mzx(from, to, steps, optimizer_config(flags));
    const std::string csv = scan_to_csv(rows);
    out << csv;
    if (!csv_path.empty()) {
        std::ofstream file(csv_path, std::ios::binary);
        if (!file) throw ParseError("cannot write CSV file: " + csv_path);
        file << csv;
    }
    return kExitOk;
}

inline int cmd_naimark(const std::string& file, double tol, std::ostream& out) {
    const auto doc = document_from_json_text(read_input(file));
    const Povm povm = to_povm(doc, tol);
    const auto ext = extend(povm);

    Json j = report_skeleton("naimark");
    Json inputs;
    inputs["file"] = file;
    inputs["tol"] = tol;
    j["inputs"] = std::move(inputs);

    Json results;
    results["extension"] = extension_to_json(ext);
    results["orthonormality_residual"] =
        max_abs_diff(ext.basis.adjoint() * ext.basis, ComplexMatrix::identity(ext.ext_dim));
    {
        const auto pieces = rank1_pieces(povm, {});
        double res = 0.0;
        ComplexMatrix sum(ext.system_dim, ext.system_dim);
        for (std::size_t k = 0; k < ext.ext_dim; ++k) {
            const auto s = ext.system_part(k);
            res = std::max(res, max_abs_diff(ComplexMatrix::outer(s),
                                             ComplexMatrix::outer(pieces[k].vector)));
            sum += ComplexMatrix::outer(s);
        }
        results["restriction_residual"] = res;
        results["completeness_residual"] =
            max_abs_diff(sum, ComplexMatrix::identity(ext.system_dim));
    }
    if (!doc.name.empty()) {
        try {
            const auto check = verify_reference_extension(doc.name, doc.parameters);
            Json ref;
            ref["orthonormality_residual"] = check.orthonormality_residual;
            ref["restriction_residual"] = check.restriction_residual;
            ref["alignment_residual"] = check.alignment_residual;
            results["reference"] = std::move(ref);
        } catch (const DomainError&) {
            // no reference extension for this entry
        }
    }
    j["results"] = std::move(results);
    out << dump_json(j);
    return kExitOk;
}

inline int cmd_joint(const std::string& file, std::ostream& out) {
    const auto joint = joint_from_json_text(read_input(file));
    const auto analysis = analyze(joint);
    const auto faithful = faithful_check(joint);
    const auto optimality = optimality_check(joint);

    Json j = report_skeleton("joint");
    Json inputs;
    inputs["file"] = file;
    j["inputs"] = std::move(inputs);

    Json results;
    Json bloch;
    for (std::size_t k = 0; k < 4; ++k) {
        bloch[JointQubitPovm::kLabels[k]] =
            Json::array({joint.vectors[k].x, joint.vectors[k].y, joint.vectors[k].z});
    }
    results["bloch"] = std::move(bloch);
    results["analysis"] = joint_analysis_to_json(analysis);
    Json faith;
    faith["faithful"] = faithful.faithful;
    Json statuses;
    for (std::size_t k = 0; k < 4; ++k) {
        statuses[JointQubitPovm::kLabels[k]] = faithful.outcome_status[k];
    }
    faith["outcomes"] = std::move(statuses);
    results["faithful"] = std::move(faith);
    Json opt;
    opt["conditions_hold"] = optimality.conditions_hold;
    opt["operator_sum_is_identity"] = optimality.operator_sum_is_identity;
    opt["operator_sum_residual"] = optimality.operator_sum_residual;
    opt["pair_pp_mm_residual"] = optimality.pair_pp_mm_residual;
    opt["pair_pm_mp_residual"] = optimality.pair_pm_mp_residual;
    opt["radius_residual"] = optimality.radius_residual;
    opt["realization_built"] = optimality.realization_built;
    if (optimality.realization_built) {
        opt["realization_residual"] = optimality.realization_residual;
    }
    results["optimality"] = std::move(opt);
    j["results"] = std::move(results);
    out << dump_json(j);
    return kExitOk;
}

inline int cmd_catalog_list(std::ostream& out) {
    Json j = report_skeleton("catalog");
    Json entries = Json::array();
    for (const auto& name : catalog_names()) {
        Json e;
        e["name"] = name;
        Json params = Json::array();
        if (name == "mzx") params.push_back("theta");
        e["parameters"] = std::move(params);
        entries.push_back(std::move(e));
    }
    Json results;
    results["entries"] = std::move(entries);
    j["results"] = std::move(results);
    out << dump_json(j);
    return kExitOk;
}

inline int cmd_catalog_dump(const std::string& name, std::optional<double> theta,
                            std::ostream& out) {
    std::map<std::string, double> params;
    if (theta) params["theta"] = *theta;
    const auto entry = catalog_build(name, params);
    out << dump_json(document_to_json(document_from_catalog(entry)));
    return kExitOk;
}

}  // namespace detail

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 domain or validation failure, 2 malformed input.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"POVM uncertainty toolkit"};
    app.require_subcommand(1);

    detail::CommonFlags flags;

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check a POVM document");
    std::string validate_file;
    double validate_tol = kValidationTol;
    validate_cmd->add_option("file", validate_file, "POVM JSON document, or - for stdin")
        ->required();
    validate_cmd->add_option("--tol", validate_tol, "validation tolerance");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "uncertainty analysis of a valued POVM");
    std::string analyze_file, analyze_values, analyze_state;
    double analyze_tol = kValidationTol;
    analyze_cmd->add_option("file", analyze_file, "POVM JSON document")->required();
    analyze_cmd->add_option("--values", analyze_values, "name of the value map")->required();
    analyze_cmd->add_option("--state", analyze_state, "state JSON for a variance decomposition");
    analyze_cmd->add_option("--tol", analyze_tol, "validation tolerance");

    // entropy
    auto* entropy_cmd = app.add_subcommand("entropy", "entropy lower bounds");
    std::string entropy_file, entropy_bound, entropy_with;
    bool minimize_states = false;
    entropy_cmd->add_option("file", entropy_file, "POVM JSON document")->required();
    entropy_cmd->add_option("--bound", entropy_bound, "hm1|pair|naimark|single|mixture")
        ->required();
    entropy_cmd->add_option("--with", entropy_with, "second POVM document for pair bounds");
    entropy_cmd->add_flag("--minimize-states", minimize_states,
                          "also minimize the outcome entropy over pure states");
    entropy_cmd->add_option("--convention", flags.convention, "overlap exponent, 1 or 2")
        ->check(CLI::IsMember({1, 2}));
    entropy_cmd->add_option("--seed", flags.seed, "optimizer seed");
    entropy_cmd->add_option("--starts", flags.starts, "optimizer starts");
    entropy_cmd->add_option("--tol", flags.tol, "validation tolerance");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "parameter sweep, CSV output");
    std::string scan_family, scan_param = "theta", scan_csv;
    double scan_from = 0.0, scan_to = 0.0;
    int scan_steps = 0;
    scan_cmd->add_option("--family", scan_family, "measurement family")->required();
    scan_cmd->add_option("--param", scan_param, "swept parameter");
    scan_cmd->add_option("--from", scan_from, "sweep start")->required();
    scan_cmd->add_option("--to", scan_to, "sweep end")->required();
    scan_cmd->add_option("--steps", scan_steps, "row count")->required();
    scan_cmd->add_option("--csv", scan_csv, "also write the table to this path");
    scan_cmd->add_option("--seed", flags.seed, "optimizer seed");
    scan_cmd->add_option("--starts", flags.starts, "optimizer starts");

    // naimark
    auto* naimark_cmd = app.add_subcommand("naimark", "construct the minimal extension");
    std::string naimark_file;
    double naimark_tol = kValidationTol;
    naimark_cmd->add_option("file", naimark_file, "POVM JSON document")->required();
    naimark_cmd->add_option("--tol", naimark_tol, "validation tolerance");

    // joint
    auto* joint_cmd = app.add_subcommand("joint", "analyze a four-outcome qubit joint estimate");
    std::string joint_file;
    joint_cmd->add_option("file", joint_file, "POVM document or compact {\"bloch\": ...} form")
        ->required();

    // catalog
    auto* catalog_cmd = app.add_subcommand("catalog", "built-in measurement families");
    std::string catalog_action, catalog_name;
    std::optional<double> catalog_theta;
    double catalog_theta_raw = 0.0;
    catalog_cmd->add_option("action", catalog_action, "list or dump")->required();
    catalog_cmd->add_option("name", catalog_name, "entry name for dump");
    auto* theta_opt = catalog_cmd->add_option("--theta", catalog_theta_raw, "mzx angle, radians");

    try {
        std::vector<const char*> argv;
        argv.push_back("povmkit");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);  // --help and friends
        }
        err << "argument error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (validate_cmd->parsed()) return detail::cmd_validate(validate_file, validate_tol, out);
        if (analyze_cmd->parsed()) {
            return detail::cmd_analyze(analyze_file, analyze_values, analyze_state, analyze_tol,
                                       out);
        }
        if (entropy_cmd->parsed()) {
            return detail::cmd_entropy(entropy_file, entropy_bound, entropy_with, minimize_states,
                                       flags, out);
        }
        if (scan_cmd->parsed()) {
            return detail::cmd_scan(scan_family, scan_param, scan_from, scan_to, scan_steps,
                                    scan_csv, flags, out);
        }
        if (naimark_cmd->parsed()) return detail::cmd_naimark(naimark_file, naimark_tol, out);
        if (joint_cmd->parsed()) return detail::cmd_joint(joint_file, out);
        if (catalog_cmd->parsed()) {
            if (catalog_action == "list") return detail::cmd_catalog_list(out);
            if (catalog_action == "dump") {
                if (catalog_name.empty()) throw DomainError("catalog dump needs an entry name");
                if (theta_opt->count() > 0) catalog_theta = catalog_theta_raw;
                return detail::cmd_catalog_dump(catalog_name, catalog_theta, out);
            }
            throw DomainError("unknown catalog action: " + catalog_action);
        }
        err << "no command given\n";
        return kExitParse;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

}  // namespace povmkit::cli
