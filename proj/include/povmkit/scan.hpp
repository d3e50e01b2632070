#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "povmkit/catalog.hpp"
#include "povmkit/entropy.hpp"
#include "povmkit/json_io.hpp"
#include "povmkit/qubit_joint.hpp"

namespace povmkit {

struct ScanRow {
    double theta = 0.0;
    double mixture_bound_bits = 0.0;
    double min_entropy_bits = 0.0;
    double ddd_rhs = 0.0;
    double min_variance_sum = 0.0;
};

/// Parameter sweep of the joint-estimation family: for each theta the
/// mixture bound of the two branch measurements, the state-minimized outcome
/// entropy, the uncertainty-sum coefficient, and the state-minimized
/// Var(Z) + Var(X). Each row derives its own optimizer streams from the
/// configured seed, so the table is deterministic.
inline std::vector<ScanRow> scan_mzx(double from, double to, int steps,
                                     const OptimizerConfig& config = {}) {
    if (steps < 1) throw DomainError("scan: at least one step required");
    std::vector<ScanRow> rows;
    rows.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double theta =
            (steps == 1) ? from : from + (to - from) * static_cast<double>(i) / (steps - 1);
        const JointQubitPovm joint = build_mzx(theta);

        ScanRow row;
        row.theta = theta;

        const auto branch_a = pvm_along({std::sin(theta), 0.0, std::cos(theta)});
        const auto branch_b = pvm_along({-std::sin(theta), 0.0, std::cos(theta)});
        row.mixture_bound_bits = bound_pvm_mixture(branch_a.povm(), branch_b.povm()).value_bits;

        const Povm measurement = joint.povm();

        OptimizerConfig entropy_config = config;
        entropy_config.seed = stream_rng(config.seed, 2 * static_cast<std::uint64_t>(i)).next_u64();
        row.min_entropy_bits = min_entropy_over_states(measurement, entropy_config).second;

        row.ddd_rhs = analyze(joint).ddd_rhs;

        OptimizerConfig variance_config = config;
        variance_config.seed =
            stream_rng(config.seed, 2 * static_cast<std::uint64_t>(i) + 1).next_u64();
        // Var(Z) + Var(X) = 2 - <Z>^2 - <X>^2 for +-1 valued outcomes; descend
        // on that closed form, then report the full decomposition-backed value
        // at the optimizer's state.
        const auto& elements = measurement.elements();
        const auto var_opt = minimize_over_pure_states(
            [&](const std::vector<Complex>& psi) {
                double mean_z = 0.0, mean_x = 0.0;
                for (std::size_t k = 0; k < 4; ++k) {
                    const double p = std::max(0.0, quadratic_form(elements[k], psi));
                    mean_z += JointQubitPovm::kZSigns[k] * p;
                    mean_x += JointQubitPovm::kXSigns[k] * p;
                }
                return 2.0 - mean_z * mean_z - mean_x * mean_x;
            },
            2, variance_config);
        row.min_variance_sum = variance_sum(joint, QuantumState::pure(var_opt.best_point));

        rows.push_back(row);
    }
    return rows;
}

inline const char* scan_csv_header() {
    return "theta,mixture_bound_bits,min_entropy_bits,ddd_rhs,min_variance_sum";
}

/// CSV with 12 significant digits, newline terminated, no quoting.
inline std::string scan_to_csv(const std::vector<ScanRow>& rows) {
    std::string out = scan_csv_header();
    out += "\n";
    for (const auto& r : rows) {
        out += format_double(r.theta, 12);
        out += ",";
        out += format_double(r.mixture_bound_bits, 12);
        out += ",";
        out += format_double(r.min_entropy_bits, 12);
        out += ",";
        out += format_double(r.ddd_rhs, 12);
        out += ",";
        out += format_double(r.min_variance_sum, 12);
        out += "\n";
    }
    return out;
}

inline std::vector<ScanRow> scan_from_csv(const std::string& csv) {
    std::vector<ScanRow> rows;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < csv.size()) {
        std::size_t end = csv.find('\n', pos);
        if (end == std::string::npos) end = csv.size();
        const std::string line = csv.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != scan_csv_header()) throw ParseError("scan CSV: unexpected header");
            header_seen = true;
            continue;
        }
        ScanRow row;
        double* fields[5] = {&row.theta, &row.mixture_bound_bits, &row.min_entropy_bits,
                             &row.ddd_rhs, &row.min_variance_sum};
        std::size_t field_start = 0;
        for (int f = 0; f < 5; ++f) {
            std::size_t comma = line.find(',', field_start);
            if (f < 4 && comma == std::string::npos) {
                throw ParseError("scan CSV: short row");
            }
            if (f == 4) comma = line.size();
            const std::string cell = line.substr(field_start, comma - field_start);
            char* parse_end = nullptr;
            *fields[f] = std::strtod(cell.c_str(), &parse_end);
            if (parse_end == cell.c_str() || *parse_end != '\0') {
                throw ParseError("scan CSV: bad number: " + cell);
            }
            field_start = comma + 1;
        }
        rows.push_back(row);
    }
    if (!header_seen) throw ParseError("scan CSV: missing header");
    return rows;
}

}  // namespace povmkit
