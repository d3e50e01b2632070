#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "povmkit/complex_matrix.hpp"
#include "povmkit/random.hpp"

namespace povmkit {

struct OptimizerConfig {
    std::uint64_t seed = 0;
    int starts = 32;
    int max_iterations = 2000;
    double tolerance = 1e-9;  // stop a start when the objective improves less than this
    std::vector<double> smoothing_schedule = {8.0, 32.0, 128.0, 512.0};
    bool record_trace = false;
};

template <typename Point>
struct OptimizationResult {
    double best_value = 0.0;
    Point best_point{};
    int starts_converged = 0;
    int starts_aborted = 0;
    std::vector<double> trace;  // objective values of the winning start, when recorded
};

namespace detail {

struct DescentOutcome {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> point;
    bool converged = false;
    bool aborted = false;
    std::vector<double> trace;
};

/// Plain finite-difference descent with backtracking line search. Central
/// differences with a 1e-6 relative step; a start aborts as soon as the
/// objective stops being finite.
inline DescentOutcome minimize_vector(const std::function<double(const std::vector<double>&)>& f,
                                      std::vector<double> x, int max_iterations, double tolerance,
                                      bool record_trace) {
    constexpr double kFdStep = 1e-6;
    constexpr double kArmijo = 1e-4;

    DescentOutcome out;
    double fx = f(x);
    if (!std::isfinite(fx)) {
        out.aborted = true;
        return out;
    }
    if (record_trace) out.trace.push_back(fx);

    std::vector<double> grad(x.size());
    std::vector<double> xn(x.size());
    for (int iter = 0; iter < max_iterations; ++iter) {
        double gnorm2 = 0.0;
        bool bad = false;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double h = kFdStep * std::max(1.0, std::abs(x[j]));
            const double orig = x[j];
            x[j] = orig + h;
            const double fp = f(x);
            x[j] = orig - h;
            const double fm = f(x);
            x[j] = orig;
            if (!std::isfinite(fp) || !std::isfinite(fm)) {
                bad = true;
                break;
            }
            grad[j] = (fp - fm) / (2.0 * h);
            gnorm2 += grad[j] * grad[j];
        }
        if (bad) {
            out.aborted = true;
            return out;
        }
        if (gnorm2 <= 1e-24) {
            out.converged = true;
            break;
        }
        double alpha = 1.0;
        bool accepted = false;
        double fn = fx;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j < x.size(); ++j) xn[j] = x[j] - alpha * grad[j];
            fn = f(xn);
            if (std::isfinite(fn) && fn <= fx - kArmijo * alpha * gnorm2) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            out.converged = true;  // no descent left at finite-difference resolution
            break;
        }
        const double improvement = fx - fn;
        x.swap(xn);
        fx = fn;
        if (record_trace) out.trace.push_back(fx);
        if (improvement < tolerance) {
            out.converged = true;
            break;
        }
    }
    out.value = fx;
    out.point = std::move(x);
    return out;
}

inline std::vector<Complex> reals_to_state(const std::vector<double>& x) {
    std::vector<Complex> psi(x.size() / 2);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = Complex(x[2 * i], x[2 * i + 1]);
    return psi;
}

inline void gauge_fix(std::vector<Complex>& psi) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double m = std::abs(psi[i]);
        if (m > best) {
            best = m;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    const Complex rot = std::conj(psi[imax]) / best;
    for (auto& c : psi) c *= rot;
}

}  // namespace detail

/// Multi-start projected descent over unit vectors. Each start draws a
/// Haar-random state from its own seeded stream; steps are retracted to the
/// sphere by renormalization. Fully deterministic for a fixed config.
inline OptimizationResult<std::vector<Complex>> minimize_over_pure_states(
    const std::function<double(const std::vector<Complex>&)>& objective, std::size_t dim,
    const OptimizerConfig& config = {}) {
    if (dim == 0) throw DimensionError("minimize_over_pure_states: dimension must be positive");
    if (config.starts < 1 || config.tolerance <= 0.0) {
        throw DomainError("minimize_over_pure_states: bad optimizer configuration");
    }

    const auto wrapped = [&](const std::vector<double>& x) -> double {
        double n2 = 0.0;
        for (double c : x) n2 += c * c;
        if (n2 < 1e-24) return std::numeric_limits<double>::infinity();
        const double inv = 1.0 / std::sqrt(n2);
        std::vector<Complex> psi(x.size() / 2);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            psi[i] = Complex(x[2 * i] * inv, x[2 * i + 1] * inv);
        }
        return objective(psi);
    };

    OptimizationResult<std::vector<Complex>> result;
    bool have_best = false;
    for (int start = 0; start < config.starts; ++start) {
        Rng rng = stream_rng(config.seed, static_cast<std::uint64_t>(start));
        const auto psi0 = random_unit_vector(dim, rng);
        std::vector<double> x0(2 * dim);
        for (std::size_t i = 0; i < dim; ++i) {
            x0[2 * i] = psi0[i].real();
            x0[2 * i + 1] = psi0[i].imag();
        }
        auto out = detail::minimize_vector(wrapped, std::move(x0), config.max_iterations,
                                           config.tolerance, config.record_trace);
        if (out.aborted) {
            ++result.starts_aborted;
            continue;
        }
        if (out.converged) ++result.starts_converged;
        if (!have_best || out.value < result.best_value) {
            have_best = true;
            result.best_value = out.value;
            auto psi = detail::reals_to_state(out.point);
            const double n = vec_norm(psi);
            for (auto& c : psi) c *= 1.0 / n;
            detail::gauge_fix(psi);
            result.best_point = std::move(psi);
            result.trace = std::move(out.trace);
        }
    }
    if (!have_best) throw NumericError("minimize_over_pure_states: every start aborted");
    return result;
}

namespace detail {

inline ComplexMatrix hermitian_from_params(const std::vector<double>& g, std::size_t adim) {
    ComplexMatrix m(adim, adim);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < adim; ++i) m(i, i) = g[idx++];
    for (std::size_t i = 0; i < adim; ++i) {
        for (std::size_t j = i + 1; j < adim; ++j) {
            const Complex e(g[idx], g[idx + 1]);
            idx += 2;
            m(i, j) = e;
            m(j, i) = std::conj(e);
        }
    }
    return m;
}

}  // namespace detail

/// Multi-start ascent over ancilla unitaries parametrized as exp(iG) with G
/// Hermitian (adim^2 real parameters). When a smoothed objective family is
/// supplied, each start anneals through the smoothing schedule before a final
/// polish on the exact objective. Start 0 always begins at the identity.
inline OptimizationResult<ComplexMatrix> maximize_over_ancilla_unitaries(
    const std::function<double(const ComplexMatrix&)>& objective, std::size_t adim,
    const OptimizerConfig& config = {},
    const std::function<double(const ComplexMatrix&, double)>& smoothed = nullptr) {
    if (adim < 1) throw DomainError("maximize_over_ancilla_unitaries: ancilla dimension >= 1");
    if (config.starts < 1 || config.tolerance <= 0.0) {
        throw DomainError("maximize_over_ancilla_unitaries: bad optimizer configuration");
    }
    const std::size_t nparams = adim * adim;

    const auto unitary_of = [&](const std::vector<double>& g) {
        return matrix_exp_i(detail::hermitian_from_params(g, adim));
    };
    const auto exact_loss = [&](const std::vector<double>& g) { return -objective(unitary_of(g)); };

    OptimizationResult<ComplexMatrix> result;
    bool have_best = false;
    for (int start = 0; start < config.starts; ++start) {
        std::vector<double> g(nparams, 0.0);
        if (start > 0) {
            Rng rng = stream_rng(config.seed, static_cast<std::uint64_t>(start));
            for (auto& c : g) c = rng.gaussian() * 1.5707963267948966;
        }
        bool aborted = false;
        if (smoothed) {
            for (double alpha : config.smoothing_schedule) {
                const auto loss = [&](const std::vector<double>& p) {
                    return -smoothed(unitary_of(p), alpha);
                };
                auto out = detail::minimize_vector(loss, std::move(g), config.max_iterations,
                                                   config.tolerance, false);
                if (out.aborted) {
                    aborted = true;
                    break;
                }
                g = std::move(out.point);
            }
        }
        if (aborted) {
            ++result.starts_aborted;
            continue;
        }
        auto out = detail::minimize_vector(exact_loss, std::move(g), config.max_iterations,
                                           config.tolerance, config.record_trace);
        if (out.aborted) {
            ++result.starts_aborted;
            continue;
        }
        if (out.converged) ++result.starts_converged;
        const double value = -out.value;
        if (!have_best || value > result.best_value) {
            have_best = true;
            result.best_value = value;
            result.best_point = unitary_of(out.point);
            result.trace = std::move(out.trace);
            if (!result.trace.empty()) {
                for (auto& t : result.trace) t = -t;
            }
        }
    }
    if (!have_best) throw NumericError("maximize_over_ancilla_unitaries: every start aborted");
    return result;
}

/// Soft upper bound of max(xs) that anneals to the true max as alpha grows.
inline double log_sum_exp_max(const std::vector<double>& xs, double alpha) {
    double m = xs.front();
    for (double x : xs) m = std::max(m, x);
    double s = 0.0;
    for (double x : xs) s += std::exp(alpha * (x - m));
    return m + std::log(s) / alpha;
}

}  // namespace povmkit
