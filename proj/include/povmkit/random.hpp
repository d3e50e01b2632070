#pragma once

#include <cstdint>
#include <random>

#include "povmkit/complex_matrix.hpp"

namespace povmkit {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic random stream. Gaussian draws use Box-Muller on top of the
/// fully specified mt19937_64 sequence, so results do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    Complex complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return Complex(re, im);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Independent stream derived from (seed, stream index).
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
    splitmix64(x);
    return Rng(splitmix64(x));
}

inline std::vector<Complex> random_unit_vector(std::size_t dim, Rng& rng) {
    std::vector<Complex> v(dim);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& e : v) {
            e = rng.complex_gaussian();
            n2 += std::norm(e);
        }
    } while (n2 < 1e-12);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& e : v) e *= inv;
    return v;
}

inline ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
    ComplexMatrix h = g + g.adjoint();
    h *= Complex(0.5, 0.0);
    return h;
}

inline ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    return matrix_exp_i(random_hermitian(dim, rng));
}

}  // namespace povmkit
