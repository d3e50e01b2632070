#include <catch2/catch.hpp>

#include "povmkit/qubit.hpp"
#include "povmkit/uncertainty.hpp"

using namespace povmkit;

namespace {

constexpr double kPi = 3.14159265358979323846;

ValuedPovm mzx_valued(double theta, bool z_values) {
    std::vector<ComplexMatrix> elements;
    std::vector<std::string> labels;
    std::vector<double> values;
    const ComplexMatrix id = ComplexMatrix::identity(2);
    for (int z : {+1, -1}) {
        for (int x : {+1, -1}) {
            elements.push_back(id * 0.25 + pauli_z() * (z * std::cos(theta) / 4.0) +
                               pauli_x() * (x * std::sin(theta) / 4.0));
            labels.push_back(std::string(z > 0 ? "+" : "-") + (x > 0 ? "+" : "-"));
            values.push_back(z_values ? z : x);
        }
    }
    return ValuedPovm(Povm(2, elements, labels), values);
}

ValuedPovm trine_valued(std::vector<double> values) {
    std::vector<ComplexMatrix> elements;
    for (int k = 0; k < 3; ++k) {
        const double a = 2.0 * kPi * k / 3.0;
        const std::vector<Complex> e = {std::cos(a), std::sin(a)};
        elements.push_back(ComplexMatrix::outer(e) * (2.0 / 3.0));
    }
    return ValuedPovm(Povm(2, elements, {"e0", "e1", "e2"}), std::move(values));
}

ValuedPovm random_same_dim(std::size_t dim, Rng& rng) {
    const std::size_t outcomes = 2 + rng.next_u64() % 5;
    const std::size_t rank_min = (dim + outcomes - 1) / outcomes;
    const std::size_t rank = rank_min + rng.next_u64() % (dim - rank_min + 1);
    return random_valued_povm(dim, outcomes, rank, rng);
}

}  // namespace

TEST_CASE("mean operator", "[uncertainty]") {
    SECTION("z values on the mzx family give cos(theta) sigma_z") {
        for (double theta : {0.0, 0.4, kPi / 4.0, 1.3}) {
            const ComplexMatrix m = mean_operator(mzx_valued(theta, true));
            CHECK(max_abs_diff(m, pauli_z() * std::cos(theta)) < 1e-14);
        }
    }
    SECTION("x values on the mzx family give sin(theta) sigma_x") {
        for (double theta : {0.0, 0.4, kPi / 4.0, 1.3}) {
            const ComplexMatrix m = mean_operator(mzx_valued(theta, false));
            CHECK(max_abs_diff(m, pauli_x() * std::sin(theta)) < 1e-14);
        }
    }
    SECTION("pvm valued by its eigenvalues reproduces the diagonal operator") {
        const ValuedPovm vp(Povm(2, {ComplexMatrix::diagonal({1.0, 0.0}),
                                     ComplexMatrix::diagonal({0.0, 1.0})},
                                 {"0", "1"}),
                            {2.5, -0.5});
        CHECK(max_abs_diff(mean_operator(vp), ComplexMatrix::diagonal({2.5, -0.5})) == 0.0);
    }
}

TEST_CASE("uncertainty operator", "[uncertainty]") {
    SECTION("mzx with z values: (1 - cos^2) identity") {
        for (double theta : {0.0, kPi / 6.0, kPi / 4.0, 1.1}) {
            const auto report = uncertainty_operator(mzx_valued(theta, true));
            const double expected = 1.0 - std::cos(theta) * std::cos(theta);
            CHECK(max_abs_diff(report.uncertainty_operator,
                               ComplexMatrix::identity(2) * expected) < 1e-14);
            CHECK(report.trace == Approx(2.0 * expected).margin(1e-12));
            CHECK(report.min_eigenvalue >= -1e-12);
        }
    }
    SECTION("any projective measurement has zero uncertainty operator") {
        const ValuedPovm vp(Povm(2, {ComplexMatrix::diagonal({1.0, 0.0}),
                                     ComplexMatrix::diagonal({0.0, 1.0})},
                                 {"0", "1"}),
                            {4.0, -7.0});
        CHECK(uncertainty_operator(vp).uncertainty_operator.max_abs() < 1e-12);
    }
    SECTION("trine with indicator values") {
        const auto vp = trine_valued({1.0, 0.0, 0.0});
        const auto report = uncertainty_operator(vp);
        // Delta = m0 - m0^2 since only the first value is nonzero
        const ComplexMatrix m0 = vp.povm().elements()[0];
        CHECK(max_abs_diff(report.uncertainty_operator, m0 - m0 * m0) < 1e-13);
    }
    SECTION("the two closed forms agree on random POVMs") {
        Rng rng = stream_rng(301, 0);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t dim = 2 + rng.next_u64() % 3;
            // cross-check at 1e-10 happens inside; a throw fails the test
            const auto report = uncertainty_operator(random_same_dim(dim, rng));
            CHECK(is_hermitian(report.uncertainty_operator, 1e-10));
        }
    }
}

TEST_CASE("variance decomposition", "[uncertainty]") {
    SECTION("mzx z values on spin-up") {
        for (double theta : {0.0, 0.7, kPi / 4.0}) {
            const auto vp = mzx_valued(theta, true);
            const auto v = variance(vp, QuantumState::pure({1.0, 0.0}));
            const double c2 = std::cos(theta) * std::cos(theta);
            CHECK(v.total == Approx(1.0 - c2).margin(1e-12));
            CHECK(v.projective_part == Approx(0.0).margin(1e-12));
            CHECK(v.povm_excess == Approx(1.0 - c2).margin(1e-12));
        }
    }
    SECTION("pvm in its own eigenbasis has zero variance") {
        const ValuedPovm vp(Povm(2, {ComplexMatrix::diagonal({1.0, 0.0}),
                                     ComplexMatrix::diagonal({0.0, 1.0})},
                                 {"0", "1"}),
                            {1.0, -1.0});
        const auto v = variance(vp, QuantumState::pure({1.0, 0.0}));
        CHECK(v.total == Approx(0.0).margin(1e-12));
    }
    SECTION("classical POVM variance is state independent") {
        const ValuedPovm vp(Povm(2, {ComplexMatrix::identity(2) * (1.0 / 3.0),
                                     ComplexMatrix::identity(2) * (2.0 / 3.0)},
                                 {"a", "b"}),
                            {0.0, 1.0});
        const double expected = (2.0 / 3.0) - (2.0 / 3.0) * (2.0 / 3.0);
        Rng rng = stream_rng(9, 9);
        for (int trial = 0; trial < 10; ++trial) {
            const auto state = QuantumState::pure(random_unit_vector(2, rng));
            CHECK(variance(vp, state).total == Approx(expected).margin(1e-12));
        }
    }
    SECTION("decomposition identity holds on random inputs") {
        Rng rng = stream_rng(302, 0);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t dim = 2 + rng.next_u64() % 3;
            const auto vp = random_same_dim(dim, rng);
            const auto state = QuantumState::pure(random_unit_vector(dim, rng));
            const auto v = variance(vp, state);  // identity enforced inside at 1e-10
            CHECK(v.povm_excess >= -1e-9);
            CHECK(std::abs(v.total - v.projective_part - v.povm_excess) <= 1e-10);
        }
    }
}

TEST_CASE("property report", "[uncertainty]") {
    SECTION("mzx at pi/6") {
        const auto report = property_report(mzx_valued(kPi / 6.0, true));
        REQUIRE(report.checks.size() == 6);
        CHECK(report.checks[0].id == "positivity");
        CHECK(report.checks[0].status == "pass");
        CHECK(report.checks[1].status == "not-applicable");  // pvm_vanishing
        CHECK(report.checks[2].id == "strict_positivity");
        CHECK(report.checks[2].status == "pass");
        // witness m - m^2 has eigenvalues {0, 1/4}
        CHECK(report.checks[2].metric == Approx(0.25).margin(1e-12));
        CHECK(report.checks[3].status == "not-applicable");  // classical_reduction
        CHECK(report.all_ok());
    }
    SECTION("projective z measurement") {
        const ValuedPovm vp(Povm(2, {ComplexMatrix::diagonal({1.0, 0.0}),
                                     ComplexMatrix::diagonal({0.0, 1.0})},
                                 {"0", "1"}),
                            {1.0, -1.0});
        const auto report = property_report(vp);
        CHECK(report.checks[1].id == "pvm_vanishing");
        CHECK(report.checks[1].status == "pass");
        CHECK(report.checks[2].status == "not-applicable");
    }
    SECTION("classical POVM reduces to a Bernoulli variance") {
        const ValuedPovm vp(Povm(2, {ComplexMatrix::identity(2) * (1.0 / 3.0),
                                     ComplexMatrix::identity(2) * (2.0 / 3.0)},
                                 {"a", "b"}),
                            {0.0, 1.0});
        const auto report = property_report(vp);
        CHECK(report.checks[3].id == "classical_reduction");
        CHECK(report.checks[3].status == "pass");
        const auto u = uncertainty_operator(vp);
        CHECK(max_abs_diff(u.uncertainty_operator, ComplexMatrix::identity(2) * (2.0 / 9.0)) <
              1e-12);
    }
}

TEST_CASE("tensor additivity of the uncertainty operator", "[uncertainty]") {
    SECTION("two projective measurements") {
        const auto z = pvm_along({0.0, 0.0, 1.0});
        CHECK(check_tensor_additivity(z, z) < 1e-12);
    }
    SECTION("mzx z values with mzx x values") {
        CHECK(check_tensor_additivity(mzx_valued(kPi / 4.0, true), mzx_valued(kPi / 4.0, false)) <
              1e-10);
    }
    SECTION("mzx with the trivial POVM") {
        const auto trivial = ValuedPovm(Povm(2, {ComplexMatrix::identity(2)}, {"1"}), {0.0});
        CHECK(check_tensor_additivity(mzx_valued(0.9, true), trivial) < 1e-12);
    }
    SECTION("random pairs") {
        Rng rng = stream_rng(303, 0);
        for (int trial = 0; trial < 40; ++trial) {
            const auto a = random_same_dim(2 + rng.next_u64() % 3, rng);
            const auto b = random_same_dim(2 + rng.next_u64() % 3, rng);
            CHECK(check_tensor_additivity(a, b) < 1e-9);
        }
    }
}

TEST_CASE("convex combination identity", "[uncertainty]") {
    const auto z = pvm_along({0.0, 0.0, 1.0});
    const auto x = pvm_along({1.0, 0.0, 0.0});
    SECTION("degenerate p = 1") {
        CHECK(check_convex_combination(1.0, z, x) < 1e-12);
    }
    SECTION("half z half x: the mix has uncertainty (sz - sx)^2 / 4 = 1/2") {
        const auto mixed = mix(0.5, z, x);
        const auto delta = uncertainty_operator(mixed).uncertainty_operator;
        CHECK(max_abs_diff(delta, ComplexMatrix::identity(2) * 0.5) < 1e-12);
        CHECK(check_convex_combination(0.5, z, x) < 1e-12);
    }
    SECTION("two mzx members") {
        CHECK(check_convex_combination(0.3, mzx_valued(0.2, true), mzx_valued(1.1, true)) < 1e-10);
    }
    SECTION("random pairs") {
        Rng rng = stream_rng(304, 0);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t dim = 2 + rng.next_u64() % 3;
            const auto a = random_same_dim(dim, rng);
            const auto b = random_same_dim(dim, rng);
            CHECK(check_convex_combination(rng.uniform(), a, b) < 1e-9);
        }
    }
}
