#include <catch2/catch.hpp>

#include "povmkit/qubit_joint.hpp"

using namespace povmkit;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mzx construction", "[joint]") {
    SECTION("theta = 0 is a duplicated z measurement") {
        const auto p = build_mzx(0.0);
        CHECK(p.vectors[0].z == Approx(0.25));
        CHECK(p.vectors[0].x == 0.0);
        CHECK(p.vectors[3].z == Approx(-0.25));
        CHECK(max_abs_diff(p.povm().elements()[0], p.povm().elements()[1]) == 0.0);
    }
    SECTION("theta = pi/2 estimates only x") {
        const auto p = build_mzx(kPi / 2.0);
        const auto a = analyze(p);
        CHECK(max_abs_diff(a.x_operator, pauli_x()) < 1e-12);
        CHECK(a.z_operator.max_abs() < 1e-12);
    }
    SECTION("theta = pi/4 has four distinct radius-1/4 vectors") {
        const auto p = build_mzx(kPi / 4.0);
        for (const auto& v : p.vectors) CHECK(v.norm() == Approx(0.25).margin(1e-15));
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                CHECK((p.vectors[i] - p.vectors[j]).norm() > 0.1);
    }
}

TEST_CASE("unbiased validation", "[joint]") {
    SECTION("mzx vectors are accepted") {
        const auto p = build_mzx(0.9);
        CHECK_NOTHROW(build_unbiased(p.vectors));
    }
    SECTION("oversized vector is rejected by name") {
        std::array<BlochVector, 4> v{};
        v[0] = {0.3, 0.0, 0.0};
        v[1] = {-0.1, 0.0, 0.0};
        v[2] = {-0.1, 0.0, 0.0};
        v[3] = {-0.1, 0.0, 0.0};
        CHECK_THROWS_WITH(build_unbiased(v), Catch::Contains("|v_++| exceeds 1/4"));
    }
    SECTION("nonzero sum is rejected") {
        std::array<BlochVector, 4> v{};
        v[0] = {0.1, 0.0, 0.0};
        CHECK_THROWS_WITH(build_unbiased(v), Catch::Contains("sum to zero"));
    }
    SECTION("all-zero vectors are the fully noisy POVM") {
        const auto p = build_unbiased({});
        const auto a = analyze(p);
        CHECK(max_abs_diff(a.delta_z2, ComplexMatrix::identity(2)) < 1e-14);
        CHECK(max_abs_diff(a.delta_x2, ComplexMatrix::identity(2)) < 1e-14);
        CHECK(a.ddd_rhs == Approx(2.0));
    }
}

TEST_CASE("faithfulness", "[joint]") {
    SECTION("interior mzx angles are faithful") {
        for (double theta : {0.1, kPi / 4.0, 1.4}) {
            CHECK(faithful_check(build_mzx(theta)).faithful);
        }
    }
    SECTION("theta = 0 fails at the boundary") {
        const auto report = faithful_check(build_mzx(0.0));
        CHECK_FALSE(report.faithful);
        CHECK(report.outcome_status[0] == "boundary");
    }
    SECTION("wrong sign is flagged") {
        std::array<BlochVector, 4> v{};
        v[0] = {-0.125, 0.0, 0.125};
        v[1] = {0.125, 0.0, 0.125};
        v[2] = {-0.125, 0.0, -0.125};
        v[3] = {0.125, 0.0, -0.125};
        const auto report = faithful_check(build_unbiased(v));
        CHECK_FALSE(report.faithful);
        CHECK(report.outcome_status[0] == "wrong-sign");
    }
}

TEST_CASE("uncertainty operators of the mzx family", "[joint]") {
    for (double theta : {0.0, kPi / 6.0, kPi / 4.0, kPi / 3.0, kPi / 2.0}) {
        const auto a = analyze(build_mzx(theta));
        const double c2 = std::cos(theta) * std::cos(theta);
        const double s2 = std::sin(theta) * std::sin(theta);
        CHECK(max_abs_diff(a.delta_z2, ComplexMatrix::identity(2) * (1.0 - c2)) < 1e-10);
        CHECK(max_abs_diff(a.delta_x2, ComplexMatrix::identity(2) * (1.0 - s2)) < 1e-10);
        CHECK(max_abs_diff(a.delta_z2 + a.delta_x2, ComplexMatrix::identity(2)) < 1e-10);
        CHECK(max_abs_diff(a.z_operator, pauli_z() * std::cos(theta)) < 1e-12);
        CHECK(max_abs_diff(a.x_operator, pauli_x() * std::sin(theta)) < 1e-12);
    }
}

TEST_CASE("unbiasedness alone pins the uncertainty sum", "[joint]") {
    Rng rng = stream_rng(701, 0);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto p = random_unbiased(rng);
        const auto a = analyze(p);  // identity enforced inside at 1e-10
        REQUIRE(a.identity_residual <= 1e-10);
        REQUIRE(a.ddd_rhs >= 1.0 - 1e-12);
        REQUIRE(a.ddd_rhs <= 2.0 + 1e-12);
        REQUIRE(a.sum_min_eigenvalue >= 1.0 - 1e-9);
    }
}

TEST_CASE("variance sums", "[joint]") {
    SECTION("theta = 0 on spin-up achieves exactly 1") {
        const double v = variance_sum(build_mzx(0.0), QuantumState::pure({1.0, 0.0}));
        CHECK(v == Approx(1.0).margin(1e-12));
    }
    SECTION("theta = pi/4 on the diagonal Bloch state gives 3/2") {
        const double r = 1.0 / std::sqrt(2.0);
        const auto psi = QuantumState::pure(bloch_pure_state({r, 0.0, r}));
        CHECK(variance_sum(build_mzx(kPi / 4.0), psi) == Approx(1.5).margin(1e-12));
    }
    SECTION("the fully noisy POVM gives 2 on any state") {
        Rng rng = stream_rng(702, 0);
        const auto p = build_unbiased({});
        for (int trial = 0; trial < 10; ++trial) {
            const auto psi = QuantumState::pure(random_unit_vector(2, rng));
            CHECK(variance_sum(p, psi) == Approx(2.0).margin(1e-12));
        }
    }
    SECTION("never below 1 on random POVMs and states") {
        Rng rng = stream_rng(703, 0);
        for (int trial = 0; trial < 2000; ++trial) {
            const auto p = random_unbiased(rng);
            const auto psi = QuantumState::pure(random_unit_vector(2, rng));
            REQUIRE(variance_sum(p, psi) >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("optimality conditions and the two-PVM realization", "[joint]") {
    SECTION("every mzx member is optimal and splits into two spin measurements") {
        for (double theta : {0.0, 0.5, kPi / 4.0, 1.3}) {
            const auto report = optimality_check(build_mzx(theta));
            CHECK(report.conditions_hold);
            CHECK(report.operator_sum_is_identity);
            REQUIRE(report.realization_built);
            CHECK(report.realization_residual < 1e-10);
        }
    }
    SECTION("the fully noisy POVM is not optimal") {
        const auto report = optimality_check(build_unbiased({}));
        CHECK_FALSE(report.conditions_hold);
        CHECK_FALSE(report.radii_quarter);
        CHECK_FALSE(report.realization_built);
    }
    SECTION("random quadruples generically fail and exceed the identity") {
        Rng rng = stream_rng(704, 0);
        int failures = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const auto p = random_unbiased(rng);
            const auto report = optimality_check(p);
            if (!report.conditions_hold) {
                ++failures;
                CHECK(analyze(p).ddd_rhs > 1.0);
            }
        }
        CHECK(failures == 200);
    }
    SECTION("conditions hold exactly when the uncertainty sum is the identity") {
        Rng rng = stream_rng(705, 0);
        // constructed optimal family beyond mzx: random antipodal radius-1/4 pairs
        for (int trial = 0; trial < 50; ++trial) {
            BlochVector a{rng.gaussian(), rng.gaussian(), rng.gaussian()};
            BlochVector b{rng.gaussian(), rng.gaussian(), rng.gaussian()};
            a = a * (0.25 / a.norm());
            b = b * (0.25 / b.norm());
            const auto p = build_unbiased({a, b, -b, -a});
            const auto report = optimality_check(p);
            CHECK(report.conditions_hold);
            CHECK(report.operator_sum_is_identity);
            CHECK(report.realization_built);
            CHECK(report.realization_residual < 1e-10);
        }
        // and perturbed families fail both sides
        for (int trial = 0; trial < 50; ++trial) {
            BlochVector a{rng.gaussian(), rng.gaussian(), rng.gaussian()};
            a = a * (0.2 / a.norm());
            BlochVector b{rng.gaussian(), rng.gaussian(), rng.gaussian()};
            b = b * (0.2 / b.norm());
            const auto p = build_unbiased({a, b, -b, -a});
            const auto report = optimality_check(p);
            CHECK_FALSE(report.conditions_hold);
            CHECK_FALSE(report.operator_sum_is_identity);
        }
    }
    SECTION("the realization is itself a valid unbiased POVM") {
        const auto p = build_mzx(0.8);
        const auto report = optimality_check(p);
        REQUIRE(report.realization_built);
        const auto first = pvm_along(p.vectors[0] * 4.0);
        const auto second = pvm_along(p.vectors[1] * 4.0);
        const auto mixture = mix(0.5, first, second);
        CHECK(validate(mixture.povm(), 1e-9).all_passed());
        ComplexMatrix bloch_sum(2, 2);
        for (const auto& e : mixture.povm().elements()) {
            bloch_sum += e - ComplexMatrix::identity(2) * 0.25;
        }
        CHECK(bloch_sum.max_abs() < 1e-12);
    }
}
