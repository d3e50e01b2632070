#include <catch2/catch.hpp>

#include "povmkit/complex_matrix.hpp"
#include "povmkit/random.hpp"

using namespace povmkit;

namespace {

const Complex I(0.0, 1.0);

ComplexMatrix sigma_x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix sigma_y() { return ComplexMatrix(2, 2, {0.0, -I, I, 0.0}); }
ComplexMatrix sigma_z() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

}  // namespace

TEST_CASE("hermitian check", "[matrix]") {
    CHECK(is_hermitian(sigma_z(), 1e-12));
    CHECK(is_hermitian(sigma_y(), 1e-12));
    CHECK_FALSE(is_hermitian(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0}), 1e-12));
    CHECK_THROWS_AS(is_hermitian(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("psd check", "[matrix]") {
    CHECK(is_psd(ComplexMatrix::identity(2), 1e-9));
    CHECK_FALSE(is_psd(ComplexMatrix::diagonal({1.0, -0.001}), 1e-9));
    CHECK_THROWS_AS(is_psd(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), DomainError);

    // m_{++} of the mzx family at theta = pi/4: eigenvalues 1/4 +- 1/4
    const double c = std::cos(3.14159265358979323846 / 4.0) / 4.0;
    const double s = std::sin(3.14159265358979323846 / 4.0) / 4.0;
    ComplexMatrix m = ComplexMatrix::identity(2) * 0.25 + sigma_z() * c + sigma_x() * s;
    CHECK(is_psd(m, 1e-9));
    const EigenSystem es = eigen(m);
    CHECK(es.values[0] == Approx(0.0).margin(1e-12));
    CHECK(es.values[1] == Approx(0.5).margin(1e-12));
}

TEST_CASE("eigen basics", "[matrix]") {
    SECTION("sigma_x spectrum") {
        const EigenSystem es = eigen(sigma_x());
        REQUIRE(es.values.size() == 2);
        CHECK(es.values[0] == Approx(-1.0).margin(1e-12));
        CHECK(es.values[1] == Approx(1.0).margin(1e-12));
    }
    SECTION("degenerate diagonal") {
        const EigenSystem es = eigen(ComplexMatrix::diagonal({3.0, 3.0}));
        CHECK(es.values[0] == Approx(3.0));
        CHECK(es.values[1] == Approx(3.0));
        // columns orthonormal
        const ComplexMatrix g = es.vectors.adjoint() * es.vectors;
        CHECK(max_abs_diff(g, ComplexMatrix::identity(2)) < 1e-12);
    }
    SECTION("non-hermitian rejected") {
        CHECK_THROWS_AS(eigen(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), DomainError);
    }
}

TEST_CASE("eigen reconstruction round-trip on random Hermitian matrices", "[matrix]") {
    Rng rng = stream_rng(42, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(rng.next_u64() % 7);  // 2..8
        const ComplexMatrix h = random_hermitian(dim, rng);
        const EigenSystem es = eigen(h);

        for (std::size_t k = 0; k + 1 < es.values.size(); ++k) {
            REQUIRE(es.values[k] <= es.values[k + 1]);
        }
        const ComplexMatrix gram = es.vectors.adjoint() * es.vectors;
        REQUIRE(max_abs_diff(gram, ComplexMatrix::identity(dim)) < 1e-10);

        ComplexMatrix rec(dim, dim);
        for (std::size_t k = 0; k < dim; ++k) {
            rec += ComplexMatrix::outer(es.vectors.column(k)) * es.values[k];
        }
        ComplexMatrix diff = rec - h;
        REQUIRE(diff.frobenius_norm() < 1e-10);
    }
}

TEST_CASE("tensor product", "[matrix]") {
    CHECK(max_abs_diff(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                       ComplexMatrix::identity(4)) == 0.0);
    CHECK(max_abs_diff(tensor(sigma_z(), ComplexMatrix::identity(2)),
                       ComplexMatrix::diagonal({1.0, 1.0, -1.0, -1.0})) == 0.0);

    SECTION("sigma_z (x) sigma_x blocks") {
        const ComplexMatrix t = tensor(sigma_z(), sigma_x());
        ComplexMatrix expected(4, 4);
        expected(0, 1) = 1.0;
        expected(1, 0) = 1.0;
        expected(2, 3) = -1.0;
        expected(3, 2) = -1.0;
        CHECK(max_abs_diff(t, expected) == 0.0);
    }
    SECTION("associativity is exact on integer entries") {
        const ComplexMatrix a = sigma_z(), b = sigma_x(), c = ComplexMatrix::identity(2);
        CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) == 0.0);
    }
    SECTION("psd closed under tensor") {
        Rng rng = stream_rng(7, 1);
        for (int trial = 0; trial < 20; ++trial) {
            ComplexMatrix g1 = random_hermitian(2, rng);
            ComplexMatrix g2 = random_hermitian(3, rng);
            ComplexMatrix a = g1 * g1;  // psd
            ComplexMatrix b = g2 * g2;
            REQUIRE(is_psd(tensor(a, b), 1e-9));
        }
    }
}

TEST_CASE("embed_top_left", "[matrix]") {
    CHECK(max_abs_diff(embed_top_left(ComplexMatrix::identity(2), 3),
                       ComplexMatrix::diagonal({1.0, 1.0, 0.0})) == 0.0);
    CHECK(max_abs_diff(embed_top_left(sigma_z(), 2), sigma_z()) == 0.0);
    const ComplexMatrix e = embed_top_left(sigma_x(), 4);
    CHECK(e.rows() == 4);
    CHECK(e(0, 1) == Complex(1.0, 0.0));
    CHECK(e(3, 3) == Complex(0.0, 0.0));
    CHECK_THROWS_AS(embed_top_left(ComplexMatrix::identity(3), 2), DimensionError);
}

TEST_CASE("matrix exponential of i times Hermitian is unitary", "[matrix]") {
    Rng rng = stream_rng(11, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 1 + static_cast<std::size_t>(rng.next_u64() % 4);
        const ComplexMatrix u = matrix_exp_i(random_hermitian(dim, rng));
        CHECK(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(dim)) < 1e-12);
    }
    // exp(i * pi * sigma_z / 2) = i * sigma_z up to phase structure: check diag
    const ComplexMatrix r = matrix_exp_i(sigma_z() * (3.14159265358979323846 / 2.0));
    CHECK(std::abs(r(0, 0) - I) < 1e-12);
    CHECK(std::abs(r(1, 1) + I) < 1e-12);
}

TEST_CASE("inverse square root", "[matrix]") {
    Rng rng = stream_rng(13, 5);
    ComplexMatrix g = random_hermitian(3, rng);
    ComplexMatrix s = g * g + ComplexMatrix::identity(3) * 0.1;
    const ComplexMatrix r = hermitian_inverse_sqrt(s);
    CHECK(max_abs_diff(r * s * r, ComplexMatrix::identity(3)) < 1e-10);
    CHECK_THROWS_AS(hermitian_inverse_sqrt(ComplexMatrix::diagonal({1.0, 0.0})), NumericError);
}
