#pragma once

#include <array>
#include <cmath>

#include "povmkit/povm.hpp"

namespace povmkit {

/// Real 3-vector representing the traceless part of a qubit operator in the
/// Pauli basis.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }

    BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
    BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
    BlochVector operator-() const { return {-x, -y, -z}; }
    BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }

inline ComplexMatrix pauli_y() {
    return ComplexMatrix(2, 2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0});
}

inline ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

/// v . sigma
inline ComplexMatrix bloch_operator(const BlochVector& v) {
    return pauli_x() * v.x + pauli_y() * v.y + pauli_z() * v.z;
}

/// Unit-norm pure state with the given unit Bloch vector.
inline std::vector<Complex> bloch_pure_state(const BlochVector& unit) {
    const double theta = std::acos(std::min(1.0, std::max(-1.0, unit.z)));
    const double phi = std::atan2(unit.y, unit.x);
    return {Complex(std::cos(theta / 2.0), 0.0),
            std::polar(std::sin(theta / 2.0), phi)};
}

/// The two projectors (1 +- n.sigma)/2 of the spin measurement along unit n.
inline std::array<ComplexMatrix, 2> projectors_along(const BlochVector& unit) {
    const ComplexMatrix ns = bloch_operator(unit);
    const ComplexMatrix id = ComplexMatrix::identity(2);
    return {(id + ns) * 0.5, (id - ns) * 0.5};
}

/// Projective spin measurement along unit n with outcome values +1, -1.
inline ValuedPovm pvm_along(const BlochVector& unit, const std::string& plus_label = "+",
                            const std::string& minus_label = "-") {
    auto projs = projectors_along(unit);
    return ValuedPovm(
        Povm(2, {std::move(projs[0]), std::move(projs[1])}, {plus_label, minus_label}),
        {1.0, -1.0});
}

}  // namespace povmkit
