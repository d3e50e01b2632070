// Walk through the joint z/x estimation family: uncertainty operators,
// variance sums, the mixture entropy bound, and the minimal extension.

#include <cstdio>

#include "povmkit/povmkit.hpp"

using namespace povmkit;

int main() {
    const double pi = 3.14159265358979323846;

    std::printf("theta      dZ2    dX2    varsum@+z  mixture_bound  min_entropy\n");
    for (const double theta : {0.0, pi / 8.0, pi / 4.0}) {
        const JointQubitPovm joint = build_mzx(theta);
        const auto analysis = analyze(joint);
        const double dz = analysis.delta_z2(0, 0).real();
        const double dx = analysis.delta_x2(0, 0).real();
        const double varsum = variance_sum(joint, QuantumState::pure({1.0, 0.0}));

        const auto branch_a = pvm_along({std::sin(theta), 0.0, std::cos(theta)});
        const auto branch_b = pvm_along({-std::sin(theta), 0.0, std::cos(theta)});
        const double mix_bound = bound_pvm_mixture(branch_a.povm(), branch_b.povm()).value_bits;

        OptimizerConfig config;
        config.seed = 1;
        config.starts = 16;
        const Povm measurement = joint.povm();
        const double min_h = min_entropy_over_states(measurement, config).second;

        std::printf("%-9.4f  %-5.3f  %-5.3f  %-9.4f  %-13.4f  %-10.4f\n", theta, dz, dx, varsum,
                    mix_bound, min_h);
    }

    const auto tetra = catalog_build("tetrahedron");
    const auto ext = extend(tetra.povm);
    ComplexMatrix minus(1, 1);
    minus(0, 0) = -1.0;
    std::printf("\ntetrahedron: eigenvalue bound %.5f bits, extension bound %.5f bits\n",
                bound_max_eigenvalue(tetra.povm).value_bits,
                single_naimark_value_at(ext, AncillaUnitary(minus), 2).value_bits);
    return 0;
}
