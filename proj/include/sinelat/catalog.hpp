#pragma once

#include <vector>

#include "sinelat/test_functions.hpp"

namespace sinelat {

/// Named representative test functions used by the verification suites and
/// the command-line front end. Bands are exact by construction; see each
/// group for the constraint it satisfies.
namespace catalog {

/// n = 1 members band-limited inside (-1, 1): agreement at a = 1/2 holds to
/// truncation error. All use half_power >= 2 so the l1 tails close fast
/// enough for 1e-8 work.
inline std::vector<SincFactor> n1_agreement_members() {
    return {
        {1.0, 0.45, 2, 0.0},   // band 0.9
        {0.8, 0.30, 3, 0.0},   // band 0.9
        {1.2, 0.20, 2, 0.5},   // band 0.9, modulated
        {1.0, 0.15, 3, 0.5},   // band 0.95
        {0.7, 0.35, 2, 0.25},  // band 0.95
    };
}

/// n = 2 members with support inside (-1, 1)^2.
inline std::vector<BandLimitedTestFunction> j2_members() {
    const SincFactor a{1.0, 0.45, 2, 0.0};
    const SincFactor b{0.9, 0.25, 2, 0.3};
    const SincFactor c{1.0, 0.30, 3, 0.0};
    return {product({a, a}), product({c, b})};
}

/// Transform avoiding the zero-sum hyperplane: lobes at +-[1, 2].
inline SincFactor i1_member() { return {1.0, 1.0 / 6.0, 3, 1.5}; }

/// Pair with lobes +-[1,2] x +-[3,4]: every sign combination of the lobe
/// centers keeps the coordinate sum away from 0.
inline BandLimitedTestFunction i2_member() {
    return product({SincFactor{1.0, 1.0 / 6.0, 3, 1.5}, SincFactor{1.0, 1.0 / 6.0, 3, 3.5}});
}

/// Band 0.8 per factor: past 1/(2a) once a > 0.625, used to demonstrate the
/// sharpness of the band-limited agreement at a = 0.9.
inline BandLimitedTestFunction sharpness_member() {
    const SincFactor s{1.0, 0.4, 2, 0.0};
    return product({s, s});
}

struct FormFactorProbe {
    SincFactor f;
    const char* name;
};

/// Pair-statistic probes: the triangle pair agree across models; the
/// shifted-triangle discriminator separates them.
inline std::vector<FormFactorProbe> form_factor_probes() {
    return {
        {{1.0, 1.0, 1, 0.0}, "triangle"},
        {{1.0, 0.5, 2, 0.0}, "bump_m2"},
        {{2.0, 1.0, 1, 2.0}, "shifted_triangle"},
    };
}

/// Default member for ergodic diagnostics (n = 1, unit-free decay).
inline SincFactor ergodic_member() { return {1.0, 0.45, 2, 0.0}; }

} // namespace catalog
} // namespace sinelat
