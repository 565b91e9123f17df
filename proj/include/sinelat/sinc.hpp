#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "sinelat/errors.hpp"

namespace sinelat {

/// S(x) = sin(pi x)/(pi x), S(0) = 1.
///
/// Exact zero at every nonzero integer argument (sin(pi*m) would otherwise
/// leave ~1e-16 residue from the rounding of pi). Near the origin a short
/// even series avoids the 0/0 cancellation.
inline double sinc_eval(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("sinc_eval: non-finite argument");
    }
    if (x == 0.0) return 1.0;
    if (x == std::nearbyint(x)) return 0.0;
    const double px = std::numbers::pi * x;
    if (std::abs(px) < 1e-4) {
        const double p2 = px * px;
        return 1.0 - p2 / 6.0 * (1.0 - p2 / 20.0);
    }
    return std::sin(px) / px;
}

/// det[S(x_i - x_j)] for a tuple of real positions.
///
/// A Gram determinant of unit vectors in L^2[-1/2,1/2], hence in [0,1] and
/// exactly 0 when two positions coincide. Dimensions 1..3 are expanded
/// directly; larger tuples fall back to an LU determinant.
inline double sine_determinant(std::span<const double> xs) {
    const std::size_t n = xs.size();
    // equal rows: exactly singular, short-circuit before the expansion can
    // leave rounding residue
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (xs[i] == xs[j]) return 0.0;
    switch (n) {
    case 0:
        return 1.0;
    case 1:
        return 1.0;
    case 2: {
        const double s = sinc_eval(xs[0] - xs[1]);
        return 1.0 - s * s;
    }
    case 3: {
        const double s01 = sinc_eval(xs[0] - xs[1]);
        const double s02 = sinc_eval(xs[0] - xs[2]);
        const double s12 = sinc_eval(xs[1] - xs[2]);
        return 1.0 + 2.0 * s01 * s02 * s12 - s01 * s01 - s02 * s02 - s12 * s12;
    }
    default: {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    sinc_eval(xs[i] - xs[j]);
        return m.partialPivLu().determinant();
    }
    }
}

} // namespace sinelat
