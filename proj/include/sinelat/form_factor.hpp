#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <sstream>
#include <vector>

#include "sinelat/errors.hpp"
#include "sinelat/quadrature.hpp"
#include "sinelat/test_functions.hpp"

namespace sinelat {

/// Two-point form factor models: the half-integer-spacing one is a Dirac comb
/// on 2Z plus the 2-periodization of |xi| from [-1,1]; the sine-process one
/// is a single Dirac at 0 plus min(|xi|, 1). They coincide on [-1,1].
enum class FormFactorModel { alt, gue };

namespace detail {

/// 2-periodic triangle wave equal to |xi| on [-1, 1].
inline double periodized_abs(double xi) {
    double u = std::fmod(xi, 2.0);
    if (u < -1.0) u += 2.0;
    if (u > 1.0) u -= 2.0;
    return std::abs(u);
}

inline double density_part(double xi, FormFactorModel model) {
    return model == FormFactorModel::alt ? periodized_abs(xi) : std::min(std::abs(xi), 1.0);
}

} // namespace detail

/// int fhat(xi) K_model(xi) dxi with the Dirac masses added as point
/// evaluations of fhat (all even integers for the comb model, 0 for the
/// single-mass model).
///
/// fhat is piecewise polynomial with knots at +-modulation + k*band and the
/// continuous part of K is piecewise linear with knots at the integers, so
/// Gauss-Legendre between consecutive breakpoints integrates exactly.
inline double form_factor_theoretical(const SincFactor& f, FormFactorModel model) {
    f.validate();
    const double upper = f.band_upper();

    double mass = 0.0;
    if (model == FormFactorModel::alt) {
        for (double e = 0.0; e <= upper + 1e-12; e += 2.0) {
            mass += f.transform(e);
            if (e > 0.0) mass += f.transform(-e);
        }
    } else {
        mass = f.transform(0.0);
    }

    // Breakpoints: spline knots of fhat plus integer kinks of K.
    std::set<double> breaks;
    for (int lobe = -1; lobe <= 1; lobe += 2) {
        const double center = lobe * f.modulation;
        for (int k = -f.half_power; k <= f.half_power; ++k) {
            const double xi = center + k * f.band;
            if (std::abs(xi) <= upper + 1e-12) breaks.insert(xi);
        }
    }
    for (double e = -std::ceil(upper); e <= std::ceil(upper) + 1e-12; e += 1.0) {
        if (std::abs(e) <= upper + 1e-12) breaks.insert(e);
    }
    breaks.insert(-upper);
    breaks.insert(upper);

    const GaussLegendre rule(2 * f.half_power + 2);
    double integral = 0.0;
    double prev = 0.0;
    bool first = true;
    for (const double b : breaks) {
        if (!first && b > prev + 1e-14) {
            const double mid = 0.5 * (prev + b);
            const double half = 0.5 * (b - prev);
            for (int i = 0; i < rule.size(); ++i) {
                const double xi = mid + half * rule.nodes()[i];
                integral += half * rule.weights()[i] * f.transform(xi) *
                            detail::density_part(xi, model);
            }
        }
        prev = b;
        first = false;
    }
    return mass + integral;
}

struct EmpiricalFormFactor {
    double value;
    double std_error;   ///< from block decomposition of the outer sum
    std::int64_t outer_points;
    double t_effective; ///< window length actually averaged over
};

/// (1/T) sum over ordered pairs (diagonal included, realizing the Dirac mass)
/// of f applied to point differences. Outer points keep a margin of
/// max(f_radius, 32) from the window ends so every partner within the support
/// of f is present; partners come from the whole window.
template <typename F>
EmpiricalFormFactor empirical_form_factor(std::span<const double> points, F&& f,
                                          double t_length, double f_radius,
                                          int n_blocks = 16) {
    if (points.empty()) {
        throw std::domain_error("empirical_form_factor: no points");
    }
    if (!(t_length > 0.0)) {
        throw std::domain_error("empirical_form_factor: T must be > 0");
    }
    if (points.size() == 1) {
        // one point, one (diagonal) pair
        return EmpiricalFormFactor{f(0.0) / t_length, 0.0, 1, t_length};
    }
    const double t0 = points.front();
    const double margin = std::max(f_radius, 32.0);
    const double t_eff = t_length - 2.0 * margin;
    if (t_eff <= 0.0 || points.back() - t0 < t_length) {
        std::ostringstream msg;
        msg << "window too short: span " << points.back() - t0 << ", requested T " << t_length
            << " with margin " << margin;
        throw std::domain_error(msg.str());
    }

    n_blocks = std::max(1, n_blocks);
    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
    const double block_width = t_eff / n_blocks;

    std::size_t lo = 0;
    std::int64_t outer = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const double x = points[j] - t0;
        if (x < margin || x > t_length - margin) continue;
        ++outer;
        while (lo < points.size() && points[lo] < points[j] - f_radius) ++lo;
        double acc = 0.0;
        for (std::size_t k = lo; k < points.size(); ++k) {
            if (points[k] > points[j] + f_radius) break;
            const double pk = points[k] - t0;
            if (pk < 0.0 || pk > t_length) continue;
            acc += f(points[j] - points[k]);
        }
        const int block = std::min(n_blocks - 1,
                                   static_cast<int>((x - margin) / block_width));
        block_sum[static_cast<std::size_t>(block)] += acc;
    }
    if (outer == 0) throw std::domain_error("empirical_form_factor: no interior points");

    double total = 0.0;
    for (const double s : block_sum) total += s;
    const double value = total / t_eff;

    double var = 0.0;
    for (const double s : block_sum) {
        const double b = s / block_width;
        var += (b - value) * (b - value);
    }
    const double std_error =
        n_blocks > 1 ? std::sqrt(var / (n_blocks * (n_blocks - 1.0))) : 0.0;

    return EmpiricalFormFactor{value, std_error, outer, t_eff};
}

} // namespace sinelat
