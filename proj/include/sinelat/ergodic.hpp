#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "sinelat/correlation.hpp"
#include "sinelat/errors.hpp"
#include "sinelat/quadrature.hpp"
#include "sinelat/rng.hpp"
#include "sinelat/sampling.hpp"
#include "sinelat/sinc.hpp"
#include "sinelat/test_functions.hpp"

namespace sinelat {

/// One sampled half-integer-lattice configuration, fixed thereafter and used
/// as a deterministic sequence. Points are stored doubled (the lattice
/// indices themselves), so every gap is an exact positive integer in doubled
/// units, i.e. a positive multiple of 1/2 in real units.
struct DeterministicSequence {
    std::vector<std::int64_t> doubled_points;
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
    std::int64_t window_sites = 0;

    std::size_t size() const { return doubled_points.size(); }
    double point(std::size_t i) const { return 0.5 * static_cast<double>(doubled_points[i]); }
    double front() const { return point(0); }
    double back() const { return point(size() - 1); }
};

/// Fix one seeded sample of the half-integer-lattice process as the sequence.
inline DeterministicSequence build_sequence(SeededStream rng, std::int64_t n_sites,
                                            const SamplerOptions& options = {}) {
    DeterministicSequence seq;
    seq.seed = rng.seed();
    seq.stream_index = rng.stream_index();
    seq.window_sites = n_sites;
    seq.doubled_points =
        sample_lattice_window(LatticeSpacing::ah_default(), n_sites, rng, options).indices;
    if (seq.doubled_points.empty()) {
        throw std::runtime_error("build_sequence: sampled configuration is empty");
    }
    return seq;
}

/// Tuning knobs for the shift/time averages.
struct AverageOptions {
    /// Absolute l1 tail allowance per coordinate when truncating eta to a
    /// finite support radius around the shift.
    double tail_abs = 1e-6;
    /// Extra interior margin beyond the effective support radius, in units.
    double extra_margin = 32.0;
    /// Gauss-Legendre panel width and node count for the t integral.
    double t_panel = 0.125;
    int t_nodes = 4;
};

namespace detail {

/// Points of the sequence within [center - radius, center + radius],
/// located by binary search.
struct WindowView {
    const std::int64_t* doubled;
    std::size_t count;
};

inline WindowView window_around(const DeterministicSequence& seq, double center, double radius) {
    const auto lo_val = static_cast<std::int64_t>(std::ceil(2.0 * (center - radius)));
    const auto hi_val = static_cast<std::int64_t>(std::floor(2.0 * (center + radius)));
    const auto& dp = seq.doubled_points;
    const auto lo = std::lower_bound(dp.begin(), dp.end(), lo_val);
    const auto hi = std::upper_bound(lo, dp.end(), hi_val);
    return WindowView{&*lo, static_cast<std::size_t>(hi - lo)};
}

/// Sum of eta over distinct point tuples, sum_distinct eta(c - shift), for
/// points restricted to the effective window. The observable carries no
/// determinant weight; determinants enter only through the target side
/// (the correlation density the average converges to). Separability turns
/// the distinct-tuple sums into inclusion-exclusion over power sums, so one
/// shift costs O(window points) for every n.
class ShiftStatistic {
public:
    ShiftStatistic(const DeterministicSequence& seq, const BandLimitedTestFunction& eta,
                   double radius)
        : seq_(seq), eta_(eta), radius_(radius) {}

    double operator()(double shift) const {
        const auto view = window_around(seq_, shift, radius_);
        const std::size_t w = view.count;
        if (w == 0) return 0.0;
        const int n = eta_.dimension();

        thread_local std::vector<double> g1, g2, g3;
        auto fill = [&](std::vector<double>& g, const SincFactor& f) {
            g.resize(w);
            for (std::size_t i = 0; i < w; ++i) {
                g[i] = f(0.5 * static_cast<double>(view.doubled[i]) - shift);
            }
        };

        switch (n) {
        case 1: {
            fill(g1, eta_.factors[0]);
            double sum = 0.0;
            for (std::size_t i = 0; i < w; ++i) sum += g1[i];
            return sum;
        }
        case 2: {
            fill(g1, eta_.factors[0]);
            fill(g2, eta_.factors[1]);
            double s1 = 0.0, s2 = 0.0, d12 = 0.0;
            for (std::size_t i = 0; i < w; ++i) {
                s1 += g1[i];
                s2 += g2[i];
                d12 += g1[i] * g2[i];
            }
            return s1 * s2 - d12;
        }
        case 3: {
            fill(g1, eta_.factors[0]);
            fill(g2, eta_.factors[1]);
            fill(g3, eta_.factors[2]);
            double s1 = 0.0, s2 = 0.0, s3 = 0.0;
            double d12 = 0.0, d13 = 0.0, d23 = 0.0, t123 = 0.0;
            for (std::size_t i = 0; i < w; ++i) {
                s1 += g1[i];
                s2 += g2[i];
                s3 += g3[i];
                d12 += g1[i] * g2[i];
                d13 += g1[i] * g3[i];
                d23 += g2[i] * g3[i];
                t123 += g1[i] * g2[i] * g3[i];
            }
            return s1 * s2 * s3 - d12 * s3 - d13 * s2 - d23 * s1 + 2.0 * t123;
        }
        default:
            throw std::domain_error("shift statistics support n <= 3");
        }
    }

    double radius() const { return radius_; }

private:
    const DeterministicSequence& seq_;
    const BandLimitedTestFunction& eta_;
    double radius_;
};

} // namespace detail

/// (1/N) sum_{l=0}^{N-1} sum_distinct eta(c - l/2), the ergodic lattice-shift
/// average. Shifts start deep enough inside the sequence that eta's effective
/// support never reaches the ends; an over-long schedule is an error.
inline double lattice_average_statistic(const DeterministicSequence& seq,
                                        const BandLimitedTestFunction& eta,
                                        std::int64_t n_shifts,
                                        const AverageOptions& options = {}) {
    if (n_shifts < 1) throw std::domain_error("lattice_average_statistic: n_shifts must be >= 1");
    const double radius = eta.radius_for_tail(options.tail_abs);
    const double margin = radius + options.extra_margin;
    const auto l0 = static_cast<std::int64_t>(std::ceil(2.0 * (seq.front() + margin)));
    const auto l_max = static_cast<std::int64_t>(std::floor(2.0 * (seq.back() - margin)));
    if (l0 + n_shifts - 1 > l_max) {
        std::ostringstream msg;
        msg << "sequence span [" << seq.front() << ", " << seq.back() << "] cannot host "
            << n_shifts << " shifts with margin " << margin;
        throw span_exhausted_error(msg.str());
    }
    const detail::ShiftStatistic stat(seq, eta, radius);
    double sum = 0.0;
    for (std::int64_t l = 0; l < n_shifts; ++l) {
        sum += stat(0.5 * static_cast<double>(l0 + l));
    }
    return sum / static_cast<double>(n_shifts);
}

/// (1/T) int_T^{2T} sum_distinct eta(c - t) dt by composite Gauss-Legendre;
/// the integrand is smooth in t between lattice events, and panels of 1/8
/// resolve it comfortably. The sequence is shifted so that integration
/// starts a margin past its front.
inline double continuous_average_statistic(const DeterministicSequence& seq,
                                           const BandLimitedTestFunction& eta, double t_length,
                                           const AverageOptions& options = {}) {
    if (!(t_length > 0.0)) {
        throw std::domain_error("continuous_average_statistic: T must be > 0");
    }
    const double radius = eta.radius_for_tail(options.tail_abs);
    const double margin = radius + options.extra_margin;
    const double t_start = seq.front() + margin + t_length;
    if (t_start + t_length > seq.back() - margin) {
        std::ostringstream msg;
        msg << "sequence span [" << seq.front() << ", " << seq.back()
            << "] cannot host the integral over [T, 2T] with T = " << t_length << " and margin "
            << margin;
        throw span_exhausted_error(msg.str());
    }
    const detail::ShiftStatistic stat(seq, eta, radius);
    const GaussLegendre rule(options.t_nodes);
    const double integral = integrate_panels(t_start, t_start + t_length, options.t_panel, rule,
                                             [&](double t) { return stat(t); });
    return integral / t_length;
}

struct DiagnosticPoint {
    double scale;     ///< number of shifts (or T) used
    double value;
    double target;
    double deviation; ///< |value - target|
};

/// Shift-averages over a growing schedule against a fixed target; reports the
/// trend without asserting any rate.
inline std::vector<DiagnosticPoint> convergence_diagnostic(
    const DeterministicSequence& seq, const BandLimitedTestFunction& eta,
    const std::vector<std::int64_t>& shift_schedule, double target,
    const AverageOptions& options = {}) {
    std::vector<DiagnosticPoint> series;
    series.reserve(shift_schedule.size());
    for (const auto n : shift_schedule) {
        const double value = lattice_average_statistic(seq, eta, n, options);
        series.push_back(DiagnosticPoint{static_cast<double>(n), value, target,
                                         std::abs(value - target)});
    }
    return series;
}

/// Least-squares slope of log(deviation) against log(scale) after a 3-point
/// median smoothing; a non-positive slope is the "non-increasing in trend"
/// criterion. Deviations below `floor` are clamped so that a converged tail
/// cannot flip the sign with noise in the last digit.
inline double diagnostic_trend_slope(const std::vector<DiagnosticPoint>& series,
                                     double floor = 1e-12) {
    if (series.size() < 2) return 0.0;
    std::vector<double> dev(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        dev[i] = std::max(series[i].deviation, floor);
    }
    std::vector<double> smooth(dev);
    for (std::size_t i = 1; i + 1 < dev.size(); ++i) {
        std::array<double, 3> tri{dev[i - 1], dev[i], dev[i + 1]};
        std::sort(tri.begin(), tri.end());
        smooth[i] = tri[1];
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double x = std::log(series[i].scale);
        const double y = std::log(smooth[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace sinelat
