#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "sinelat/errors.hpp"
#include "sinelat/kernel.hpp"
#include "sinelat/sampling.hpp"

namespace sinelat {

/// Toeplitz symbol a_j = S(j/2): 1 at j = 0, 0 at even j != 0,
/// 2*(-1)^((|j|-1)/2) / (pi*|j|) at odd j.
inline double sigma_symbol(std::int64_t j) {
    const std::int64_t m = std::abs(j);
    if (m == 0) return 1.0;
    if (m % 2 == 0) return 0.0;
    const double sign = ((m - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return 2.0 * sign / (std::numbers::pi * static_cast<double>(m));
}

/// Sigma_L = (a_{k-j}) for 0 <= j,k < L.
inline Eigen::MatrixXd build_sigma(int l) {
    if (l < 0) throw std::domain_error("build_sigma: L must be >= 0");
    Eigen::MatrixXd sigma(l, l);
    for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k) sigma(j, k) = sigma_symbol(k - j);
    return sigma;
}

/// omega(L) = det(I - Sigma_L / 2), with omega(0) = 1.
///
/// Accumulated in the log domain from the eigenvalues mu_i of Sigma_L / 2:
/// omega decays fast enough that an LU determinant loses all relative
/// accuracy long before L = 40. Every mu_i must lie in [0, 1 + 1e-9]; the
/// matrix is a restriction of a projection, so anything larger is a hard
/// error rather than noise.
inline double omega(int l) {
    if (l < 0) throw std::domain_error("omega: L must be >= 0");
    if (l == 0) return 1.0;
    const Eigen::MatrixXd half_sigma = 0.5 * build_sigma(l);
    const auto solver = detail::solve_symmetric(half_sigma, false);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double mu = solver.eigenvalues()[i];
        if (mu > 1.0 + 1e-9) {
            std::ostringstream msg;
            msg << "omega: eigenvalue " << mu << " of Sigma_" << l
                << "/2 exceeds 1; projection restriction violated";
            throw macchi_violation_error(msg.str());
        }
        log_det += std::log1p(-std::min(mu, 1.0));
    }
    return std::exp(log_det);
}

/// Probability that the gap after an occupied site is exactly L/2:
/// G_{L/2} = 2 * (omega(L+1) + omega(L-1) - 2*omega(L)).
inline double gap_probability(int l) {
    if (l < 1) throw std::domain_error("gap_probability: L must be >= 1");
    return 2.0 * (omega(l + 1) + omega(l - 1) - 2.0 * omega(l));
}

/// The six closed-form gap values G_{1/2}..G_3, evaluated (never hardcoded
/// decimals). Index 0 holds G_{1/2}.
inline std::vector<double> closed_form_gap_values() {
    const double p2 = std::numbers::pi * std::numbers::pi;
    const double p4 = p2 * p2;
    const double p6 = p4 * p2;
    return {
        1.0 / 2.0 - 2.0 / p2,
        1.0 / 4.0 + 2.0 / p2,
        1.0 / 8.0 + 4.0 / (9.0 * p2) + 32.0 / (9.0 * p4),
        1.0 / 16.0 + 1.0 / (18.0 * p2) - 224.0 / (81.0 * p4),
        1.0 / 32.0 - 209.0 / (1800.0 * p2) - 1664.0 / (2025.0 * p4) - 131072.0 / (18225.0 * p6),
        1.0 / 64.0 - 3.0 / (25.0 * p2) - 13312.0 / (16875.0 * p4) + 2097152.0 / (455625.0 * p6),
    };
}

struct SumRules {
    double total_prob;
    double mean_gap;
    int l_used;
    /// Last gap value included; reported so callers can see the truncation level.
    double last_term;
};

/// Truncated sum rules: sum G -> 1 and sum (L/2) G -> 1 as L_max grows.
/// Stops early once G drops below 1e-14 (the remainder is far smaller).
inline SumRules gap_sum_rules(int l_max) {
    if (l_max < 1) throw std::domain_error("gap_sum_rules: L_max must be >= 1");
    // One omega table serves all second differences.
    std::vector<double> w(static_cast<std::size_t>(l_max) + 2);
    for (int l = 0; l <= l_max + 1; ++l) w[static_cast<std::size_t>(l)] = omega(l);
    SumRules rules{0.0, 0.0, 0, 0.0};
    for (int l = 1; l <= l_max; ++l) {
        const double g = 2.0 * (w[l + 1] + w[l - 1] - 2.0 * w[l]);
        rules.total_prob += g;
        rules.mean_gap += 0.5 * static_cast<double>(l) * g;
        rules.l_used = l;
        rules.last_term = g;
        if (g < 1e-14 && l >= 6) break;
    }
    return rules;
}

/// E z^{#B} = det(I + (z-1) M_B), the counting generating functional of the
/// window restricted to B. Complex z; z = 0 gives the hole probability.
/// Computed by complex LU, deliberately a different route than omega's
/// eigenvalue log-sum so the two can cross-check each other.
inline std::complex<double> count_pgf(const Eigen::MatrixXd& m_restricted, std::complex<double> z) {
    using Cplx = std::complex<double>;
    const Eigen::Index n = m_restricted.rows();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
    a += (z - Cplx(1.0)) * m_restricted.cast<Cplx>();
    return a.partialPivLu().determinant();
}

enum class GapSource { analytic, empirical };

/// Gap-size distribution keyed by L (gap = L/2).
struct GapDistribution {
    std::map<int, double> probabilities;
    GapSource source = GapSource::analytic;
    std::int64_t sample_size = 0;

    double probability(int l) const {
        const auto it = probabilities.find(l);
        return it == probabilities.end() ? 0.0 : it->second;
    }

    /// Binomial standard error of the frequency at L (empirical source only).
    double standard_error(int l) const {
        if (sample_size <= 0) return 0.0;
        const double p = probability(l);
        return std::sqrt(p * (1.0 - p) / static_cast<double>(sample_size));
    }
};

/// Histogram of consecutive gaps over interior points (margin sites dropped
/// at both window ends). Keys are doubled gaps L = index difference, so the
/// arithmetic stays exact; probabilities sum to 1.
inline GapDistribution empirical_gap_histogram(const std::vector<LatticeConfiguration>& configs,
                                               std::int64_t margin) {
    if (margin < 0) throw std::domain_error("empirical_gap_histogram: margin must be >= 0");
    GapDistribution dist;
    dist.source = GapSource::empirical;
    std::int64_t total = 0;
    std::map<int, std::int64_t> counts;
    for (const auto& config : configs) {
        if (config.indices.empty()) continue;
        const std::int64_t lo = config.indices.front() + margin;
        const std::int64_t hi = config.indices.back() - margin;
        for (std::size_t i = 1; i < config.indices.size(); ++i) {
            const std::int64_t left = config.indices[i - 1];
            const std::int64_t right = config.indices[i];
            if (left < lo || right > hi) continue;
            counts[static_cast<int>(right - left)] += 1;
            ++total;
        }
    }
    if (total == 0) {
        throw std::domain_error("empirical_gap_histogram: no interior gaps after margin removal");
    }
    for (const auto& [l, n] : counts) {
        dist.probabilities[l] = static_cast<double>(n) / static_cast<double>(total);
    }
    dist.sample_size = total;
    return dist;
}

} // namespace sinelat
