#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "sinelat/errors.hpp"

namespace sinelat {

/// n-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes from Newton iteration on P_n with the Chebyshev-angle initial guess;
/// converges to machine precision in a handful of steps for n <= 64.
class GaussLegendre {
public:
    explicit GaussLegendre(int n) : nodes_(n), weights_(n) {
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes_[n - 1 - i] = x;
            weights_[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    int size() const { return static_cast<int>(nodes_.size()); }

private:
    std::vector<double> nodes_, weights_;
};

/// Composite Gauss-Legendre over [lo, hi] with panels of width <= panel_width.
template <typename F>
double integrate_panels(double lo, double hi, double panel_width, const GaussLegendre& rule, F&& f) {
    if (hi <= lo) return 0.0;
    if ((hi - lo) / panel_width > 5e7) {
        throw quadrature_error("integration range / panel width exceeds the node budget");
    }
    const int n_panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
    const double h = (hi - lo) / n_panels;
    double total = 0.0;
    for (int p = 0; p < n_panels; ++p) {
        const double a = lo + p * h;
        const double mid = a + 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
            acc += rule.weights()[i] * f(mid + 0.5 * h * rule.nodes()[i]);
        }
        total += 0.5 * h * acc;
    }
    return total;
}

/// Flattened node/weight list for a composite rule; used by the product
/// quadratures that need the grid up front.
struct PanelGrid {
    std::vector<double> nodes, weights;
};

inline PanelGrid make_panel_grid(double lo, double hi, double panel_width, const GaussLegendre& rule) {
    PanelGrid g;
    const int n_panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
    const double h = (hi - lo) / n_panels;
    g.nodes.reserve(static_cast<std::size_t>(n_panels) * rule.size());
    g.weights.reserve(static_cast<std::size_t>(n_panels) * rule.size());
    for (int p = 0; p < n_panels; ++p) {
        const double mid = lo + p * h + 0.5 * h;
        for (int i = 0; i < rule.size(); ++i) {
            g.nodes.push_back(mid + 0.5 * h * rule.nodes()[i]);
            g.weights.push_back(0.5 * h * rule.weights()[i]);
        }
    }
    return g;
}

} // namespace sinelat
