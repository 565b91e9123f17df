#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sinelat/errors.hpp"
#include "sinelat/kernel.hpp"
#include "sinelat/rng.hpp"

namespace sinelat {

/// Occupied sites of one sampled window, as strictly increasing lattice
/// indices j (the realized points are j*a). Integer indices keep all pairwise
/// distances exact multiples of a.
struct LatticeConfiguration {
    LatticeSpacing a;
    std::vector<std::int64_t> indices;

    std::size_t count() const { return indices.size(); }
    double point(std::size_t i) const { return static_cast<double>(indices[i]) * a.value; }

    void check_strictly_increasing() const {
        for (std::size_t i = 1; i < indices.size(); ++i) {
            if (indices[i] <= indices[i - 1]) {
                throw std::logic_error("LatticeConfiguration: indices not strictly increasing");
            }
        }
    }
};

/// Half-integer-lattice configuration shifted left by omega in [0, 1/2).
/// Realized points are indices[i]/2 - shift; consecutive gaps stay exact
/// half-integers because they are differences of integer indices.
struct AhConfiguration {
    LatticeConfiguration base{LatticeSpacing::ah_default(), {}};
    double shift = 0.0;

    double point(std::size_t i) const { return 0.5 * static_cast<double>(base.indices[i]) - shift; }

    std::vector<double> points() const {
        std::vector<double> xs(base.indices.size());
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = point(i);
        return xs;
    }
};

struct SamplerOptions {
    /// Windows above this size switch from the spectral (HKPV) sampler to the
    /// streaming conditional sampler; the dense eigendecomposition becomes
    /// the bottleneck first.
    int streaming_threshold = 4096;
    /// Width of the sliding conditional-kernel window in the streaming path.
    int conditioning_window = 768;
};

/// Statistical consumers must discard this margin of sites at each window end
/// (kernel decay is only 1/x).
inline std::int64_t statistics_margin(std::int64_t n_sites) {
    return std::max<std::int64_t>(32, n_sites / 10);
}

namespace detail {

/// One sequential-projection draw from an orthonormal basis: repeatedly pick
/// a site with probability row-norm^2 / rank, then rotate the basis so the
/// picked coordinate lives in a single column and drop that column. Right
/// multiplication by a Householder reflection keeps the columns orthonormal,
/// so restricting to the orthogonal complement of the coordinate functional
/// needs no extra work beyond a periodic re-orthonormalization against
/// floating drift.
inline std::vector<std::int64_t> projection_sample(Eigen::MatrixXd basis, SeededStream& rng) {
    const Eigen::Index n = basis.rows();
    std::vector<std::int64_t> selected;
    selected.reserve(static_cast<std::size_t>(basis.cols()));

    int steps_since_reorth = 0;
    Eigen::VectorXd row_norms(n);
    while (basis.cols() > 0) {
        const Eigen::Index r = basis.cols();
        row_norms.setZero();
        for (Eigen::Index c = 0; c < r; ++c) row_norms.array() += basis.col(c).array().square();
        const double total = row_norms.sum();
        if (!(total > 1e-9 * static_cast<double>(r))) {
            throw degenerate_basis_error("projection basis lost rank during sequential sampling");
        }

        const double u = rng.uniform() * total;
        Eigen::Index site = n - 1;
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            acc += row_norms[j];
            if (u < acc) {
                site = j;
                break;
            }
        }

        Eigen::VectorXd row = basis.row(site).transpose();
        const double norm = row.norm();
        if (!(norm > 1e-10)) {
            throw degenerate_basis_error("selected site has numerically zero projection weight");
        }
        selected.push_back(site);

        Eigen::Index pivot = 0;
        row.cwiseAbs().maxCoeff(&pivot);
        // v maps the picked row onto -sign(row[pivot]) * norm * e_pivot.
        Eigen::VectorXd v = row;
        v[pivot] += std::copysign(norm, row[pivot]);
        v /= v.norm();
        basis.noalias() -= (basis * v) * (2.0 * v.transpose());

        basis.col(pivot).swap(basis.col(r - 1));
        basis.conservativeResize(Eigen::NoChange, r - 1);

        if (++steps_since_reorth >= 64 && basis.cols() > 1) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
            basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, basis.cols());
            steps_since_reorth = 0;
        }
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

} // namespace detail

/// Exact sampler for the determinantal process on one window, with the
/// eigendecomposition cached so that repeated draws of the same window do not
/// re-decompose. For every subset A of window sites, a draw satisfies
/// P(A subset of sample) = det(M_A).
class WindowSampler {
public:
    explicit WindowSampler(const KernelWindowMatrix& m)
        : a_(m.spacing()), solver_(detail::solve_symmetric(m.matrix(), true)),
          lambda_(clip_unit_interval(solver_.eigenvalues())) {}

    /// Spectral thinning (keep eigenvector i with probability lambda_i, in
    /// ascending eigenvalue order) followed by sequential projection sampling.
    LatticeConfiguration draw(SeededStream& rng) const {
        std::vector<Eigen::Index> kept;
        kept.reserve(static_cast<std::size_t>(lambda_.size()));
        for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
            if (rng.bernoulli(lambda_[i])) kept.push_back(i);
        }

        LatticeConfiguration config{a_, {}};
        if (kept.empty()) return config;

        Eigen::MatrixXd basis(solver_.eigenvectors().rows(), static_cast<Eigen::Index>(kept.size()));
        for (std::size_t c = 0; c < kept.size(); ++c) {
            basis.col(static_cast<Eigen::Index>(c)) = solver_.eigenvectors().col(kept[c]);
        }
        config.indices = detail::projection_sample(std::move(basis), rng);
        config.check_strictly_increasing();
        return config;
    }

    const Eigen::VectorXd& eigenvalues() const { return lambda_; }

private:
    LatticeSpacing a_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
    Eigen::VectorXd lambda_;
};

inline LatticeConfiguration sample_window(const KernelWindowMatrix& m, SeededStream& rng) {
    return WindowSampler(m).draw(rng);
}

/// Streaming sample of a long window by sequential site-by-site conditioning.
///
/// Walks the sites in order; the occupation probability of site i given the
/// history is the leading diagonal entry of the conditioned kernel, and the
/// conditioning itself is a rank-one Schur update with pivot p (occupied) or
/// p - 1 (empty). Each pivot updates the next `window` sites; interactions
/// across a longer range are dropped. The kernel decays like 1/x, so with
/// the default window the truncation sits far below Monte Carlo resolution
/// (measured against the spectral path in the sampler tests).
inline LatticeConfiguration sample_window_streaming(LatticeSpacing a, std::int64_t n_sites,
                                                    SeededStream& rng, int window = 768) {
    if (n_sites < 1) throw std::domain_error("sample_window_streaming: n_sites must be >= 1");
    if (window < 2) throw std::domain_error("sample_window_streaming: window must be >= 2");
    if (!a.existence_valid()) {
        const auto witness = rayleigh_witness(a);
        std::ostringstream msg;
        msg << "no a-discrete sine process for a = " << a.value
            << " (<psi,K psi> = " << witness.quadratic_form << " > " << witness.norm
            << " = <psi,psi>)";
        throw macchi_violation_error(msg.str());
    }

    const std::int64_t w = std::min<std::int64_t>(window, n_sites);
    const std::int64_t cap = 2 * w;
    Eigen::VectorXd first_row(cap);
    for (std::int64_t k = 0; k < cap; ++k) {
        first_row[k] = a.value * sinc_eval(a.value * static_cast<double>(k));
    }

    // c holds the conditioned kernel (lower triangle only) for the sites
    // [base, base + cap); the current site sits at offset i - base < w.
    Eigen::MatrixXd c(cap, cap);
    {
        const std::int64_t fill = std::min(cap, n_sites);
        for (std::int64_t col = 0; col < fill; ++col)
            for (std::int64_t r = col; r < fill; ++r) c(r, col) = first_row[r - col];
    }
    std::int64_t base = 0;

    LatticeConfiguration config{a, {}};
    config.indices.reserve(
        static_cast<std::size_t>(std::ceil(static_cast<double>(n_sites) * a.value * 1.1)) + 16);

    for (std::int64_t i = 0; i < n_sites; ++i) {
        std::int64_t o = i - base;
        if (o == w) {
            // Slide by w: move the live block down-left, then refill raw
            // kernel entries for the w freshly appended sites. Column order
            // keeps reads ahead of writes in the overlapping copy.
            const std::int64_t live = std::min(cap - w, n_sites - i);
            for (std::int64_t col = 0; col < live; ++col) {
                c.col(col).segment(col, live - col) = c.col(col + w).segment(col + w, live - col);
            }
            base += w;
            const std::int64_t filled = std::min(cap, n_sites - base);
            for (std::int64_t r = live; r < filled; ++r)
                for (std::int64_t col = 0; col <= r; ++col) c(r, col) = first_row[r - col];
            o = i - base;
        }

        const double p = c(o, o);
        const bool occupied = rng.uniform() < p;
        if (occupied) config.indices.push_back(i);

        const double pivot = occupied ? p : p - 1.0;
        if (std::abs(pivot) < 1e-12) {
            throw degenerate_basis_error("streaming sampler hit a numerically singular pivot");
        }
        const std::int64_t upd = std::min<std::int64_t>(w, n_sites - i - 1);
        if (upd > 0) {
            auto col = c.col(o).segment(o + 1, upd);
            c.block(o + 1, o + 1, upd, upd).selfadjointView<Eigen::Lower>().rankUpdate(
                col, -1.0 / pivot);
        }
    }
    config.check_strictly_increasing();
    return config;
}

/// Sample a length-n_sites window of the a-discrete sine process, choosing
/// the spectral or streaming path by window size.
inline LatticeConfiguration sample_lattice_window(LatticeSpacing a, std::int64_t n_sites,
                                                  SeededStream& rng,
                                                  const SamplerOptions& options = {}) {
    if (n_sites <= options.streaming_threshold) {
        const KernelWindowMatrix m(a, static_cast<int>(n_sites));
        const auto report = macchi_spectrum_check(m);
        if (!report.pass) {
            std::ostringstream msg;
            msg << "kernel window fails the Macchi condition: spectrum ["
                << report.min_eigenvalue << ", " << report.max_eigenvalue << "]";
            throw macchi_violation_error(msg.str());
        }
        return sample_window(m, rng);
    }
    return sample_window_streaming(a, n_sites, rng, options.conditioning_window);
}

/// AH configuration: one half-integer-lattice window plus an independent
/// uniform shift from [0, 1/2), drawn after the window sample so that the
/// stream layout is fixed.
inline AhConfiguration sample_ah_configuration(std::int64_t n_sites, SeededStream& rng,
                                               const SamplerOptions& options = {}) {
    AhConfiguration config;
    config.base = sample_lattice_window(LatticeSpacing::ah_default(), n_sites, rng, options);
    config.shift = 0.5 * rng.uniform();
    return config;
}

struct CountMoments {
    double mean_count;
    double variance;
};

/// Monte Carlo mean and variance of the point count over repeated window
/// samples. Converges to trace(M) and trace(M) - trace(M^2).
inline CountMoments empirical_count_moments(const KernelWindowMatrix& m, int reps,
                                            SeededStream& rng) {
    if (reps < 1) throw std::domain_error("empirical_count_moments: reps must be >= 1");
    const WindowSampler sampler(m);
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double k = static_cast<double>(sampler.draw(rng).count());
        sum += k;
        sum_sq += k * k;
    }
    const double mean = sum / reps;
    return CountMoments{mean, sum_sq / reps - mean * mean};
}

} // namespace sinelat
