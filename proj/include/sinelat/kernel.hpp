#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "sinelat/errors.hpp"
#include "sinelat/sinc.hpp"

namespace sinelat {

/// Lattice spacing a of the lattice a*Z. The associated point process exists
/// only for 0 < a <= 1; larger spacings are still representable so that the
/// violation itself can be demonstrated.
struct LatticeSpacing {
    double value;

    explicit LatticeSpacing(double a) : value(a) {
        if (!(std::isfinite(a) && a > 0.0)) {
            throw std::domain_error("LatticeSpacing: a must be finite and > 0");
        }
    }

    bool existence_valid() const { return value <= 1.0; }

    /// Spacing of the half-integer lattice used by the shifted construction.
    static LatticeSpacing ah_default() { return LatticeSpacing(0.5); }
};

/// Finite restriction of the lattice sine-kernel operator to N consecutive
/// sites: entries[i][j] = a * S(a * (i - j)). Built from one first row, so the
/// matrix is bitwise Toeplitz-symmetric. Immutable after construction.
class KernelWindowMatrix {
public:
    KernelWindowMatrix(LatticeSpacing a, int n_sites) : a_(a) {
        if (n_sites < 1) throw std::domain_error("KernelWindowMatrix: n_sites must be >= 1");
        Eigen::VectorXd first_row(n_sites);
        for (int k = 0; k < n_sites; ++k) first_row[k] = a.value * sinc_eval(a.value * k);
        entries_.resize(n_sites, n_sites);
        for (int i = 0; i < n_sites; ++i)
            for (int j = 0; j < n_sites; ++j) entries_(i, j) = first_row[std::abs(i - j)];
    }

    const Eigen::MatrixXd& matrix() const { return entries_; }
    LatticeSpacing spacing() const { return a_; }
    int size() const { return static_cast<int>(entries_.rows()); }
    double trace() const { return entries_.trace(); }

    /// Principal minor M_A for a subset A of window sites.
    Eigen::MatrixXd submatrix(const std::vector<int>& sites) const {
        const auto k = static_cast<Eigen::Index>(sites.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = entries_(sites[i], sites[j]);
        return sub;
    }

private:
    LatticeSpacing a_;
    Eigen::MatrixXd entries_;
};

inline KernelWindowMatrix kernel_matrix(LatticeSpacing a, int n_sites) {
    return KernelWindowMatrix(a, n_sites);
}

struct SpectrumReport {
    double min_eigenvalue;
    double max_eigenvalue;
    bool pass;
};

namespace detail {

inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_symmetric(const Eigen::MatrixXd& m,
                                                                      bool vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw eigensolver_error("symmetric eigensolver failed to converge");
    }
    return solver;
}

} // namespace detail

/// Eigenvalue spectrum of the window matrix against the Macchi condition
/// 0 <= K <= I. For a <= 1 the spectrum lies in [0,1] up to floating error.
inline SpectrumReport macchi_spectrum_check(const KernelWindowMatrix& m, double tol = 1e-9) {
    if (!(tol > 0.0)) throw std::domain_error("macchi_spectrum_check: tol must be > 0");
    const auto solver = detail::solve_symmetric(m.matrix(), false);
    SpectrumReport report{};
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    report.max_eigenvalue = solver.eigenvalues().maxCoeff();
    report.pass = report.min_eigenvalue >= -tol && report.max_eigenvalue <= 1.0 + tol;
    return report;
}

inline SpectrumReport macchi_spectrum_check(LatticeSpacing a, int n_sites, double tol = 1e-9) {
    return macchi_spectrum_check(kernel_matrix(a, n_sites), tol);
}

/// Quadratic form and squared norm of the site-0 indicator under the kernel
/// operator: (a^2, a). quadratic_form > norm witnesses non-existence.
struct RayleighWitness {
    double quadratic_form;
    double norm;
    bool violates() const { return quadratic_form > norm; }
};

inline RayleighWitness rayleigh_witness(LatticeSpacing a) {
    return RayleighWitness{a.value * a.value, a.value};
}

/// Clip eigenvalues into [0,1] with tolerance 1e-10. Values further out
/// indicate a genuine Macchi violation and raise instead of clipping.
inline Eigen::VectorXd clip_unit_interval(const Eigen::VectorXd& eigenvalues, double tol = 1e-10) {
    Eigen::VectorXd clipped = eigenvalues;
    for (Eigen::Index i = 0; i < clipped.size(); ++i) {
        const double v = clipped[i];
        if (v < -tol || v > 1.0 + tol) {
            std::ostringstream msg;
            msg << "eigenvalue " << v << " outside [-" << tol << ", 1+" << tol
                << "]: kernel violates 0 <= K <= I";
            throw macchi_violation_error(msg.str());
        }
        clipped[i] = std::min(1.0, std::max(0.0, v));
    }
    return clipped;
}

} // namespace sinelat
