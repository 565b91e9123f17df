#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sinelat/kernel.hpp"
#include "sinelat/quadrature.hpp"
#include "sinelat/sinc.hpp"

using namespace sinelat;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sinc pinned values", "[sinc]") {
    CHECK(sinc_eval(0.0) == 1.0);
    CHECK(sinc_eval(1.0) == 0.0);
    CHECK(sinc_eval(0.5) == Approx(2.0 / kPi).epsilon(1e-15));
    CHECK(sinc_eval(1.5) == Approx(-2.0 / (3.0 * kPi)).epsilon(1e-15));
    CHECK_THROWS_AS(sinc_eval(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(sinc_eval(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("sinc symmetry, bound, integer zeros", "[sinc]") {
    std::mt19937 gen(91);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = dist(gen);
        CHECK(sinc_eval(-x) == sinc_eval(x));
        CHECK(std::abs(sinc_eval(x)) <= 1.0);
    }
    for (int m = 1; m <= 200; ++m) {
        CHECK(sinc_eval(static_cast<double>(m)) == 0.0);
        CHECK(sinc_eval(static_cast<double>(-m)) == 0.0);
    }
}

TEST_CASE("sinc series crossover is seamless", "[sinc]") {
    // values straddling the |pi x| = 1e-4 switch agree to machine precision
    for (double x : {1e-5, 3.18e-5, 3.1831e-5, 3.2e-5, 1e-4, 2e-4}) {
        const double direct = std::sin(kPi * x) / (kPi * x);
        CHECK(sinc_eval(x) == Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("sine determinant basics", "[sinc]") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> dist(-8.0, 8.0);
    std::uniform_real_distribution<double> shift(-20.0, 20.0);
    for (int rep = 0; rep < 500; ++rep) {
        const double x1 = dist(gen), x2 = dist(gen), x3 = dist(gen);
        const double d2 = sine_determinant(std::array{x1, x2});
        const double d3 = sine_determinant(std::array{x1, x2, x3});
        CHECK(d2 >= -1e-14);
        CHECK(d2 <= 1.0 + 1e-14);
        CHECK(d3 >= -1e-12);
        CHECK(d3 <= 1.0 + 1e-12);
        // translation invariance
        const double t = shift(gen);
        CHECK(sine_determinant(std::array{x1 + t, x2 + t}) == Approx(d2).margin(1e-12));
        CHECK(sine_determinant(std::array{x1 + t, x2 + t, x3 + t}) == Approx(d3).margin(1e-12));
        // coincident arguments kill the determinant exactly
        CHECK(sine_determinant(std::array{x1, x1}) == 0.0);
        CHECK(sine_determinant(std::array{x1, x1, x3}) == 0.0);
    }
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly", "[quadrature]") {
    const GaussLegendre rule(8);
    double sum_w = 0.0;
    for (double w : rule.weights()) sum_w += w;
    CHECK(sum_w == Approx(2.0).epsilon(1e-14));
    // degree-15 monomial is the highest an 8-point rule must nail
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        acc += rule.weights()[i] * std::pow(rule.nodes()[i], 14);
    }
    CHECK(acc == Approx(2.0 / 15.0).epsilon(1e-13));

    const double integral = integrate_panels(0.0, 2.0 * kPi, 0.5, rule,
                                             [](double x) { return std::sin(x) * std::sin(x); });
    CHECK(integral == Approx(kPi).epsilon(1e-12));
}

TEST_CASE("kernel window matches the half-spacing Toeplitz form", "[kernel]") {
    const KernelWindowMatrix m(LatticeSpacing(0.5), 4);
    // first row of Sigma_4 is (1, 2/pi, 0, -2/(3 pi)); the window is half that
    CHECK(m.matrix()(0, 0) == 0.5);
    CHECK(m.matrix()(0, 1) == Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(m.matrix()(0, 2) == 0.0);
    CHECK(m.matrix()(0, 3) == Approx(-1.0 / (3.0 * kPi)).epsilon(1e-15));

    const KernelWindowMatrix one(LatticeSpacing(1.0), 3);
    CHECK(one.matrix() == Eigen::MatrixXd::Identity(3, 3));

    const KernelWindowMatrix single(LatticeSpacing(0.5), 1);
    CHECK(single.matrix()(0, 0) == 0.5);
}

TEST_CASE("kernel window is bitwise Toeplitz-symmetric", "[kernel]") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> adist(0.05, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const KernelWindowMatrix m(LatticeSpacing(adist(gen)), 24);
        for (int i = 0; i < 24; ++i) {
            for (int j = 0; j < 24; ++j) {
                CHECK(m.matrix()(i, j) == m.matrix()(j, i));
                if (i > 0 && j > 0) CHECK(m.matrix()(i, j) == m.matrix()(i - 1, j - 1));
            }
        }
    }
}

TEST_CASE("trace at a = 1/2 is exactly N/2", "[kernel]") {
    for (int n : {1, 2, 7, 64, 255}) {
        const KernelWindowMatrix m(LatticeSpacing(0.5), n);
        CHECK(m.trace() == static_cast<double>(n) * 0.5);
    }
}

TEST_CASE("Macchi spectrum check", "[kernel][macchi]") {
    const auto half = macchi_spectrum_check(LatticeSpacing(0.5), 64, 1e-10);
    CHECK(half.pass);
    CHECK(half.min_eigenvalue >= -1e-10);
    CHECK(half.max_eigenvalue <= 1.0 + 1e-10);

    const auto identity = macchi_spectrum_check(LatticeSpacing(1.0), 10);
    CHECK(identity.pass);
    CHECK(identity.min_eigenvalue == Approx(1.0).margin(1e-14));
    CHECK(identity.max_eigenvalue == Approx(1.0).margin(1e-14));

    const auto bad = macchi_spectrum_check(LatticeSpacing(1.5), 32);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_eigenvalue > 1.0);
}

TEST_CASE("Macchi passes across the existence range", "[kernel][macchi]") {
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> adist(1e-3, 1.0);
    std::uniform_int_distribution<int> ndist(1, 256);
    for (int rep = 0; rep < 12; ++rep) {
        const double a = adist(gen);
        const int n = ndist(gen);
        const auto report = macchi_spectrum_check(LatticeSpacing(a), n, 1e-9);
        INFO("a = " << a << ", n = " << n);
        CHECK(report.pass);
    }
}

TEST_CASE("Rayleigh witness", "[kernel]") {
    const auto bad = rayleigh_witness(LatticeSpacing(1.5));
    CHECK(bad.quadratic_form == Approx(2.25).epsilon(1e-15));
    CHECK(bad.norm == 1.5);
    CHECK(bad.violates());

    const auto boundary = rayleigh_witness(LatticeSpacing(1.0));
    CHECK(boundary.quadratic_form == 1.0);
    CHECK(boundary.norm == 1.0);
    CHECK_FALSE(boundary.violates());

    const auto good = rayleigh_witness(LatticeSpacing(0.5));
    CHECK(good.quadratic_form == 0.25);
    CHECK(good.norm == 0.5);
    CHECK_FALSE(good.violates());
}

TEST_CASE("eigenvalue clipping distinguishes noise from violation", "[kernel]") {
    Eigen::VectorXd ok(3);
    ok << -5e-11, 0.5, 1.0 + 5e-11;
    const auto clipped = clip_unit_interval(ok);
    CHECK(clipped[0] == 0.0);
    CHECK(clipped[1] == 0.5);
    CHECK(clipped[2] == 1.0);

    Eigen::VectorXd bad(1);
    bad << 1.0 + 1e-6;
    CHECK_THROWS_AS(clip_unit_interval(bad), macchi_violation_error);
    bad << -1e-6;
    CHECK_THROWS_AS(clip_unit_interval(bad), macchi_violation_error);
}

TEST_CASE("invalid lattice spacing is rejected", "[kernel]") {
    CHECK_THROWS_AS(LatticeSpacing(0.0), std::domain_error);
    CHECK_THROWS_AS(LatticeSpacing(-0.5), std::domain_error);
    CHECK_THROWS_AS(LatticeSpacing(std::nan("")), std::domain_error);
    CHECK(LatticeSpacing(1.2).existence_valid() == false);
    CHECK(LatticeSpacing(1.0).existence_valid());
}
