#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "sinelat/gap_stats.hpp"
#include "sinelat/rng.hpp"
#include "sinelat/sampling.hpp"

using namespace sinelat;
using Catch::Approx;

TEST_CASE("seeded streams are reproducible and distinct", "[rng]") {
    SeededStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform();
        CHECK(ua == b.uniform());
        CHECK(ua >= 0.0);
        CHECK(ua < 1.0);
    }
    // different stream or seed diverges immediately with overwhelming probability
    SeededStream a2(42, 0);
    bool diff_stream = false, diff_seed = false;
    for (int i = 0; i < 16; ++i) {
        const double u = a2.uniform();
        diff_stream |= u != c.uniform();
        diff_seed |= u != d.uniform();
    }
    CHECK(diff_stream);
    CHECK(diff_seed);
}

TEST_CASE("identity window occupies every site", "[sampler]") {
    const KernelWindowMatrix m(LatticeSpacing(1.0), 10);
    SeededStream rng(7);
    const WindowSampler sampler(m);
    for (int rep = 0; rep < 50; ++rep) {
        const auto config = sampler.draw(rng);
        REQUIRE(config.count() == 10);
        for (int i = 0; i < 10; ++i) CHECK(config.indices[static_cast<std::size_t>(i)] == i);
    }
}

TEST_CASE("single-site window occupied with probability 1/2", "[sampler]") {
    const KernelWindowMatrix m(LatticeSpacing(0.5), 1);
    const WindowSampler sampler(m);
    SeededStream rng(11);
    int occupied = 0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) occupied += sampler.draw(rng).count();
    const double freq = static_cast<double>(occupied) / reps;
    CHECK(freq == Approx(0.5).margin(4.0 * 0.5 / std::sqrt(static_cast<double>(reps))));
}

TEST_CASE("sampler draws are reproducible per (seed, stream)", "[sampler]") {
    const KernelWindowMatrix m(LatticeSpacing(0.5), 32);
    const WindowSampler sampler(m);
    SeededStream r1(2024, 5), r2(2024, 5);
    for (int rep = 0; rep < 10; ++rep) {
        const auto c1 = sampler.draw(r1);
        const auto c2 = sampler.draw(r2);
        CHECK(c1.indices == c2.indices);
    }
}

TEST_CASE("subset inclusion law on a 6-site window", "[sampler][oracle]") {
    // Oracle: P(A subset of draw) = det(M_A), principal minors computed
    // directly. 2^6 - 1 nonempty subsets checked within 4 Monte Carlo sigma.
    const int n = 6;
    const KernelWindowMatrix m(LatticeSpacing(0.5), n);
    const WindowSampler sampler(m);
    SeededStream rng(314159);
    const int reps = 120000;

    std::vector<std::uint32_t> draws;
    draws.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        const auto config = sampler.draw(rng);
        std::uint32_t mask = 0;
        for (const auto idx : config.indices) mask |= 1u << idx;
        draws.push_back(mask);
    }

    int worst_fail = 0;
    for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
        std::vector<int> sites;
        for (int i = 0; i < n; ++i) {
            if (subset & (1u << i)) sites.push_back(i);
        }
        const double p = m.submatrix(sites).partialPivLu().determinant();
        int hits = 0;
        for (const auto mask : draws) {
            if ((mask & subset) == subset) ++hits;
        }
        const double freq = static_cast<double>(hits) / reps;
        const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / reps);
        INFO("subset mask " << subset << ": freq " << freq << " vs minor " << p);
        if (std::abs(freq - p) > 4.0 * sigma) ++worst_fail;
    }
    CHECK(worst_fail == 0);
}

TEST_CASE("sampled configurations are simple and inside the window", "[sampler]") {
    const KernelWindowMatrix m(LatticeSpacing(0.75), 40);
    const WindowSampler sampler(m);
    SeededStream rng(5150);
    for (int rep = 0; rep < 200; ++rep) {
        const auto config = sampler.draw(rng);
        CHECK_NOTHROW(config.check_strictly_increasing());
        if (!config.indices.empty()) {
            CHECK(config.indices.front() >= 0);
            CHECK(config.indices.back() < 40);
        }
    }
}

TEST_CASE("interior occupancy is site-independent", "[sampler]") {
    // lattice-shift invariance: interior sites share one occupancy rate a
    const int n = 48;
    const KernelWindowMatrix m(LatticeSpacing(0.5), n);
    const WindowSampler sampler(m);
    SeededStream rng(777);
    const int reps = 40000;
    std::vector<int> hits(n, 0);
    for (int r = 0; r < reps; ++r) {
        for (const auto idx : sampler.draw(rng).indices) hits[static_cast<std::size_t>(idx)]++;
    }
    const double sigma = std::sqrt(0.25 / reps);
    for (int i = 16; i < n - 16; ++i) {
        const double freq = static_cast<double>(hits[static_cast<std::size_t>(i)]) / reps;
        INFO("site " << i);
        CHECK(freq == Approx(0.5).margin(4.5 * sigma));
    }
}

TEST_CASE("count moments match the trace identities", "[sampler]") {
    SeededStream rng(90210);

    // a = 1: count is deterministic
    const KernelWindowMatrix identity(LatticeSpacing(1.0), 10);
    const auto det_moments = empirical_count_moments(identity, 200, rng);
    CHECK(det_moments.mean_count == 10.0);
    CHECK(det_moments.variance == 0.0);

    // a = 1/2, N = 2: mean 1, variance 1 - (1/2 + 2/pi^2) from the traces
    const KernelWindowMatrix two(LatticeSpacing(0.5), 2);
    const int reps = 200000;
    const auto moments = empirical_count_moments(two, reps, rng);
    const double expected_var = 1.0 - (0.5 + 2.0 / (std::numbers::pi * std::numbers::pi));
    CHECK(moments.mean_count == Approx(1.0).margin(4.0 * std::sqrt(expected_var / reps)));
    // variance of the sample variance ~ 2 sigma^4 / reps for near-Gaussianity;
    // use a generous 5-sigma band
    CHECK(moments.variance ==
          Approx(expected_var).margin(5.0 * expected_var * std::sqrt(2.0 / reps)));

    // trace identity on a larger window
    const KernelWindowMatrix wide(LatticeSpacing(0.5), 100);
    const auto wide_moments = empirical_count_moments(wide, 8000, rng);
    const double var_expected = wide.trace() - (wide.matrix() * wide.matrix()).trace();
    CHECK(wide_moments.mean_count ==
          Approx(50.0).margin(4.0 * std::sqrt(var_expected / 8000.0)));
}

TEST_CASE("macchi violation refuses to sample", "[sampler]") {
    SeededStream rng(1);
    CHECK_THROWS_AS(sample_lattice_window(LatticeSpacing(1.5), 16, rng),
                    macchi_violation_error);
    CHECK_THROWS_AS(sample_window_streaming(LatticeSpacing(1.5), 100, rng),
                    macchi_violation_error);
}

TEST_CASE("streaming sampler matches the spectral path statistically", "[sampler][streaming]") {
    // Gap-law cross-validation: the streaming path must reproduce the
    // analytic gap probabilities within Monte Carlo resolution.
    SeededStream rng(60601);
    std::vector<LatticeConfiguration> configs;
    const int n_sites = 6000;
    for (int rep = 0; rep < 8; ++rep) {
        configs.push_back(sample_window_streaming(LatticeSpacing(0.5), n_sites, rng, 384));
    }
    const auto hist = empirical_gap_histogram(configs, statistics_margin(n_sites));
    REQUIRE(hist.sample_size > 15000);
    const double g1 = gap_probability(1);
    const double g2 = gap_probability(2);
    CHECK(hist.probability(1) == Approx(g1).margin(4.0 * hist.standard_error(1)));
    CHECK(hist.probability(2) == Approx(g2).margin(4.0 * hist.standard_error(2)));

    // count concentration: the sine-kernel count is rigid, so even one long
    // window pins the density tightly
    double mean_count = 0.0;
    for (const auto& c : configs) mean_count += static_cast<double>(c.count());
    mean_count /= static_cast<double>(configs.size());
    CHECK(mean_count == Approx(0.5 * n_sites).margin(3.0));
}

TEST_CASE("streaming window width does not move the statistics", "[sampler][streaming]") {
    // self-convergence in the conditioning window: W and 2W agree
    auto gap_freq = [](int window, std::uint64_t seed) {
        SeededStream rng(seed);
        std::vector<LatticeConfiguration> configs;
        for (int rep = 0; rep < 6; ++rep) {
            configs.push_back(sample_window_streaming(LatticeSpacing(0.5), 3000, rng, window));
        }
        return empirical_gap_histogram(configs, 64);
    };
    const auto narrow = gap_freq(192, 11);
    const auto wide = gap_freq(384, 11);
    const double se = std::sqrt(narrow.standard_error(1) * narrow.standard_error(1) +
                                wide.standard_error(1) * wide.standard_error(1));
    CHECK(narrow.probability(1) == Approx(wide.probability(1)).margin(4.0 * se));
}

TEST_CASE("AH configuration invariants", "[sampler][ah]") {
    SeededStream rng(271828);
    const auto config = sample_ah_configuration(400, rng);
    CHECK(config.base.a.value == 0.5);
    CHECK(config.shift >= 0.0);
    CHECK(config.shift < 0.5);
    REQUIRE(config.base.count() > 100);

    // gaps are exact half-integers: indices differ by positive integers
    for (std::size_t i = 1; i < config.base.indices.size(); ++i) {
        CHECK(config.base.indices[i] - config.base.indices[i - 1] >= 1);
    }

    // shift = 0 hook: points are exactly half the indices
    const AhConfiguration unshifted{config.base, 0.0};
    for (std::size_t i = 0; i < unshifted.base.indices.size(); ++i) {
        CHECK(unshifted.point(i) == 0.5 * static_cast<double>(unshifted.base.indices[i]));
    }

    // reproducibility of the full AH draw
    SeededStream r1(99, 3), r2(99, 3);
    const auto c1 = sample_ah_configuration(200, r1);
    const auto c2 = sample_ah_configuration(200, r2);
    CHECK(c1.base.indices == c2.base.indices);
    CHECK(c1.shift == c2.shift);
}

TEST_CASE("AH point density is one per unit length", "[sampler][ah]") {
    // one long streaming window; the rigidity of the count makes a single
    // sample a sharp density probe
    SeededStream rng(333);
    SamplerOptions options;
    options.streaming_threshold = 1024;
    options.conditioning_window = 384;
    const std::int64_t n_sites = 20000;
    const auto config = sample_ah_configuration(n_sites, rng, options);
    const auto margin = statistics_margin(n_sites);
    const double lo = 0.5 * static_cast<double>(margin);
    const double hi = 0.5 * static_cast<double>(n_sites - margin);
    double points = 0.0;
    for (std::size_t i = 0; i < config.base.count(); ++i) {
        const double x = config.point(i);
        if (x >= lo && x <= hi) points += 1.0;
    }
    // variance of rigid counts is tiny; 3-sigma with the Poisson bound is loose
    CHECK(points / (hi - lo) == Approx(1.0).margin(3.0 * std::sqrt(points) / (hi - lo)));
}
