#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wmr/core_types.hpp"
#include "wmr/lae.hpp"
#include "wmr/pchip.hpp"

using namespace wmr;

namespace {

struct Records {
    std::vector<double> scores;
    std::vector<bool> flags;
};

// soft ~ U[0,1], P(error | soft) = 1 - soft
Records linear_law(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Records r;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = u(rng);
        r.scores.push_back(s);
        r.flags.push_back(u(rng) >= 1.0 - s);
    }
    return r;
}

Records random_records(std::size_t n, std::uint64_t seed, int levels = 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Records r;
    for (std::size_t i = 0; i < n; ++i) {
        double s = u(rng);
        if (levels > 0) s = std::floor(s * levels) / levels;
        r.scores.push_back(s);
        r.flags.push_back(u(rng) < 0.7);
    }
    return r;
}

}  // namespace

TEST_CASE("monotone cubic: exact at knots, flat outside, no overshoot") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0}, y{0.0, 0.0, 1.0, 1.0, 0.5};
    MonotoneCubic h(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(h(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
    CHECK(h(-5.0) == 0.0);
    CHECK(h(10.0) == 0.5);
    for (double t = 0.0; t <= 4.0; t += 0.01) {
        CHECK(h(t) >= -1e-15);
        CHECK(h(t) <= 1.0 + 1e-15);
    }
    // flat segments stay flat
    for (double t = 0.0; t <= 1.0; t += 0.05) CHECK(h(t) == doctest::Approx(0.0));
    for (double t = 2.0; t <= 3.0; t += 0.05) CHECK(h(t) == doctest::Approx(1.0));
    CHECK(MonotoneCubic({1.0}, {0.25})(7.0) == 0.25);
    CHECK_THROWS_AS(MonotoneCubic({1.0, 1.0}, {0.0, 1.0}), ContractError);
}

TEST_CASE("monotone cubic reproduces straight lines") {
    const std::vector<double> x{0.0, 0.3, 0.35, 0.8, 1.0};
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 * v - 1.0);
    MonotoneCubic h(x, y);
    for (double t = 0.0; t <= 1.0; t += 0.01) CHECK(h(t) == doctest::Approx(2.0 * t - 1.0));
}

TEST_CASE("automatic bin count") {
    CHECK(effective_bin_count(10000, kAutoBins) == 100);
    CHECK(effective_bin_count(120, kAutoBins) == 10);
    CHECK(effective_bin_count(30, kAutoBins) == 5);
    CHECK(effective_bin_count(12, kAutoBins) == 2);
    CHECK(effective_bin_count(3, kAutoBins) == 1);
    CHECK(effective_bin_count(100, 10) == 10);
    CHECK(effective_bin_count(15, 10) == 7);  // at least two records per bin
}

TEST_CASE("equal-frequency bins") {
    const auto r = random_records(100, 1);
    const auto est = fit_lae(r.scores, r.flags, 10);
    CHECK(est.n_bins() == 10);
    for (auto c : est.bin_counts()) CHECK(c == 10);
    CHECK(std::is_sorted(est.bin_edges().begin(), est.bin_edges().end()));
    CHECK(std::adjacent_find(est.bin_edges().begin(), est.bin_edges().end()) == est.bin_edges().end());
    for (std::size_t m = 0; m < est.n_bins(); ++m) CHECK(est.bin_error_counts()[m] <= est.bin_counts()[m]);

    for (std::size_t n : {97u, 101u, 1003u}) {
        const auto r2 = random_records(n, n);
        const auto e2 = fit_lae(r2.scores, r2.flags, 10);
        const double target = static_cast<double>(n) / 10.0;
        std::size_t total = 0;
        for (auto c : e2.bin_counts()) {
            CHECK(std::abs(static_cast<double>(c) - target) <= 1.0);
            total += c;
        }
        CHECK(total == n);
    }
}

TEST_CASE("tied scores never straddle a bin edge") {
    const auto r = random_records(500, 3, 7);  // only 7 distinct scores
    const auto est = fit_lae(r.scores, r.flags, 20);
    const auto& edges = est.bin_edges();
    std::size_t total = 0;
    for (auto c : est.bin_counts()) total += c;
    CHECK(total == 500);
    CHECK(est.n_bins() <= 7);
    // counts follow value membership, so all copies of a score share a bin
    std::vector<std::size_t> by_value(est.n_bins(), 0);
    for (double v : r.scores) {
        auto m = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) - 1;
        by_value[std::min(m, est.n_bins() - 1)] += 1;
    }
    CHECK(by_value == est.bin_counts());
}

TEST_CASE("interpolation is exact at the bin medians") {
    const auto r = random_records(2000, 8);
    const auto est = fit_lae(r.scores, r.flags, 25);
    for (std::size_t m = 0; m < est.n_bins(); ++m) {
        const double rate = static_cast<double>(est.bin_error_counts()[m]) / static_cast<double>(est.bin_counts()[m]);
        CHECK(std::abs(est.error_probability(est.bin_centers()[m]) - rate) < 1e-12);
    }
}

TEST_CASE("local accuracy at a knot and outside the knot range") {
    // three bins, each of 10 records, errors 3/10 in the middle bin
    std::vector<double> scores;
    std::vector<bool> flags;
    for (int b = 0; b < 3; ++b) {
        for (int i = 0; i < 10; ++i) {
            scores.push_back(b + 0.05 * i);
            flags.push_back(!(b == 1 && i < 3));
        }
    }
    const auto est = fit_lae(scores, flags, 3);
    REQUIRE(est.n_bins() == 3);
    CHECK(local_accuracy(est, est.bin_centers()[1]) == doctest::Approx(0.7));
    // zero-error bins are clamped
    CHECK(local_accuracy(est, est.bin_centers()[0]) == doctest::Approx(1.0 - est.clamp_eps()));
    CHECK(est.clamp_eps() == doctest::Approx(1.0 / 60.0));
    CHECK(local_accuracy(est, -100.0) == local_accuracy(est, est.bin_centers().front()));
    CHECK(local_accuracy(est, 100.0) == local_accuracy(est, est.bin_centers().back()));
}

TEST_CASE("identical scores give a constant estimator") {
    const std::vector<double> scores(40, 0.8);
    std::vector<bool> flags(40, true);
    for (int i = 0; i < 10; ++i) flags[static_cast<std::size_t>(i)] = false;
    const auto est = fit_lae(scores, flags, kAutoBins);
    CHECK(est.n_bins() == 1);
    for (double s : {0.0, 0.3, 0.8, 1.0}) CHECK(local_accuracy(est, s) == doctest::Approx(0.75));
}

TEST_CASE("calibration against a known error law") {
    const auto r = linear_law(10000, 2024);
    const auto est = fit_lae(r.scores, r.flags, 10);
    double worst = 0.0;
    for (double o = 0.05; o <= 0.95 + 1e-12; o += 0.005) worst = std::max(worst, std::abs(local_accuracy(est, o) - o));
    CHECK(worst <= 0.05);
}

TEST_CASE("local accuracy stays inside the clamp band") {
    const auto r = random_records(300, 5);
    const auto est = fit_lae(r.scores, r.flags, kAutoBins);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (int i = 0; i < 100000; ++i) {
        const double a = local_accuracy(est, u(rng));
        REQUIRE(a >= est.clamp_eps());
        REQUIRE(a <= 1.0 - est.clamp_eps());
    }
}

TEST_CASE("monotone bin rates give a monotone curve") {
    const auto r = linear_law(5000, 77);
    const auto est = fit_lae(r.scores, r.flags, 8);
    const auto& rates = est.bin_error_rates();
    const bool decreasing = std::is_sorted(rates.rbegin(), rates.rend());
    REQUIRE(decreasing);
    double prev = est.error_probability(est.bin_centers().front());
    for (double t = est.bin_centers().front(); t <= est.bin_centers().back(); t += 1e-3) {
        const double v = est.error_probability(t);
        CHECK(v <= prev + 1e-14);
        prev = v;
    }
}

TEST_CASE("prior competence") {
    CHECK(prior_competence({true, false, true, false}).p == doctest::Approx(0.5));
    std::vector<bool> f(100, false);
    for (int i = 0; i < 73; ++i) f[static_cast<std::size_t>(i)] = true;
    CHECK(prior_competence(f).p == doctest::Approx(0.73));
    CHECK(prior_competence(std::vector<bool>(10, true)).p == doctest::Approx(1.0 - 1.0 / 20.0));
    CHECK(prior_competence(std::vector<bool>(10, false)).p == doctest::Approx(1.0 / 20.0));
    CHECK_THROWS_AS(prior_competence({}), ContractError);
}

TEST_CASE("prior equals the count-weighted mean of bin success rates") {
    const auto r = random_records(777, 12);
    const auto est = fit_lae(r.scores, r.flags, kAutoBins);
    double hits = 0.0, n = 0.0;
    for (std::size_t m = 0; m < est.n_bins(); ++m) {
        const double c = static_cast<double>(est.bin_counts()[m]);
        hits += c * (1.0 - static_cast<double>(est.bin_error_counts()[m]) / c);
        n += c;
    }
    CHECK(prior_competence(r.flags).p == doctest::Approx(hits / n));
}

TEST_CASE("updates rebuild from the retained records") {
    const auto a = random_records(200, 21), b = random_records(150, 22);
    const auto ea = fit_lae(a.scores, a.flags, 10);

    CHECK(update_lae(ea, {}, {}) == ea);

    Records ab = a;
    ab.scores.insert(ab.scores.end(), b.scores.begin(), b.scores.end());
    ab.flags.insert(ab.flags.end(), b.flags.begin(), b.flags.end());
    CHECK(update_lae(ea, b.scores, b.flags) == fit_lae(ab.scores, ab.flags, 10));

    const auto doubled = update_lae(ea, a.scores, a.flags);
    REQUIRE(doubled.n_bins() == ea.n_bins());
    for (std::size_t m = 0; m < ea.n_bins(); ++m) CHECK(doubled.bin_error_rates()[m] == ea.bin_error_rates()[m]);
}

TEST_CASE("contract errors") {
    CHECK_THROWS_AS(fit_lae(std::vector<double>{}, {}, 5), ContractError);
    CHECK_THROWS_AS(fit_lae(std::vector<double>{0.1, 0.2}, {true}, 5), ContractError);
    CHECK_THROWS_AS(fit_lae(std::vector<double>{0.1, NAN}, {true, false}, 5), ContractError);
}
