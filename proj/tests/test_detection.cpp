#include "mosum/detection.hpp"
#include "mosum/error.hpp"
#include "mosum/random.hpp"
#include "mosum/simulation.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace mosum;

namespace {

// Profile over k = G..n-G with W set by the caller.
MosumProfile synthetic_profile(std::size_t n, std::size_t g, const std::vector<std::pair<std::size_t, double>>& raised) {
    MosumProfile p;
    p.bandwidth = g;
    for (std::size_t k = g; k <= n - g; ++k) {
        WindowFit f;
        f.k = k;
        p.fits.push_back(f);
    }
    for (const auto& [k, w] : raised) {
        p.fits[k - g].w = w;
    }
    return p;
}

std::vector<std::pair<std::size_t, double>> plateau(std::size_t from, std::size_t to, double w) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t k = from; k <= to; ++k) {
        out.emplace_back(k, w);
    }
    return out;
}

std::size_t max_abs_error(const std::vector<std::size_t>& est, const std::vector<std::size_t>& truth) {
    std::size_t worst = 0;
    for (std::size_t j = 0; j < truth.size(); ++j) {
        worst = std::max(worst, est[j] > truth[j] ? est[j] - truth[j] : truth[j] - est[j]);
    }
    return worst;
}

} // namespace

TEST_CASE("no exceedance gives an empty set") {
    const CandidateSet s = detect_single(synthetic_profile(3000, 100, {}), 3.0, 0.3);
    CHECK(s.estimates.empty());
    CHECK(s.bandwidth == 100);
}

TEST_CASE("eta rule keeps runs with w - v >= eta G") {
    const double c = 4.0;
    SUBCASE("span exactly 30 is kept") {
        auto raised = plateau(500, 530, c + 1);
        raised.emplace_back(512, c + 2);
        raised.emplace_back(520, c + 2);
        const CandidateSet s = detect_single(synthetic_profile(3000, 100, raised), c, 0.3);
        REQUIRE(s.estimates.size() == 1);
        CHECK(s.estimates[0].v == 500);
        CHECK(s.estimates[0].w == 530);
        CHECK(s.estimates[0].peak_k == 512);
        CHECK(s.estimates[0].peak_w == c + 2);
    }
    SUBCASE("span 29 is dropped") {
        const CandidateSet s = detect_single(synthetic_profile(3000, 100, plateau(500, 529, c + 1)), c, 0.3);
        CHECK(s.estimates.empty());
    }
    SUBCASE("W equal to the critical value counts as exceeding") {
        const CandidateSet s = detect_single(synthetic_profile(3000, 100, plateau(700, 760, c)), c, 0.3);
        CHECK(s.estimates.size() == 1);
    }
    SUBCASE("a single sub-threshold point splits a run") {
        auto raised = plateau(500, 600, c + 1);
        raised.emplace_back(550, c - 0.5);
        const CandidateSet s = detect_single(synthetic_profile(3000, 100, raised), c, 0.3);
        REQUIRE(s.estimates.size() == 2);
        CHECK(s.estimates[0].w == 549);
        CHECK(s.estimates[1].v == 551);
        CHECK(s.estimates[0].peak_k == 500);
    }
    SUBCASE("runs touching the profile edges close there") {
        auto raised = plateau(100, 140, c + 1);
        const auto right = plateau(2860, 2900, c + 3);
        raised.insert(raised.end(), right.begin(), right.end());
        const CandidateSet s = detect_single(synthetic_profile(3000, 100, raised), c, 0.3);
        REQUIRE(s.estimates.size() == 2);
        CHECK(s.estimates[0].v == 100);
        CHECK(s.estimates[1].w == 2900);
        CHECK(s.estimates[1].peak_k == 2860);
    }
    CHECK_THROWS_AS(detect_single(synthetic_profile(3000, 100, {}), c, 0.5), InputError);
    CHECK_THROWS_AS(detect_single(synthetic_profile(3000, 100, {}), c, 0.0), InputError);
}

TEST_CASE("segment RSS") {
    const std::size_t n = 600;
    std::vector<double> clean(n);
    std::vector<double> noisy(n);
    CounterRng rng(3);
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = 0.01 * static_cast<double>(i);
        clean[i - 1] = i <= 250 ? 1.0 + 2.0 * t : -4.0 * t + 3.0;
        noisy[i - 1] = clean[i - 1] + rng.normal();
    }
    const Series exact(clean, 0.01);
    const std::vector<std::size_t> truth{250};
    CHECK(segment_rss(exact, truth) <= 1e-18 * static_cast<double>(n) * 100);

    // no changes: one global fit, checked against the direct normal equations
    std::vector<double> line(n);
    std::vector<double> t(n);
    for (std::size_t i = 1; i <= n; ++i) {
        t[i - 1] = 0.01 * static_cast<double>(i);
        line[i - 1] = 0.5 - t[i - 1] + rng.normal();
    }
    const double direct = oracle::normal_equations(t, line).rss;
    CHECK(segment_rss(Series(line, 0.01), {}) == doctest::Approx(direct).epsilon(1e-10));

    const Series s(noisy, 0.01);
    const double base = segment_rss(s, {});
    const std::vector<std::size_t> with_truth{250};
    const std::vector<std::size_t> refined{120, 250};
    CHECK(segment_rss(s, with_truth) <= base);
    CHECK(segment_rss(s, refined) <= segment_rss(s, std::vector<std::size_t>{120}));

    CHECK(std::isinf(segment_rss(s, std::vector<std::size_t>{2})));
    CHECK(std::isinf(segment_rss(s, std::vector<std::size_t>{300, 302})));
    CHECK(std::isinf(segment_rss(s, std::vector<std::size_t>{598})));
    CHECK(std::isfinite(segment_rss(s, std::vector<std::size_t>{3, 597})));
    CHECK_THROWS_AS(segment_rss(s, std::vector<std::size_t>{300, 200}), InputError);
    CHECK_THROWS_AS(segment_rss(s, std::vector<std::size_t>{600}), InputError);
}

TEST_CASE("BIC value and infeasibility") {
    // residuals +-1 around a fitted line give RSS = n: pattern (1,-1,-1,1) is orthogonal to (1, t)
    std::vector<double> x(100);
    const double pattern[4] = {1, -1, -1, 1};
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = 3.0 + 0.1 * static_cast<double>(i) + pattern[i % 4];
    }
    const Series s(x);
    CHECK(segment_rss(s, {}) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(bic(s, {}) == doctest::Approx(9.21034037197618274).epsilon(1e-10));
    CHECK(std::isinf(bic(s, std::vector<std::size_t>{50, 52})));

    // noiseless data hits the floor rather than -inf
    const Series flat(std::vector<double>(100, 1.0));
    CHECK(std::isfinite(bic(flat, {})));
    CHECK(bic(flat, {}) == doctest::Approx(100.0 * std::log(1e-18) + 2.0 * std::log(100.0)));
}

TEST_CASE("true change set beats the empty set on the first scenario") {
    int wins = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        const ScenarioDraw d = gen_scenario({ScenarioId::sim1, {NoiseFamily::gaussian, 1.0}, 99, r});
        const auto truth = scenario_changes(ScenarioId::sim1);
        wins += bic(d.series, truth) < bic(d.series, {}) ? 1 : 0;
    }
    CHECK(wins > 50);
}

TEST_CASE("Fibonacci bandwidths") {
    CHECK(fibonacci_bandwidths(50, 3500) == std::vector<std::size_t>{50, 100, 150, 250, 400, 650});
    CHECK(fibonacci_bandwidths(100, 9830) == std::vector<std::size_t>{100, 200, 300, 500, 800, 1300, 2100});
    CHECK_THROWS_AS(fibonacci_bandwidths(50, 100), InputError);
    CHECK_THROWS_AS(fibonacci_bandwidths(2, 3500), InputError);
    CHECK_THROWS_AS(fibonacci_bandwidths(3, 10), InputError);
    CHECK(fibonacci_bandwidths(3, 11) == std::vector<std::size_t>{3, 6, 9});
}

TEST_CASE("multiscale merge") {
    // one level shift at 1000, so {1000} wins on BIC over {1005, 2000}
    std::vector<double> x(3000);
    CounterRng rng(5);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        x[i - 1] = (i <= 1000 ? 0.0 : 5.0) + 0.3 * rng.normal();
    }
    const Series s(x);
    CandidateSet best;
    best.bandwidth = 300;
    best.estimates = {{950, 1050, 1000, 9.0}};
    CandidateSet other;
    other.bandwidth = 100;
    other.estimates = {{980, 1030, 1005, 8.0}, {1970, 2030, 2000, 5.0}};

    const DetectionResult merged = multiscale_merge({other, best}, s, 0.8);
    CHECK(merged.indices() == std::vector<std::size_t>{1000, 2000});
    CHECK(merged.change_points[0].source_bandwidth == 300);
    CHECK(merged.change_points[1].source_bandwidth == 100);
    CHECK(merged.params.bandwidths == std::vector<std::size_t>{100, 300});

    // a smaller theta lets 1005 through
    CHECK(multiscale_merge({other, best}, s, 0.04).indices() == std::vector<std::size_t>{1000, 1005, 2000});

    CHECK(multiscale_merge({other}, s, 0.8).indices() == std::vector<std::size_t>{1005, 2000});
    CandidateSet none_a;
    none_a.bandwidth = 100;
    CandidateSet none_b;
    none_b.bandwidth = 200;
    CHECK(multiscale_merge({none_a, none_b}, s, 0.8).change_points.empty());
    CHECK_THROWS_AS(multiscale_merge({}, s, 0.8), InputError);
    CHECK_THROWS_AS(multiscale_merge({best}, s, 1.5), InputError);
}

TEST_CASE("detection is deterministic and monotone in alpha") {
    const ScenarioDraw d = gen_scenario({ScenarioId::sim1, {NoiseFamily::gaussian, 1.0}, 1, 0});
    DetectorConfig cfg;
    const DetectionResult a = detect(d.series, cfg);
    const DetectionResult b = detect(d.series, cfg);
    CHECK(a.indices() == b.indices());
    CHECK(a.params.bandwidths == std::vector<std::size_t>{50, 100, 150, 250, 400, 650});

    for (std::uint64_t r = 0; r < 10; ++r) {
        const ScenarioDraw e = gen_scenario({ScenarioId::sim2, {NoiseFamily::gaussian, 2.0}, 3, r});
        const MosumProfile p = mosum_profile(e.series, 150);
        std::size_t prev = 0;
        for (double alpha : {0.001, 0.01, 0.05, 0.2, 0.5}) {
            const double c = critical_value(e.series.size(), 150, alpha).c_n;
            const std::size_t count = detect_single(p, c, 0.3).estimates.size();
            CHECK(count >= prev);
            prev = count;
        }
    }
}

TEST_CASE("piecewise constant data with G = 200") {
    int hits = 0;
    const auto truth = scenario_changes(ScenarioId::sim3);
    for (std::uint64_t r = 0; r < 50; ++r) {
        const ScenarioDraw d = gen_scenario({ScenarioId::sim3, {NoiseFamily::gaussian, 0.5}, 11, r});
        DetectorConfig cfg;
        cfg.bandwidths = {200};
        const auto est = detect(d.series, cfg).indices();
        hits += est.size() == 3 && max_abs_error(est, truth) < 200 ? 1 : 0;
    }
    CHECK(hits >= 48);
}

TEST_CASE("larger slope changes are not localised worse") {
    // continuous kink at 1000 with slope change d and then 2d
    auto median_error = [](double slope_change) {
        std::vector<std::size_t> errors;
        for (std::uint64_t r = 0; r < 200; ++r) {
            const TimeGrid grid(2000, 0.01);
            const PiecewiseLinearSignal sig(grid, {1000}, {{0.0, 0.0}, {-10.0 * slope_change, slope_change}});
            CounterRng rng(stream_id(17, r));
            const Series x = add_noise(sig, {NoiseFamily::gaussian, 1.0}, rng);
            const MosumProfile p = mosum_profile(x, 200);
            std::size_t best = p.first_k();
            for (const auto& f : p.fits) {
                if (f.w > p.at(best).w) {
                    best = f.k;
                }
            }
            errors.push_back(best > 1000 ? best - 1000 : 1000 - best);
        }
        std::nth_element(errors.begin(), errors.begin() + 100, errors.end());
        return errors[100];
    };
    CHECK(median_error(2.0) <= median_error(1.0));
}
