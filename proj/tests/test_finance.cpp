#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corrsynth/errors.hpp"
#include "corrsynth/finance.hpp"
#include "corrsynth/rng.hpp"
#include "corrsynth/stats.hpp"

using namespace corrsynth;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

Series make_series(std::int64_t t0, double dt, std::vector<double> values) {
    Series s;
    s.t0 = t0;
    s.dt = dt;
    s.values = std::move(values);
    return s;
}

Series linear_series(std::int64_t t0, double dt, std::size_t n, double a, double b) {
    Series s;
    s.t0 = t0;
    s.dt = dt;
    s.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.values[i] = a + b * static_cast<double>(i);
    return s;
}

Eigen::MatrixXd pair_corr(double rho) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, rho, rho, 1.0;
    return m;
}

std::vector<double> diffs(const std::vector<double>& v) {
    std::vector<double> d;
    d.reserve(v.size() > 0 ? v.size() - 1 : 0);
    for (std::size_t i = 1; i < v.size(); ++i) d.push_back(v[i] - v[i - 1]);
    return d;
}

std::vector<double> interior(const std::vector<double>& v, std::size_t margin) {
    REQUIRE(v.size() > 2 * margin);
    return std::vector<double>(v.begin() + static_cast<long>(margin),
                               v.end() - static_cast<long>(margin));
}

} // namespace

TEST_CASE("clean series resamples and stitches a gap", "[finance]") {
    const std::vector<RawTick> ticks{{0, 100.0}, {1, 101.0}, {100, 50.0}};
    const Series s = clean_series(ticks, 1.0, 10.0);

    REQUIRE(s.t0 == 0);
    REQUIRE(s.dt == 1.0);
    REQUIRE(s.size() == 101);
    REQUIRE(s.values[0] == 100.0);
    // The 1 -> 100 jump exceeds the threshold, so everything after it is
    // rescaled by 101/50 and the price level continues from 101.
    for (std::size_t i = 1; i < s.size(); ++i)
        REQUIRE_THAT(s.values[i], Catch::Matchers::WithinAbs(101.0, 1e-9));
}

TEST_CASE("clean series accumulates factors over several gaps", "[finance]") {
    const std::vector<RawTick> ticks{{0, 100.0}, {50, 80.0}, {200, 40.0}, {400, 10.0}};
    const Series s = clean_series(ticks, 50.0, 100.0);

    REQUIRE(s.size() == 9);
    REQUIRE(s.values[0] == 100.0);
    // Factors 80/40 and 40/10 compound to 8, so the last tick lands on 80
    // and both gap log-returns vanish.
    for (std::size_t i = 1; i < s.size(); ++i)
        REQUIRE_THAT(s.values[i], Catch::Matchers::WithinAbs(80.0, 1e-12));
}

TEST_CASE("clean series carries the last observation onto a coarser grid", "[finance]") {
    const std::vector<RawTick> ticks{{0, 100.0}, {3, 110.0}, {6, 120.0}};
    const Series s = clean_series(ticks, 2.0, 10.0);

    REQUIRE(s.size() == 4);
    REQUIRE(s.values[0] == 100.0);
    REQUIRE(s.values[1] == 100.0);
    REQUIRE(s.values[2] == 110.0);
    REQUIRE(s.values[3] == 120.0);
}

TEST_CASE("clean series input validation", "[finance]") {
    const std::vector<RawTick> ok{{0, 1.0}, {1, 2.0}};
    REQUIRE_THROWS_AS(clean_series(std::vector<RawTick>{}, 1.0, 10.0), parameter_error);
    REQUIRE_THROWS_AS(clean_series(ok, 0.0, 10.0), parameter_error);
    REQUIRE_THROWS_AS(clean_series(ok, 1.0, 0.0), parameter_error);
    const std::vector<RawTick> bad_price{{0, 1.0}, {1, -2.0}};
    REQUIRE_THROWS_MATCHES(clean_series(bad_price, 1.0, 10.0), parameter_error,
                           MessageMatches(ContainsSubstring("row 1")));
    const std::vector<RawTick> backwards{{5, 1.0}, {3, 2.0}};
    REQUIRE_THROWS_MATCHES(clean_series(backwards, 1.0, 10.0), parameter_error,
                           MessageMatches(ContainsSubstring("decrease")));
    const std::vector<RawTick> single{{7, 3.0}};
    const Series s = clean_series(single, 1.0, 10.0);
    REQUIRE(s.size() == 1);
    REQUIRE(s.values[0] == 3.0);
    REQUIRE(s.t0 == 7);
}

TEST_CASE("align series anchors everything at the latest start", "[finance]") {
    std::vector<Series> inputs;
    inputs.push_back(linear_series(0, 1.0, 10, 0.0, 1.0));
    inputs.push_back(linear_series(3, 1.0, 10, 100.0, 1.0));

    const std::vector<Series> aligned = align_series(inputs);
    REQUIRE(aligned.size() == 2);
    for (const Series& s : aligned) {
        REQUIRE(s.t0 == 3);
        REQUIRE(s.dt == 1.0);
        REQUIRE(s.size() == 7);
    }
    for (std::size_t k = 0; k < 7; ++k) {
        REQUIRE(aligned[0].values[k] == 3.0 + static_cast<double>(k));
        REQUIRE(aligned[1].values[k] == 100.0 + static_cast<double>(k));
    }
}

TEST_CASE("align series falls back to the previous sample on offset grids", "[finance]") {
    std::vector<Series> inputs;
    inputs.push_back(make_series(0, 2.0, {10.0, 20.0, 30.0}));
    inputs.push_back(make_series(1, 2.0, {5.0, 6.0, 7.0}));

    const std::vector<Series> aligned = align_series(inputs);
    REQUIRE(aligned[0].t0 == 1);
    REQUIRE(aligned[0].size() == 2);
    REQUIRE(aligned[0].values == std::vector<double>{10.0, 20.0});
    REQUIRE(aligned[1].values == std::vector<double>{5.0, 6.0});
}

TEST_CASE("align series validation", "[finance]") {
    REQUIRE_THROWS_AS(align_series(std::vector<Series>{}), parameter_error);

    std::vector<Series> with_empty;
    with_empty.push_back(linear_series(0, 1.0, 4, 0.0, 1.0));
    with_empty.push_back(make_series(0, 1.0, {}));
    REQUIRE_THROWS_AS(align_series(with_empty), parameter_error);

    std::vector<Series> mixed_dt;
    mixed_dt.push_back(linear_series(0, 1.0, 4, 0.0, 1.0));
    mixed_dt.push_back(linear_series(0, 2.0, 4, 0.0, 1.0));
    REQUIRE_THROWS_AS(align_series(mixed_dt), parameter_error);

    std::vector<Series> disjoint;
    disjoint.push_back(linear_series(0, 1.0, 2, 0.0, 1.0));
    disjoint.push_back(linear_series(10, 1.0, 2, 0.0, 1.0));
    REQUIRE_THROWS_AS(align_series(disjoint), parameter_error);
}

TEST_CASE("log prices start at zero and returns shift the clock", "[finance]") {
    const Series s = make_series(50, 2.0, {100.0, 110.0, 121.0});
    const auto [x, dx] = log_prices_and_returns(s);

    REQUIRE(x.t0 == 50);
    REQUIRE(x.dt == 2.0);
    REQUIRE(x.values[0] == 0.0);
    REQUIRE_THAT(x.values[1], Catch::Matchers::WithinAbs(std::log(1.1), 1e-15));
    REQUIRE_THAT(x.values[2], Catch::Matchers::WithinAbs(2.0 * std::log(1.1), 1e-12));

    REQUIRE(dx.t0 == 52);
    REQUIRE(dx.dt == 2.0);
    REQUIRE(dx.size() == 2);
    REQUIRE_THAT(dx.values[0], Catch::Matchers::WithinAbs(std::log(1.1), 1e-15));
    REQUIRE_THAT(dx.values[1], Catch::Matchers::WithinAbs(std::log(1.1), 1e-12));

    const auto [x1, dx1] = log_prices_and_returns(make_series(9, 1.0, {4.0}));
    REQUIRE(x1.values == std::vector<double>{0.0});
    REQUIRE(dx1.values.empty());
    REQUIRE(dx1.t0 == 10);

    REQUIRE_THROWS_AS(log_prices_and_returns(make_series(0, 1.0, {})), parameter_error);
    REQUIRE_THROWS_MATCHES(log_prices_and_returns(make_series(0, 1.0, {1.0, 0.0})),
                           parameter_error, MessageMatches(ContainsSubstring("index 1")));
}

TEST_CASE("lowpass leaves constants and interior linear trends alone", "[finance]") {
    const Series flat = make_series(0, 1.0, std::vector<double>(51, 5.0));
    const Series flat_out = lowpass(flat, {10.0});
    REQUIRE(flat_out.size() == 51);
    REQUIRE(flat_out.t0 == 0);
    REQUIRE(flat_out.dt == 1.0);
    for (double v : flat_out.values) REQUIRE_THAT(v, Catch::Matchers::WithinAbs(5.0, 1e-12));

    const Series trend = linear_series(100, 1.0, 60, 3.0, 0.5);
    const Series trend_out = lowpass(trend, {10.0});
    REQUIRE(trend_out.size() == 60);
    // Half-width is 5 samples; where the kernel fits entirely, its symmetry
    // keeps a linear signal unchanged.
    for (std::size_t i = 5; i + 5 < 60; ++i)
        REQUIRE_THAT(trend_out.values[i],
                     Catch::Matchers::WithinAbs(trend.values[i], 1e-9));
}

TEST_CASE("lowpass smooths a spike symmetrically", "[finance]") {
    std::vector<double> v(11, 0.0);
    v[5] = 1.0;
    const Series out = lowpass(make_series(0, 1.0, std::move(v)), {10.0});
    for (std::size_t j = 1; j <= 5; ++j)
        REQUIRE_THAT(out.values[5 - j], Catch::Matchers::WithinAbs(out.values[5 + j], 1e-12));
    REQUIRE(out.values[5] > out.values[4]);
    REQUIRE(out.values[4] > out.values[3]);
    REQUIRE(out.values[3] > 0.0);
}

TEST_CASE("lowpass validation", "[finance]") {
    REQUIRE_THROWS_AS(lowpass(linear_series(0, 1.0, 100, 0.0, 1.0), {2.0}), parameter_error);
    REQUIRE_THROWS_AS(lowpass(linear_series(0, 1.0, 10, 0.0, 1.0), {10.0}), parameter_error);
}

TEST_CASE("decimate keeps every k-th filtered sample", "[finance]") {
    const Series s = linear_series(0, 1.0, 1000, 3.0, 0.5);
    const Series d = decimate(s, 30.0);
    REQUIRE(d.dt == 10.0);
    REQUIRE(d.t0 == 0);
    REQUIRE(d.size() == 100);
    for (std::size_t m = 2; m <= 98; ++m)
        REQUIRE_THAT(d.values[m],
                     Catch::Matchers::WithinAbs(3.0 + 0.5 * static_cast<double>(10 * m), 1e-9));
    REQUIRE_THROWS_AS(decimate(s, 2.0), parameter_error);
}

TEST_CASE("decimating one day of seconds at a ten-minute scale", "[finance]") {
    const Series day = linear_series(0, 1.0, 86400, 0.0, 1e-4);
    const Series d = decimate(day, 600.0);
    REQUIRE(d.size() == 432);
    REQUIRE(d.dt == 200.0);
}

TEST_CASE("correlated noise hits the requested correlation", "[finance]") {
    const std::size_t n = 20000;
    const std::vector<double> sigmas{1.0, 1.0};

    const std::vector<Sample> indep = correlated_noise(n, pair_corr(0.0), sigmas, 21);
    REQUIRE(indep.size() == 2);
    REQUIRE(indep[0].size() == n);
    REQUIRE_THAT(pearson(indep[0], indep[1]), Catch::Matchers::WithinAbs(0.0, 0.05));
    REQUIRE_THAT(std::sqrt(variance_estimate(indep[0], VarianceMode::unbiased)),
                 Catch::Matchers::WithinAbs(1.0, 0.05));

    const std::vector<Sample> tied = correlated_noise(n, pair_corr(0.8), sigmas, 21);
    REQUIRE_THAT(pearson(tied[0], tied[1]), Catch::Matchers::WithinAbs(0.8, 0.05));
}

TEST_CASE("correlated noise scales streams by sigma", "[finance]") {
    const std::vector<double> unit{1.0, 1.0};
    const std::vector<double> scaled{2.0, 4.0};
    const std::vector<Sample> a = correlated_noise(500, pair_corr(0.3), unit, 9);
    const std::vector<Sample> b = correlated_noise(500, pair_corr(0.3), scaled, 9);
    for (std::size_t t = 0; t < 500; ++t) {
        REQUIRE(b[0][t] == 2.0 * a[0][t]);
        REQUIRE(b[1][t] == 4.0 * a[1][t]);
    }
}

TEST_CASE("correlated noise degenerates cleanly at the unit correlations", "[finance]") {
    const std::vector<double> sigmas{1.0, 1.0};
    const std::vector<Sample> same = correlated_noise(200, pair_corr(1.0), sigmas, 4);
    REQUIRE(same[0] == same[1]);
    const std::vector<Sample> mirrored = correlated_noise(200, pair_corr(-1.0), sigmas, 4);
    for (std::size_t t = 0; t < 200; ++t) REQUIRE(mirrored[1][t] == -mirrored[0][t]);
}

TEST_CASE("correlated noise rejects malformed matrices", "[finance]") {
    const std::vector<double> sigmas2{1.0, 1.0};

    Eigen::MatrixXd rect(2, 3);
    rect.setZero();
    REQUIRE_THROWS_AS(correlated_noise(10, rect, sigmas2, 1), parameter_error);

    REQUIRE_THROWS_AS(correlated_noise(10, pair_corr(0.5), std::vector<double>{1.0}, 1),
                      parameter_error);
    REQUIRE_THROWS_AS(correlated_noise(0, pair_corr(0.5), sigmas2, 1), parameter_error);
    REQUIRE_THROWS_AS(correlated_noise(10, pair_corr(0.5), std::vector<double>{1.0, 0.0}, 1),
                      parameter_error);

    Eigen::MatrixXd off_diag(2, 2);
    off_diag << 2.0, 0.5, 0.5, 1.0;
    REQUIRE_THROWS_MATCHES(correlated_noise(10, off_diag, sigmas2, 1), parameter_error,
                           MessageMatches(ContainsSubstring("diagonal")));

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.4, 1.0;
    REQUIRE_THROWS_MATCHES(correlated_noise(10, asym, sigmas2, 1), parameter_error,
                           MessageMatches(ContainsSubstring("symmetric")));

    Eigen::MatrixXd not_psd(3, 3);
    not_psd << 1.0, 0.9, 0.9, 0.9, 1.0, -0.9, 0.9, -0.9, 1.0;
    REQUIRE_THROWS_MATCHES(correlated_noise(10, not_psd, std::vector<double>{1.0, 1.0, 1.0}, 1),
                           parameter_error,
                           MessageMatches(ContainsSubstring("semi-definite")));
}

TEST_CASE("correlated noise reruns bitwise with the same seed", "[finance]") {
    const std::vector<double> sigmas{1.5, 0.5};
    const std::vector<Sample> a = correlated_noise(300, pair_corr(0.4), sigmas, 77);
    const std::vector<Sample> b = correlated_noise(300, pair_corr(0.4), sigmas, 77);
    const std::vector<Sample> c = correlated_noise(300, pair_corr(0.4), sigmas, 78);
    REQUIRE(a == b);
    REQUIRE(a != c);
}

TEST_CASE("synthetic fundamentals carry their increment correlation", "[finance]") {
    const std::size_t length = 8000;
    const double dt = 120.0;
    const double omega0 = 1200.0;
    const std::vector<Series> funds = synthesize_fundamentals(length, 500, dt, 0.7, 12.5,
                                                              omega0, 11);
    REQUIRE(funds.size() == 2);
    for (const Series& f : funds) {
        REQUIRE(f.size() == length);
        REQUIRE(f.t0 == 500);
        REQUIRE(f.dt == dt);
    }

    const std::size_t margin = 5;
    const std::vector<double> d1 = diffs(interior(funds[0].values, margin));
    const std::vector<double> d2 = diffs(interior(funds[1].values, margin));
    REQUIRE_THAT(pearson(d1, d2), Catch::Matchers::WithinAbs(0.7, 0.07));

    const std::vector<Series> rerun = synthesize_fundamentals(length, 500, dt, 0.7, 12.5,
                                                              omega0, 11);
    REQUIRE(rerun[0].values == funds[0].values);
    REQUIRE(rerun[1].values == funds[1].values);

    REQUIRE_THROWS_AS(synthesize_fundamentals(1, 0, dt, 0.0, 1.0, omega0, 1), parameter_error);
    REQUIRE_THROWS_AS(synthesize_fundamentals(length, 0, dt, 1.5, 1.0, omega0, 1),
                      parameter_error);
    REQUIRE_THROWS_AS(synthesize_fundamentals(length, 0, dt, 0.0, 0.0, omega0, 1),
                      parameter_error);
}

TEST_CASE("hybrid with zero noise scale is the fundamentals verbatim", "[finance]") {
    const std::vector<Series> funds = synthesize_fundamentals(900, 0, 120.0, 0.5, 2.0, 1200.0,
                                                              3);
    HybridSpec spec;
    spec.omega0 = 1200.0;
    spec.omega1 = 600.0;
    spec.rho = -0.4;
    spec.sigma = 0.0;
    const std::vector<Series> hybrids = synthesize_hybrid(funds, spec, 99);
    REQUIRE(hybrids.size() == 2);
    REQUIRE(hybrids[0].values == funds[0].values);
    REQUIRE(hybrids[1].values == funds[1].values);
}

TEST_CASE("hybrid noise component carries the injected correlation", "[finance]") {
    const std::size_t length = 4000;
    const double dt = 120.0;
    const std::vector<Series> funds = synthesize_fundamentals(length, 0, dt, 0.7, 2.0, 86400.0,
                                                              13);
    HybridSpec spec;
    spec.omega0 = 86400.0;
    spec.omega1 = 7200.0;
    spec.rho = 0.9;
    spec.sigma = 30.0;
    const std::vector<Series> hybrids = synthesize_hybrid(funds, spec, 14);

    REQUIRE(hybrids[0].t0 == funds[0].t0);
    REQUIRE(hybrids[0].dt == funds[0].dt);
    REQUIRE(hybrids[0].size() == length);
    REQUIRE(hybrids[0].values != funds[0].values);

    std::vector<double> noise1(length), noise2(length);
    for (std::size_t t = 0; t < length; ++t) {
        noise1[t] = hybrids[0].values[t] - funds[0].values[t];
        noise2[t] = hybrids[1].values[t] - funds[1].values[t];
    }
    REQUIRE_THAT(pearson(diffs(noise1), diffs(noise2)),
                 Catch::Matchers::WithinAbs(0.9, 0.05));

    const std::vector<Series> rerun = synthesize_hybrid(funds, spec, 14);
    REQUIRE(rerun[0].values == hybrids[0].values);
    const std::vector<Series> other_seed = synthesize_hybrid(funds, spec, 15);
    REQUIRE(other_seed[0].values != hybrids[0].values);
}

TEST_CASE("hybrid spec and input validation", "[finance]") {
    const std::vector<Series> funds = synthesize_fundamentals(900, 0, 120.0, 0.0, 1.0, 1200.0,
                                                              1);
    HybridSpec spec;
    spec.omega0 = 1200.0;
    spec.omega1 = 600.0;

    HybridSpec bad = spec;
    bad.omega1 = 1200.0;
    REQUIRE_THROWS_AS(synthesize_hybrid(funds, bad, 1), parameter_error);
    bad = spec;
    bad.rho = 1.0;
    REQUIRE_THROWS_AS(synthesize_hybrid(funds, bad, 1), parameter_error);
    bad = spec;
    bad.sigma = -1.0;
    REQUIRE_THROWS_AS(synthesize_hybrid(funds, bad, 1), parameter_error);
    bad = spec;
    bad.omega0 = 0.0;
    REQUIRE_THROWS_AS(synthesize_hybrid(funds, bad, 1), parameter_error);

    REQUIRE_THROWS_AS(synthesize_hybrid(std::vector<Series>{}, spec, 1), parameter_error);

    std::vector<Series> mismatched = funds;
    mismatched[1].t0 += 120;
    REQUIRE_THROWS_AS(synthesize_hybrid(mismatched, spec, 1), parameter_error);
}

TEST_CASE("effective correlation closed form", "[finance]") {
    REQUIRE_THAT(effective_correlation(-0.5, 0.71, 0.3, 0.3),
                 Catch::Matchers::WithinAbs(-0.396851, 1e-9));
    REQUIRE(effective_correlation(0.25, 0.9, 0.0, 0.0) == 0.25);
    REQUIRE(effective_correlation(0.3, 0.6, 0.2, 0.5) ==
            effective_correlation(0.3, 0.6, 0.5, 0.2));
    REQUIRE_THROWS_AS(effective_correlation(std::nan(""), 0.0, 0.1, 0.1), parameter_error);
    REQUIRE_THROWS_AS(effective_correlation(0.0, 0.0, -0.1, 0.1), parameter_error);
}

TEST_CASE("rolling AR(2) fit recovers a noise-free recursion", "[finance]") {
    // Complex companion roots on the unit circle keep the trajectory
    // oscillating, so every fitting window stays well conditioned.
    const double a = 2.0 * std::cos(1.0);
    const double b = -1.0;
    const double c = 0.2;
    const std::size_t n = 60;
    Series s;
    s.t0 = 1000;
    s.dt = 5.0;
    s.values.resize(n);
    s.values[0] = 0.3;
    s.values[1] = 1.1;
    for (std::size_t t = 2; t < n; ++t)
        s.values[t] = c + a * s.values[t - 1] + b * s.values[t - 2];

    PredictorSpec spec;
    spec.window = 10;
    const Series preds = fit_ar_predict(s, spec);
    REQUIRE(preds.size() == n - 10);
    REQUIRE(preds.t0 == 1000 + 10 * 5);
    REQUIRE(preds.dt == 5.0);
    for (std::size_t k = 0; k < preds.size(); ++k)
        REQUIRE_THAT(preds.values[k],
                     Catch::Matchers::WithinAbs(s.values[10 + k], 1e-8));
}

TEST_CASE("rolling AR(2) fit falls back on singular windows", "[finance]") {
    const Series s = make_series(0, 1.0, std::vector<double>(30, 5.0));
    PredictorSpec spec;
    spec.window = 10;
    const Series preds = fit_ar_predict(s, spec);
    REQUIRE(preds.size() == 20);
    for (double v : preds.values) REQUIRE(v == 5.0);
}

TEST_CASE("predictor validation", "[finance]") {
    PredictorSpec tight;
    tight.window = 4;
    REQUIRE_THROWS_AS(tight.validate(), parameter_error);
    PredictorSpec ok;
    ok.window = 5;
    REQUIRE_NOTHROW(ok.validate());

    PredictorSpec spec;
    spec.window = 10;
    REQUIRE_THROWS_AS(fit_ar_predict(linear_series(0, 1.0, 12, 0.0, 1.0), spec),
                      parameter_error);
    REQUIRE_NOTHROW(fit_ar_predict(linear_series(0, 1.0, 13, 0.0, 1.0), spec));
}

TEST_CASE("performance normalizes squared error by target variance", "[finance]") {
    const Series target = make_series(0, 1.0, {1.0, -1.0, 1.0, -1.0});

    const Performance perfect = performance(target, target);
    REQUIRE(perfect.pi == 0.0);
    REQUIRE(perfect.ci_low == 0.0);
    REQUIRE(perfect.ci_high == 0.0);

    const Series mean_pred = make_series(0, 1.0, {0.0, 0.0, 0.0, 0.0});
    const Performance base = performance(target, mean_pred);
    REQUIRE_THAT(base.pi, Catch::Matchers::WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(base.ci_low, Catch::Matchers::WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(base.ci_high, Catch::Matchers::WithinAbs(1.0, 1e-15));

    const Series inverted = make_series(0, 1.0, {-1.0, 1.0, -1.0, 1.0});
    const Performance worst = performance(target, inverted);
    REQUIRE_THAT(worst.pi, Catch::Matchers::WithinAbs(4.0, 1e-15));
}

TEST_CASE("performance validation", "[finance]") {
    const Series target = make_series(0, 1.0, {1.0, 2.0, 3.0});
    REQUIRE_THROWS_AS(performance(target, make_series(0, 1.0, {1.0, 2.0})), parameter_error);
    REQUIRE_THROWS_AS(performance(target, make_series(5, 1.0, {1.0, 2.0, 3.0})),
                      parameter_error);
    REQUIRE_THROWS_AS(performance(target, make_series(0, 2.0, {1.0, 2.0, 3.0})),
                      parameter_error);
    REQUIRE_THROWS_AS(performance(make_series(0, 1.0, {1.0}), make_series(0, 1.0, {1.0})),
                      parameter_error);
    const Series flat = make_series(0, 1.0, {2.0, 2.0, 2.0});
    REQUIRE_THROWS_AS(performance(flat, flat), parameter_error);
}

TEST_CASE("lagged correlation peaks at the copy delay", "[finance]") {
    rng_engine gen = make_engine(5);
    std::normal_distribution<double> step(0.0, 1.0);
    Series x;
    x.t0 = 0;
    x.dt = 1.0;
    x.values.resize(200);
    x.values[0] = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) x.values[i] = x.values[i - 1] + step(gen);

    Series y = x;
    y.t0 = 3;

    const auto lags = lagged_correlation(x, y, 5);
    REQUIRE(lags.size() == 11);
    for (std::size_t i = 0; i < lags.size(); ++i) {
        REQUIRE(lags[i].first == static_cast<int>(i) - 5);
        if (lags[i].first == 3) {
            REQUIRE(lags[i].second == 1.0);
        } else {
            REQUIRE(std::abs(lags[i].second) < 0.5);
        }
    }

    const auto self = lagged_correlation(x, x, 0);
    REQUIRE(self.size() == 1);
    REQUIRE(self[0].first == 0);
    REQUIRE(self[0].second == 1.0);
}

TEST_CASE("lagged correlation omits lags without workable overlap", "[finance]") {
    rng_engine gen = make_engine(8);
    std::normal_distribution<double> step(0.0, 1.0);
    Series x;
    x.t0 = 0;
    x.dt = 1.0;
    x.values.resize(6);
    for (double& v : x.values) v = step(gen);

    const auto lags = lagged_correlation(x, x, 3);
    REQUIRE(lags.size() == 3);
    REQUIRE(lags[0].first == -1);
    REQUIRE(lags[1].first == 0);
    REQUIRE(lags[2].first == 1);

    // A linear series has constant returns, so every lag is degenerate.
    const Series line = linear_series(0, 1.0, 50, 0.0, 2.0);
    Series noisy = line;
    for (double& v : noisy.values) v += step(gen);
    REQUIRE(lagged_correlation(line, noisy, 2).empty());
}

TEST_CASE("lagged correlation validation", "[finance]") {
    const Series x = linear_series(0, 1.0, 10, 0.0, 1.0);
    REQUIRE_THROWS_AS(lagged_correlation(x, linear_series(0, 2.0, 10, 0.0, 1.0), 2),
                      parameter_error);
    REQUIRE_THROWS_AS(lagged_correlation(x, x, -1), parameter_error);
    REQUIRE_THROWS_AS(lagged_correlation(x, make_series(0, 1.0, {1.0}), 2), parameter_error);
    Series off = linear_series(0, 2.0, 10, 0.0, 1.0);
    Series target = off;
    target.t0 = 1;
    REQUIRE_THROWS_AS(lagged_correlation(off, target, 2), parameter_error);
}
