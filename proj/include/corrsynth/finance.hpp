#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corrsynth/errors.hpp"
#include "corrsynth/rng.hpp"
#include "corrsynth/stats.hpp"

namespace corrsynth {

/// Regularly sampled series. t0 is epoch seconds; sample i sits at
/// t0 + i * dt. Derived series (returns, predictions) round their shifted t0
/// to whole seconds, which is exact for the integral-second grids used here.
struct Series {
    std::int64_t t0 = 0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const {
        return static_cast<double>(t0) + static_cast<double>(i) * dt;
    }
};

struct RawTick {
    std::int64_t timestamp = 0;
    double price = 0.0;
};

/// Truncated Gaussian smoothing kernel of total width ω: support
/// [-ω/2, ω/2], σ = ω/4, normalized to unit sum over the available taps.
struct FilterSpec {
    double width = 86400.0;
};

struct HybridSpec {
    double omega0 = 86400.0; // fundamental timescale
    double omega1 = 3600.0;  // noise timescale the hybrid is meant to be read at
    double rho = 0.0;        // injected noise correlation
    double sigma = 1.0;      // per-step noise scale

    void validate() const {
        if (!(omega0 > 0.0)) throw parameter_error("HybridSpec: omega0 must be > 0");
        if (!(omega1 > 0.0 && omega1 < omega0))
            throw parameter_error("HybridSpec: omega1 must be in (0, omega0)");
        if (!(std::abs(rho) < 1.0)) throw parameter_error("HybridSpec: |rho| must be < 1");
        if (!(sigma >= 0.0)) throw parameter_error("HybridSpec: sigma must be >= 0");
    }
};

struct PredictorSpec {
    static constexpr int order = 2; // AR(p), p = 2, no moving-average part
    int window = 100;               // T_W samples per rolling fit

    void validate() const {
        if (window <= order + 2)
            throw parameter_error("PredictorSpec: window must exceed order + 2");
    }
};

/// Resample ticks to a regular dt grid (last observation carried forward)
/// and stitch gaps longer than gap_threshold: every sample from the gap end
/// onward is scaled by S(before)/S(after), so the log-return across the gap
/// is zero.
inline Series clean_series(std::span<const RawTick> raw, double dt, double gap_threshold) {
    if (raw.empty()) throw parameter_error("cleanSeries: empty input");
    if (!(dt > 0.0)) throw parameter_error("cleanSeries: dt must be > 0");
    if (!(gap_threshold > 0.0)) throw parameter_error("cleanSeries: gapThreshold must be > 0");

    std::vector<double> adjusted(raw.size());
    double factor = 1.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!(raw[i].price > 0.0))
            throw parameter_error("cleanSeries: non-positive price at row " + std::to_string(i));
        if (i > 0) {
            if (raw[i].timestamp < raw[i - 1].timestamp)
                throw parameter_error("cleanSeries: timestamps decrease at row " +
                                      std::to_string(i));
            if (static_cast<double>(raw[i].timestamp - raw[i - 1].timestamp) > gap_threshold)
                factor *= raw[i - 1].price / raw[i].price;
        }
        adjusted[i] = raw[i].price * factor;
    }

    Series out;
    out.t0 = raw.front().timestamp;
    out.dt = dt;
    const double span_seconds =
        static_cast<double>(raw.back().timestamp - raw.front().timestamp);
    const std::size_t count = static_cast<std::size_t>(span_seconds / dt) + 1;
    out.values.reserve(count);
    std::size_t j = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = out.time(k);
        while (j + 1 < raw.size() && static_cast<double>(raw[j + 1].timestamp) <= t + 1e-9) ++j;
        out.values.push_back(adjusted[j]);
    }
    return out;
}

/// Truncate several same-dt series to their common time range, resampling
/// each onto the grid anchored at the latest start so all outputs share t0
/// and length.
inline std::vector<Series> align_series(std::span<const Series> inputs) {
    if (inputs.empty()) throw parameter_error("alignSeries: no series");
    const double dt = inputs[0].dt;
    for (const Series& s : inputs) {
        if (s.values.empty()) throw parameter_error("alignSeries: empty series");
        if (s.dt != dt) throw parameter_error("alignSeries: sampling periods differ");
    }

    std::int64_t start = inputs[0].t0;
    double end = inputs[0].time(inputs[0].size() - 1);
    for (const Series& s : inputs) {
        start = std::max(start, s.t0);
        end = std::min(end, s.time(s.size() - 1));
    }
    if (end < static_cast<double>(start))
        throw parameter_error("alignSeries: no common time range");
    const std::size_t count =
        static_cast<std::size_t>((end - static_cast<double>(start)) / dt) + 1;

    std::vector<Series> out;
    out.reserve(inputs.size());
    for (const Series& s : inputs) {
        Series a;
        a.t0 = start;
        a.dt = dt;
        a.values.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            const double t = static_cast<double>(start) + static_cast<double>(k) * dt;
            const double idx = (t - static_cast<double>(s.t0)) / dt + 1e-9;
            a.values.push_back(s.values[static_cast<std::size_t>(idx)]);
        }
        out.push_back(std::move(a));
    }
    return out;
}

/// X(t) = ln(S(t)/S(t0)) and its one-step differences.
inline std::pair<Series, Series> log_prices_and_returns(const Series& s) {
    if (s.values.empty()) throw parameter_error("logPricesAndReturns: empty series");
    Series x;
    x.t0 = s.t0;
    x.dt = s.dt;
    x.values.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s.values[i] > 0.0))
            throw parameter_error("logPricesAndReturns: non-positive value at index " +
                                  std::to_string(i));
        x.values.push_back(std::log(s.values[i] / s.values[0]));
    }
    Series dx;
    dx.t0 = s.t0 + static_cast<std::int64_t>(std::llround(s.dt));
    dx.dt = s.dt;
    if (x.size() > 1) {
        dx.values.reserve(x.size() - 1);
        for (std::size_t i = 1; i < x.size(); ++i)
            dx.values.push_back(x.values[i] - x.values[i - 1]);
    }
    return {std::move(x), std::move(dx)};
}

/// Centered Gaussian smoothing; near the edges the kernel renormalizes over
/// the taps that fit. Output length equals input length.
inline Series lowpass(const Series& s, const FilterSpec& spec) {
    if (!(spec.width > 2.0 * s.dt))
        throw parameter_error("lowpass: filter width must exceed 2 dt");
    const std::size_t n = s.size();
    const long k_max = static_cast<long>(spec.width / (2.0 * s.dt)); // taps per side
    if (n < static_cast<std::size_t>(2 * k_max + 1))
        throw parameter_error("lowpass: series shorter than kernel support");

    const double sigma = spec.width / 4.0;
    std::vector<double> kernel(static_cast<std::size_t>(k_max) + 1);
    for (long k = 0; k <= k_max; ++k) {
        const double u = static_cast<double>(k) * s.dt;
        kernel[static_cast<std::size_t>(k)] = std::exp(-u * u / (2.0 * sigma * sigma));
    }

    Series out;
    out.t0 = s.t0;
    out.dt = s.dt;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long lo = -std::min<long>(k_max, static_cast<long>(i));
        const long hi = std::min<long>(k_max, static_cast<long>(n - 1 - i));
        double acc = 0.0;
        double norm = 0.0;
        for (long k = lo; k <= hi; ++k) {
            const double w = kernel[static_cast<std::size_t>(std::labs(k))];
            acc += w * s.values[static_cast<std::size_t>(static_cast<long>(i) + k)];
            norm += w;
        }
        out.values[i] = acc / norm;
    }
    return out;
}

/// Anti-aliased downsampling: lowpass at width omega_m, then keep every k-th
/// sample with k = round((omega_m / 3) / dt).
inline Series decimate(const Series& s, double omega_m) {
    if (!(omega_m / 3.0 >= s.dt))
        throw parameter_error("decimate: omegaM must be at least 3 dt");
    const long k = std::lround((omega_m / 3.0) / s.dt);
    if (k < 1) throw parameter_error("decimate: decimation factor rounds to zero");

    const Series filtered = lowpass(s, {omega_m});
    Series out;
    out.t0 = s.t0;
    out.dt = static_cast<double>(k) * s.dt;
    out.values.reserve(filtered.size() / static_cast<std::size_t>(k) + 1);
    for (std::size_t i = 0; i < filtered.size(); i += static_cast<std::size_t>(k))
        out.values.push_back(filtered.values[i]);
    return out;
}

/// Jointly Gaussian increment streams with correlation matrix R and per-step
/// standard deviations sigmas, built from independent standard normals with
/// a semidefinite triangular factor (so |rho| = 1 degenerates cleanly).
inline std::vector<Sample> correlated_noise(std::size_t n, const Eigen::MatrixXd& corr,
                                            std::span<const double> sigmas,
                                            std::uint64_t seed) {
    const Eigen::Index dim = corr.rows();
    if (dim < 1 || corr.cols() != dim)
        throw parameter_error("correlatedNoise: correlation matrix must be square");
    if (sigmas.size() != static_cast<std::size_t>(dim))
        throw parameter_error("correlatedNoise: sigmas size mismatch");
    if (n < 1) throw parameter_error("correlatedNoise: need n >= 1");
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(corr(i, i) - 1.0) > 1e-12)
            throw parameter_error("correlatedNoise: diagonal must be 1");
        if (!(sigmas[static_cast<std::size_t>(i)] > 0.0))
            throw parameter_error("correlatedNoise: sigmas must be > 0");
        for (Eigen::Index j = 0; j < i; ++j)
            if (std::abs(corr(i, j) - corr(j, i)) > 1e-12)
                throw parameter_error("correlatedNoise: matrix must be symmetric");
    }

    // Semidefinite Cholesky: zero pivots are allowed as long as the residual
    // column vanishes with them, otherwise the matrix is not PSD.
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        double d = corr(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d < -1e-9)
            throw parameter_error("correlatedNoise: matrix is not positive semi-definite");
        d = std::max(d, 0.0);
        const double pivot = std::sqrt(d);
        l(j, j) = pivot;
        for (Eigen::Index i = j + 1; i < dim; ++i) {
            double r = corr(i, j);
            for (Eigen::Index k = 0; k < j; ++k) r -= l(i, k) * l(j, k);
            if (pivot > 1e-12) {
                l(i, j) = r / pivot;
            } else if (std::abs(r) > 1e-9) {
                throw parameter_error("correlatedNoise: matrix is not positive semi-definite");
            }
        }
    }

    rng_engine gen = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Sample> out(static_cast<std::size_t>(dim));
    for (auto& s : out) s.resize(n);
    std::vector<double> z(static_cast<std::size_t>(dim));
    for (std::size_t t = 0; t < n; ++t) {
        for (Eigen::Index i = 0; i < dim; ++i) z[static_cast<std::size_t>(i)] = normal(gen);
        for (Eigen::Index i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (Eigen::Index k = 0; k <= i; ++k) acc += l(i, k) * z[static_cast<std::size_t>(k)];
            out[static_cast<std::size_t>(i)][t] = sigmas[static_cast<std::size_t>(i)] * acc;
        }
    }
    return out;
}

/// Self-contained fundamental pair: two Wiener paths with increment
/// correlation rho0, lowpassed at omega0. Stands in for real market
/// fundamentals in tests and synthetic sweeps.
inline std::vector<Series> synthesize_fundamentals(std::size_t length, std::int64_t t0, double dt,
                                                   double rho0, double sigma, double omega0,
                                                   std::uint64_t seed) {
    if (length < 2) throw parameter_error("synthesizeFundamentals: need length >= 2");
    if (!(std::abs(rho0) <= 1.0))
        throw parameter_error("synthesizeFundamentals: |rho0| must be <= 1");
    if (!(sigma > 0.0)) throw parameter_error("synthesizeFundamentals: sigma must be > 0");

    Eigen::MatrixXd corr(2, 2);
    corr << 1.0, rho0, rho0, 1.0;
    const std::array<double, 2> sigmas{sigma, sigma};
    const std::vector<Sample> incs = correlated_noise(length - 1, corr, sigmas, seed);

    std::vector<Series> out;
    out.reserve(2);
    for (int i = 0; i < 2; ++i) {
        Series w;
        w.t0 = t0;
        w.dt = dt;
        w.values.resize(length);
        w.values[0] = 0.0;
        for (std::size_t t = 1; t < length; ++t)
            w.values[t] = w.values[t - 1] + incs[static_cast<std::size_t>(i)][t - 1];
        out.push_back(lowpass(w, {omega0}));
    }
    return out;
}

/// Hybrid signals: fundamental + correlated synthetic noise, where the noise
/// is a Wiener path minus its omega0 lowpass, so the fundamental band stays
/// untouched. omega1 does not enter the construction itself; it is the
/// timescale the downstream analysis filters at before measuring
/// correlations, and the interference between bands grows as it approaches
/// omega0.
inline std::vector<Series> synthesize_hybrid(std::span<const Series> fundamentals,
                                             const HybridSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (fundamentals.empty()) throw parameter_error("synthesizeHybrid: no fundamentals");
    const std::size_t len = fundamentals[0].size();
    for (const Series& f : fundamentals)
        if (f.size() != len || f.t0 != fundamentals[0].t0 || f.dt != fundamentals[0].dt)
            throw parameter_error("synthesizeHybrid: fundamentals must share t0, dt, length");
    if (len < 2) throw parameter_error("synthesizeHybrid: fundamentals too short");

    std::vector<Series> out(fundamentals.begin(), fundamentals.end());
    if (spec.sigma == 0.0) return out;

    const Eigen::Index dim = static_cast<Eigen::Index>(fundamentals.size());
    Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(dim, dim, spec.rho);
    corr.diagonal().setOnes();
    const std::vector<double> sigmas(fundamentals.size(), spec.sigma);
    const std::vector<Sample> incs = correlated_noise(len - 1, corr, sigmas, seed);

    for (std::size_t i = 0; i < out.size(); ++i) {
        Series w;
        w.t0 = out[i].t0;
        w.dt = out[i].dt;
        w.values.resize(len);
        w.values[0] = 0.0;
        for (std::size_t t = 1; t < len; ++t) w.values[t] = w.values[t - 1] + incs[i][t - 1];
        const Series slow = lowpass(w, {spec.omega0});
        for (std::size_t t = 0; t < len; ++t)
            out[i].values[t] += w.values[t] - slow.values[t];
    }
    return out;
}

/// First-order effective correlation of hybrid returns:
///   rho_e = (eps1 eps2 rho0 + rho) (1 - (eps1^2 + eps2^2) / 2)
/// with eps_i the fundamental-to-noise return volatility ratio at the
/// measurement timescale and rho0 the fundamental return correlation.
inline double effective_correlation(double rho, double rho0, double eps1, double eps2) {
    if (!std::isfinite(rho) || !std::isfinite(rho0) || !std::isfinite(eps1) ||
        !std::isfinite(eps2))
        throw parameter_error("effectiveCorrelation: inputs must be finite");
    if (eps1 < 0.0 || eps2 < 0.0)
        throw parameter_error("effectiveCorrelation: eps must be >= 0");
    return (eps1 * eps2 * rho0 + rho) * (1.0 - 0.5 * (eps1 * eps1 + eps2 * eps2));
}

/// Rolling AR(2) one-step forecasts: for each t >= window - 1 (0-based), fit
/// ordinary least squares with intercept on the trailing window and predict
/// the next sample. A singular window falls back to the last observed value.
/// Output sample k is the prediction for input index window + k.
inline Series fit_ar_predict(const Series& s, const PredictorSpec& spec) {
    spec.validate();
    const std::size_t n = s.size();
    const std::size_t window = static_cast<std::size_t>(spec.window);
    if (n <= window + static_cast<std::size_t>(PredictorSpec::order))
        throw parameter_error("fitArPredict: series length must exceed window + order");

    Series out;
    out.t0 = s.t0 + static_cast<std::int64_t>(std::llround(static_cast<double>(window) * s.dt));
    out.dt = s.dt;
    out.values.reserve(n - window);

    for (std::size_t t = window - 1; t + 1 < n; ++t) {
        // rows predict s[j] from (1, s[j-1], s[j-2]) for j in the window
        Eigen::Matrix3d xtx = Eigen::Matrix3d::Zero();
        Eigen::Vector3d xty = Eigen::Vector3d::Zero();
        for (std::size_t j = t - window + 3; j <= t; ++j) {
            const Eigen::Vector3d row(1.0, s.values[j - 1], s.values[j - 2]);
            xtx += row * row.transpose();
            xty += row * s.values[j];
        }
        const Eigen::FullPivLU<Eigen::Matrix3d> lu(xtx);
        if (lu.isInvertible()) {
            const Eigen::Vector3d beta = lu.solve(xty);
            out.values.push_back(beta(0) + beta(1) * s.values[t] + beta(2) * s.values[t - 1]);
        } else {
            out.values.push_back(s.values[t]);
        }
    }
    return out;
}

struct Performance {
    double pi = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Normalized prediction error pi = mean squared error / variance(target),
/// with the variance in the 1/T convention (so a constant mean predictor
/// scores exactly 1), and a 1.96 sigma / sqrt(T) interval over the
/// per-sample terms.
inline Performance performance(const Series& target, const Series& predictions) {
    if (target.size() != predictions.size())
        throw parameter_error("performance: length mismatch");
    if (target.t0 != predictions.t0 || target.dt != predictions.dt)
        throw parameter_error("performance: series are not aligned");
    const std::size_t t_count = target.size();
    if (t_count < 2) throw parameter_error("performance: need at least 2 samples");

    const double var = variance_estimate(target.values, VarianceMode::paper_biased);
    if (!(var > 0.0)) throw parameter_error("performance: zero target variance");

    std::vector<double> terms(t_count);
    double mean = 0.0;
    for (std::size_t i = 0; i < t_count; ++i) {
        const double e = target.values[i] - predictions.values[i];
        terms[i] = e * e / var;
        mean += terms[i];
    }
    mean /= static_cast<double>(t_count);
    double sq = 0.0;
    for (double term : terms) sq += (term - mean) * (term - mean);
    const double sd = std::sqrt(sq / static_cast<double>(t_count));
    const double half = 1.96 * sd / std::sqrt(static_cast<double>(t_count));
    return {mean, mean - half, mean + half};
}

/// Correlation between the return series of x and y at integer lags:
/// entry tau pairs the x-return tau samples before each y-return, so a y
/// that copies x with a k-sample delay peaks at tau = +k. Lags with fewer
/// than 4 overlapping pairs or degenerate variance are omitted.
inline std::vector<std::pair<int, double>> lagged_correlation(const Series& x, const Series& y,
                                                              int tau_max) {
    if (x.dt != y.dt) throw parameter_error("laggedCorrelation: sampling periods differ");
    if (tau_max < 0) throw parameter_error("laggedCorrelation: tauMax must be >= 0");
    if (x.size() < 2 || y.size() < 2)
        throw parameter_error("laggedCorrelation: need at least 2 samples each");

    const double offset = static_cast<double>(y.t0 - x.t0) / x.dt;
    const long k0 = std::lround(offset);
    if (std::abs(offset - static_cast<double>(k0)) > 1e-6)
        throw parameter_error("laggedCorrelation: sample grids are not aligned");

    std::vector<double> dx(x.size() - 1), dy(y.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) dx[i] = x.values[i + 1] - x.values[i];
    for (std::size_t i = 0; i + 1 < y.size(); ++i) dy[i] = y.values[i + 1] - y.values[i];

    std::vector<std::pair<int, double>> out;
    for (int tau = -tau_max; tau <= tau_max; ++tau) {
        std::vector<double> xs, ys;
        for (std::size_t j = 0; j < dy.size(); ++j) {
            const long xi = static_cast<long>(j) + k0 - tau;
            if (xi < 0 || xi >= static_cast<long>(dx.size())) continue;
            xs.push_back(dx[static_cast<std::size_t>(xi)]);
            ys.push_back(dy[j]);
        }
        if (xs.size() < 4) continue;
        try {
            out.push_back({tau, pearson(xs, ys)});
        } catch (const undefined_correlation_error&) {
            // degenerate overlap, entry omitted
        }
    }
    return out;
}

} // namespace corrsynth
