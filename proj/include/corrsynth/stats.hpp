#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrsynth/errors.hpp"

namespace corrsynth {

using Sample = std::vector<double>;

/// The variance estimator convention. `paper_biased` is the literal 1/T
/// normalization; combined with the 1/(T-1) covariance it makes the
/// self-correlation T/(T-1), which is why `unbiased` is the default
/// everywhere correlations are assembled.
enum class VarianceMode { paper_biased, unbiased };

/// cov(x, y) = (1/(T-1)) Σ x y − (1/(T(T-1))) Σx Σy.
inline double covariance_estimate(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw parameter_error("covarianceEstimate: length mismatch");
    const std::size_t t = x.size();
    if (t < 2) throw parameter_error("covarianceEstimate: need at least 2 samples");
    double sxy = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        sxy += x[i] * y[i];
        sx += x[i];
        sy += y[i];
    }
    const double tt = static_cast<double>(t);
    return sxy / (tt - 1.0) - (sx * sy) / (tt * (tt - 1.0));
}

/// Variance under the chosen convention. The unbiased branch reuses the
/// covariance expression verbatim so pearson(x, x) evaluates to exactly 1.
inline double variance_estimate(std::span<const double> x, VarianceMode mode) {
    const std::size_t t = x.size();
    if (t < 2) throw parameter_error("varianceEstimate: need at least 2 samples");
    if (mode == VarianceMode::unbiased) {
        double sxx = 0.0, sx = 0.0;
        for (double v : x) {
            sxx += v * v;
            sx += v;
        }
        const double tt = static_cast<double>(t);
        return sxx / (tt - 1.0) - (sx * sx) / (tt * (tt - 1.0));
    }
    double sxx = 0.0, sx = 0.0;
    for (double v : x) {
        sxx += v * v;
        sx += v;
    }
    const double tt = static_cast<double>(t);
    const double mean = sx / tt;
    return sxx / tt - mean * mean;
}

inline double pearson(std::span<const double> x, std::span<const double> y,
                      VarianceMode mode = VarianceMode::unbiased) {
    const double vx = variance_estimate(x, mode);
    const double vy = variance_estimate(y, mode);
    if (!(vx > 0.0) || !(vy > 0.0))
        throw undefined_correlation_error("pearson: zero variance");
    return covariance_estimate(x, y) / std::sqrt(vx * vy);
}

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

namespace detail {

/// Two-sided normal critical value for the given confidence level. 0.95 is
/// pinned to the conventional 1.96; other levels fall back to a bisection on
/// the error function.
inline double normal_critical(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw parameter_error("fisherInterval: level must be in (0, 1)");
    if (level == 0.95) return 1.96;
    const double target = level; // P(|Z| <= z) = erf(z / sqrt(2))
    double lo = 0.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::erf(mid / std::sqrt(2.0)) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Fisher z confidence interval: z = atanh(rho), half-width z_crit/sqrt(n-3).
inline ConfidenceInterval fisher_interval(double rho, long n, double level = 0.95) {
    if (!(std::abs(rho) <= 1.0))
        throw parameter_error("fisherInterval: rho must lie in [-1, 1]");
    if (n <= 3) throw parameter_error("fisherInterval: need n >= 4");
    if (std::abs(rho) == 1.0) return {rho, rho};
    const double z = std::atanh(rho);
    const double h = detail::normal_critical(level) / std::sqrt(static_cast<double>(n) - 3.0);
    return {std::tanh(z - h), std::tanh(z + h)};
}

/// 4x4 correlation matrix between the morphology and network indicator
/// samples of one parameter point. Entries whose correlation is undefined
/// (constant sample) are flagged missing instead of failing the whole matrix.
struct CrossCorrelationMatrix {
    static constexpr std::array<const char*, 4> row_labels{"moran", "meanDistance", "entropy",
                                                           "hierarchy"};
    static constexpr std::array<const char*, 4> col_labels{"centrality", "pathLength", "speed",
                                                           "diameter"};

    std::array<std::array<double, 4>, 4> rho{};
    std::array<std::array<double, 4>, 4> ci_low{};
    std::array<std::array<double, 4>, 4> ci_high{};
    std::array<std::array<bool, 4>, 4> missing{};
    long n = 0;

    bool complete() const {
        for (const auto& row : missing)
            for (bool m : row)
                if (m) return false;
        return true;
    }

    double mean_abs_rho() const {
        double s = 0.0;
        int count = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (!missing[i][j]) {
                    s += std::abs(rho[i][j]);
                    ++count;
                }
        return count > 0 ? s / count : 0.0;
    }
};

inline CrossCorrelationMatrix cross_correlation(const std::array<Sample, 4>& m_samples,
                                                const std::array<Sample, 4>& g_samples) {
    const std::size_t n = m_samples[0].size();
    for (const auto& s : m_samples)
        if (s.size() != n) throw parameter_error("crossCorrelation: sample length mismatch");
    for (const auto& s : g_samples)
        if (s.size() != n) throw parameter_error("crossCorrelation: sample length mismatch");
    if (n < 4) throw parameter_error("crossCorrelation: need at least 4 replications");

    CrossCorrelationMatrix out;
    out.n = static_cast<long>(n);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            try {
                double r = pearson(m_samples[i], g_samples[j]);
                r = std::clamp(r, -1.0, 1.0);
                const ConfidenceInterval ci = fisher_interval(r, out.n);
                out.rho[i][j] = r;
                out.ci_low[i][j] = ci.low;
                out.ci_high[i][j] = ci.high;
            } catch (const undefined_correlation_error&) {
                out.missing[i][j] = true;
                out.rho[i][j] = std::nan("");
                out.ci_low[i][j] = std::nan("");
                out.ci_high[i][j] = std::nan("");
            }
        }
    }
    return out;
}

/// Per-entry spread over a batch of matrices: amplitude = max - min of rho,
/// max_abs = max |rho|. Missing entries are skipped; an entry missing in
/// every matrix stays missing.
struct AmplitudeMax {
    std::array<std::array<double, 4>, 4> amplitude{};
    std::array<std::array<double, 4>, 4> max_abs{};
    std::array<std::array<bool, 4>, 4> missing{};
};

inline AmplitudeMax amplitude_and_max(std::span<const CrossCorrelationMatrix> matrices) {
    if (matrices.empty()) throw parameter_error("amplitudeAndMax: need at least one matrix");
    AmplitudeMax out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double lo = 0.0, hi = 0.0, mx = 0.0;
            bool any = false;
            for (const auto& m : matrices) {
                if (m.missing[i][j]) continue;
                const double r = m.rho[i][j];
                if (!any) {
                    lo = hi = r;
                    mx = std::abs(r);
                    any = true;
                } else {
                    lo = std::min(lo, r);
                    hi = std::max(hi, r);
                    mx = std::max(mx, std::abs(r));
                }
            }
            if (!any) {
                out.missing[i][j] = true;
                out.amplitude[i][j] = std::nan("");
                out.max_abs[i][j] = std::nan("");
            } else {
                out.amplitude[i][j] = hi - lo;
                out.max_abs[i][j] = mx;
            }
        }
    }
    return out;
}

/// PCA of a matrix population over the 16-dim flattened rho entries
/// (row-major). Incomplete matrices are dropped and counted; components are
/// ordered by descending variance with the sign convention that the
/// largest-magnitude coordinate of each component is positive.
struct PcaResult {
    std::array<double, 16> mean{};
    std::vector<std::array<double, 16>> components;  // 16 vectors, descending variance
    std::vector<double> variance_ratios;             // descending, sums to 1
    std::vector<std::size_t> kept;                   // indices of complete inputs
    std::size_t dropped = 0;
    std::vector<std::array<double, 2>> projections;  // per kept input, top-2 plane
    // Per kept input: 32 corner points, entry e's ciLow at corner 2e and
    // ciHigh at corner 2e+1, substituted one at a time into the flattened
    // vector and projected into the same plane.
    std::vector<std::array<std::array<double, 2>, 32>> ci_corners;
};

inline std::array<double, 16> flatten_rho(const CrossCorrelationMatrix& m) {
    std::array<double, 16> v{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            v[static_cast<std::size_t>(4 * i + j)] = m.rho[i][j];
    return v;
}

inline PcaResult pca_project(std::span<const CrossCorrelationMatrix> matrices) {
    PcaResult out;
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        if (matrices[k].complete())
            out.kept.push_back(k);
        else
            ++out.dropped;
    }
    const std::size_t count = out.kept.size();
    if (count < 3)
        throw parameter_error("pcaProject: need at least 3 complete matrices, got " +
                              std::to_string(count));

    Eigen::MatrixXd data(static_cast<Eigen::Index>(count), 16);
    for (std::size_t r = 0; r < count; ++r) {
        const auto v = flatten_rho(matrices[out.kept[r]]);
        for (int c = 0; c < 16; ++c) data(static_cast<Eigen::Index>(r), c) = v[c];
    }

    const Eigen::RowVectorXd mean = data.colwise().mean();
    for (int c = 0; c < 16; ++c) out.mean[c] = mean(c);
    const Eigen::MatrixXd centered = data.rowwise() - mean;
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(count - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw infeasible_error("pcaProject: eigendecomposition failed");

    // Eigen returns ascending eigenvalues; reverse to descending and clamp
    // the tiny negatives that show up when the cloud is rank-deficient.
    Eigen::VectorXd values = solver.eigenvalues().reverse();
    Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values(i) < 0.0) values(i) = 0.0;
    const double total = values.sum();
    if (!(total > 1e-15))
        throw infeasible_error("pcaProject: degenerate population (all matrices identical)");

    out.components.resize(16);
    out.variance_ratios.resize(16);
    for (int k = 0; k < 16; ++k) {
        Eigen::VectorXd comp = vectors.col(k);
        Eigen::Index imax = 0;
        comp.cwiseAbs().maxCoeff(&imax);
        if (comp(imax) < 0.0) comp = -comp;
        for (int c = 0; c < 16; ++c) out.components[k][c] = comp(c);
        out.variance_ratios[k] = values(k) / total;
        vectors.col(k) = comp;
    }

    const Eigen::VectorXd pc1 = vectors.col(0);
    const Eigen::VectorXd pc2 = vectors.col(1);
    out.projections.resize(count);
    out.ci_corners.resize(count);
    for (std::size_t r = 0; r < count; ++r) {
        const Eigen::RowVectorXd row = centered.row(static_cast<Eigen::Index>(r));
        out.projections[r] = {row.dot(pc1), row.dot(pc2)};
        const CrossCorrelationMatrix& m = matrices[out.kept[r]];
        for (int e = 0; e < 16; ++e) {
            const int i = e / 4;
            const int j = e % 4;
            for (int side = 0; side < 2; ++side) {
                Eigen::RowVectorXd corner = row;
                const double bound = side == 0 ? m.ci_low[i][j] : m.ci_high[i][j];
                corner(e) = bound - mean(e);
                out.ci_corners[r][static_cast<std::size_t>(2 * e + side)] = {corner.dot(pc1),
                                                                             corner.dot(pc2)};
            }
        }
    }
    return out;
}

} // namespace corrsynth
