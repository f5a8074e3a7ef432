#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "corrsynth/errors.hpp"
#include "corrsynth/grid.hpp"

namespace corrsynth {

/// The four morphology indicators of a density grid.
struct MorphologyIndicators {
    double moran = 0.0;
    double mean_distance = 0.0;
    double entropy = 0.0;
    double hierarchy = 0.0;
};

namespace detail {

/// Lookup of Euclidean offsets: offset_distance[dy * w + dx] = sqrt(dx² + dy²).
/// Cell centers sit on an integer lattice, so every pair distance is one of
/// these W² values; precomputing them turns the O(W⁴) pair loops from
/// hypot-bound into table lookups.
inline std::vector<double> offset_distances(int w) {
    std::vector<double> d(static_cast<std::size_t>(w) * static_cast<std::size_t>(w));
    for (int dy = 0; dy < w; ++dy)
        for (int dx = 0; dx < w; ++dx)
            d[static_cast<std::size_t>(dy) * w + dx] =
                std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy);
    return d;
}

} // namespace detail

/// Moran spatial autocorrelation with inverse-distance weights w_ij = 1/d_ij:
///   I = (n / Σ_{i≠j} w_ij) · (Σ_{i≠j} w_ij z_i z_j) / (Σ_i z_i²),  z_i = P_i - mean.
/// All W² cells participate, empty ones included.
inline double moran_index(const DensityGrid& grid) {
    const int w = grid.width;
    const std::size_t n = grid.size();
    if (n < 2) throw undefined_indicator_error("moran: grid needs at least 2 cells");

    double mean = 0.0;
    for (double c : grid.cells) mean += c;
    mean /= static_cast<double>(n);

    std::vector<double> z(n);
    double sum_z2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = grid.cells[i] - mean;
        sum_z2 += z[i] * z[i];
    }
    if (sum_z2 <= 0.0) throw undefined_indicator_error("moran: zero variance across cells");

    const std::vector<double> dist = detail::offset_distances(w);
    // Unordered pairs; the symmetric-sum factors of 2 cancel between
    // numerator and weight total.
    double sum_w = 0.0;
    double sum_wzz = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const int xi = static_cast<int>(i) % w;
        const int yi = static_cast<int>(i) / w;
        for (std::size_t j = i + 1; j < n; ++j) {
            const int dx = std::abs(static_cast<int>(j) % w - xi);
            const int dy = std::abs(static_cast<int>(j) / w - yi);
            const double wij = 1.0 / dist[static_cast<std::size_t>(dy) * w + dx];
            sum_w += wij;
            sum_wzz += wij * z[i] * z[j];
        }
    }
    return static_cast<double>(n) * sum_wzz / (sum_w * sum_z2);
}

/// Population-weighted mean pairwise distance between occupied cells,
/// normalized by the grid diagonal sqrt(2)·W:
///   d = (Σ_{i<j} P_i P_j d_ij / Σ_{i<j} P_i P_j) / (sqrt(2)·W).
inline double mean_distance(const DensityGrid& grid) {
    const int w = grid.width;
    struct Occupied {
        int x, y;
        double p;
    };
    std::vector<Occupied> occ;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.cells[i] > 0.0)
            occ.push_back({static_cast<int>(i) % w, static_cast<int>(i) / w, grid.cells[i]});
    if (occ.size() < 2)
        throw undefined_indicator_error("meanDistance: fewer than 2 occupied cells");

    const std::vector<double> dist = detail::offset_distances(w);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
        for (std::size_t j = i + 1; j < occ.size(); ++j) {
            const int dx = std::abs(occ[i].x - occ[j].x);
            const int dy = std::abs(occ[i].y - occ[j].y);
            const double pp = occ[i].p * occ[j].p;
            num += pp * dist[static_cast<std::size_t>(dy) * w + dx];
            den += pp;
        }
    }
    return num / den / (std::sqrt(2.0) * static_cast<double>(w));
}

/// Shannon entropy of the population shares, normalized by ln(W²) so a
/// uniform grid scores 1. Empty cells contribute nothing.
inline double entropy(const DensityGrid& grid) {
    const std::size_t n = grid.size();
    if (n < 2) throw undefined_indicator_error("entropy: grid needs at least 2 cells");
    const double total = grid.total();
    if (!(total > 0.0)) throw undefined_indicator_error("entropy: empty grid");

    double h = 0.0;
    for (double c : grid.cells) {
        if (c <= 0.0) continue;
        const double p = c / total;
        h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(n));
}

/// Rank-size hierarchy: absolute slope of the OLS fit of ln(P) against
/// ln(rank) over occupied cells sorted by descending population.
inline double hierarchy(const DensityGrid& grid) {
    std::vector<double> pops;
    for (double c : grid.cells)
        if (c > 0.0) pops.push_back(c);
    if (pops.size() < 2)
        throw undefined_indicator_error("hierarchy: fewer than 2 occupied cells");
    std::sort(pops.begin(), pops.end(), std::greater<double>());
    if (pops.front() == pops.back())
        throw undefined_indicator_error("hierarchy: all occupied cells equal");

    const std::size_t k = pops.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> xs(k), ys(k);
    for (std::size_t r = 0; r < k; ++r) {
        xs[r] = std::log(static_cast<double>(r + 1));
        ys[r] = std::log(pops[r]);
        mx += xs[r];
        my += ys[r];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        sxy += (xs[r] - mx) * (ys[r] - my);
        sxx += (xs[r] - mx) * (xs[r] - mx);
    }
    return std::abs(sxy / sxx);
}

/// All four indicators in one call. Any undefined indicator aborts the whole
/// evaluation; campaign code treats that as a dropped replication.
inline MorphologyIndicators morphology(const DensityGrid& grid) {
    MorphologyIndicators m;
    m.moran = moran_index(grid);
    m.mean_distance = mean_distance(grid);
    m.entropy = entropy(grid);
    m.hierarchy = hierarchy(grid);
    return m;
}

} // namespace corrsynth
