#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "corrsynth/errors.hpp"
#include "corrsynth/rng.hpp"

namespace corrsynth {

/// Square population grid, row-major, cell (x, y) at index y * width + x.
/// Cell values are population mass in arbitrary units; growth adds unit
/// increments, diffusion redistributes them.
struct DensityGrid {
    int width = 0;
    std::vector<double> cells;

    DensityGrid() = default;
    explicit DensityGrid(int w) : width(w) {
        if (w < 1) throw parameter_error("DensityGrid: width must be >= 1");
        cells.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(w), 0.0);
    }

    std::size_t size() const { return cells.size(); }

    double& at(int x, int y) {
        return cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x];
    }
    double at(int x, int y) const {
        return cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x];
    }

    double total() const {
        double s = 0.0;
        for (double c : cells) s += c;
        return s;
    }
};

/// Parameters of the density morphogenesis.
///   total_population   target mass P_m; the run stops after round(P_m / N_G) steps
///   growth_per_step    mass N_G added per step, one unit at a time
///   hierarchy_exponent alpha; weight of cell i is (P_i / P)^alpha
///   diffusion_fraction beta; share of a cell pushed to its 4-neighbourhood
///   diffusion_steps    diffusion sweeps applied after each growth step
struct DensityParams {
    double total_population = 1e4;
    double growth_per_step = 1e3;
    double hierarchy_exponent = 1.0;
    double diffusion_fraction = 0.0;
    int diffusion_steps = 1;
    int width = 50;

    long steps() const { return std::lround(total_population / growth_per_step); }

    void validate() const {
        if (width < 1) throw parameter_error("DensityParams: width must be >= 1");
        if (!(total_population > 0.0))
            throw parameter_error("DensityParams: totalPopulation must be > 0");
        if (!(growth_per_step > 0.0))
            throw parameter_error("DensityParams: growthPerStep must be > 0");
        if (!std::isfinite(hierarchy_exponent))
            throw parameter_error("DensityParams: hierarchyExponent must be finite");
        if (!(diffusion_fraction >= 0.0 && diffusion_fraction <= 1.0))
            throw parameter_error("DensityParams: diffusionFraction must be in [0, 1]");
        if (diffusion_steps < 0)
            throw parameter_error("DensityParams: diffusionSteps must be >= 0");
        if (steps() < 1)
            throw parameter_error("DensityParams: totalPopulation / growthPerStep rounds to zero steps");
        if (std::llround(growth_per_step) < 1)
            throw parameter_error("DensityParams: growthPerStep rounds to zero units");
    }
};

/// Add n_units unit masses, each cell drawn with probability proportional to
/// (P_i / P)^alpha. An empty grid seeds uniformly; alpha = 0 spreads uniformly
/// over cells that already hold mass. Weights are recomputed from the input
/// grid once; the units of one call land independently.
inline DensityGrid preferential_grow(const DensityGrid& grid, long n_units, double alpha,
                                     rng_engine& gen) {
    if (grid.width < 1) throw parameter_error("preferential_grow: empty grid");
    if (n_units < 1) throw parameter_error("preferential_grow: nUnits must be >= 1");
    if (!std::isfinite(alpha)) throw parameter_error("preferential_grow: alpha must be finite");

    const std::size_t n = grid.size();
    const double total = grid.total();

    std::vector<double> cumulative(n);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w;
        if (total <= 0.0) {
            w = 1.0;
        } else if (grid.cells[i] <= 0.0) {
            w = 0.0;
        } else if (alpha == 0.0) {
            w = 1.0;
        } else {
            w = std::pow(grid.cells[i] / total, alpha);
        }
        if (!std::isfinite(w))
            throw parameter_error("preferential_grow: non-finite growth weight");
        running += w;
        cumulative[i] = running;
    }
    if (!(running > 0.0))
        throw parameter_error("preferential_grow: total growth weight is zero");

    DensityGrid out = grid;
    for (long u = 0; u < n_units; ++u) {
        const std::size_t idx = sample_cumulative(cumulative, uniform01(gen));
        out.cells[idx] += 1.0;
    }
    return out;
}

/// One diffusion sweep: every cell keeps (1 - beta) of its mass and sends
/// beta / 4 to each of its in-grid 4-neighbours. Mass leaving through the
/// border is lost; that shrinkage is part of the model, not a bug.
inline DensityGrid diffuse(const DensityGrid& grid, double beta) {
    if (grid.width < 1) throw parameter_error("diffuse: empty grid");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw parameter_error("diffuse: beta must be in [0, 1]");

    const int w = grid.width;
    DensityGrid out(w);
    for (int y = 0; y < w; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = grid.at(x, y);
            if (m == 0.0) continue;
            out.at(x, y) += (1.0 - beta) * m;
            const double share = beta * 0.25 * m;
            if (share == 0.0) continue;
            if (x > 0) out.at(x - 1, y) += share;
            if (x + 1 < w) out.at(x + 1, y) += share;
            if (y > 0) out.at(x, y - 1) += share;
            if (y + 1 < w) out.at(x, y + 1) += share;
        }
    }
    return out;
}

/// Full morphogenesis: round(P_m / N_G) alternating growth / diffusion steps
/// starting from an empty grid. Deterministic in (params, seed).
inline DensityGrid generate_density(const DensityParams& params, std::uint64_t seed) {
    params.validate();
    rng_engine gen = make_engine(seed);
    const long steps = params.steps();
    const long units = std::llround(params.growth_per_step);

    DensityGrid grid(params.width);
    for (long s = 0; s < steps; ++s) {
        grid = preferential_grow(grid, units, params.hierarchy_exponent, gen);
        for (int d = 0; d < params.diffusion_steps; ++d)
            grid = diffuse(grid, params.diffusion_fraction);
    }
    return grid;
}

} // namespace corrsynth
