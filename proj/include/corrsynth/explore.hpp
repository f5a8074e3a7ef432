#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "corrsynth/errors.hpp"
#include "corrsynth/grid.hpp"
#include "corrsynth/morphology.hpp"
#include "corrsynth/network.hpp"
#include "corrsynth/rng.hpp"
#include "corrsynth/stats.hpp"
#include "corrsynth/util.hpp"

namespace corrsynth {

struct ParameterBound {
    std::string name;
    double low = 0.0;
    double high = 1.0;
    bool integer = false;
};

/// LHS campaign description. Bounds default to the coupled-model ranges; all
/// of them can be overridden from config. replications must be at least 4
/// because the Fisher interval needs n >= 4.
struct ExperimentDesign {
    std::vector<ParameterBound> bounds = default_bounds();
    int n_points = 50;
    int replications = 20;
    std::uint64_t master_seed = 0;
    int grid_width = 50;

    static std::vector<ParameterBound> default_bounds() {
        return {
            {"alpha", 0.5, 2.0, false},
            {"growthPerStep", 500.0, 3000.0, true},
            {"totalPopulation", 1e4, 1e5, false},
            {"beta", 0.0, 0.2, false},
            {"diffusionSteps", 1.0, 4.0, true},
            {"nCenters", 50.0, 120.0, true},
            {"hierarchyWeight", 0.0, 1.0, false},
            {"gravityExponent", 0.1, 4.0, false},
            {"interactionRange", 1.0, 100.0, false},
            {"distanceShape", 0.1, 10.0, false},
            {"newLinks", 4.0, 20.0, true},
        };
    }

    void validate() const {
        if (bounds.empty()) throw parameter_error("ExperimentDesign: no parameter bounds");
        for (const auto& b : bounds) {
            if (b.name.empty()) throw parameter_error("ExperimentDesign: unnamed bound");
            if (!(b.low < b.high))
                throw parameter_error("ExperimentDesign: bound '" + b.name +
                                      "' needs low < high");
        }
        for (std::size_t i = 0; i < bounds.size(); ++i)
            for (std::size_t j = i + 1; j < bounds.size(); ++j)
                if (bounds[i].name == bounds[j].name)
                    throw parameter_error("ExperimentDesign: duplicate bound '" +
                                          bounds[i].name + "'");
        if (n_points < 1) throw parameter_error("ExperimentDesign: nPoints must be >= 1");
        if (replications < 4)
            throw parameter_error("ExperimentDesign: replications must be >= 4");
        if (grid_width < 2) throw parameter_error("ExperimentDesign: gridWidth must be >= 2");
    }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < bounds.size(); ++i)
            if (bounds[i].name == name) return i;
        throw parameter_error("ExperimentDesign: missing bound '" + name + "'");
    }
};

/// One sampled point, aligned with design.bounds.
using ParameterPoint = std::vector<double>;

/// Latin Hypercube sample: per dimension, one point in each of n_points
/// equal-width strata, uniformly placed inside its stratum, strata shuffled
/// independently per dimension. Integer dimensions are rounded after
/// sampling.
inline std::vector<ParameterPoint> lhs_sample(const ExperimentDesign& design) {
    design.validate();
    const std::size_t n = static_cast<std::size_t>(design.n_points);
    const std::size_t dims = design.bounds.size();
    rng_engine gen = make_engine(derive_seed(design.master_seed, 0x1a5u));

    std::vector<ParameterPoint> points(n, ParameterPoint(dims));
    std::vector<std::size_t> strata(n);
    for (std::size_t d = 0; d < dims; ++d) {
        for (std::size_t i = 0; i < n; ++i) strata[i] = i;
        for (std::size_t i = n; i > 1; --i)
            std::swap(strata[i - 1], strata[uniform_index(gen, i)]);
        const ParameterBound& b = design.bounds[d];
        const double step = (b.high - b.low) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = uniform01(gen);
            double v = b.low + (static_cast<double>(strata[i]) + u) * step;
            if (b.integer) v = static_cast<double>(std::llround(v));
            points[i][d] = v;
        }
    }
    return points;
}

struct ReferenceSet {
    std::vector<MorphologyIndicators> rows;
};

/// 1 - min over reference rows of the Euclidean distance between the raw
/// 4-dim indicator vectors.
inline double proximity(const MorphologyIndicators& m, const ReferenceSet& ref) {
    if (ref.rows.empty()) throw parameter_error("proximity: empty reference set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : ref.rows) {
        const double d0 = m.moran - r.moran;
        const double d1 = m.mean_distance - r.mean_distance;
        const double d2 = m.entropy - r.entropy;
        const double d3 = m.hierarchy - r.hierarchy;
        best = std::min(best, std::sqrt(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3));
    }
    return 1.0 - best;
}

inline DensityParams density_params_from(const ParameterPoint& point,
                                         const ExperimentDesign& design) {
    DensityParams p;
    p.width = design.grid_width;
    p.hierarchy_exponent = point[design.index_of("alpha")];
    p.growth_per_step = point[design.index_of("growthPerStep")];
    p.total_population = point[design.index_of("totalPopulation")];
    p.diffusion_fraction = point[design.index_of("beta")];
    p.diffusion_steps = static_cast<int>(std::lround(point[design.index_of("diffusionSteps")]));
    return p;
}

inline NetworkParams network_params_from(const ParameterPoint& point,
                                         const ExperimentDesign& design) {
    NetworkParams p;
    p.n_centers = static_cast<int>(std::lround(point[design.index_of("nCenters")]));
    p.hierarchy_weight = point[design.index_of("hierarchyWeight")];
    p.gravity_exponent = point[design.index_of("gravityExponent")];
    p.interaction_range = point[design.index_of("interactionRange")];
    p.distance_shape = point[design.index_of("distanceShape")];
    p.new_links = static_cast<int>(std::lround(point[design.index_of("newLinks")]));
    return p;
}

/// Result of one parameter point: surviving indicator samples (morphology in
/// rows order, network in columns order), the cross-correlation matrix, and
/// the dropped-replication count. `failed` marks points with fewer than 4
/// surviving replications; their matrix is not meaningful.
struct PointResult {
    std::array<Sample, 4> morphology_samples;
    std::array<Sample, 4> network_samples;
    CrossCorrelationMatrix matrix;
    int dropped = 0;
    bool failed = false;
};

/// Run the replications of one LHS point. Per-replication seeds derive from
/// (masterSeed, pointIndex, replicationIndex), and the aggregation happens
/// in replication order afterwards, so any worker count gives identical
/// results. A replication whose generation or indicators degenerate
/// (undefined indicator, infeasible placement, collinear geometry) is
/// dropped and counted.
inline PointResult run_point(const ParameterPoint& point, const ExperimentDesign& design,
                             std::size_t point_index, unsigned workers = 1) {
    design.validate();
    if (point.size() != design.bounds.size())
        throw parameter_error("runPoint: point does not match design bounds");
    const DensityParams density_params = density_params_from(point, design);
    const NetworkParams network_params = network_params_from(point, design);
    density_params.validate();
    network_params.validate();
    const double center_alpha = point[design.index_of("alpha")];

    const std::size_t n = static_cast<std::size_t>(design.replications);
    struct Slot {
        MorphologyIndicators m;
        NetworkIndicators g;
        bool ok = false;
    };
    std::vector<Slot> slots(n);

    parallel_for(n, workers, [&](std::size_t rep) {
        const std::uint64_t rep_seed = derive_seed(design.master_seed, point_index, rep);
        try {
            const DensityGrid grid = generate_density(density_params, derive_seed(rep_seed, 0u));
            const MorphologyIndicators m = morphology(grid);
            const SpatialNetwork net =
                generate_network(grid, network_params, derive_seed(rep_seed, 1u), center_alpha);
            const NetworkIndicators g =
                network_indicators(net, static_cast<double>(design.grid_width));
            slots[rep] = {m, g, true};
        } catch (const undefined_indicator_error&) {
        } catch (const infeasible_error&) {
        } catch (const geometry_error&) {
        }
    });

    PointResult out;
    for (const Slot& s : slots) {
        if (!s.ok) {
            ++out.dropped;
            continue;
        }
        out.morphology_samples[0].push_back(s.m.moran);
        out.morphology_samples[1].push_back(s.m.mean_distance);
        out.morphology_samples[2].push_back(s.m.entropy);
        out.morphology_samples[3].push_back(s.m.hierarchy);
        out.network_samples[0].push_back(s.g.centrality);
        out.network_samples[1].push_back(s.g.path_length);
        out.network_samples[2].push_back(s.g.speed);
        out.network_samples[3].push_back(s.g.diameter);
    }
    if (out.morphology_samples[0].size() < 4) {
        out.failed = true;
        return out;
    }
    out.matrix = cross_correlation(out.morphology_samples, out.network_samples);
    return out;
}

} // namespace corrsynth
