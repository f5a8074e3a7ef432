#pragma once

#include <cstdint>
#include <vector>

#include "corrsynth/errors.hpp"
#include "corrsynth/grid.hpp"
#include "corrsynth/network.hpp"
#include "corrsynth/rng.hpp"

namespace corrsynth {

enum class NullPlacement { random, density_proportional };

struct NullParams {
    double occupied_fraction = 0.5; // r_o
    int n_nodes = 15;               // N_N
    int n_links = 30;               // N_L0
    NullPlacement placement = NullPlacement::random;
    int width = 50;

    void validate() const {
        if (!(occupied_fraction > 0.0 && occupied_fraction <= 1.0))
            throw parameter_error("NullParams: occupiedFraction must be in (0, 1]");
        if (n_nodes < 2) throw parameter_error("NullParams: nNodes must be >= 2");
        if (n_links < 1) throw parameter_error("NullParams: nLinks must be >= 1");
        if (width < 1) throw parameter_error("NullParams: width must be >= 1");
    }
};

struct NullConfiguration {
    DensityGrid grid;
    SpatialNetwork network;
};

/// Interaction-free baseline: (i) floor(r_o * W^2) distinct cells get
/// independent uniform densities, (ii) N_N nodes at distinct cell centers,
/// uniform or density-proportional, (iii) N_L0 uniform random edges with
/// duplicate redraw, (iv) planarize. The network may be disconnected;
/// indicator callers restrict to the largest component.
inline NullConfiguration generate_null(const NullParams& params, std::uint64_t seed) {
    params.validate();
    rng_engine gen = make_engine(seed);

    const int w = params.width;
    const std::size_t n_cells = static_cast<std::size_t>(w) * static_cast<std::size_t>(w);
    const std::size_t n_occupied =
        static_cast<std::size_t>(params.occupied_fraction * static_cast<double>(n_cells));
    if (n_occupied == 0)
        throw parameter_error("NullParams: occupiedFraction selects zero cells");

    // (i) occupied cells via partial Fisher-Yates, values in (0, 1].
    DensityGrid grid(w);
    std::vector<std::size_t> perm(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n_occupied; ++k) {
        const std::size_t pick = k + uniform_index(gen, n_cells - k);
        std::swap(perm[k], perm[pick]);
        grid.cells[perm[k]] = uniform01_open(gen);
    }

    // (ii) node cells, distinct so no two nodes coincide.
    std::vector<std::size_t> node_cells;
    if (params.placement == NullPlacement::random) {
        if (static_cast<std::size_t>(params.n_nodes) > n_cells)
            throw infeasible_error("generateNull: more nodes than cells");
        // continue the same permutation trick over all cells
        std::vector<std::size_t> cells(n_cells);
        for (std::size_t i = 0; i < n_cells; ++i) cells[i] = i;
        for (int k = 0; k < params.n_nodes; ++k) {
            const std::size_t pick =
                static_cast<std::size_t>(k) + uniform_index(gen, n_cells - static_cast<std::size_t>(k));
            std::swap(cells[static_cast<std::size_t>(k)], cells[pick]);
            node_cells.push_back(cells[static_cast<std::size_t>(k)]);
        }
    } else {
        std::vector<std::size_t> occupied;
        for (std::size_t i = 0; i < n_cells; ++i)
            if (grid.cells[i] > 0.0) occupied.push_back(i);
        if (occupied.size() < static_cast<std::size_t>(params.n_nodes))
            throw infeasible_error("generateNull: fewer occupied cells than nodes");
        std::vector<double> weight(occupied.size());
        for (std::size_t i = 0; i < occupied.size(); ++i) weight[i] = grid.cells[occupied[i]];
        std::vector<double> cumulative(occupied.size());
        for (int k = 0; k < params.n_nodes; ++k) {
            double running = 0.0;
            for (std::size_t i = 0; i < occupied.size(); ++i) {
                running += weight[i];
                cumulative[i] = running;
            }
            const std::size_t pick = sample_cumulative(cumulative, uniform01(gen));
            node_cells.push_back(occupied[pick]);
            weight[pick] = 0.0;
        }
    }

    SpatialNetwork net;
    for (int k = 0; k < params.n_nodes; ++k) {
        const std::size_t cell = node_cells[static_cast<std::size_t>(k)];
        const int x = static_cast<int>(cell) % w;
        const int y = static_cast<int>(cell) / w;
        net.nodes.push_back({k, static_cast<double>(x), static_cast<double>(y),
                             grid.cells[cell]});
    }

    // (iii) uniform random edges. Self-loops and duplicates are redrawn, and
    // so is a chord that collinearly overlaps an existing edge: lattice node
    // positions make those genuinely possible, and the planarization stage
    // rejects them by contract.
    const long long possible = static_cast<long long>(params.n_nodes) *
                               (static_cast<long long>(params.n_nodes) - 1) / 2;
    if (static_cast<long long>(params.n_links) > possible)
        throw infeasible_error("generateNull: more links than distinct node pairs");
    std::vector<std::vector<char>> linked(
        static_cast<std::size_t>(params.n_nodes),
        std::vector<char>(static_cast<std::size_t>(params.n_nodes), 0));
    auto overlaps_existing = [&](int u, int v) {
        const auto& a = net.nodes[static_cast<std::size_t>(u)];
        const auto& b = net.nodes[static_cast<std::size_t>(v)];
        for (const auto& e : net.edges) {
            const auto& c = net.nodes[static_cast<std::size_t>(e.u)];
            const auto& d = net.nodes[static_cast<std::size_t>(e.v)];
            if (detail::collinear_overlap(a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y)) return true;
        }
        return false;
    };
    for (int k = 0; k < params.n_links; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const int u = static_cast<int>(uniform_index(gen, static_cast<std::size_t>(params.n_nodes)));
            const int v = static_cast<int>(uniform_index(gen, static_cast<std::size_t>(params.n_nodes)));
            if (u == v || linked[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
                continue;
            if (overlaps_existing(u, v)) continue;
            linked[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
            linked[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
            net.edges.push_back({u, v,
                                 detail::node_distance(net.nodes[static_cast<std::size_t>(u)],
                                                       net.nodes[static_cast<std::size_t>(v)])});
            placed = true;
            break;
        }
        if (!placed)
            throw infeasible_error("generateNull: could not draw a fresh edge in 10^4 attempts");
    }

    // (iv)
    return {std::move(grid), planarize(std::move(net))};
}

} // namespace corrsynth
