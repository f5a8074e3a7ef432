#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

#include "corrsynth/errors.hpp"
#include "corrsynth/grid.hpp"
#include "corrsynth/rng.hpp"

namespace corrsynth {

struct NetworkNode {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double population = 0.0;
};

struct NetworkEdge {
    int u = 0;
    int v = 0;
    double length = 0.0;
};

/// Straight-line spatial graph. Node ids equal their index in `nodes`; edges
/// are undirected and stored once.
struct SpatialNetwork {
    std::vector<NetworkNode> nodes;
    std::vector<NetworkEdge> edges;
};

/// Parameters of the link-realization stage. candidate_factor is the K of
/// the candidate truncation K * new_links and stays at 5 unless overridden.
struct NetworkParams {
    int n_centers = 80;
    double hierarchy_weight = 0.5;   // k_h
    double gravity_exponent = 1.0;   // gamma
    double interaction_range = 10.0; // r_g
    double distance_shape = 1.0;     // d_0
    int new_links = 10;              // N_L
    int candidate_factor = 5;        // K

    void validate() const {
        if (n_centers < 1) throw parameter_error("NetworkParams: nCenters must be >= 1");
        if (!(hierarchy_weight >= 0.0 && hierarchy_weight <= 1.0))
            throw parameter_error("NetworkParams: hierarchyWeight must be in [0, 1]");
        if (!std::isfinite(gravity_exponent))
            throw parameter_error("NetworkParams: gravityExponent must be finite");
        if (!(interaction_range > 0.0))
            throw parameter_error("NetworkParams: interactionRange must be > 0");
        if (!(distance_shape > 0.0))
            throw parameter_error("NetworkParams: distanceShape must be > 0");
        if (new_links < 0) throw parameter_error("NetworkParams: newLinks must be >= 0");
        if (candidate_factor < 1)
            throw parameter_error("NetworkParams: candidateFactor must be >= 1");
    }
};

struct NetworkIndicators {
    double centrality = 0.0;  // c, mean edge betweenness
    double path_length = 0.0; // l, mean network distance / (sqrt(2) * W)
    double speed = 0.0;       // s, mean d_ij / d_N
    double diameter = 0.0;    // delta, max network distance
};

namespace detail {

inline double node_distance(const NetworkNode& a, const NetworkNode& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline void check_node_ids(const SpatialNetwork& net, const char* where) {
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
        if (net.nodes[i].id != static_cast<int>(i))
            throw parameter_error(std::string(where) + ": node ids must equal their index");
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b); // keep the smaller id as root
        parent[b] = a;
        return true;
    }
};

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

inline Adjacency build_adjacency(const SpatialNetwork& net) {
    Adjacency adj(net.nodes.size());
    for (const auto& e : net.edges) {
        adj[static_cast<std::size_t>(e.u)].push_back({e.v, e.length});
        adj[static_cast<std::size_t>(e.v)].push_back({e.u, e.length});
    }
    return adj;
}

inline bool is_connected(const SpatialNetwork& net) {
    if (net.nodes.empty()) return true;
    const Adjacency adj = build_adjacency(net);
    std::vector<char> seen(net.nodes.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (const auto& [v, len] : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == net.nodes.size();
}

/// True when segments (p, q) and (a, b) lie on one line and share more than
/// a point. Sharing exactly an endpoint does not count.
inline bool collinear_overlap(double px, double py, double qx, double qy, double ax, double ay,
                              double bx, double by) {
    constexpr double eps_geo = 1e-9;
    constexpr double eps_par = 1e-12;
    const double rx = qx - px, ry = qy - py;
    const double sx = bx - ax, sy = by - ay;
    const double rlen = std::sqrt(rx * rx + ry * ry);
    const double slen = std::sqrt(sx * sx + sy * sy);
    if (std::abs(rx * sy - ry * sx) > eps_par * rlen * slen) return false;
    if (std::abs((ax - px) * ry - (ay - py) * rx) > eps_geo * rlen) return false;
    const double inv_r2 = 1.0 / (rx * rx + ry * ry);
    const double t0 = ((ax - px) * rx + (ay - py) * ry) * inv_r2;
    const double t1 = ((bx - px) * rx + (by - py) * ry) * inv_r2;
    const double lo = std::min(t0, t1);
    const double hi = std::max(t0, t1);
    return (std::min(hi, 1.0) - std::max(lo, 0.0)) * rlen > eps_geo;
}

/// Plain length-weighted Dijkstra, distances only.
inline std::vector<double> shortest_distances(const Adjacency& adj, int source) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(adj.size(), inf);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    dist[static_cast<std::size_t>(source)] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        for (const auto& [v, len] : adj[static_cast<std::size_t>(u)]) {
            const double nd = d + len;
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                queue.push({nd, v});
            }
        }
    }
    return dist;
}

} // namespace detail

/// Step 1: sample nCenters distinct occupied cells with probability
/// proportional to (P_i / P)^alpha, then attribute every cell's population to
/// its nearest center (Euclidean on cell centers, tie to the lowest node id).
inline SpatialNetwork place_centers(const DensityGrid& grid, int n_centers, double alpha,
                                    rng_engine& gen) {
    if (n_centers < 1) throw parameter_error("placeCenters: nCenters must be >= 1");
    if (!std::isfinite(alpha)) throw parameter_error("placeCenters: alpha must be finite");

    const int w = grid.width;
    struct Cell {
        int x, y;
        double p;
    };
    std::vector<Cell> occupied;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.cells[i] > 0.0)
            occupied.push_back({static_cast<int>(i) % w, static_cast<int>(i) / w, grid.cells[i]});
    if (static_cast<int>(occupied.size()) < n_centers)
        throw infeasible_error("placeCenters: fewer occupied cells than centers");

    const double total = grid.total();
    std::vector<double> weight(occupied.size());
    for (std::size_t i = 0; i < occupied.size(); ++i) {
        weight[i] = alpha == 0.0 ? 1.0 : std::pow(occupied[i].p / total, alpha);
        if (!std::isfinite(weight[i]))
            throw parameter_error("placeCenters: non-finite sampling weight");
    }

    SpatialNetwork net;
    net.nodes.reserve(static_cast<std::size_t>(n_centers));
    std::vector<double> cumulative(occupied.size());
    for (int k = 0; k < n_centers; ++k) {
        double running = 0.0;
        for (std::size_t i = 0; i < occupied.size(); ++i) {
            running += weight[i];
            cumulative[i] = running;
        }
        const std::size_t pick = sample_cumulative(cumulative, uniform01(gen));
        net.nodes.push_back({k, static_cast<double>(occupied[pick].x),
                             static_cast<double>(occupied[pick].y), 0.0});
        weight[pick] = 0.0; // without replacement
    }

    // Voronoi attribution of the whole population to the centers.
    for (const Cell& c : occupied) {
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < net.nodes.size(); ++k) {
            const double dx = net.nodes[k].x - static_cast<double>(c.x);
            const double dy = net.nodes[k].y - static_cast<double>(c.y);
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
                best_d2 = d2;
                best = static_cast<int>(k);
            }
        }
        net.nodes[static_cast<std::size_t>(best)].population += c.p;
    }
    return net;
}

/// Step 2: percolation. Repeatedly link the two connected components whose
/// closest node pair is nearest (squared-distance comparison; exact ties go
/// to the lexicographically smallest id pair) until the network is connected.
inline SpatialNetwork connect_components(SpatialNetwork net) {
    detail::check_node_ids(net, "connectComponents");
    const std::size_t n = net.nodes.size();
    if (n == 0) throw parameter_error("connectComponents: empty network");

    detail::DisjointSet dsu(n);
    std::size_t components = n;
    for (const auto& e : net.edges)
        if (dsu.unite(e.u, e.v)) --components;

    while (components > 1) {
        double best_d2 = std::numeric_limits<double>::infinity();
        int best_u = -1, best_v = -1;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (dsu.find(static_cast<int>(i)) == dsu.find(static_cast<int>(j))) continue;
                const double dx = net.nodes[i].x - net.nodes[j].x;
                const double dy = net.nodes[i].y - net.nodes[j].y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best_u = static_cast<int>(i);
                    best_v = static_cast<int>(j);
                }
            }
        }
        net.edges.push_back({best_u, best_v,
                             detail::node_distance(net.nodes[static_cast<std::size_t>(best_u)],
                                                   net.nodes[static_cast<std::size_t>(best_v)])});
        dsu.unite(best_u, best_v);
        --components;
    }
    return net;
}

/// Gravity potential between two centers:
///   V = [(1 - k_h) + k_h (p_i p_j / P^2)^gamma] * exp(-d / (r_g (1 + d/d_0)))
inline double gravity_potential(double pi, double pj, double total_p, double d,
                                const NetworkParams& params) {
    if (!(total_p > 0.0)) throw parameter_error("gravityPotential: totalP must be > 0");
    if (!(d >= 0.0)) throw parameter_error("gravityPotential: d must be >= 0");
    const double share = (pi * pj) / (total_p * total_p);
    const double mass = (1.0 - params.hierarchy_weight) +
                        params.hierarchy_weight * std::pow(share, params.gravity_exponent);
    return mass * std::exp(-d / (params.interaction_range * (1.0 + d / params.distance_shape)));
}

/// Steps 3-5: rank unlinked node pairs by direct-distance potential, keep the
/// K*N_L strongest, and realize the N_L with the smallest ratio
/// V(d_N) / V(d_ij), d_N being the shortest network distance on the input
/// network. All links are added in one batch.
inline SpatialNetwork realize_links(SpatialNetwork net, const NetworkParams& params) {
    params.validate();
    detail::check_node_ids(net, "realizeLinks");
    if (params.new_links == 0) return net;
    if (!detail::is_connected(net))
        throw parameter_error("realizeLinks: input network must be connected");

    const std::size_t n = net.nodes.size();
    double total_p = 0.0;
    for (const auto& node : net.nodes) total_p += node.population;
    if (!(total_p > 0.0))
        throw parameter_error("realizeLinks: node populations must be set");

    std::vector<std::vector<char>> linked(n, std::vector<char>(n, 0));
    for (const auto& e : net.edges) {
        linked[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
        linked[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = 1;
    }

    struct Candidate {
        double potential; // V at direct distance
        double distance;
        int u, v;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (linked[i][j]) continue;
            const double d = detail::node_distance(net.nodes[i], net.nodes[j]);
            const double v = gravity_potential(net.nodes[i].population, net.nodes[j].population,
                                               total_p, d, params);
            candidates.push_back({v, d, static_cast<int>(i), static_cast<int>(j)});
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.potential != b.potential) return a.potential > b.potential;
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    const std::size_t keep = static_cast<std::size_t>(params.candidate_factor) *
                             static_cast<std::size_t>(params.new_links);
    if (candidates.size() > keep) candidates.resize(keep);

    // Network distances on the pre-addition network, one Dijkstra per source
    // that actually appears in a candidate.
    const detail::Adjacency adj = detail::build_adjacency(net);
    std::vector<std::vector<double>> dist_from(n);
    struct Rated {
        double ratio;
        int u, v;
        double distance;
    };
    std::vector<Rated> rated;
    rated.reserve(candidates.size());
    for (const Candidate& c : candidates) {
        auto& dists = dist_from[static_cast<std::size_t>(c.u)];
        if (dists.empty()) dists = detail::shortest_distances(adj, c.u);
        const double dn = dists[static_cast<std::size_t>(c.v)];
        const double vn = gravity_potential(net.nodes[static_cast<std::size_t>(c.u)].population,
                                            net.nodes[static_cast<std::size_t>(c.v)].population,
                                            total_p, dn, params);
        rated.push_back({vn / c.potential, c.u, c.v, c.distance});
    }

    std::sort(rated.begin(), rated.end(), [](const Rated& a, const Rated& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    const std::size_t take = std::min<std::size_t>(rated.size(),
                                                   static_cast<std::size_t>(params.new_links));
    for (std::size_t k = 0; k < take; ++k)
        net.edges.push_back({rated[k].u, rated[k].v, rated[k].distance});
    return net;
}

/// Step 6: planarization. Every interior crossing becomes a zero-population
/// node splitting both edges; crossings that land on an existing node split
/// only the edge(s) they are interior to. Exactly collinear overlapping
/// segments are rejected.
inline SpatialNetwork planarize(SpatialNetwork net) {
    detail::check_node_ids(net, "planarize");
    constexpr double eps_geo = 1e-9;   // point coincidence, coordinate units
    constexpr double eps_par = 1e-12;  // relative parallelism threshold

    struct Cut {
        double t;
        int node;
    };
    const std::size_t m = net.edges.size();
    std::vector<std::vector<Cut>> cuts(m);

    auto find_or_create_node = [&](double px, double py) -> int {
        for (const auto& node : net.nodes) {
            const double dx = node.x - px;
            const double dy = node.y - py;
            if (dx * dx + dy * dy <= eps_geo * eps_geo) return node.id;
        }
        const int id = static_cast<int>(net.nodes.size());
        net.nodes.push_back({id, px, py, 0.0});
        return id;
    };

    for (std::size_t ei = 0; ei + 1 < m; ++ei) {
        const auto& e = net.edges[ei];
        const double px = net.nodes[static_cast<std::size_t>(e.u)].x;
        const double py = net.nodes[static_cast<std::size_t>(e.u)].y;
        const double rx = net.nodes[static_cast<std::size_t>(e.v)].x - px;
        const double ry = net.nodes[static_cast<std::size_t>(e.v)].y - py;
        const double rlen = std::sqrt(rx * rx + ry * ry);
        for (std::size_t ej = ei + 1; ej < m; ++ej) {
            const auto& f = net.edges[ej];
            const double ax = net.nodes[static_cast<std::size_t>(f.u)].x;
            const double ay = net.nodes[static_cast<std::size_t>(f.u)].y;
            const double bx = net.nodes[static_cast<std::size_t>(f.v)].x - ax;
            const double by = net.nodes[static_cast<std::size_t>(f.v)].y - ay;
            const double blen = std::sqrt(bx * bx + by * by);

            const double rxb = rx * by - ry * bx;
            const double qpx = ax - px;
            const double qpy = ay - py;
            if (std::abs(rxb) <= eps_par * rlen * blen) {
                // Parallel. Collinear and overlapping beyond a point is a
                // degenerate input this stage refuses to guess about.
                if (detail::collinear_overlap(px, py, px + rx, py + ry, ax, ay, ax + bx,
                                              ay + by))
                    throw geometry_error("planarize: collinear overlapping segments");
                continue;
            }

            const double t = (qpx * by - qpy * bx) / rxb;
            const double s = (qpx * ry - qpy * rx) / rxb;
            const double slack_t = eps_geo / std::max(rlen, eps_geo);
            const double slack_s = eps_geo / std::max(blen, eps_geo);
            if (t < -slack_t || t > 1.0 + slack_t || s < -slack_s || s > 1.0 + slack_s)
                continue;

            const double ix = px + t * rx;
            const double iy = py + t * ry;
            auto away = [&](int node_id) {
                const auto& node = net.nodes[static_cast<std::size_t>(node_id)];
                const double dx = node.x - ix;
                const double dy = node.y - iy;
                return dx * dx + dy * dy > eps_geo * eps_geo;
            };
            const bool interior_e = away(e.u) && away(e.v);
            const bool interior_f = away(f.u) && away(f.v);
            if (!interior_e && !interior_f) continue; // endpoint touch, not a crossing

            const int node = find_or_create_node(ix, iy);
            if (interior_e) cuts[ei].push_back({t, node});
            if (interior_f) cuts[ej].push_back({s, node});
        }
    }

    std::vector<NetworkEdge> rebuilt;
    rebuilt.reserve(net.edges.size());
    std::vector<std::pair<int, int>> seen_pairs;
    auto emit = [&](int u, int v) {
        if (u == v) return;
        const int a = std::min(u, v);
        const int b = std::max(u, v);
        for (const auto& p : seen_pairs)
            if (p.first == a && p.second == b) return;
        seen_pairs.push_back({a, b});
        rebuilt.push_back({u, v,
                           detail::node_distance(net.nodes[static_cast<std::size_t>(u)],
                                                 net.nodes[static_cast<std::size_t>(v)])});
    };
    for (std::size_t ei = 0; ei < m; ++ei) {
        auto& list = cuts[ei];
        if (list.empty()) {
            emit(net.edges[ei].u, net.edges[ei].v);
            continue;
        }
        std::sort(list.begin(), list.end(), [](const Cut& a, const Cut& b) { return a.t < b.t; });
        int prev = net.edges[ei].u;
        for (const Cut& c : list) {
            if (c.node == prev) continue;
            emit(prev, c.node);
            prev = c.node;
        }
        emit(prev, net.edges[ei].v);
    }
    net.edges = std::move(rebuilt);
    return net;
}

/// Full pipeline: centers -> percolation tree -> gravity links -> planar
/// graph. center_alpha is the hierarchy exponent of the center sampling; the
/// exploration harness passes the density exponent here.
inline SpatialNetwork generate_network(const DensityGrid& grid, const NetworkParams& params,
                                       std::uint64_t seed, double center_alpha = 1.0) {
    params.validate();
    rng_engine gen = make_engine(seed);
    SpatialNetwork net = place_centers(grid, params.n_centers, center_alpha, gen);
    net = connect_components(std::move(net));
    net = realize_links(std::move(net), params);
    return planarize(std::move(net));
}

/// Edge betweenness: for every edge, the fraction of unordered node pairs
/// whose shortest path runs through it, with equal splitting over co-minimal
/// paths (Brandes accumulation, length ties resolved to 1e-9 relative).
inline std::vector<double> edge_betweenness(const SpatialNetwork& net) {
    detail::check_node_ids(net, "edgeBetweenness");
    const std::size_t n = net.nodes.size();
    if (n < 2) throw parameter_error("edgeBetweenness: need at least 2 nodes");
    if (!detail::is_connected(net))
        throw parameter_error("edgeBetweenness: network is disconnected");
    if (net.edges.empty()) return {};

    struct Arc {
        int to;
        int edge;
        double length;
    };
    std::vector<std::vector<Arc>> adj(n);
    for (std::size_t k = 0; k < net.edges.size(); ++k) {
        const auto& e = net.edges[k];
        adj[static_cast<std::size_t>(e.u)].push_back({e.v, static_cast<int>(k), e.length});
        adj[static_cast<std::size_t>(e.v)].push_back({e.u, static_cast<int>(k), e.length});
    }

    auto near = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> score(net.edges.size(), 0.0);
    std::vector<double> dist(n), sigma(n), delta(n);
    std::vector<std::vector<std::pair<int, int>>> preds(n); // (node, edge)
    std::vector<int> order;
    order.reserve(n);

    for (std::size_t src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        order.clear();

        using Entry = std::pair<double, int>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
        dist[src] = 0.0;
        sigma[src] = 1.0;
        queue.push({0.0, static_cast<int>(src)});
        std::vector<char> settled(n, 0);
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (settled[static_cast<std::size_t>(u)]) continue;
            settled[static_cast<std::size_t>(u)] = 1;
            order.push_back(u);
            for (const Arc& arc : adj[static_cast<std::size_t>(u)]) {
                const std::size_t v = static_cast<std::size_t>(arc.to);
                const double nd = d + arc.length;
                if (near(nd, dist[v])) {
                    sigma[v] += sigma[static_cast<std::size_t>(u)];
                    preds[v].push_back({u, arc.edge});
                } else if (nd < dist[v]) {
                    dist[v] = nd;
                    sigma[v] = sigma[static_cast<std::size_t>(u)];
                    preds[v].assign(1, {u, arc.edge});
                    queue.push({nd, arc.to});
                }
            }
        }

        for (std::size_t k = order.size(); k-- > 0;) {
            const std::size_t w = static_cast<std::size_t>(order[k]);
            for (const auto& [v, e] : preds[w]) {
                const double coeff = sigma[static_cast<std::size_t>(v)] / sigma[w] *
                                     (1.0 + delta[w]);
                delta[static_cast<std::size_t>(v)] += coeff;
                score[static_cast<std::size_t>(e)] += coeff;
            }
        }
    }

    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    for (double& s : score) s = s / 2.0 / pairs; // each pair visited from both ends
    return score;
}

/// The four network indicators over all node pairs of the (planar) network.
inline NetworkIndicators network_indicators(const SpatialNetwork& net, double world_width) {
    detail::check_node_ids(net, "networkIndicators");
    if (!(world_width > 0.0))
        throw parameter_error("networkIndicators: worldWidth must be > 0");
    const std::size_t n = net.nodes.size();
    if (n < 2) throw parameter_error("networkIndicators: need at least 2 nodes");
    if (!detail::is_connected(net))
        throw parameter_error("networkIndicators: network is disconnected");

    const std::vector<double> betweenness = edge_betweenness(net);
    double c = 0.0;
    for (double b : betweenness) c += b;
    c /= static_cast<double>(betweenness.size());

    const detail::Adjacency adj = detail::build_adjacency(net);
    double sum_dn = 0.0;
    double sum_ratio = 0.0;
    double diameter = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::vector<double> dn = detail::shortest_distances(adj, static_cast<int>(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            sum_dn += dn[j];
            sum_ratio += detail::node_distance(net.nodes[i], net.nodes[j]) / dn[j];
            diameter = std::max(diameter, dn[j]);
        }
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);

    NetworkIndicators out;
    out.centrality = c;
    out.path_length = sum_dn / pairs / (std::sqrt(2.0) * world_width);
    out.speed = sum_ratio / pairs;
    out.diameter = diameter;
    return out;
}

/// Restrict to the largest connected component (ties to the component holding
/// the smallest node id), renumbering nodes to keep ids equal to indices.
/// The null model needs this: its random graphs may be disconnected.
inline SpatialNetwork largest_component(const SpatialNetwork& net) {
    detail::check_node_ids(net, "largestComponent");
    const std::size_t n = net.nodes.size();
    if (n == 0) return net;

    detail::DisjointSet dsu(n);
    for (const auto& e : net.edges) dsu.unite(e.u, e.v);

    std::vector<int> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++count[static_cast<std::size_t>(dsu.find(static_cast<int>(i)))];
    int best_root = 0;
    for (std::size_t r = 1; r < n; ++r)
        if (count[r] > count[static_cast<std::size_t>(best_root)]) best_root = static_cast<int>(r);

    std::vector<int> remap(n, -1);
    SpatialNetwork out;
    for (std::size_t i = 0; i < n; ++i) {
        if (dsu.find(static_cast<int>(i)) != best_root) continue;
        remap[i] = static_cast<int>(out.nodes.size());
        NetworkNode node = net.nodes[i];
        node.id = remap[i];
        out.nodes.push_back(node);
    }
    for (const auto& e : net.edges) {
        if (remap[static_cast<std::size_t>(e.u)] < 0) continue;
        out.edges.push_back({remap[static_cast<std::size_t>(e.u)],
                             remap[static_cast<std::size_t>(e.v)], e.length});
    }
    return out;
}

} // namespace corrsynth
