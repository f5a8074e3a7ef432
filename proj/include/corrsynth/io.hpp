#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrsynth/errors.hpp"
#include "corrsynth/explore.hpp"
#include "corrsynth/finance.hpp"
#include "corrsynth/grid.hpp"
#include "corrsynth/morphology.hpp"
#include "corrsynth/network.hpp"
#include "corrsynth/stats.hpp"
#include "corrsynth/util.hpp"

namespace corrsynth::io {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    return out;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    return in;
}

/// Read all non-empty lines, stripping a trailing carriage return.
inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace detail

inline void write_grid_csv(const std::string& path, const DensityGrid& grid) {
    std::ofstream out = detail::open_out(path);
    out << "x,y,population\n";
    for (int y = 0; y < grid.width; ++y)
        for (int x = 0; x < grid.width; ++x)
            out << x << ',' << y << ',' << format_double(grid.at(x, y)) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline DensityGrid read_grid_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "x,y,population")
        throw io_error(path + ": expected header 'x,y,population'");
    const std::size_t cells = lines.size() - 1;
    const int width = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
    if (width < 1 || static_cast<std::size_t>(width) * static_cast<std::size_t>(width) != cells)
        throw io_error(path + ": cell count is not a perfect square");

    DensityGrid grid(width);
    std::vector<char> seen(cells, 0);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = path + " line " + std::to_string(i + 1);
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 3) throw io_error(where + ": expected 3 fields");
        const long long x = parse_integer(fields[0], where);
        const long long y = parse_integer(fields[1], where);
        const double p = parse_double(fields[2], where);
        if (x < 0 || x >= width || y < 0 || y >= width)
            throw io_error(where + ": cell coordinates outside the square grid");
        if (p < 0.0) throw io_error(where + ": negative population");
        const std::size_t idx = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                                static_cast<std::size_t>(x);
        if (seen[idx]) throw io_error(where + ": duplicate cell");
        seen[idx] = 1;
        grid.cells[idx] = p;
    }
    return grid;
}

inline void write_morphology_csv(const std::string& path, const MorphologyIndicators& m) {
    std::ofstream out = detail::open_out(path);
    out << "moran,meanDistance,entropy,hierarchy\n";
    out << format_double(m.moran) << ',' << format_double(m.mean_distance) << ','
        << format_double(m.entropy) << ',' << format_double(m.hierarchy) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline void write_network_indicators_csv(const std::string& path, const NetworkIndicators& g) {
    std::ofstream out = detail::open_out(path);
    out << "centrality,pathLength,speed,diameter\n";
    out << format_double(g.centrality) << ',' << format_double(g.path_length) << ','
        << format_double(g.speed) << ',' << format_double(g.diameter) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline void write_network_json(const std::string& path, const SpatialNetwork& net) {
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& n : net.nodes)
        doc["nodes"].push_back(
            {{"id", n.id}, {"x", n.x}, {"y", n.y}, {"population", n.population}});
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : net.edges)
        doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
    std::ofstream out = detail::open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline SpatialNetwork read_network_json(const std::string& path) {
    std::ifstream in = detail::open_in(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
    SpatialNetwork net;
    try {
        for (const auto& n : doc.at("nodes"))
            net.nodes.push_back({n.at("id").get<int>(), n.at("x").get<double>(),
                                 n.at("y").get<double>(), n.at("population").get<double>()});
        for (const auto& e : doc.at("edges"))
            net.edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(),
                                 e.at("length").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
    return net;
}

inline void write_network_csv(const std::string& nodes_path, const std::string& edges_path,
                              const SpatialNetwork& net) {
    std::ofstream nodes = detail::open_out(nodes_path);
    nodes << "id,x,y,population\n";
    for (const auto& n : net.nodes)
        nodes << n.id << ',' << format_double(n.x) << ',' << format_double(n.y) << ','
              << format_double(n.population) << '\n';
    if (!nodes) throw io_error("write failed for '" + nodes_path + "'");

    std::ofstream edges = detail::open_out(edges_path);
    edges << "u,v,length\n";
    for (const auto& e : net.edges)
        edges << e.u << ',' << e.v << ',' << format_double(e.length) << '\n';
    if (!edges) throw io_error("write failed for '" + edges_path + "'");
}

/// Matrix CSV, one row per entry. Missing entries serialize with empty
/// rho/ci fields.
inline void write_matrix_csv(const std::string& path, const CrossCorrelationMatrix& m) {
    std::ofstream out = detail::open_out(path);
    out << "rowLabel,colLabel,rho,ciLow,ciHigh,n\n";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out << CrossCorrelationMatrix::row_labels[static_cast<std::size_t>(i)] << ','
                << CrossCorrelationMatrix::col_labels[static_cast<std::size_t>(j)] << ',';
            if (m.missing[i][j])
                out << ",,";
            else
                out << format_double(m.rho[i][j]) << ',' << format_double(m.ci_low[i][j]) << ','
                    << format_double(m.ci_high[i][j]);
            out << ',' << m.n << '\n';
        }
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline void write_series_csv(const std::string& path, const Series& s) {
    std::ofstream out = detail::open_out(path);
    out << "timestamp,value\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << static_cast<std::int64_t>(std::llround(s.time(i))) << ','
            << format_double(s.values[i]) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline std::vector<RawTick> read_ticks_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "timestamp,price")
        throw io_error(path + ": expected header 'timestamp,price'");
    std::vector<RawTick> ticks;
    ticks.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = path + " line " + std::to_string(i + 1);
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 2) throw io_error(where + ": expected 2 fields");
        ticks.push_back({static_cast<std::int64_t>(parse_integer(fields[0], where)),
                         parse_double(fields[1], where)});
    }
    if (ticks.empty()) throw io_error(path + ": no data rows");
    return ticks;
}

inline ReferenceSet read_reference_csv(const std::string& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "moran,meanDistance,entropy,hierarchy")
        throw io_error(path + ": expected header 'moran,meanDistance,entropy,hierarchy'");
    ReferenceSet ref;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = path + " line " + std::to_string(i + 1);
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 4) throw io_error(where + ": expected 4 fields");
        MorphologyIndicators m;
        m.moran = parse_double(fields[0], where);
        m.mean_distance = parse_double(fields[1], where);
        m.entropy = parse_double(fields[2], where);
        m.hierarchy = parse_double(fields[3], where);
        ref.rows.push_back(m);
    }
    if (ref.rows.empty()) throw io_error(path + ": no data rows");
    return ref;
}

} // namespace corrsynth::io
