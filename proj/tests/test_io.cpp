#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "corrsynth/errors.hpp"
#include "corrsynth/explore.hpp"
#include "corrsynth/finance.hpp"
#include "corrsynth/grid.hpp"
#include "corrsynth/io.hpp"
#include "corrsynth/network.hpp"
#include "corrsynth/stats.hpp"

using namespace corrsynth;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

std::string tmp_path(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "corrsynth_io";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("grid csv round trip preserves every cell", "[io]") {
    DensityGrid grid(3);
    grid.at(0, 0) = 1.25;
    grid.at(2, 0) = 0.001;
    grid.at(1, 1) = 1234.5;
    grid.at(2, 2) = 7.0;

    const std::string path = tmp_path("grid_roundtrip.csv");
    io::write_grid_csv(path, grid);
    const DensityGrid back = io::read_grid_csv(path);
    REQUIRE(back.width == 3);
    REQUIRE(back.cells == grid.cells);

    const std::string again = tmp_path("grid_roundtrip_again.csv");
    io::write_grid_csv(again, grid);
    REQUIRE(read_text(again) == read_text(path));
}

TEST_CASE("grid csv rejects malformed files", "[io]") {
    const std::string path = tmp_path("grid_bad.csv");

    write_text(path, "a,b,c\n0,0,1\n");
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(path), io_error,
                           MessageMatches(ContainsSubstring("header")));

    write_text(path, "x,y,population\n0,0,1\n1,0,1\n0,1,1\n");
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(path), io_error,
                           MessageMatches(ContainsSubstring("perfect square")));

    write_text(path, "x,y,population\n0,0,1\n0,0,2\n1,0,1\n1,1,1\n");
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(path), io_error,
                           MessageMatches(ContainsSubstring("duplicate cell")));

    write_text(path, "x,y,population\n0,0,1\n1,0,-2\n0,1,1\n1,1,1\n");
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(path), io_error,
                           MessageMatches(ContainsSubstring("negative population")));

    write_text(path, "x,y,population\n0,0,1\n5,0,1\n0,1,1\n1,1,1\n");
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(path), io_error,
                           MessageMatches(ContainsSubstring("outside")));

    write_text(path, "x,y,population\n0,0,1\n1,0\n0,1,1\n1,1,1\n");
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(path), io_error,
                           MessageMatches(ContainsSubstring("3 fields")));

    write_text(path, "x,y,population\n0,0,1\n1,0,oops\n0,1,1\n1,1,1\n");
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(path), io_error,
                           MessageMatches(ContainsSubstring("line 3")));
}

TEST_CASE("grid csv reads dos line endings and skips blank lines", "[io]") {
    const std::string path = tmp_path("grid_dos.csv");
    write_text(path, "x,y,population\r\n0,0,2.5\r\n\r\n1,0,0\r\n0,1,0\r\n1,1,1\r\n");
    const DensityGrid grid = io::read_grid_csv(path);
    REQUIRE(grid.width == 2);
    REQUIRE(grid.at(0, 0) == 2.5);
    REQUIRE(grid.at(1, 1) == 1.0);
}

TEST_CASE("morphology and network indicator rows", "[io]") {
    MorphologyIndicators m;
    m.moran = -0.25;
    m.mean_distance = 0.5;
    m.entropy = 0.75;
    m.hierarchy = 1.5;
    const std::string mpath = tmp_path("morphology.csv");
    io::write_morphology_csv(mpath, m);
    REQUIRE(read_text(mpath) == "moran,meanDistance,entropy,hierarchy\n-0.25,0.5,0.75,1.5\n");

    NetworkIndicators g;
    g.centrality = 0.125;
    g.path_length = 2.5;
    g.speed = 0.875;
    g.diameter = 3.0;
    const std::string gpath = tmp_path("network_indicators.csv");
    io::write_network_indicators_csv(gpath, g);
    REQUIRE(read_text(gpath) == "centrality,pathLength,speed,diameter\n0.125,2.5,0.875,3\n");
}

TEST_CASE("network json round trip", "[io]") {
    SpatialNetwork net;
    net.nodes.push_back({0, 0.5, 1.25, 10.0});
    net.nodes.push_back({1, 3.0, 4.0, 2.5});
    net.nodes.push_back({2, 1.0, 0.0, 0.0});
    net.edges.push_back({0, 1, 4.25});
    net.edges.push_back({1, 2, 4.4721359549995796});

    const std::string path = tmp_path("network.json");
    io::write_network_json(path, net);
    const SpatialNetwork back = io::read_network_json(path);

    REQUIRE(back.nodes.size() == 3);
    REQUIRE(back.edges.size() == 2);
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        REQUIRE(back.nodes[i].id == net.nodes[i].id);
        REQUIRE(back.nodes[i].x == net.nodes[i].x);
        REQUIRE(back.nodes[i].y == net.nodes[i].y);
        REQUIRE(back.nodes[i].population == net.nodes[i].population);
    }
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        REQUIRE(back.edges[i].u == net.edges[i].u);
        REQUIRE(back.edges[i].v == net.edges[i].v);
        REQUIRE(back.edges[i].length == net.edges[i].length);
    }
}

TEST_CASE("network json rejects malformed documents", "[io]") {
    const std::string path = tmp_path("network_bad.json");
    write_text(path, "{ not json");
    REQUIRE_THROWS_AS(io::read_network_json(path), io_error);

    write_text(path, "{\"nodes\": [{\"id\": 0}], \"edges\": []}");
    REQUIRE_THROWS_AS(io::read_network_json(path), io_error);

    write_text(path, "{\"edges\": []}");
    REQUIRE_THROWS_AS(io::read_network_json(path), io_error);
}

TEST_CASE("nodes and edges csv layout", "[io]") {
    SpatialNetwork net;
    net.nodes.push_back({0, 1.5, 2.0, 30.0});
    net.nodes.push_back({1, 0.0, 0.25, 4.0});
    net.edges.push_back({0, 1, 2.5});

    const std::string nodes_path = tmp_path("nodes.csv");
    const std::string edges_path = tmp_path("edges.csv");
    io::write_network_csv(nodes_path, edges_path, net);

    REQUIRE(read_text(nodes_path) == "id,x,y,population\n0,1.5,2,30\n1,0,0.25,4\n");
    REQUIRE(read_text(edges_path) == "u,v,length\n0,1,2.5\n");
}

TEST_CASE("matrix csv marks missing entries with empty fields", "[io]") {
    CrossCorrelationMatrix m;
    m.n = 17;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m.rho[i][j] = 0.25 * static_cast<double>(i) - 0.125 * static_cast<double>(j);
            m.ci_low[i][j] = m.rho[i][j] - 0.5;
            m.ci_high[i][j] = m.rho[i][j] + 0.5;
        }
    }
    m.missing[1][2] = true;

    const std::string path = tmp_path("matrix.csv");
    io::write_matrix_csv(path, m);

    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 17);
    REQUIRE(lines[0] == "rowLabel,colLabel,rho,ciLow,ciHigh,n");

    // Row-major: entry (1,2) is data line 1*4 + 2 = 6, so file line 7.
    const std::string missing_line = lines[7];
    REQUIRE_THAT(missing_line, ContainsSubstring(",,,"));
    REQUIRE_THAT(missing_line, ContainsSubstring(",17"));

    const std::string present_line = lines[1];
    REQUIRE_THAT(present_line, ContainsSubstring("0,-0.5,0.5,17"));
}

TEST_CASE("series csv uses absolute timestamps", "[io]") {
    Series s;
    s.t0 = 100;
    s.dt = 2.0;
    s.values = {1.5, 2.0, -0.25};
    const std::string path = tmp_path("series.csv");
    io::write_series_csv(path, s);
    REQUIRE(read_text(path) == "timestamp,value\n100,1.5\n102,2\n104,-0.25\n");
}

TEST_CASE("ticks csv round trip and errors", "[io]") {
    const std::string path = tmp_path("ticks.csv");
    write_text(path, "timestamp,price\n1000,101.5\n1060,102.25\n1121,99\n");
    const std::vector<RawTick> ticks = io::read_ticks_csv(path);
    REQUIRE(ticks.size() == 3);
    REQUIRE(ticks[0].timestamp == 1000);
    REQUIRE(ticks[0].price == 101.5);
    REQUIRE(ticks[2].timestamp == 1121);
    REQUIRE(ticks[2].price == 99.0);

    write_text(path, "time,price\n1,2\n");
    REQUIRE_THROWS_MATCHES(io::read_ticks_csv(path), io_error,
                           MessageMatches(ContainsSubstring("header")));

    write_text(path, "timestamp,price\n1000,101.5,9\n");
    REQUIRE_THROWS_MATCHES(io::read_ticks_csv(path), io_error,
                           MessageMatches(ContainsSubstring("line 2")));

    write_text(path, "timestamp,price\n1000,101.5\nabc,5\n");
    REQUIRE_THROWS_MATCHES(io::read_ticks_csv(path), io_error,
                           MessageMatches(ContainsSubstring("line 3")));

    write_text(path, "timestamp,price\n");
    REQUIRE_THROWS_MATCHES(io::read_ticks_csv(path), io_error,
                           MessageMatches(ContainsSubstring("no data rows")));
}

TEST_CASE("reference csv reads indicator rows", "[io]") {
    const std::string path = tmp_path("reference.csv");
    write_text(path,
               "moran,meanDistance,entropy,hierarchy\n0.1,0.2,0.3,0.4\n-0.5,0.6,0.7,0.8\n");
    const ReferenceSet ref = io::read_reference_csv(path);
    REQUIRE(ref.rows.size() == 2);
    REQUIRE(ref.rows[0].moran == 0.1);
    REQUIRE(ref.rows[0].hierarchy == 0.4);
    REQUIRE(ref.rows[1].moran == -0.5);
    REQUIRE(ref.rows[1].entropy == 0.7);

    write_text(path, "a,b,c,d\n1,2,3,4\n");
    REQUIRE_THROWS_MATCHES(io::read_reference_csv(path), io_error,
                           MessageMatches(ContainsSubstring("header")));

    write_text(path, "moran,meanDistance,entropy,hierarchy\n1,2,3\n");
    REQUIRE_THROWS_MATCHES(io::read_reference_csv(path), io_error,
                           MessageMatches(ContainsSubstring("4 fields")));

    write_text(path, "moran,meanDistance,entropy,hierarchy\n");
    REQUIRE_THROWS_MATCHES(io::read_reference_csv(path), io_error,
                           MessageMatches(ContainsSubstring("no data rows")));
}

TEST_CASE("open failures surface as io errors", "[io]") {
    REQUIRE_THROWS_MATCHES(io::read_grid_csv(tmp_path("does_not_exist.csv")), io_error,
                           MessageMatches(ContainsSubstring("for reading")));
    DensityGrid grid(2);
    REQUIRE_THROWS_MATCHES(io::write_grid_csv("/nonexistent_dir_zz/grid.csv", grid), io_error,
                           MessageMatches(ContainsSubstring("for writing")));
}
