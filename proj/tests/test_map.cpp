#include <catch2/catch_amalgamated.hpp>

#include "usf/map_isomorphism.hpp"
#include "usf/planar_map.hpp"
#include "usf/reductions.hpp"

using namespace usf;

namespace {

PlaneNetwork triangle(std::vector<double> cond = {1, 1, 1}) {
    // vertices 0,1,2 ccw; edges 0=(0,1), 1=(1,2), 2=(2,0)
    RotationSystem rot{{{1, 0}, {2, 2}}, {{2, 1}, {0, 0}}, {{0, 2}, {1, 1}}};
    return PlaneNetwork::from_rotation_system(rot, std::move(cond), {1, 0, 0});
}

PlaneNetwork four_cycle() {
    // square 0-1-2-3 ccw; edge i = (i, i+1 mod 4)
    RotationSystem rot{{{1, 0}, {3, 3}}, {{2, 1}, {0, 0}}, {{3, 2}, {1, 1}}, {{0, 3}, {2, 2}}};
    return PlaneNetwork::from_rotation_system(rot, {1, 1, 1, 1}, {1, 0, 0});
}

PlaneNetwork tetrahedron() {
    // outer triangle 0,1,2 ccw with centre vertex 3
    // edges: 0=(0,1) 1=(1,2) 2=(2,0) 3=(0,3) 4=(1,3) 5=(2,3)
    RotationSystem rot{
        {{1, 0}, {3, 3}, {2, 2}},
        {{2, 1}, {3, 4}, {0, 0}},
        {{0, 2}, {3, 5}, {1, 1}},
        {{0, 3}, {1, 4}, {2, 5}},
    };
    return PlaneNetwork::from_rotation_system(rot, std::vector<double>(6, 1.0), {1, 0, 0});
}

PlaneNetwork cube() {
    // bottom face 0..3 (outer), top face 4..7 nested inside, drawn ccw
    // edges: bottom i=(i,i+1): 0..3; top 4+i=(4+i,4+(i+1)%4): 4..7; pillars 8+i=(i,4+i)
    RotationSystem rot{
        {{1, 0}, {4, 8}, {3, 3}},  {{2, 1}, {5, 9}, {0, 0}},
        {{3, 2}, {6, 10}, {1, 1}}, {{0, 3}, {7, 11}, {2, 2}},
        {{0, 8}, {5, 4}, {7, 7}},  {{1, 9}, {6, 5}, {4, 4}},
        {{2, 10}, {7, 6}, {5, 5}}, {{3, 11}, {4, 7}, {6, 6}},
    };
    return PlaneNetwork::from_rotation_system(rot, std::vector<double>(12, 1.0), {1, 0, 0});
}

PlaneNetwork path3() {
    // path a-b-c: vertices 0,1,2; edges 0=(0,1), 1=(1,2)
    RotationSystem rot{{{1, 0}}, {{0, 0}, {2, 1}}, {{1, 1}}};
    return PlaneNetwork::from_rotation_system(rot, {1, 1}, {0, 1, 0});
}

PlaneNetwork grid3() {
    const std::int32_t n = 3;
    RotationSystem rot(9);
    std::vector<std::pair<VertexId, VertexId>> edges;
    auto vid = [&](int x, int y) { return y * n + x; };
    auto add = [&](int u, int w) {
        edges.emplace_back(u, w);
        return static_cast<EdgeId>(edges.size() - 1);
    };
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> best(9);
    // horizontal then vertical, ids deterministic
    EdgeId h[3][2], v[2][3];
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 2; ++x) h[y][x] = add(vid(x, y), vid(x + 1, y));
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 3; ++x) v[y][x] = add(vid(x, y), vid(x, y + 1));
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
            auto& l = rot[vid(x, y)];
            if (x + 1 < 3) l.emplace_back(vid(x + 1, y), h[y][x]);
            if (y + 1 < 3) l.emplace_back(vid(x, y + 1), v[y][x]);
            if (x > 0) l.emplace_back(vid(x - 1, y), h[y][x - 1]);
            if (y > 0) l.emplace_back(vid(x, y - 1), v[y - 1][x]);
        }
    return PlaneNetwork::from_rotation_system(rot, std::vector<double>(12, 1.0),
                                              {vid(1, 0), vid(0, 0), h[0][0]});
}

} // namespace

TEST_CASE("construction satisfies Euler's formula") {
    auto c4 = four_cycle();
    CHECK(c4.vertex_count() == 4);
    CHECK(c4.edge_count() == 4);
    CHECK(c4.face_count() == 2);

    auto g = grid3();
    CHECK(g.vertex_count() == 9);
    CHECK(g.edge_count() == 12);
    CHECK(g.face_count() == 5);

    auto t = tetrahedron();
    CHECK(t.vertex_count() == 4);
    CHECK(t.edge_count() == 6);
    CHECK(t.face_count() == 4);
    for (FaceId f = 0; f < t.face_count(); ++f) CHECK(t.face_degree(f) == 3);
}

TEST_CASE("reversal is an involution and faces partition darts") {
    auto g = grid3();
    std::vector<int> seen(g.dart_count(), 0);
    for (DartId d = 0; d < g.dart_count(); ++d) {
        CHECK(PlaneNetwork::dart_reversal(PlaneNetwork::dart_reversal(d)) == d);
        CHECK(g.dart_origin(d) == g.dart_head(PlaneNetwork::dart_reversal(d)));
        ++seen[d];
    }
    int total = 0;
    for (FaceId f = 0; f < g.face_count(); ++f) {
        for (DartId d : g.face_darts(f)) {
            CHECK(g.face_of(d) == f);
            --seen[d];
        }
        total += g.face_degree(f);
    }
    CHECK(total == g.dart_count());
    for (int s : seen) CHECK(s == 0);
}

TEST_CASE("construction rejects bad input") {
    // inconsistent: edge endpoint mismatch
    RotationSystem bad{{{1, 0}}, {{0, 1}}};
    CHECK_THROWS_AS(PlaneNetwork::from_rotation_system(bad, {1, 1}, {0, 1, 0}), Error);
    // disconnected: two isolated edges
    RotationSystem disc{{{1, 0}}, {{0, 0}}, {{3, 1}}, {{2, 1}}};
    CHECK_THROWS_AS(PlaneNetwork::from_rotation_system(disc, {1, 1}, {0, 1, 0}), Error);
    // nonpositive conductance
    RotationSystem ok{{{1, 0}}, {{0, 0}}};
    CHECK_THROWS_AS(PlaneNetwork::from_rotation_system(ok, {0.0}, {0, 1, 0}), Error);
}

TEST_CASE("dual of the tetrahedron is a tetrahedron") {
    auto t = tetrahedron();
    auto d = dual(t).net;
    CHECK(d.vertex_count() == 4);
    CHECK(d.edge_count() == 6);
    CHECK(maps_isomorphic(t, d));
}

TEST_CASE("dual of the cube is the octahedron") {
    auto c = cube();
    CHECK(c.face_count() == 6);
    auto d = dual(c).net;
    CHECK(d.vertex_count() == 6);
    CHECK(d.edge_count() == 12);
    CHECK(d.face_count() == 8);
    for (VertexId v = 0; v < d.vertex_count(); ++v) CHECK(d.degree(v) == 4);
    for (FaceId f = 0; f < d.face_count(); ++f) CHECK(d.face_degree(f) == 3);
}

TEST_CASE("dual of the 4-cycle is two vertices joined by 4 parallel edges") {
    auto d = dual(four_cycle()).net;
    CHECK(d.vertex_count() == 2);
    CHECK(d.edge_count() == 4);
    CHECK(d.degree(0) == 4);
    CHECK(d.degree(1) == 4);
}

TEST_CASE("dual is an involution up to isomorphism and inverts conductances") {
    for (auto net : {triangle({0.5, 2.0, 4.0}), four_cycle(), tetrahedron(), cube(), grid3()}) {
        auto d = dual(net).net;
        auto dd = dual(d).net;
        CHECK(maps_isomorphic(net, dd));
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            // dual edge ids equal primal ids
            CHECK(net.conductance(e) * d.conductance(e) == Catch::Approx(1.0).epsilon(1e-15));
            CHECK(dd.conductance(e) == Catch::Approx(net.conductance(e)).epsilon(1e-15));
        }
    }
}

TEST_CASE("polyhedrality") {
    CHECK(is_polyhedral(tetrahedron()));
    CHECK(is_polyhedral(cube()));
    CHECK_FALSE(is_polyhedral(four_cycle()));
    CHECK_FALSE(is_polyhedral(triangle()));
    CHECK_FALSE(is_polyhedral(grid3()));  // corners have degree 2

    // two triangles sharing one vertex: cut vertex
    RotationSystem rot{
        {{1, 0}, {2, 2}, {3, 3}, {4, 5}},
        {{2, 1}, {0, 0}},
        {{0, 2}, {1, 1}},
        {{4, 4}, {0, 3}},
        {{0, 5}, {3, 4}},
    };
    auto bowtie = PlaneNetwork::from_rotation_system(rot, std::vector<double>(6, 1.0), {1, 0, 0});
    CHECK_FALSE(is_polyhedral(bowtie));
}

TEST_CASE("geometry bound") {
    auto t = tetrahedron();
    auto b = geometry_bound(t);
    CHECK(b.max_degree == 3);
    CHECK(b.max_codegree == 3);
    CHECK(b.combined_M == 3.0);
}

TEST_CASE("wired truncation of a path to its middle vertex") {
    auto p = path3();
    std::vector<char> keep{0, 1, 0};
    auto tr = wired_truncation(p, keep);
    CHECK(tr.net.vertex_count() == 2);
    CHECK(tr.net.edge_count() == 2);  // two parallel edges to the boundary
    REQUIRE(tr.net.boundary_vertex().has_value());
    CHECK(*tr.net.boundary_vertex() == 1);
    CHECK(tr.net.degree(0) == 2);
    CHECK(tr.vertex_to_parent[0] == 1);
}

TEST_CASE("wired truncation of the grid interior") {
    auto g = grid3();
    std::vector<char> keep(9, 0);
    keep[4] = 1;  // centre
    auto tr = wired_truncation(g, keep);
    CHECK(tr.net.vertex_count() == 2);
    CHECK(tr.net.edge_count() == 4);
    CHECK(tr.net.degree(0) == 4);
    // edge identity: surviving edges are exactly those at the centre
    for (EdgeId e = 0; e < tr.net.edge_count(); ++e) {
        auto [u, w] = g.edge_endpoints(tr.edge_to_parent[e]);
        CHECK((u == 4 || w == 4));
    }
}

TEST_CASE("wired truncation keeping everything is the identity") {
    auto g = grid3();
    std::vector<char> keep(9, 1);
    auto tr = wired_truncation(g, keep);
    CHECK_FALSE(tr.net.boundary_vertex().has_value());
    CHECK(tr.net.vertex_count() == 9);
    CHECK(tr.net.edge_count() == 12);
    CHECK(maps_isomorphic(tr.net, g));
}

TEST_CASE("wired truncation rejects bad retained sets") {
    auto g = grid3();
    std::vector<char> none(9, 0);
    CHECK_THROWS_AS(wired_truncation(g, none), Error);
    std::vector<char> split(9, 0);
    split[0] = split[8] = 1;  // opposite corners: disconnected
    CHECK_THROWS_AS(wired_truncation(g, split), Error);
}

TEST_CASE("subdivision turns the triangle into a hexagon") {
    auto r = subdivide_and_trim(triangle({1, 2, 3}));
    CHECK(r.net.vertex_count() == 6);
    CHECK(r.net.edge_count() == 6);
    CHECK(r.net.face_count() == 2);
    for (EdgeId e = 0; e < 6; ++e) {
        EdgeId parent = r.edge_parent[e];
        CHECK(r.net.conductance(e) == triangle({1, 2, 3}).conductance(parent));
    }
}

TEST_CASE("subdivision of a double edge gives a simple 4-cycle") {
    RotationSystem rot{{{1, 0}, {1, 1}}, {{0, 1}, {0, 0}}};
    auto banana = PlaneNetwork::from_rotation_system(rot, {1, 1}, {0, 1, 0});
    auto r = subdivide_and_trim(banana);
    CHECK(r.net.vertex_count() == 4);
    CHECK(r.net.edge_count() == 4);
    CHECK(is_simple(r.net));
}

TEST_CASE("pendant paths are trimmed as peninsulas") {
    // tetrahedron with a pendant path 0-4-5 attached at vertex 0
    RotationSystem rot{
        {{1, 0}, {3, 3}, {4, 6}, {2, 2}},
        {{2, 1}, {3, 4}, {0, 0}},
        {{0, 2}, {3, 5}, {1, 1}},
        {{0, 3}, {1, 4}, {2, 5}},
        {{0, 6}, {5, 7}},
        {{4, 7}},
    };
    auto net = PlaneNetwork::from_rotation_system(rot, std::vector<double>(8, 1.0), {1, 0, 0});
    auto r = subdivide_and_trim(net);
    CHECK(r.net.vertex_count() == 10);  // subdivided tetrahedron only
    CHECK(r.net.edge_count() == 12);
    for (std::size_t v = 0; v < r.original_vertex.size(); ++v)
        if (r.original_vertex[v] >= 0) CHECK(r.original_vertex[v] <= 3);
}

TEST_CASE("subdivide_and_trim rejects graphs that are all peninsula") {
    CHECK_THROWS_AS(subdivide_and_trim(path3()), Error);
}

TEST_CASE("trimmed outputs are peninsula-free") {
    // no vertex removal may disconnect a finite piece: brute-force BFS per vertex
    RotationSystem rot{
        {{1, 0}, {3, 3}, {4, 6}, {2, 2}},
        {{2, 1}, {3, 4}, {0, 0}},
        {{0, 2}, {3, 5}, {1, 1}},
        {{0, 3}, {1, 4}, {2, 5}},
        {{0, 6}, {5, 7}},
        {{4, 7}},
    };
    auto net = PlaneNetwork::from_rotation_system(rot, std::vector<double>(8, 1.0), {1, 0, 0});
    auto r = subdivide_and_trim(net);
    const auto n = r.net.vertex_count();
    detail::SimpleAdjacency adj(r.net);
    for (VertexId v = 0; v < n; ++v) {
        std::vector<char> removed(n, 0);
        removed[v] = 1;
        CHECK(adj.connected_without(removed));
    }
}

TEST_CASE("star triangulation of the tetrahedron") {
    auto r = star_triangulation(tetrahedron());
    CHECK(r.net.vertex_count() == 8);
    CHECK(r.simple);
    for (FaceId f = 0; f < r.net.face_count(); ++f) CHECK(r.net.face_degree(f) == 3);
}

TEST_CASE("star triangulation of the cube has 14 vertices") {
    auto r = star_triangulation(cube());
    CHECK(r.net.vertex_count() == 14);
    CHECK(r.simple);
    int originals = 0;
    for (char c : r.is_face_vertex) originals += (c == 0);
    CHECK(originals == 8);
}

TEST_CASE("starring both faces of a square gives the octahedron") {
    auto r = star_triangulation(four_cycle());
    CHECK(r.net.vertex_count() == 6);
    CHECK(r.net.edge_count() == 12);
    // T(C4) is the octahedron and is simple even though C4 is not 3-connected
    CHECK(r.simple);
}

TEST_CASE("starring a graph with a cut vertex is not simple") {
    RotationSystem rot{
        {{1, 0}, {2, 2}, {3, 3}, {4, 5}},
        {{2, 1}, {0, 0}},
        {{0, 2}, {1, 1}},
        {{4, 4}, {0, 3}},
        {{0, 5}, {3, 4}},
    };
    auto bowtie = PlaneNetwork::from_rotation_system(rot, std::vector<double>(6, 1.0), {1, 0, 0});
    auto r = star_triangulation(bowtie);
    CHECK_FALSE(r.simple);  // the cut vertex repeats on the outer face walk
}
