#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "test_graphs.hpp"
#include "usf/electrical.hpp"
#include "usf/enumeration.hpp"
#include "usf/forest.hpp"
#include "usf/generators.hpp"
#include "usf/map_isomorphism.hpp"

using namespace usf;
using namespace usf::testgraphs;

namespace {

std::vector<EdgeId> forest_edges(const SpanningForest& f) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < static_cast<EdgeId>(f.in_forest.size()); ++e)
        if (f.in_forest[e]) out.push_back(e);
    return out;
}

// empirical tree law from n Wilson samples
std::map<std::vector<EdgeId>, double> empirical_law(const PlaneNetwork& net, VertexId root,
                                                    std::uint64_t seed, int n) {
    WalkTables tables(net);
    std::map<std::vector<EdgeId>, double> law;
    for (int i = 0; i < n; ++i) {
        auto f = wilson_ust(tables, root, {seed, static_cast<std::uint64_t>(i)});
        law[forest_edges(f)] += 1.0 / n;
    }
    return law;
}

bool acyclic_on(const std::vector<std::pair<VertexId, VertexId>>& ends, int n) {
    std::vector<VertexId> rep(n);
    for (int v = 0; v < n; ++v) rep[v] = v;
    auto find = [&](VertexId v) {
        while (rep[v] != v) v = rep[v] = rep[rep[v]];
        return v;
    };
    for (auto [u, w] : ends) {
        VertexId ru = find(u), rw = find(w);
        if (ru == rw) return false;
        rep[ru] = rw;
    }
    return true;
}

} // namespace

TEST_CASE("loop erasure is chronological") {
    auto k4 = tetrahedron();
    CHECK(loop_erase(k4, {0, 1, 2}) == std::vector<VertexId>{0, 1, 2});
    CHECK(loop_erase(k4, {0, 1, 0, 2}) == std::vector<VertexId>{0, 2});
    CHECK(loop_erase(k4, {0, 1, 2, 0, 3}) == std::vector<VertexId>{0, 3});
    // the cycle 0,1,3 is erased when 3 repeats, so 2,1,0 rebuild afterwards
    CHECK(loop_erase(k4, {3, 0, 1, 3, 2, 1, 0}) == std::vector<VertexId>{3, 2, 1, 0});
    CHECK_THROWS_AS(loop_erase(path_graph(3), {0, 2}), Error);
}

TEST_CASE("Wilson on a tree returns that tree") {
    auto p = path_graph(6);
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto f = wilson_ust(p, 0, {17, s});
        CHECK(f.edge_count_in_forest() == 5);
        CHECK(is_spanning_forest(p, f));
    }
}

TEST_CASE("every sample is acyclic and spanning") {
    auto g = grid_ball(4);
    WalkTables tables(g);
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto f = wilson_ust(tables, 3, {99, s});
        CHECK(is_spanning_forest(g, f));
        std::vector<std::pair<VertexId, VertexId>> ends;
        for (EdgeId e : forest_edges(f)) ends.push_back(g.edge_endpoints(e));
        CHECK(acyclic_on(ends, g.vertex_count()));
    }
}

TEST_CASE("4-cycle tree law matches enumeration within TV 0.01") {
    auto c4 = four_cycle();
    auto dist = enumerate_trees(c4);
    REQUIRE(dist.trees.size() == 4);
    for (double p : dist.probabilities) CHECK(p == Catch::Approx(0.25).margin(1e-12));
    auto law = empirical_law(c4, 0, 11, 100'000);
    double tv = 0.0;
    for (std::size_t i = 0; i < dist.trees.size(); ++i) {
        auto it = law.find(dist.trees[i]);
        tv += 0.5 * std::abs(dist.probabilities[i] - (it == law.end() ? 0.0 : it->second));
    }
    CHECK(tv < 0.01);
}

TEST_CASE("weighted triangle law is (1/5, 2/5, 2/5)") {
    auto wt = triangle({1, 1, 2});
    auto dist = enumerate_trees(wt);
    REQUIRE(dist.trees.size() == 3);
    std::map<std::vector<EdgeId>, double> expect{
        {{0, 1}, 0.2}, {{0, 2}, 0.4}, {{1, 2}, 0.4}};
    for (std::size_t i = 0; i < dist.trees.size(); ++i)
        CHECK(dist.probabilities[i] == Catch::Approx(expect.at(dist.trees[i])).margin(1e-12));
    auto law = empirical_law(wt, 0, 4, 100'000);
    for (auto& [t, p] : expect) CHECK(law[t] == Catch::Approx(p).margin(0.01));
}

TEST_CASE("Wilson root invariance on the 4-cycle") {
    auto c4 = four_cycle();
    const int n = 100'000;
    auto law_a = empirical_law(c4, 0, 21, n);
    auto law_b = empirical_law(c4, 2, 22, n);
    for (auto& [t, p] : law_a) {
        double q = law_b.count(t) ? law_b[t] : 0.0;
        double sigma = std::sqrt(2.0 * 0.25 * 0.75 / n);
        CHECK(std::abs(p - q) < 4.0 * sigma);
    }
}

TEST_CASE("empirical edge marginals match Kirchhoff") {
    for (auto net : {triangle({1, 1, 2}), grid_ball(3)}) {
        const int n = 20'000;
        WalkTables tables(net);
        std::vector<double> count(net.edge_count(), 0.0);
        for (int i = 0; i < n; ++i) {
            auto f = wilson_ust(tables, 0, {31, static_cast<std::uint64_t>(i)});
            for (EdgeId e : forest_edges(f)) count[e] += 1.0;
        }
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            double p = kirchhoff_marginal(net, e);
            double sigma = std::sqrt(p * (1 - p) / n);
            CHECK(std::abs(count[e] / n - p) < 4.0 * sigma + 1e-12);
        }
    }
}

TEST_CASE("wusf with a single inner vertex is empty") {
    auto tr = wired_truncation(grid_ball(2), {1, 0, 0, 0});
    auto f = wusf_sample(tr.net, {7, 0});
    CHECK(f.edge_count_in_forest() == 0);
    CHECK(f.roots == std::vector<VertexId>{0});
}

TEST_CASE("wired inner 4-cycle marginals match the wired Kirchhoff formula") {
    auto g4 = grid_ball(4);
    std::vector<char> keep(16, 0);
    auto vid = [](int x, int y) { return y * 4 + x; };
    for (int y : {1, 2})
        for (int x : {1, 2}) keep[vid(x, y)] = 1;
    auto tr = wired_truncation(g4, keep);
    REQUIRE(tr.net.boundary_vertex().has_value());
    const VertexId b = *tr.net.boundary_vertex();
    const int n = 20'000;
    WalkTables tables(tr.net);
    std::vector<double> count(tr.net.edge_count(), 0.0);
    for (int i = 0; i < n; ++i) {
        auto f = wusf_sample(tables, {5, static_cast<std::uint64_t>(i)});
        CHECK(is_spanning_forest(tr.net, f));
        for (EdgeId e : forest_edges(f)) count[e] += 1.0;
    }
    for (EdgeId e = 0; e < tr.net.edge_count(); ++e) {
        auto [u, w] = tr.net.edge_endpoints(e);
        if (u == b || w == b) continue;  // boundary spokes leave with the boundary
        double p = kirchhoff_marginal(tr.net, e);
        double sigma = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(count[e] / n - p) < 4.0 * sigma + 1e-12);
    }
}

TEST_CASE("dual complement of a sampled tree spans the dual") {
    auto k4 = tetrahedron();
    auto d = dual(k4).net;
    WalkTables tables(k4);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto f = fusf_sample(tables, {41, s});
        auto comp = dual_complement(f);
        CHECK(static_cast<std::int32_t>(comp.size()) == d.vertex_count() - 1);
        std::vector<std::pair<VertexId, VertexId>> ends;
        for (EdgeId e : comp) ends.push_back(d.edge_endpoints(e));
        CHECK(acyclic_on(ends, d.vertex_count()));
    }
}

TEST_CASE("dual complement law equals the dual UST law exactly") {
    for (auto net : {rect_grid(3, 2), four_cycle()}) {
        auto d = dual(net).net;
        auto primal = enumerate_trees(net);
        auto dual_dist = enumerate_trees(d);
        std::map<std::vector<EdgeId>, double> complement_law;
        for (std::size_t i = 0; i < primal.trees.size(); ++i) {
            std::vector<char> in_t(net.edge_count(), 0);
            for (EdgeId e : primal.trees[i]) in_t[e] = 1;
            std::vector<EdgeId> comp;
            for (EdgeId e = 0; e < net.edge_count(); ++e)
                if (!in_t[e]) comp.push_back(e);
            complement_law[comp] += primal.probabilities[i];
        }
        REQUIRE(complement_law.size() == dual_dist.trees.size());
        for (std::size_t i = 0; i < dual_dist.trees.size(); ++i)
            CHECK(complement_law.at(dual_dist.trees[i]) ==
                  Catch::Approx(dual_dist.probabilities[i]).margin(1e-12));
    }
}

TEST_CASE("tree distribution probabilities sum to one") {
    for (auto net : {triangle({0.3, 1.7, 4.0}), grid_ball(3)}) {
        auto dist = enumerate_trees(net);
        double total = 0.0;
        for (double p : dist.probabilities) {
            CHECK(p > 0.0);
            total += p;
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("tree counts: triangle 3, K4 16, 2x3 grid 15, 3x3 grid 192") {
    CHECK(enumerate_trees(triangle()).trees.size() == 3);
    CHECK(enumerate_trees(tetrahedron()).trees.size() == 16);
    CHECK(enumerate_trees(rect_grid(3, 2)).trees.size() == 15);
    CHECK(enumerate_trees(grid_ball(3)).trees.size() == 192);
    CHECK_THROWS_AS(enumerate_trees(grid_ball(3), 100), Error);
}

TEST_CASE("spatial Markov property by enumeration") {
    // a bridge conditioned present changes nothing
    CHECK(check_spatial_markov(path_graph(3), {0}, {}) < 1e-14);
    // 4-cycle minus one edge is the 3-path
    CHECK(check_spatial_markov(four_cycle(), {}, {3}) < 1e-12);
    CHECK(check_spatial_markov(grid_ball(3), {0}, {5}) < 1e-12);
    CHECK(check_spatial_markov(grid_ball(3), {2, 7}, {4}) < 1e-12);
    // conditioning on a cycle of contracted edges is invalid
    CHECK_THROWS_AS(check_spatial_markov(four_cycle(), {0, 1, 2, 3}, {}), Error);
}

TEST_CASE("identical seed and stream reproduce identical forests") {
    auto g = grid_ball(5);
    WalkTables tables(g);
    auto f1 = wilson_ust(tables, 0, {123, 45});
    auto f2 = wilson_ust(tables, 0, {123, 45});
    CHECK(f1.in_forest == f2.in_forest);
    CHECK(f1.parent_dart == f2.parent_dart);
    auto f3 = wilson_ust(tables, 0, {123, 46});
    CHECK(f1.in_forest != f3.in_forest);
}

TEST_CASE("walk step cap is signalled") {
    auto g = grid_ball(5);
    CHECK_THROWS_AS(wilson_ust(g, 0, {1, 0, 10}), Error);
}

TEST_CASE("tree_path endpoints and containment") {
    auto g = grid_ball(3);
    WalkTables tables(g);
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto f = wilson_ust(tables, 4, {61, s});
        auto p = tree_path(g, f, 0, 8);
        REQUIRE(p.has_value());
        CHECK(!p->empty());
        for (EdgeId e : *p) CHECK(f.in_forest[e]);
        // consecutive edges share endpoints, starting at 0 and ending at 8
        VertexId at = 0;
        for (EdgeId e : *p) {
            auto [u, w] = g.edge_endpoints(e);
            REQUIRE((u == at || w == at));
            at = (u == at) ? w : u;
        }
        CHECK(at == 8);
        CHECK(tree_path(g, f, 5, 5)->empty());
    }
}

TEST_CASE("tree_path signals distinct components") {
    auto g4 = grid_ball(4);
    std::vector<char> keep(16, 0);
    auto vid = [](int x, int y) { return y * 4 + x; };
    for (int y : {1, 2})
        for (int x : {1, 2}) keep[vid(x, y)] = 1;
    auto tr = wired_truncation(g4, keep);
    for (std::uint64_t s = 0; s < 40; ++s) {
        auto f = wusf_sample(tr.net, {77, s});
        if (f.roots.size() < 2) continue;
        bool found = false;
        for (VertexId x = 0; x < 4 && !found; ++x)
            for (VertexId y = x + 1; y < 4 && !found; ++y)
                if (f.component[x] != f.component[y]) {
                    CHECK_FALSE(tree_path(tr.net, f, x, y).has_value());
                    found = true;
                }
    }
}

TEST_CASE("past of an absent edge is empty") {
    auto tr = wired_truncation(grid_ball(2), {1, 1, 0, 0});
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto f = wusf_sample(tr.net, {3, s});
        for (EdgeId e = 0; e < tr.net.edge_count(); ++e)
            if (!f.in_forest[e]) {
                auto past = past_of_edge(tr.net, f, e);
                CHECK(past.vertices.empty());
                CHECK_FALSE(past.edge_in_forest);
            }
    }
}

TEST_CASE("past never contains the boundary-side endpoint") {
    auto g5 = grid_ball(5);
    std::vector<char> keep(25, 0);
    auto vid = [](int x, int y) { return y * 5 + x; };
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) keep[vid(x, y)] = 1;
    auto tr = wired_truncation(g5, keep);
    // central horizontal edge of the retained 3x3 block
    EdgeId central = -1;
    for (EdgeId e = 0; e < tr.net.edge_count(); ++e) {
        auto [u, w] = tr.net.edge_endpoints(e);
        if ((tr.vertex_to_parent[u] == vid(1, 2) && tr.vertex_to_parent[w] == vid(2, 2)) ||
            (tr.vertex_to_parent[w] == vid(1, 2) && tr.vertex_to_parent[u] == vid(2, 2)))
            central = e;
    }
    REQUIRE(central >= 0);
    WalkTables tables(tr.net);
    int nonempty = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        auto f = wusf_sample(tables, {9, s});
        auto past = past_of_edge(tr.net, f, central);
        if (!past.edge_in_forest) continue;
        ++nonempty;
        auto [u, w] = tr.net.edge_endpoints(central);
        VertexId child =
            (f.parent_dart[u] >= 0 && PlaneNetwork::dart_edge(f.parent_dart[u]) == central) ? u : w;
        VertexId parent_side = (child == u) ? w : u;
        CHECK(std::find(past.vertices.begin(), past.vertices.end(), parent_side) ==
              past.vertices.end());
        CHECK(std::find(past.vertices.begin(), past.vertices.end(), child) !=
              past.vertices.end());
    }
    CHECK(nonempty > 100);
}
