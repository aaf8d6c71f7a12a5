#pragma once

#include "usf/planar_map.hpp"

#include <Eigen/Dense>

#include <map>

namespace usf {

/// exact weighted law over the spanning trees of a small network
struct TreeDistribution {
    std::vector<std::vector<EdgeId>> trees;  // sorted edge id sets
    std::vector<double> weights;             // product of conductances
    std::vector<double> probabilities;
    double total_weight = 0.0;

    std::size_t find(const std::vector<EdgeId>& t) const {
        for (std::size_t i = 0; i < trees.size(); ++i)
            if (trees[i] == t) return i;
        return trees.size();
    }
};

namespace detail {

struct MultiEdge {
    VertexId u, w;
    EdgeId id;
    double c;
};

struct Multigraph {
    std::int32_t n = 0;
    std::vector<MultiEdge> edges;
};

inline Multigraph to_multigraph(const PlaneNetwork& net) {
    Multigraph g;
    g.n = net.vertex_count();
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        auto [u, w] = net.edge_endpoints(e);
        g.edges.push_back({u, w, e, net.conductance(e)});
    }
    return g;
}

inline bool multigraph_connected(const Multigraph& g) {
    if (g.n <= 1) return true;
    std::vector<std::vector<std::int32_t>> adj(g.n);
    for (const auto& e : g.edges)
        if (e.u != e.w) {
            adj[e.u].push_back(e.w);
            adj[e.w].push_back(e.u);
        }
    std::vector<char> vis(g.n, 0);
    std::vector<std::int32_t> stack{0};
    vis[0] = 1;
    std::int32_t count = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v])
            if (!vis[w]) {
                vis[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == g.n;
}

// deletion-contraction recursion emitting every spanning tree
inline void enumerate_rec(const Multigraph& g, std::vector<EdgeId>& chosen, double weight,
                          TreeDistribution& out, std::int64_t cap) {
    if (g.n == 1) {
        auto t = chosen;
        std::sort(t.begin(), t.end());
        out.trees.push_back(std::move(t));
        out.weights.push_back(weight);
        if (static_cast<std::int64_t>(out.trees.size()) > cap)
            throw Error("spanning tree enumeration exceeds the configured cap");
        return;
    }
    // first non-loop edge
    std::size_t pick = g.edges.size();
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].u != g.edges[i].w) {
            pick = i;
            break;
        }
    if (pick == g.edges.size()) return;  // disconnected remainder
    const MultiEdge e = g.edges[pick];

    // contract e (tree contains it)
    {
        Multigraph gc;
        gc.n = g.n - 1;
        VertexId keep = std::min(e.u, e.w), drop = std::max(e.u, e.w);
        auto relabel = [&](VertexId v) {
            if (v == drop) v = keep;
            return v > drop ? v - 1 : v;
        };
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            if (i == pick) continue;
            auto ed = g.edges[i];
            ed.u = relabel(ed.u);
            ed.w = relabel(ed.w);
            gc.edges.push_back(ed);
        }
        chosen.push_back(e.id);
        enumerate_rec(gc, chosen, weight * e.c, out, cap);
        chosen.pop_back();
    }
    // delete e (tree avoids it) when the remainder stays connected
    {
        Multigraph gd;
        gd.n = g.n;
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            if (i != pick) gd.edges.push_back(g.edges[i]);
        if (multigraph_connected(gd)) enumerate_rec(gd, chosen, weight, out, cap);
    }
}

/// weighted spanning tree count via the matrix-tree determinant
inline double matrix_tree_weight(const Multigraph& g) {
    if (g.n == 1) return 1.0;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.n - 1, g.n - 1);
    for (const auto& e : g.edges) {
        if (e.u == e.w) continue;
        const std::int32_t a = e.u - 1, b = e.w - 1;  // ground vertex 0
        if (a >= 0) lap(a, a) += e.c;
        if (b >= 0) lap(b, b) += e.c;
        if (a >= 0 && b >= 0) {
            lap(a, b) -= e.c;
            lap(b, a) -= e.c;
        }
    }
    return lap.determinant();
}

inline TreeDistribution enumerate_multigraph(const Multigraph& g, std::int64_t cap) {
    if (!multigraph_connected(g)) throw Error("enumerate_trees: network is disconnected");
    TreeDistribution dist;
    std::vector<EdgeId> chosen;
    enumerate_rec(g, chosen, 1.0, dist, cap);
    dist.total_weight = 0.0;
    for (double w : dist.weights) dist.total_weight += w;
    const double det = matrix_tree_weight(g);
    if (std::abs(det - dist.total_weight) > 1e-9 * std::max(1.0, std::abs(det)))
        throw Error("enumeration disagrees with the matrix-tree determinant");
    dist.probabilities.resize(dist.weights.size());
    for (std::size_t i = 0; i < dist.weights.size(); ++i)
        dist.probabilities[i] = dist.weights[i] / dist.total_weight;
    return dist;
}

} // namespace detail

/// exhaustive weighted spanning-tree list, cross-checked against the
/// matrix-tree determinant
inline TreeDistribution enumerate_trees(const PlaneNetwork& net, std::int64_t cap = 100'000) {
    return detail::enumerate_multigraph(detail::to_multigraph(net), cap);
}

/**
 * Spatial Markov check by enumeration: the law of the UST conditioned on
 * containing every edge of A and avoiding every edge of B equals the law of
 * (UST of (G-B)/A) united with A. Returns the maximum absolute probability
 * discrepancy over tree edge sets.
 */
inline double check_spatial_markov(const PlaneNetwork& net, const std::vector<EdgeId>& contract_set,
                                   const std::vector<EdgeId>& delete_set,
                                   std::int64_t cap = 100'000) {
    std::vector<char> in_a(net.edge_count(), 0), in_b(net.edge_count(), 0);
    for (EdgeId e : contract_set) {
        if (e < 0 || e >= net.edge_count()) throw Error("edge id out of range");
        in_a[e] = 1;
    }
    for (EdgeId e : delete_set) {
        if (e < 0 || e >= net.edge_count()) throw Error("edge id out of range");
        if (in_a[e]) throw Error("A and B must be disjoint");
        in_b[e] = 1;
    }

    auto full = enumerate_trees(net, cap);
    std::map<std::vector<EdgeId>, double> conditioned;
    double mass = 0.0;
    for (std::size_t i = 0; i < full.trees.size(); ++i) {
        bool ok = true;
        std::vector<char> has(net.edge_count(), 0);
        for (EdgeId e : full.trees[i]) has[e] = 1;
        for (EdgeId e = 0; e < net.edge_count() && ok; ++e) {
            if (in_a[e] && !has[e]) ok = false;
            if (in_b[e] && has[e]) ok = false;
        }
        if (ok) {
            conditioned[full.trees[i]] += full.probabilities[i];
            mass += full.probabilities[i];
        }
    }
    if (mass <= 0.0) throw Error("conditioning event has zero probability");
    for (auto& [t, p] : conditioned) p /= mass;

    // (G - B)/A with edges identified with E minus B
    detail::Multigraph g;
    g.n = net.vertex_count();
    std::vector<VertexId> rep(net.vertex_count());
    for (VertexId v = 0; v < net.vertex_count(); ++v) rep[v] = v;
    auto find = [&](VertexId v) {
        while (rep[v] != v) v = rep[v] = rep[rep[v]];
        return v;
    };
    for (EdgeId e = 0; e < net.edge_count(); ++e)
        if (in_a[e]) {
            auto [u, w] = net.edge_endpoints(e);
            VertexId ru = find(u), rw = find(w);
            if (ru == rw) throw Error("contraction set contains a cycle");
            rep[std::max(ru, rw)] = std::min(ru, rw);
        }
    std::vector<VertexId> dense(net.vertex_count(), -1);
    std::int32_t n_dense = 0;
    for (VertexId v = 0; v < net.vertex_count(); ++v)
        if (find(v) == v) dense[v] = n_dense++;
    g.n = n_dense;
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (in_a[e] || in_b[e]) continue;
        auto [u, w] = net.edge_endpoints(e);
        VertexId ru = dense[find(u)], rw = dense[find(w)];
        if (ru == rw) continue;  // loop after contraction, never in a tree
        g.edges.push_back({ru, rw, e, net.conductance(e)});
    }
    auto reduced = detail::enumerate_multigraph(g, cap);

    std::vector<EdgeId> a_sorted = contract_set;
    std::sort(a_sorted.begin(), a_sorted.end());
    double max_diff = 0.0;
    std::map<std::vector<EdgeId>, double> reduced_law;
    for (std::size_t i = 0; i < reduced.trees.size(); ++i) {
        std::vector<EdgeId> t = reduced.trees[i];
        t.insert(t.end(), a_sorted.begin(), a_sorted.end());
        std::sort(t.begin(), t.end());
        reduced_law[std::move(t)] += reduced.probabilities[i];
    }
    for (const auto& [t, p] : conditioned) {
        auto it = reduced_law.find(t);
        max_diff = std::max(max_diff, std::abs(p - (it == reduced_law.end() ? 0.0 : it->second)));
    }
    for (const auto& [t, p] : reduced_law)
        if (!conditioned.count(t)) max_diff = std::max(max_diff, p);
    return max_diff;
}

} // namespace usf
