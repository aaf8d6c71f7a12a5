#pragma once

#include "usf/planar_map.hpp"
#include "usf/rng.hpp"

namespace usf {

struct WalkConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::int64_t step_cap = std::int64_t(1) << 40;
};

/**
 * A spanning forest of a host network: included edges, parent darts oriented
 * toward the component roots, and dense component labels. Wired samples carry
 * the boundary vertex they were rooted at; the boundary vertex itself is not
 * part of the forest and has component label -1.
 */
struct SpanningForest {
    std::int32_t vertex_count = 0;
    std::vector<char> in_forest;          // per host edge
    std::vector<DartId> parent_dart;      // dart from v toward its parent; -1 at roots
    std::vector<std::int32_t> component;  // -1 on the wired boundary vertex
    std::vector<VertexId> roots;
    std::optional<VertexId> wired_boundary;

    std::int32_t edge_count_in_forest() const {
        std::int32_t k = 0;
        for (char b : in_forest) k += (b != 0);
        return k;
    }
};

/// per-vertex cumulative conductance tables for O(log deg) walk steps
class WalkTables {
public:
    explicit WalkTables(const PlaneNetwork& net) : net_(&net) {
        const auto n = net.vertex_count();
        offset_.assign(n + 1, 0);
        for (VertexId v = 0; v < n; ++v) offset_[v + 1] = offset_[v] + net.degree(v);
        cum_.resize(offset_[n]);
        total_.resize(n);
        for (VertexId v = 0; v < n; ++v) {
            double acc = 0.0;
            auto ds = net.darts_of(v);
            for (std::size_t i = 0; i < ds.size(); ++i) {
                acc += net.conductance(PlaneNetwork::dart_edge(ds[i]));
                cum_[offset_[v] + static_cast<std::int32_t>(i)] = acc;
            }
            total_[v] = acc;
        }
    }

    DartId sample_dart(VertexId v, SplitRng& rng) const {
        const double u = rng.next_unit() * total_[v];
        const auto begin = cum_.begin() + offset_[v];
        const auto end = cum_.begin() + offset_[v + 1];
        auto it = std::upper_bound(begin, end, u);
        if (it == end) --it;
        return net_->darts_of(v)[static_cast<std::size_t>(it - begin)];
    }

    const PlaneNetwork& net() const { return *net_; }

private:
    const PlaneNetwork* net_;
    std::vector<std::int32_t> offset_;
    std::vector<double> cum_;
    std::vector<double> total_;
};

/// chronological loop erasure of a walk given as a vertex sequence
inline std::vector<VertexId> loop_erase(const PlaneNetwork& net,
                                        const std::vector<VertexId>& path) {
    if (path.empty()) return {};
    auto adjacent = [&](VertexId u, VertexId w) {
        for (DartId d : net.darts_of(u))
            if (net.dart_head(d) == w) return true;
        return false;
    };
    std::vector<std::int32_t> pos(net.vertex_count(), -1);
    std::vector<VertexId> out;
    out.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        VertexId v = path[i];
        if (v < 0 || v >= net.vertex_count()) throw Error("loop_erase: vertex out of range");
        if (i > 0 && !adjacent(path[i - 1], v))
            throw Error("loop_erase: consecutive vertices not adjacent");
        if (pos[v] >= 0) {
            while (static_cast<std::int32_t>(out.size()) > pos[v] + 1) {
                pos[out.back()] = -1;
                out.pop_back();
            }
        } else {
            pos[v] = static_cast<std::int32_t>(out.size());
            out.push_back(v);
        }
    }
    return out;
}

namespace detail {

inline void label_components(const PlaneNetwork& net, SpanningForest& f) {
    const auto n = net.vertex_count();
    f.component.assign(n, -1);
    std::vector<std::vector<VertexId>> children(n);
    for (VertexId v = 0; v < n; ++v)
        if (f.parent_dart[v] >= 0) children[net.dart_head(f.parent_dart[v])].push_back(v);
    std::int32_t label = 0;
    for (VertexId r : f.roots) {
        std::vector<VertexId> stack{r};
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            f.component[v] = label;
            for (VertexId c : children[v]) stack.push_back(c);
        }
        ++label;
    }
}

} // namespace detail

/**
 * Wilson's algorithm: conductance-weighted loop-erased random walks stitched
 * into the uniform spanning tree, rooted at `root`. The output law does not
 * depend on the root or on the vertex enumeration order.
 */
inline SpanningForest wilson_ust(const WalkTables& tables, VertexId root, const WalkConfig& cfg) {
    const PlaneNetwork& net = tables.net();
    const auto n = net.vertex_count();
    if (root < 0 || root >= n) throw Error("Wilson root out of range");
    SpanningForest f;
    f.vertex_count = n;
    f.parent_dart.assign(n, -1);
    f.in_forest.assign(net.edge_count(), 0);
    f.roots = {root};
    std::vector<char> in_tree(n, 0);
    in_tree[root] = 1;
    std::vector<DartId> next_dart(n, -1);
    SplitRng rng(cfg.seed, cfg.stream);
    std::int64_t steps = 0;
    for (VertexId v0 = 0; v0 < n; ++v0) {
        VertexId u = v0;
        while (!in_tree[u]) {
            if (++steps > cfg.step_cap) throw Error("Wilson walk exceeded the step cap");
            DartId d = tables.sample_dart(u, rng);
            next_dart[u] = d;
            u = net.dart_head(d);
        }
        u = v0;
        while (!in_tree[u]) {
            in_tree[u] = 1;
            f.parent_dart[u] = next_dart[u];
            f.in_forest[PlaneNetwork::dart_edge(next_dart[u])] = 1;
            u = net.dart_head(next_dart[u]);
        }
    }
    detail::label_components(net, f);
    return f;
}

inline SpanningForest wilson_ust(const PlaneNetwork& net, VertexId root, const WalkConfig& cfg) {
    WalkTables tables(net);
    return wilson_ust(tables, root, cfg);
}

/**
 * WUSF proxy: the UST of a wired truncation rooted at the boundary vertex,
 * with the boundary vertex and its tree edges removed. Component roots are the
 * vertices whose tree parent was the boundary; parent darts still orient every
 * component toward where the boundary was.
 */
inline SpanningForest wusf_sample(const WalkTables& tables, const WalkConfig& cfg) {
    const PlaneNetwork& net = tables.net();
    if (!net.boundary_vertex()) throw Error("wusf_sample needs a wired truncation");
    const VertexId b = *net.boundary_vertex();
    SpanningForest f = wilson_ust(tables, b, cfg);
    f.wired_boundary = b;
    f.roots.clear();
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
        if (v == b) continue;
        if (net.dart_head(f.parent_dart[v]) == b) {
            f.in_forest[PlaneNetwork::dart_edge(f.parent_dart[v])] = 0;
            f.parent_dart[v] = -1;
            f.roots.push_back(v);
        }
    }
    detail::label_components(net, f);
    return f;
}

inline SpanningForest wusf_sample(const PlaneNetwork& net, const WalkConfig& cfg) {
    WalkTables tables(net);
    return wusf_sample(tables, cfg);
}

/// FUSF proxy: the UST of the free truncation (no boundary vertex)
inline SpanningForest fusf_sample(const WalkTables& tables, const WalkConfig& cfg,
                                  VertexId root = 0) {
    if (tables.net().boundary_vertex())
        throw Error("fusf_sample expects a free truncation without a boundary vertex");
    return wilson_ust(tables, root, cfg);
}

inline SpanningForest fusf_sample(const PlaneNetwork& net, const WalkConfig& cfg,
                                  VertexId root = 0) {
    WalkTables tables(net);
    return fusf_sample(tables, cfg, root);
}

/// edges of the dual complement {e+ : e not in f}; with f a spanning tree of a
/// finite plane network this is a spanning tree of the dual
inline std::vector<EdgeId> dual_complement(const SpanningForest& f) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < static_cast<EdgeId>(f.in_forest.size()); ++e)
        if (!f.in_forest[e]) out.push_back(e);
    return out;
}

/// unique forest path from x to y as an edge sequence; empty when x == y;
/// nullopt when x and y lie in different components
inline std::optional<std::vector<EdgeId>> tree_path(const PlaneNetwork& net,
                                                    const SpanningForest& f, VertexId x,
                                                    VertexId y) {
    if (x < 0 || x >= f.vertex_count || y < 0 || y >= f.vertex_count)
        throw Error("tree_path: vertex out of range");
    if (f.component[x] < 0 || f.component[y] < 0)
        throw Error("tree_path: vertex outside the forest");
    if (f.component[x] != f.component[y]) return std::nullopt;
    if (x == y) return std::vector<EdgeId>{};
    std::vector<char> on_x_chain(f.vertex_count, 0);
    for (VertexId v = x;; v = net.dart_head(f.parent_dart[v])) {
        on_x_chain[v] = 1;
        if (f.parent_dart[v] < 0) break;
    }
    VertexId meet = y;
    while (!on_x_chain[meet]) meet = net.dart_head(f.parent_dart[meet]);
    std::vector<EdgeId> path;
    for (VertexId v = x; v != meet; v = net.dart_head(f.parent_dart[v]))
        path.push_back(PlaneNetwork::dart_edge(f.parent_dart[v]));
    std::vector<EdgeId> tail;
    for (VertexId v = y; v != meet; v = net.dart_head(f.parent_dart[v]))
        tail.push_back(PlaneNetwork::dart_edge(f.parent_dart[v]));
    path.insert(path.end(), tail.rbegin(), tail.rend());
    return path;
}

struct PastResult {
    std::vector<VertexId> vertices;  // empty when e is not in the forest
    bool edge_in_forest = false;
    bool touches_boundary = false;  // past meets a vertex adjacent to the wired boundary
};

/**
 * Past of an edge in an oriented forest: the component of f minus e on the
 * side away from the roots, empty when e is not in f. In wired samples the
 * orientation points toward the glued boundary; in a plain rooted tree it
 * points toward the Wilson root.
 */
inline PastResult past_of_edge(const PlaneNetwork& net, const SpanningForest& f, EdgeId e) {
    if (e < 0 || e >= static_cast<EdgeId>(f.in_forest.size()))
        throw Error("past_of_edge: edge out of range");
    PastResult res;
    if (!f.in_forest[e]) return res;
    res.edge_in_forest = true;
    auto [u, w] = net.edge_endpoints(e);
    VertexId child = -1;
    if (f.parent_dart[u] >= 0 && PlaneNetwork::dart_edge(f.parent_dart[u]) == e)
        child = u;
    else if (f.parent_dart[w] >= 0 && PlaneNetwork::dart_edge(f.parent_dart[w]) == e)
        child = w;
    if (child < 0) throw Error("past_of_edge: forest orientation inconsistent");

    const auto n = net.vertex_count();
    std::vector<std::vector<VertexId>> children(n);
    for (VertexId v = 0; v < n; ++v)
        if (f.parent_dart[v] >= 0) children[net.dart_head(f.parent_dart[v])].push_back(v);
    const VertexId b = f.wired_boundary.value_or(-1);
    std::vector<VertexId> stack{child};
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        res.vertices.push_back(v);
        if (b >= 0 && !res.touches_boundary)
            for (DartId d : net.darts_of(v))
                if (net.dart_head(d) == b) {
                    res.touches_boundary = true;
                    break;
                }
        for (VertexId c : children[v]) stack.push_back(c);
    }
    std::sort(res.vertices.begin(), res.vertices.end());
    return res;
}

/// structural validation used by tests and the self-check mode
inline bool is_spanning_forest(const PlaneNetwork& net, const SpanningForest& f) {
    const auto n = net.vertex_count();
    std::int32_t expected_vertices = n - (f.wired_boundary ? 1 : 0);
    std::int32_t comp_count = static_cast<std::int32_t>(f.roots.size());
    if (f.edge_count_in_forest() != expected_vertices - comp_count) return false;
    // every non-boundary vertex reaches a root along parent darts without cycles
    for (VertexId v0 = 0; v0 < n; ++v0) {
        if (f.wired_boundary && v0 == *f.wired_boundary) continue;
        VertexId v = v0;
        std::int32_t hops = 0;
        while (f.parent_dart[v] >= 0) {
            if (!f.in_forest[PlaneNetwork::dart_edge(f.parent_dart[v])]) return false;
            if (net.dart_origin(f.parent_dart[v]) != v) return false;
            v = net.dart_head(f.parent_dart[v]);
            if (++hops > n) return false;
        }
        if (f.component[v0] < 0) return false;
    }
    return true;
}

} // namespace usf
