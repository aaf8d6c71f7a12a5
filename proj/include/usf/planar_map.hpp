#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace usf {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using DartId = std::int32_t;
using FaceId = std::int32_t;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rotation system: per vertex, the counterclockwise list of (neighbor, edge id).
using RotationSystem = std::vector<std::vector<std::pair<VertexId, EdgeId>>>;

/// A dart with the outer face on its left, given as (origin, head, edge).
struct OuterFaceHint {
    VertexId origin;
    VertexId head;
    EdgeId edge;
};

/**
 * Finite plane network as a combinatorial map: darts with reversal and
 * next-counterclockwise-around-origin permutations, per-edge conductances,
 * and a marked outer face. Edge e owns darts 2e and 2e+1, so reversal is
 * id ^ 1. Faces are the orbits of d -> next(reverse(d)); with counterclockwise
 * rotations the orbit of d is the face on its left. Construction validates
 * connectivity and Euler's formula, so every instance is a sphere map.
 *
 * Immutable after construction; safe to share across threads for reads.
 */
class PlaneNetwork {
public:
    static PlaneNetwork from_rotation_system(const RotationSystem& rotation,
                                             std::vector<double> conductance,
                                             const OuterFaceHint& outer,
                                             std::optional<VertexId> boundary = std::nullopt,
                                             std::vector<std::int32_t> vertex_layer = {}) {
        PlaneNetwork net;
        net.build(rotation, std::move(conductance), outer, boundary, std::move(vertex_layer));
        return net;
    }

    std::int32_t vertex_count() const { return n_vertices_; }
    std::int32_t edge_count() const { return static_cast<std::int32_t>(conductance_.size()); }
    std::int32_t dart_count() const { return 2 * edge_count(); }
    std::int32_t face_count() const { return n_faces_; }

    VertexId dart_origin(DartId d) const { return origin_[d]; }
    VertexId dart_head(DartId d) const { return origin_[d ^ 1]; }
    static DartId dart_reversal(DartId d) { return d ^ 1; }
    static EdgeId dart_edge(DartId d) { return d >> 1; }
    DartId next_around_origin(DartId d) const { return sigma_[d]; }
    DartId prev_around_origin(DartId d) const { return sigma_inv_[d]; }
    /// next dart of the face on the left of d (counterclockwise traversal)
    DartId face_next(DartId d) const { return sigma_inv_[d ^ 1]; }
    FaceId face_of(DartId d) const { return face_of_[d]; }

    std::int32_t degree(VertexId v) const { return vert_offset_[v + 1] - vert_offset_[v]; }
    std::span<const DartId> darts_of(VertexId v) const {
        return {vert_darts_.data() + vert_offset_[v],
                static_cast<std::size_t>(degree(v))};
    }
    std::int32_t face_degree(FaceId f) const { return face_offset_[f + 1] - face_offset_[f]; }
    /// darts of the face orbit, in traversal order
    std::span<const DartId> face_darts(FaceId f) const {
        return {face_darts_.data() + face_offset_[f],
                static_cast<std::size_t>(face_degree(f))};
    }

    FaceId outer_face() const { return outer_face_; }
    std::optional<VertexId> boundary_vertex() const { return boundary_vertex_; }

    double conductance(EdgeId e) const { return conductance_[e]; }
    const std::vector<double>& conductances() const { return conductance_; }
    std::pair<VertexId, VertexId> edge_endpoints(EdgeId e) const {
        return {origin_[2 * e], origin_[2 * e + 1]};
    }
    bool is_loop_edge(EdgeId e) const { return origin_[2 * e] == origin_[2 * e + 1]; }

    /// total conductance at a vertex (loops counted twice)
    double vertex_conductance(VertexId v) const {
        double s = 0.0;
        for (DartId d : darts_of(v)) s += conductance_[dart_edge(d)];
        return s;
    }

    /// generator metadata: combinatorial layer per vertex (empty if unknown)
    const std::vector<std::int32_t>& vertex_layers() const { return vertex_layer_; }

    /// rotation list of v as (neighbor, edge) pairs, counterclockwise
    std::vector<std::pair<VertexId, EdgeId>> rotation_list(VertexId v) const {
        std::vector<std::pair<VertexId, EdgeId>> out;
        out.reserve(degree(v));
        for (DartId d : darts_of(v)) out.emplace_back(dart_head(d), dart_edge(d));
        return out;
    }

    OuterFaceHint outer_hint() const {
        DartId d = face_darts(outer_face_).front();
        return {dart_origin(d), dart_head(d), dart_edge(d)};
    }

private:
    void build(const RotationSystem& rotation, std::vector<double> conductance,
               const OuterFaceHint& outer, std::optional<VertexId> boundary,
               std::vector<std::int32_t> vertex_layer) {
        n_vertices_ = static_cast<std::int32_t>(rotation.size());
        if (n_vertices_ == 0) throw Error("plane network needs at least one vertex");
        const auto n_edges = static_cast<std::int32_t>(conductance.size());
        conductance_ = std::move(conductance);
        for (double c : conductance_)
            if (!(c > 0.0) || !std::isfinite(c))
                throw Error("conductances must be positive and finite");

        // assign darts: first listed occurrence of edge e becomes dart 2e
        origin_.assign(2 * n_edges, -1);
        std::vector<std::int32_t> seen(n_edges, 0);
        std::vector<DartId> dart_at;  // flattened rotation as dart ids
        vert_offset_.assign(n_vertices_ + 1, 0);
        for (VertexId v = 0; v < n_vertices_; ++v)
            vert_offset_[v + 1] = vert_offset_[v] + static_cast<std::int32_t>(rotation[v].size());
        dart_at.assign(vert_offset_[n_vertices_], -1);

        std::int32_t pos = 0;
        for (VertexId v = 0; v < n_vertices_; ++v) {
            for (const auto& [w, e] : rotation[v]) {
                if (e < 0 || e >= n_edges) throw Error("edge id out of range in rotation system");
                if (w < 0 || w >= n_vertices_) throw Error("vertex id out of range in rotation system");
                if (seen[e] == 0) {
                    origin_[2 * e] = v;
                    dart_at[pos] = 2 * e;
                } else if (seen[e] == 1) {
                    origin_[2 * e + 1] = v;
                    dart_at[pos] = 2 * e + 1;
                } else {
                    throw Error("edge " + std::to_string(e) + " listed more than twice");
                }
                ++seen[e];
                ++pos;
            }
        }
        for (EdgeId e = 0; e < n_edges; ++e)
            if (seen[e] != 2) throw Error("edge " + std::to_string(e) + " not listed exactly twice");

        // endpoint consistency: the entry (w, e) must have w equal to the opposite origin
        pos = 0;
        for (VertexId v = 0; v < n_vertices_; ++v) {
            for (const auto& [w, e] : rotation[v]) {
                DartId d = dart_at[pos++];
                if (origin_[d ^ 1] != w)
                    throw Error("inconsistent rotation data at edge " + std::to_string(e));
            }
        }

        vert_darts_ = std::move(dart_at);
        sigma_.assign(2 * n_edges, -1);
        sigma_inv_.assign(2 * n_edges, -1);
        for (VertexId v = 0; v < n_vertices_; ++v) {
            const std::int32_t b = vert_offset_[v], k = vert_offset_[v + 1] - b;
            for (std::int32_t i = 0; i < k; ++i) {
                sigma_[vert_darts_[b + i]] = vert_darts_[b + (i + 1) % k];
                sigma_inv_[vert_darts_[b + (i + 1) % k]] = vert_darts_[b + i];
            }
        }

        check_connected();
        build_faces();

        const std::int64_t euler = static_cast<std::int64_t>(n_vertices_) - n_edges + n_faces_;
        if (euler != 2)
            throw Error("rotation system is not a sphere embedding (V-E+F = " +
                        std::to_string(euler) + ")");

        outer_face_ = resolve_outer(outer);
        if (boundary) {
            if (*boundary < 0 || *boundary >= n_vertices_) throw Error("boundary vertex out of range");
            boundary_vertex_ = boundary;
        }
        if (!vertex_layer.empty() && static_cast<std::int32_t>(vertex_layer.size()) != n_vertices_)
            throw Error("vertex layer metadata has wrong size");
        vertex_layer_ = std::move(vertex_layer);
    }

    void check_connected() const {
        if (edge_count() == 0) {
            if (n_vertices_ > 1) throw Error("input graph is disconnected");
            return;
        }
        std::vector<char> vis(n_vertices_, 0);
        std::queue<VertexId> q;
        q.push(0);
        vis[0] = 1;
        std::int32_t count = 1;
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop();
            for (DartId d : darts_of(v)) {
                VertexId w = dart_head(d);
                if (!vis[w]) {
                    vis[w] = 1;
                    ++count;
                    q.push(w);
                }
            }
        }
        if (count != n_vertices_) throw Error("input graph is disconnected");
    }

    void build_faces() {
        const std::int32_t nd = dart_count();
        face_of_.assign(nd, -1);
        n_faces_ = 0;
        face_offset_.clear();
        face_darts_.clear();
        face_offset_.push_back(0);
        face_darts_.reserve(nd);
        for (DartId d0 = 0; d0 < nd; ++d0) {
            if (face_of_[d0] >= 0) continue;
            DartId d = d0;
            do {
                face_of_[d] = n_faces_;
                face_darts_.push_back(d);
                d = face_next(d);
            } while (d != d0);
            ++n_faces_;
            face_offset_.push_back(static_cast<std::int32_t>(face_darts_.size()));
        }
    }

    FaceId resolve_outer(const OuterFaceHint& hint) const {
        if (hint.edge < 0 || hint.edge >= edge_count()) throw Error("outer face hint: bad edge id");
        for (DartId d : {2 * hint.edge, 2 * hint.edge + 1})
            if (dart_origin(d) == hint.origin && dart_head(d) == hint.head) return face_of_[d];
        throw Error("outer face hint does not name a dart");
    }

    std::int32_t n_vertices_ = 0;
    std::int32_t n_faces_ = 0;
    FaceId outer_face_ = 0;
    std::vector<double> conductance_;
    std::vector<VertexId> origin_;
    std::vector<DartId> sigma_;
    std::vector<DartId> sigma_inv_;
    std::vector<std::int32_t> vert_offset_;
    std::vector<DartId> vert_darts_;
    std::vector<FaceId> face_of_;
    std::vector<std::int32_t> face_offset_;
    std::vector<DartId> face_darts_;
    std::optional<VertexId> boundary_vertex_;
    std::vector<std::int32_t> vertex_layer_;
};

inline bool is_simple(const PlaneNetwork& net) {
    for (EdgeId e = 0; e < net.edge_count(); ++e)
        if (net.is_loop_edge(e)) return false;
    std::vector<std::pair<VertexId, VertexId>> ends;
    ends.reserve(net.edge_count());
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        auto [u, w] = net.edge_endpoints(e);
        ends.emplace_back(std::min(u, w), std::max(u, w));
    }
    std::sort(ends.begin(), ends.end());
    return std::adjacent_find(ends.begin(), ends.end()) == ends.end();
}

namespace detail {

// adjacency-list view used by the connectivity tests below
struct SimpleAdjacency {
    std::vector<std::int32_t> offset;
    std::vector<VertexId> nbr;

    explicit SimpleAdjacency(const PlaneNetwork& net) {
        const auto n = net.vertex_count();
        offset.assign(n + 1, 0);
        for (VertexId v = 0; v < n; ++v) offset[v + 1] = offset[v] + net.degree(v);
        nbr.resize(offset[n]);
        std::vector<std::int32_t> at(n, 0);
        for (VertexId v = 0; v < n; ++v)
            for (DartId d : net.darts_of(v)) nbr[offset[v] + at[v]++] = net.dart_head(d);
    }

    // connectivity of the graph minus a set of removed vertices
    bool connected_without(const std::vector<char>& removed) const {
        const auto n = static_cast<std::int32_t>(offset.size()) - 1;
        VertexId start = -1;
        std::int32_t alive = 0;
        for (VertexId v = 0; v < n; ++v)
            if (!removed[v]) {
                ++alive;
                if (start < 0) start = v;
            }
        if (alive <= 1) return true;
        std::vector<char> vis(n, 0);
        std::vector<VertexId> stack{start};
        vis[start] = 1;
        std::int32_t count = 1;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (std::int32_t i = offset[v]; i < offset[v + 1]; ++i) {
                VertexId w = nbr[i];
                if (!removed[w] && !vis[w]) {
                    vis[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == alive;
    }
};

// 3-connectivity of an abstract graph given in CSR form: G - u must be
// connected and articulation-free for every u (one Tarjan sweep per u)
inline bool three_connected(const std::vector<std::int32_t>& offset,
                            const std::vector<VertexId>& nbr) {
    const auto n = static_cast<std::int32_t>(offset.size()) - 1;
    if (n < 4) return false;
    std::vector<char> removed(n, 0);
    std::vector<std::int32_t> disc(n), low(n);
    std::vector<VertexId> parent(n);
    std::vector<std::pair<VertexId, std::int32_t>> st;
    for (VertexId u = 0; u < n; ++u) {
        removed[u] = 1;
        std::fill(disc.begin(), disc.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::int32_t timer = 0;
        bool ok = true;
        VertexId root = (u == 0) ? 1 : 0;
        st.clear();
        st.emplace_back(root, offset[root]);
        disc[root] = low[root] = timer++;
        std::int32_t root_children = 0;
        std::int32_t visited = 1;
        while (!st.empty() && ok) {
            auto& [v, it] = st.back();
            if (it < offset[v + 1]) {
                VertexId w = nbr[it++];
                if (removed[w]) continue;
                if (disc[w] < 0) {
                    disc[w] = low[w] = timer++;
                    ++visited;
                    parent[w] = v;
                    if (v == root) ++root_children;
                    st.emplace_back(w, offset[w]);
                } else if (w != parent[v]) {
                    low[v] = std::min(low[v], disc[w]);
                }
            } else {
                VertexId v_done = v;
                st.pop_back();
                if (!st.empty()) {
                    VertexId p = st.back().first;
                    low[p] = std::min(low[p], low[v_done]);
                    if (p != root && low[v_done] >= disc[p]) ok = false;  // articulation at p
                }
            }
        }
        if (root_children > 1) ok = false;
        if (visited != n - 1) ok = false;  // G - u disconnected
        if (!ok) return false;
        removed[u] = 0;
    }
    return true;
}

} // namespace detail

/// simple and 3-connected (needs at least 4 vertices)
inline bool is_polyhedral(const PlaneNetwork& net) {
    if (net.vertex_count() < 4) return false;
    if (!is_simple(net)) return false;
    detail::SimpleAdjacency adj(net);
    return detail::three_connected(adj.offset, adj.nbr);
}

/**
 * Internally 3-connected: simple, and adding an apex joined to every vertex on
 * the outer face yields a 3-connected graph. Finite truncations of polyhedral
 * tessellations (whose boundary corners can have degree 2) pass this test even
 * when they fail strict 3-connectivity; the double packing solver accepts them.
 */
inline bool is_internally_polyhedral(const PlaneNetwork& net) {
    if (!is_simple(net)) return false;
    if (is_polyhedral(net)) return true;
    const auto n = net.vertex_count();
    std::vector<char> on_outer(n, 0);
    for (DartId d : net.face_darts(net.outer_face())) on_outer[net.dart_origin(d)] = 1;
    std::vector<std::int32_t> offset(n + 2, 0);
    for (VertexId v = 0; v < n; ++v) offset[v + 1] = offset[v] + net.degree(v) + (on_outer[v] ? 1 : 0);
    std::int32_t apex_deg = 0;
    for (VertexId v = 0; v < n; ++v) apex_deg += on_outer[v];
    if (apex_deg == 0) return false;
    offset[n + 1] = offset[n] + apex_deg;
    std::vector<VertexId> nbr(offset[n + 1]);
    std::vector<std::int32_t> at(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) {
        for (DartId d : net.darts_of(v)) nbr[offset[v] + at[v]++] = net.dart_head(d);
        if (on_outer[v]) {
            nbr[offset[v] + at[v]++] = n;
            nbr[offset[n] + at[n]++] = v;
        }
    }
    return detail::three_connected(offset, nbr);
}

struct GeometryBound {
    std::int32_t max_degree = 0;
    std::int32_t max_codegree = 0;  // over non-outer faces
    double max_conductance = 0.0;
    double max_resistance = 0.0;
    double combined_M = 0.0;
};

inline GeometryBound geometry_bound(const PlaneNetwork& net) {
    GeometryBound b;
    for (VertexId v = 0; v < net.vertex_count(); ++v)
        b.max_degree = std::max(b.max_degree, net.degree(v));
    for (FaceId f = 0; f < net.face_count(); ++f)
        if (f != net.outer_face()) b.max_codegree = std::max(b.max_codegree, net.face_degree(f));
    for (double c : net.conductances()) {
        b.max_conductance = std::max(b.max_conductance, c);
        b.max_resistance = std::max(b.max_resistance, 1.0 / c);
    }
    b.combined_M = std::max({static_cast<double>(b.max_degree), static_cast<double>(b.max_codegree),
                             b.max_conductance, b.max_resistance});
    return b;
}

struct DualResult {
    PlaneNetwork net;  // dual edge ids equal primal edge ids
};

/// Dual map: one vertex per face, dual conductance 1/c(e). The rotation
/// around a dual vertex follows the primal face orbit.
inline DualResult dual(const PlaneNetwork& net) {
    RotationSystem rot(net.face_count());
    for (FaceId f = 0; f < net.face_count(); ++f) {
        rot[f].reserve(net.face_degree(f));
        for (DartId d : net.face_darts(f))
            rot[f].emplace_back(net.face_of(PlaneNetwork::dart_reversal(d)),
                                PlaneNetwork::dart_edge(d));
    }
    std::vector<double> cond(net.edge_count());
    for (EdgeId e = 0; e < net.edge_count(); ++e) cond[e] = 1.0 / net.conductance(e);
    // outer face of the dual carries no geometric meaning; mark it canonically
    // through the first dart of the primal outer orbit
    DartId d0 = net.face_darts(net.outer_face()).front();
    OuterFaceHint hint{net.face_of(d0), net.face_of(PlaneNetwork::dart_reversal(d0)),
                       PlaneNetwork::dart_edge(d0)};
    return {PlaneNetwork::from_rotation_system(rot, std::move(cond), hint)};
}

struct TruncationResult {
    PlaneNetwork net;
    std::vector<VertexId> vertex_to_parent;  // new id -> old id; boundary vertex maps to -1
    std::vector<EdgeId> edge_to_parent;      // new id -> old id
    std::vector<VertexId> parent_to_vertex;  // old id -> new id or -1
    std::vector<EdgeId> parent_to_edge;      // old id -> new id or -1
};

/**
 * Wired truncation: glue every vertex outside the retained set into a single
 * boundary vertex and drop the self-loops that appear. Retained vertices keep
 * their relative order as ids 0..k-1; the boundary vertex gets id k. If the
 * deleted set is disconnected, its components are joined by auxiliary chords
 * through shared faces before contracting, so the result stays a sphere map;
 * deleted components sharing no face cannot be wired in the plane and are
 * rejected. Retaining everything returns an unwired copy.
 */
inline TruncationResult wired_truncation(const PlaneNetwork& net,
                                         const std::vector<char>& retained) {
    const auto n = net.vertex_count();
    if (static_cast<std::int32_t>(retained.size()) != n) throw Error("retained mask has wrong size");
    std::int32_t kept = 0;
    for (char r : retained) kept += (r != 0);
    if (kept == 0) throw Error("retained vertex set is empty");

    {
        detail::SimpleAdjacency adj(net);
        std::vector<char> removed(n);
        for (VertexId v = 0; v < n; ++v) removed[v] = retained[v] ? 0 : 1;
        if (!adj.connected_without(removed)) throw Error("retained set does not induce a connected subgraph");
    }

    if (kept == n) {
        RotationSystem rot(n);
        for (VertexId v = 0; v < n; ++v) rot[v] = net.rotation_list(v);
        std::vector<VertexId> v2p(n), p2v(n);
        std::vector<EdgeId> e2p(net.edge_count()), p2e(net.edge_count());
        for (VertexId v = 0; v < n; ++v) v2p[v] = p2v[v] = v;
        for (EdgeId e = 0; e < net.edge_count(); ++e) e2p[e] = p2e[e] = e;
        auto copy = PlaneNetwork::from_rotation_system(rot, net.conductances(), net.outer_hint(),
                                                       std::nullopt, net.vertex_layers());
        return {std::move(copy), std::move(v2p), std::move(e2p), std::move(p2v), std::move(p2e)};
    }

    // mutable rotation structure: per-vertex dart lists plus mutable origins
    const auto nd = net.dart_count();
    std::vector<VertexId> origin(nd);
    std::vector<std::vector<DartId>> rot(n);
    for (VertexId v = 0; v < n; ++v) {
        auto ds = net.darts_of(v);
        rot[v].assign(ds.begin(), ds.end());
        for (DartId d : ds) origin[d] = v;
    }
    std::int64_t n_aug_edges = net.edge_count();

    // label the connected components of the deleted set
    std::vector<std::int32_t> comp(n, -1);
    std::int32_t n_comp = 0;
    for (VertexId v0 = 0; v0 < n; ++v0) {
        if (retained[v0] || comp[v0] >= 0) continue;
        comp[v0] = n_comp;
        std::vector<VertexId> stack{v0};
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (DartId d : net.darts_of(v)) {
                VertexId w = net.dart_head(d);
                if (!retained[w] && comp[w] < 0) {
                    comp[w] = n_comp;
                    stack.push_back(w);
                }
            }
        }
        ++n_comp;
    }

    // join deleted components with chords drawn inside shared faces: one hub
    // per face, fanned in orbit order so the chords do not cross
    std::vector<std::int32_t> uf(n_comp);
    for (std::int32_t i = 0; i < n_comp; ++i) uf[i] = i;
    auto uf_find = [&](std::int32_t x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    std::int32_t live_comps = n_comp;
    for (FaceId f = 0; f < net.face_count() && live_comps > 1; ++f) {
        DartId hub = -1;
        std::size_t hub_insert_at = 0;
        for (DartId d : net.face_darts(f)) {
            VertexId v = net.dart_origin(d);
            if (retained[v]) continue;
            if (hub < 0) {
                hub = d;
                auto it = std::find(rot[v].begin(), rot[v].end(), d);
                hub_insert_at = static_cast<std::size_t>(it - rot[v].begin()) + 1;
                continue;
            }
            if (uf_find(comp[v]) == uf_find(comp[net.dart_origin(hub)])) continue;
            uf[uf_find(comp[v])] = uf_find(comp[net.dart_origin(hub)]);
            --live_comps;
            DartId d_hub = static_cast<DartId>(2 * n_aug_edges);
            DartId d_far = d_hub + 1;
            ++n_aug_edges;
            origin.push_back(net.dart_origin(hub));
            origin.push_back(v);
            VertexId hv = net.dart_origin(hub);
            rot[hv].insert(rot[hv].begin() + static_cast<std::ptrdiff_t>(hub_insert_at), d_hub);
            ++hub_insert_at;
            auto it = std::find(rot[v].begin(), rot[v].end(), d);
            rot[v].insert(it + 1, d_far);
        }
    }
    if (live_comps > 1)
        throw Error("deleted components share no face; the wired graph is not planar");

    // contract a spanning tree of the deleted set (auxiliary chords included)
    // into its BFS root
    VertexId rep = -1;
    for (VertexId v = 0; v < n && rep < 0; ++v)
        if (!retained[v]) rep = v;
    std::vector<char> merged(n, 0);
    merged[rep] = 1;
    std::queue<VertexId> q;
    q.push(rep);
    std::vector<EdgeId> tree_edges;
    std::vector<VertexId> tree_child;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (DartId d : rot[v]) {
            VertexId w = origin[d ^ 1];
            if (!retained[w] && !merged[w]) {
                merged[w] = 1;
                tree_edges.push_back(PlaneNetwork::dart_edge(d));
                tree_child.push_back(w);
                q.push(w);
            }
        }
    }

    auto find_pos = [&](VertexId v, DartId d) {
        auto it = std::find(rot[v].begin(), rot[v].end(), d);
        if (it == rot[v].end()) throw Error("internal: dart missing from rotation");
        return static_cast<std::size_t>(it - rot[v].begin());
    };

    std::vector<char> edge_dead(n_aug_edges, 0);
    for (std::size_t i = 0; i < tree_edges.size(); ++i) {
        EdgeId e = tree_edges[i];
        VertexId child = tree_child[i];
        DartId d_child = (origin[2 * e] == child) ? 2 * e : 2 * e + 1;
        if (origin[d_child] != child || origin[d_child ^ 1] == child)
            throw Error("internal: contraction bookkeeping");
        VertexId host = origin[d_child ^ 1];
        // splice child's rotation into host's at the contracted edge slot
        std::size_t ph = find_pos(host, d_child ^ 1);
        std::size_t pc = find_pos(child, d_child);
        std::vector<DartId> spliced;
        spliced.reserve(rot[host].size() + rot[child].size() - 2);
        spliced.insert(spliced.end(), rot[host].begin(), rot[host].begin() + ph);
        for (std::size_t j = 1; j < rot[child].size(); ++j)
            spliced.push_back(rot[child][(pc + j) % rot[child].size()]);
        spliced.insert(spliced.end(), rot[host].begin() + ph + 1, rot[host].end());
        for (DartId d : spliced) origin[d] = host;
        rot[host] = std::move(spliced);
        rot[child].clear();
        edge_dead[e] = 1;
    }
    // all deleted vertices have merged into a single vertex
    VertexId glued = -1;
    for (VertexId v = 0; v < n; ++v)
        if (!retained[v] && !rot[v].empty()) {
            if (glued >= 0) throw Error("internal: deleted set did not merge");
            glued = v;
        }
    if (glued < 0) throw Error("internal: lost the boundary vertex");

    // drop self-loops at the glued vertex
    {
        std::vector<DartId> cleaned;
        cleaned.reserve(rot[glued].size());
        for (DartId d : rot[glued])
            if (origin[d ^ 1] != glued)
                cleaned.push_back(d);
            else
                edge_dead[PlaneNetwork::dart_edge(d)] = 1;
        rot[glued] = std::move(cleaned);
    }

    // renumber
    std::vector<VertexId> p2v(n, -1);
    std::vector<VertexId> v2p;
    v2p.reserve(kept + 1);
    for (VertexId v = 0; v < n; ++v)
        if (retained[v]) {
            p2v[v] = static_cast<VertexId>(v2p.size());
            v2p.push_back(v);
        }
    const VertexId bnd = static_cast<VertexId>(v2p.size());
    p2v[glued] = bnd;
    v2p.push_back(-1);

    std::vector<EdgeId> p2e(net.edge_count(), -1);
    std::vector<EdgeId> e2p;
    std::vector<double> cond;
    for (EdgeId e = 0; e < net.edge_count(); ++e)
        if (!edge_dead[e]) {
            p2e[e] = static_cast<EdgeId>(e2p.size());
            e2p.push_back(e);
            cond.push_back(net.conductance(e));
        }

    RotationSystem new_rot(bnd + 1);
    auto emit = [&](VertexId old_v) {
        std::vector<std::pair<VertexId, EdgeId>> lst;
        lst.reserve(rot[old_v].size());
        for (DartId d : rot[old_v])
            lst.emplace_back(p2v[origin[d ^ 1]], p2e[PlaneNetwork::dart_edge(d)]);
        return lst;
    };
    for (VertexId v = 0; v < n; ++v)
        if (retained[v]) new_rot[p2v[v]] = emit(v);
    new_rot[bnd] = emit(glued);

    std::vector<std::int32_t> layers;
    if (!net.vertex_layers().empty()) {
        layers.assign(bnd + 1, 0);
        std::int32_t mx = 0;
        for (VertexId v = 0; v < n; ++v)
            if (retained[v]) {
                layers[p2v[v]] = net.vertex_layers()[v];
                mx = std::max(mx, net.vertex_layers()[v]);
            }
        layers[bnd] = mx + 1;
    }

    // the original outer face is gone in general; mark the face left of the
    // boundary vertex's first dart
    if (new_rot[bnd].empty()) throw Error("boundary vertex has no edges after truncation");
    OuterFaceHint hint{bnd, new_rot[bnd].front().first, new_rot[bnd].front().second};
    auto out = PlaneNetwork::from_rotation_system(new_rot, std::move(cond), hint, bnd,
                                                  std::move(layers));
    return {std::move(out), std::move(v2p), std::move(e2p), std::move(p2v), std::move(p2e)};
}

} // namespace usf
