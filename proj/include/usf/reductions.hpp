#pragma once

#include "usf/planar_map.hpp"

namespace usf {

struct SubdivideTrimResult {
    PlaneNetwork net;
    std::vector<VertexId> original_vertex;  // new vertex -> source vertex, -1 for midpoints
    std::vector<EdgeId> midpoint_of_edge;   // new vertex -> source edge, -1 for originals
    std::vector<EdgeId> edge_parent;        // new edge  -> source edge
};

/**
 * Split every edge into a path of length two, both halves keeping the original
 * conductance, then delete every peninsula. A peninsula here is a component cut
 * off by a single vertex that is strictly smaller than the rest, or any pendant
 * tree; ties delete the side not containing the lowest vertex id. Trimming
 * repeats until the remainder is 2-connected. If fewer than three vertices
 * survive, every vertex lay inside a peninsula and the call fails.
 */
inline SubdivideTrimResult subdivide_and_trim(const PlaneNetwork& net) {
    const auto n = net.vertex_count();
    const auto m = net.edge_count();
    for (EdgeId e = 0; e < m; ++e)
        if (net.is_loop_edge(e)) throw Error("subdivide_and_trim: loop edges unsupported");

    // subdivided graph: vertices 0..n-1 original, n+e midpoint of edge e;
    // edge e becomes 2e (first endpoint side) and 2e+1
    const std::int32_t ns = n + m;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(ns);
    for (VertexId v = 0; v < n; ++v) {
        adj[v].reserve(net.degree(v));
        for (DartId d : net.darts_of(v)) {
            EdgeId e = PlaneNetwork::dart_edge(d);
            EdgeId half = (d == 2 * e) ? 2 * e : 2 * e + 1;
            adj[v].emplace_back(n + e, half);
        }
    }
    for (EdgeId e = 0; e < m; ++e) {
        auto [u, w] = net.edge_endpoints(e);
        adj[n + e] = {{u, 2 * e}, {w, 2 * e + 1}};
    }

    std::vector<char> alive(ns, 1);
    std::vector<char> edge_alive(2 * m, 1);
    auto live_degree = [&](VertexId v) {
        std::int32_t d = 0;
        for (auto& [w, e] : adj[v]) d += (alive[w] && edge_alive[e]);
        return d;
    };
    auto kill_vertex = [&](VertexId v) {
        alive[v] = 0;
        for (auto& [w, e] : adj[v]) edge_alive[e] = 0;
    };

    for (;;) {
        // pendant trimming
        bool changed = true;
        while (changed) {
            changed = false;
            for (VertexId v = 0; v < ns; ++v)
                if (alive[v] && live_degree(v) <= 1) {
                    kill_vertex(v);
                    changed = true;
                }
        }
        std::int32_t live = 0;
        for (char a : alive) live += a;
        if (live < 3) throw Error("subdivide_and_trim: every vertex lies inside a peninsula");

        // find the smallest-id articulation vertex of the live graph
        std::vector<std::int32_t> disc(ns, -1), low(ns, 0);
        std::vector<VertexId> parent(ns, -1);
        std::vector<char> is_art(ns, 0);
        std::int32_t timer = 0;
        VertexId root = -1;
        for (VertexId v = 0; v < ns && root < 0; ++v)
            if (alive[v]) root = v;
        std::vector<std::pair<VertexId, std::size_t>> st;
        st.emplace_back(root, 0);
        disc[root] = low[root] = timer++;
        std::int32_t root_children = 0;
        while (!st.empty()) {
            auto& [v, it] = st.back();
            if (it < adj[v].size()) {
                auto [w, e] = adj[v][it++];
                if (!alive[w] || !edge_alive[e]) continue;
                if (disc[w] < 0) {
                    disc[w] = low[w] = timer++;
                    parent[w] = v;
                    if (v == root) ++root_children;
                    st.emplace_back(w, 0);
                } else if (w != parent[v]) {
                    low[v] = std::min(low[v], disc[w]);
                }
            } else {
                VertexId v_done = v;
                st.pop_back();
                if (!st.empty()) {
                    VertexId p = st.back().first;
                    low[p] = std::min(low[p], low[v_done]);
                    if (p != root && low[v_done] >= disc[p]) is_art[p] = 1;
                }
            }
        }
        if (root_children > 1) is_art[root] = 1;

        VertexId cut = -1;
        for (VertexId v = 0; v < ns && cut < 0; ++v)
            if (alive[v] && is_art[v]) cut = v;
        if (cut < 0) break;  // 2-connected

        // components of the live graph minus the cut vertex; keep the largest
        std::vector<std::int32_t> comp(ns, -1);
        std::vector<std::vector<VertexId>> members;
        for (VertexId v0 = 0; v0 < ns; ++v0) {
            if (!alive[v0] || v0 == cut || comp[v0] >= 0) continue;
            const auto id = static_cast<std::int32_t>(members.size());
            members.emplace_back();
            std::vector<VertexId> stack{v0};
            comp[v0] = id;
            while (!stack.empty()) {
                VertexId v = stack.back();
                stack.pop_back();
                members[id].push_back(v);
                for (auto& [w, e] : adj[v])
                    if (alive[w] && edge_alive[e] && w != cut && comp[w] < 0) {
                        comp[w] = id;
                        stack.push_back(w);
                    }
            }
        }
        std::size_t keep = 0;
        for (std::size_t i = 1; i < members.size(); ++i) {
            if (members[i].size() > members[keep].size())
                keep = i;
            else if (members[i].size() == members[keep].size() &&
                     *std::min_element(members[i].begin(), members[i].end()) <
                         *std::min_element(members[keep].begin(), members[keep].end()))
                keep = i;
        }
        for (std::size_t i = 0; i < members.size(); ++i)
            if (i != keep)
                for (VertexId v : members[i]) kill_vertex(v);
    }

    // renumber and rebuild the rotation from surviving darts
    std::vector<VertexId> new_id(ns, -1);
    std::vector<VertexId> orig_vertex;
    std::vector<EdgeId> mid_of;
    for (VertexId v = 0; v < ns; ++v)
        if (alive[v]) {
            new_id[v] = static_cast<VertexId>(orig_vertex.size());
            orig_vertex.push_back(v < n ? v : -1);
            mid_of.push_back(v < n ? -1 : v - n);
        }
    std::vector<EdgeId> new_edge(2 * m, -1);
    std::vector<EdgeId> edge_parent;
    std::vector<double> cond;
    for (EdgeId h = 0; h < 2 * m; ++h)
        if (edge_alive[h]) {
            new_edge[h] = static_cast<EdgeId>(edge_parent.size());
            edge_parent.push_back(h >> 1);
            cond.push_back(net.conductance(h >> 1));
        }
    RotationSystem rot(orig_vertex.size());
    for (VertexId v = 0; v < ns; ++v) {
        if (!alive[v]) continue;
        for (auto& [w, e] : adj[v])
            if (alive[w] && edge_alive[e]) rot[new_id[v]].emplace_back(new_id[w], new_edge[e]);
    }

    // outer face: first dart of the old outer orbit whose subdivided half survives
    OuterFaceHint hint{-1, -1, -1};
    for (DartId d : net.face_darts(net.outer_face())) {
        EdgeId e = PlaneNetwork::dart_edge(d);
        VertexId u = net.dart_origin(d);
        EdgeId half = (d == 2 * e) ? 2 * e : 2 * e + 1;
        if (alive[u] && alive[n + e] && edge_alive[half]) {
            hint = {new_id[u], new_id[n + e], new_edge[half]};
            break;
        }
    }
    if (hint.edge < 0) hint = {0, rot[0].front().first, rot[0].front().second};

    return {PlaneNetwork::from_rotation_system(rot, std::move(cond), hint),
            std::move(orig_vertex), std::move(mid_of), std::move(edge_parent)};
}

struct StarTriangulationResult {
    PlaneNetwork net;
    std::vector<char> is_face_vertex;  // per new vertex
    bool simple = false;               // holds iff the input is polyhedral
};

/**
 * T(G): add a vertex inside every face (the outer face included) joined to the
 * vertices on the face boundary. Original edges keep their ids and
 * conductances; star edges get unit conductance.
 */
inline StarTriangulationResult star_triangulation(const PlaneNetwork& net) {
    const auto n = net.vertex_count();
    const auto m = net.edge_count();
    const auto nf = net.face_count();

    // star edge for the face-orbit position of each dart
    std::vector<EdgeId> star_edge_of_dart(2 * m, -1);
    std::vector<std::int32_t> face_first(nf + 1, 0);
    {
        EdgeId next = m;
        for (FaceId f = 0; f < nf; ++f) {
            face_first[f] = next;
            for (DartId d : net.face_darts(f)) star_edge_of_dart[d] = next++;
            face_first[nf] = next;
        }
    }

    RotationSystem rot(n + nf);
    for (VertexId v = 0; v < n; ++v) {
        rot[v].reserve(2 * net.degree(v));
        for (DartId d : net.darts_of(v)) {
            rot[v].emplace_back(net.dart_head(d), PlaneNetwork::dart_edge(d));
            rot[v].emplace_back(n + net.face_of(d), star_edge_of_dart[d]);
        }
    }
    for (FaceId f = 0; f < nf; ++f) {
        rot[n + f].reserve(net.face_degree(f));
        for (DartId d : net.face_darts(f))
            rot[n + f].emplace_back(net.dart_origin(d), star_edge_of_dart[d]);
    }

    std::vector<double> cond(net.conductances());
    cond.resize(face_first[nf], 1.0);

    DartId d0 = net.face_darts(net.outer_face()).front();
    OuterFaceHint hint{static_cast<VertexId>(n + net.outer_face()), net.dart_origin(d0),
                       star_edge_of_dart[d0]};

    StarTriangulationResult res{PlaneNetwork::from_rotation_system(rot, std::move(cond), hint),
                                std::vector<char>(n + nf, 0), false};
    for (FaceId f = 0; f < nf; ++f) res.is_face_vertex[n + f] = 1;
    res.simple = is_simple(res.net);
    return res;
}

} // namespace usf
