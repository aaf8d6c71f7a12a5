#pragma once

#include "usf/planar_map.hpp"

namespace usf {

struct TessellationSpec {
    std::int32_t p = 3;      // face degree
    std::int32_t q = 7;      // vertex degree
    std::int32_t depth = 1;  // combinatorial radius in rings
    std::int64_t vertex_cap = 2'000'000;
};

namespace detail {

/**
 * Grows a simply connected patch of a triangulation-like tessellation by
 * closing flowers ring by ring. Every rotation list is kept counterclockwise
 * with the outer gap sitting between its last and first entries; each added
 * p-gon fills the gap corner at the current vertex's last neighbor.
 */
class BallBuilder {
public:
    BallBuilder(std::int32_t p, std::int64_t cap) : p_(p), cap_(cap) {}

    // target_degree(ring) gives the flower size for vertices of that ring
    template <typename TargetDegree>
    void grow(std::int32_t depth, TargetDegree target_degree) {
        VertexId root = add_vertex(0);
        std::vector<VertexId> ring{root};
        for (std::int32_t r = 0; r < depth; ++r) {
            const std::size_t before = rot_.size();
            const std::int32_t q = target_degree(r);
            for (VertexId v : ring) close_flower(v, q, r + 1);
            ring.clear();
            for (std::size_t i = before; i < rot_.size(); ++i)
                ring.push_back(static_cast<VertexId>(i));
            if (ring.empty()) throw Error("tessellation ring closed onto itself");
        }
        last_ring_ = std::move(ring);
    }

    PlaneNetwork finish() const {
        VertexId b = last_ring_.front();
        OuterFaceHint hint{b, rot_[b].back().first, rot_[b].back().second};
        std::vector<double> cond(n_edges_, 1.0);
        return PlaneNetwork::from_rotation_system(rot_, std::move(cond), hint, std::nullopt,
                                                  layer_);
    }

private:
    VertexId add_vertex(std::int32_t ring) {
        if (static_cast<std::int64_t>(rot_.size()) >= cap_)
            throw Error("tessellation ball exceeds the vertex cap");
        rot_.emplace_back();
        faces_at_.push_back(0);
        layer_.push_back(ring);
        return static_cast<VertexId>(rot_.size() - 1);
    }

    void close_flower(VertexId v, std::int32_t q, std::int32_t new_ring) {
        if (rot_[v].empty()) first_polygon(v, new_ring);
        const std::int32_t need = q - faces_at_[v];
        if (need < 0) throw Error("tessellation builder: flower overfull (bad p,q schedule)");
        for (std::int32_t j = 1; j <= need; ++j) add_face(v, j == need, new_ring);
    }

    // fresh p-gon around an isolated vertex (the root)
    void first_polygon(VertexId v, std::int32_t new_ring) {
        std::vector<VertexId> z(p_);
        z[0] = v;
        for (std::int32_t i = 1; i < p_; ++i) z[i] = add_vertex(new_ring);
        std::vector<EdgeId> e(p_);
        for (std::int32_t i = 0; i < p_; ++i) e[i] = n_edges_++;
        for (std::int32_t i = 0; i < p_; ++i) {
            const std::int32_t nx = (i + 1) % p_, pv = (i + p_ - 1) % p_;
            rot_[z[i]] = {{z[nx], e[i]}, {z[pv], e[pv]}};
            ++faces_at_[z[i]];
        }
    }

    /*
     * Add the p-gon at the gap corner of v glued along (v, last(v)). Writing
     * the face cycle as z0=v, z1=a=last(v), z2..z_{p-2} fresh, z_{p-1}=v',
     * the updates are:
     *   - v appends v' (unless closing, where v' = first(v) already exists)
     *   - a gets z2 inserted just before v
     *   - fresh arc vertices start as [next-in-cycle, prev-in-cycle]
     *   - an existing v' gets z_{p-2} inserted just after v
     */
    void add_face(VertexId v, bool closing, std::int32_t new_ring) {
        // copy out the gap endpoints: add_vertex below may reallocate rot_
        const VertexId a = rot_[v].back().first;
        const VertexId first_nbr = rot_[v].front().first;
        const EdgeId first_edge = rot_[v].front().second;
        std::vector<VertexId> z(p_);
        z[0] = v;
        z[1] = a;
        for (std::int32_t i = 2; i <= p_ - 2; ++i) z[i] = add_vertex(new_ring);
        z[p_ - 1] = closing ? first_nbr : add_vertex(new_ring);

        // edges e[i] = (z[i], z[i+1]) for i=1..p-2 are fresh; the closing edge
        // (z[p-1], v) exists iff closing
        std::vector<EdgeId> e(p_);
        for (std::int32_t i = 1; i <= p_ - 2; ++i) e[i] = n_edges_++;
        e[p_ - 1] = closing ? first_edge : n_edges_++;

        if (!closing) rot_[v].emplace_back(z[p_ - 1], e[p_ - 1]);
        insert_entry(a, v, z[2], e[1], /*before=*/true);
        for (std::int32_t i = 2; i <= p_ - 2; ++i) {
            rot_[z[i]] = {{z[i + 1], e[i]}, {z[i - 1], e[i - 1]}};
        }
        if (closing) {
            insert_entry(z[p_ - 1], v, z[p_ - 2], e[p_ - 2], /*before=*/false);
        } else if (p_ >= 4) {
            rot_[z[p_ - 1]] = {{v, e[p_ - 1]}, {z[p_ - 2], e[p_ - 2]}};
        } else {
            rot_[z[2]] = {{v, e[2]}, {z[1], e[1]}};
        }
        for (std::int32_t i = 0; i < p_; ++i) ++faces_at_[z[i]];
    }

    void insert_entry(VertexId at, VertexId anchor, VertexId nbr, EdgeId e, bool before) {
        auto& l = rot_[at];
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (l[i].first == anchor) {
                l.insert(l.begin() + static_cast<std::ptrdiff_t>(before ? i : i + 1), {nbr, e});
                return;
            }
        }
        throw Error("tessellation builder: anchor neighbor missing");
    }

    std::int32_t p_;
    std::int64_t cap_;
    EdgeId n_edges_ = 0;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> rot_;
    std::vector<std::int32_t> faces_at_;
    std::vector<std::int32_t> layer_;
    std::vector<VertexId> last_ring_;
};

} // namespace detail

/// Combinatorial ball of the {p,q} tessellation: `depth` face-rings around a
/// root vertex, unit conductances, every interior vertex of degree q and every
/// interior face of degree p.
inline PlaneNetwork tessellation_ball(const TessellationSpec& spec) {
    if (spec.p < 3 || spec.q < 3) throw Error("tessellation needs p,q >= 3");
    if (spec.q == 3)
        throw Error("q = 3 tessellations are not generated directly; build the dual of a {3,p} ball");
    if ((spec.p - 2) * (spec.q - 2) <= 4)
        throw Error("tessellation_ball covers the hyperbolic family only ((p-2)(q-2) > 4)");
    if (spec.depth < 1) throw Error("tessellation depth must be >= 1");
    detail::BallBuilder b(spec.p, spec.vertex_cap);
    b.grow(spec.depth, [&](std::int32_t) { return spec.q; });
    return b.finish();
}

/// Triangulation ball whose vertex degrees follow a ring schedule: a degree-7
/// ring, then band_lengths[k] rings of degree 6 before the next degree-7 ring
/// (the last band length repeats if the schedule runs out). All-zero bands give
/// the pure {3,7} ball.
inline PlaneNetwork layered_triangulation(const std::vector<std::int32_t>& band_lengths,
                                          std::int32_t depth,
                                          std::int64_t vertex_cap = 2'000'000) {
    if (depth < 1) throw Error("layered triangulation depth must be >= 1");
    for (auto b : band_lengths)
        if (b < 0) throw Error("band lengths must be >= 0");
    std::vector<std::int32_t> q_by_ring;
    q_by_ring.reserve(depth);
    std::size_t band = 0;
    while (static_cast<std::int32_t>(q_by_ring.size()) < depth) {
        q_by_ring.push_back(7);
        std::int32_t len = band_lengths.empty()
                               ? 0
                               : band_lengths[std::min(band, band_lengths.size() - 1)];
        ++band;
        for (std::int32_t i = 0; i < len && static_cast<std::int32_t>(q_by_ring.size()) < depth; ++i)
            q_by_ring.push_back(6);
    }
    detail::BallBuilder b(3, vertex_cap);
    b.grow(depth, [&](std::int32_t r) { return q_by_ring[r]; });
    return b.finish();
}

/// Nested-ring drawing of {0,...,n_rings-1} x Z_4: ring edges weight c,
/// radial edges weight 1, outer face beyond the last ring.
inline PlaneNetwork tube(std::int32_t n_rings, double c) {
    if (n_rings < 2) throw Error("tube needs at least 2 rings");
    if (!(c > 0.0) || !std::isfinite(c)) throw Error("tube ring weight must be positive");
    const auto vid = [](std::int32_t i, std::int32_t j) { return 4 * i + ((j % 4) + 4) % 4; };
    const auto ring_edge = [](std::int32_t i, std::int32_t j) { return 4 * i + ((j % 4) + 4) % 4; };
    const auto radial_edge = [&](std::int32_t i, std::int32_t j) {
        return 4 * n_rings + 4 * i + ((j % 4) + 4) % 4;
    };
    RotationSystem rot(4 * n_rings);
    for (std::int32_t i = 0; i < n_rings; ++i)
        for (std::int32_t j = 0; j < 4; ++j) {
            auto& l = rot[vid(i, j)];
            if (i + 1 < n_rings) l.emplace_back(vid(i + 1, j), radial_edge(i, j));
            l.emplace_back(vid(i, j + 1), ring_edge(i, j));
            if (i > 0) l.emplace_back(vid(i - 1, j), radial_edge(i - 1, j));
            l.emplace_back(vid(i, j - 1), ring_edge(i, j - 1));
        }
    std::vector<double> cond(4 * n_rings + 4 * (n_rings - 1));
    for (std::int32_t i = 0; i < n_rings; ++i)
        for (std::int32_t j = 0; j < 4; ++j) cond[ring_edge(i, j)] = c;
    for (std::int32_t i = 0; i + 1 < n_rings; ++i)
        for (std::int32_t j = 0; j < 4; ++j) cond[radial_edge(i, j)] = 1.0;
    OuterFaceHint hint{vid(n_rings - 1, 1), vid(n_rings - 1, 0), ring_edge(n_rings - 1, 0)};
    std::vector<std::int32_t> layers(4 * n_rings);
    for (std::int32_t i = 0; i < n_rings; ++i)
        for (std::int32_t j = 0; j < 4; ++j) layers[vid(i, j)] = i;
    return PlaneNetwork::from_rotation_system(rot, std::move(cond), hint, std::nullopt,
                                              std::move(layers));
}

/// n x n piece of the square lattice, unit weights
inline PlaneNetwork grid_ball(std::int32_t n) {
    if (n < 2) throw Error("grid_ball needs n >= 2");
    const auto vid = [n](std::int32_t x, std::int32_t y) { return y * n + x; };
    const auto h_edge = [n](std::int32_t x, std::int32_t y) { return y * (n - 1) + x; };
    const auto v_edge = [n](std::int32_t x, std::int32_t y) { return n * (n - 1) + y * n + x; };
    RotationSystem rot(n * n);
    for (std::int32_t y = 0; y < n; ++y)
        for (std::int32_t x = 0; x < n; ++x) {
            auto& l = rot[vid(x, y)];
            if (x + 1 < n) l.emplace_back(vid(x + 1, y), h_edge(x, y));
            if (y + 1 < n) l.emplace_back(vid(x, y + 1), v_edge(x, y));
            if (x > 0) l.emplace_back(vid(x - 1, y), h_edge(x - 1, y));
            if (y > 0) l.emplace_back(vid(x, y - 1), v_edge(x, y - 1));
        }
    std::vector<double> cond(2 * n * (n - 1), 1.0);
    OuterFaceHint hint{vid(1, 0), vid(0, 0), h_edge(0, 0)};
    return PlaneNetwork::from_rotation_system(rot, std::move(cond), hint);
}

/**
 * Wired proxy for the infinite tessellation around a ball: generate one ring
 * more and glue it into the boundary vertex, so every deficient boundary
 * vertex of the ball gains its missing edges as parallel edges to the wired
 * boundary.
 */
inline TruncationResult wired_tessellation_ball(const TessellationSpec& spec) {
    TessellationSpec outer = spec;
    outer.depth = spec.depth + 1;
    PlaneNetwork big = tessellation_ball(outer);
    std::vector<char> retained(big.vertex_count(), 0);
    for (VertexId v = 0; v < big.vertex_count(); ++v)
        if (big.vertex_layers()[v] <= spec.depth) retained[v] = 1;
    return wired_truncation(big, retained);
}

} // namespace usf
