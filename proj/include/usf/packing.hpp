#pragma once

#include "usf/hyperbolic.hpp"
#include "usf/planar_map.hpp"

#include <complex>
#include <map>

namespace usf {

enum class PackingModel { euclidean_plane, unit_disc };

struct Circle {
    double x = 0.0, y = 0.0, r = 0.0;
};

struct ResidualReport {
    double tangency = 0.0;       // relative, over primal and interior dual contacts
    double orthogonality = 0.0;  // relative, over vertex-face incidences
    double angle_sum = 0.0;      // absolute, at convergence
    double containment = 0.0;    // disc model: max(|z|+r-1, 0)
    std::int32_t sweeps = 0;
};

/**
 * Double circle packing of a finite plane network: one circle per vertex,
 * one per interior face, edge-tangent and vertex-face orthogonal. The outer
 * face carries no circle; its incident vertices are the boundary. In the
 * euclidean model boundary radii are pinned; in the disc model boundary
 * circles are horocycles (maximal packing).
 */
struct DoublePacking {
    PackingModel model = PackingModel::euclidean_plane;
    FaceId outer_face = 0;
    std::vector<Circle> primal;        // per vertex (horocycles as euclidean circles)
    std::vector<Circle> dual;          // per face; only interior faces are present
    std::vector<char> dual_present;    // per face
    std::vector<char> horocycle;       // per vertex, disc model boundary
    ResidualReport residuals;

    bool is_horocycle(VertexId v) const { return horocycle[v] != 0; }

    /// hyperbolic radius of a primal circle (disc model; +inf on horocycles)
    double hyperbolic_radius(VertexId v) const {
        if (model != PackingModel::unit_disc) throw Error("hyperbolic radius needs the disc model");
        if (horocycle[v]) return std::numeric_limits<double>::infinity();
        return hyperbolic_circle_of({primal[v].x, primal[v].y}, primal[v].r).radius;
    }

    /// hyperbolic centre (disc model); the ideal point for horocycles
    Point hyperbolic_centre(VertexId v) const {
        if (model != PackingModel::unit_disc) throw Error("hyperbolic centre needs the disc model");
        const Circle& c = primal[v];
        if (horocycle[v]) {
            const double m = std::hypot(c.x, c.y);
            return {c.x * (m + c.r) / m, c.y * (m + c.r) / m};  // tangency with the unit circle
        }
        return hyperbolic_circle_of({c.x, c.y}, c.r).centre;
    }
};

struct PackingOptions {
    PackingModel model = PackingModel::unit_disc;
    double boundary_radius = 1.0;          // euclidean pinned value
    std::vector<double> boundary_radii;    // optional per-vertex override (full size)
    double tolerance = 1e-10;              // max angle-sum residual
    std::int32_t max_sweeps = 100'000;
};

namespace detail {

// vertex angle sums reduce to sum_f 2 atan(k_f / s) in both geometries, with
// s = r_v (euclidean) or sinh rho_v (hyperbolic) and k_f = r_f or tanh rho_f
inline double vertex_angle_sum(double s, const std::vector<double>& k) {
    double th = 0.0;
    for (double kf : k) th += 2.0 * std::atan2(kf, s);
    return th;
}

inline double solve_vertex_radius(double s0, const std::vector<double>& k, double target) {
    double lo = s0, hi = s0;
    if (vertex_angle_sum(s0, k) > target) {
        do {
            hi *= 2.0;
        } while (vertex_angle_sum(hi, k) > target && hi < 1e300);
        lo = hi / 2.0;
    } else {
        do {
            lo *= 0.5;
        } while (vertex_angle_sum(lo, k) < target && lo > 1e-300);
        hi = lo * 2.0;
    }
    // Newton polished inside the bracket
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double f = vertex_angle_sum(s, k) - target;
        if (f > 0)
            lo = s;
        else
            hi = s;
        double df = 0.0;
        for (double kf : k) df += -2.0 * kf / (s * s + kf * kf);
        double step = f / df;
        double next = s - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-16 * s) return next;
        s = next;
    }
    return s;
}

struct Petal {
    double value = 0.0;  // r (euclidean) or rho (hyperbolic)
    bool horo = false;
};

inline double face_corner_angle_euclid(double rf, double ri, double rj) {
    const double b = std::sqrt(rf * rf + ri * ri);
    const double c = std::sqrt(rf * rf + rj * rj);
    const double cosv = (rf * rf - ri * rj) / (b * c);
    return std::acos(std::clamp(cosv, -1.0, 1.0));
}

inline double face_corner_angle_hyp(double rho_f, const Petal& i, const Petal& j) {
    const double cf = std::cosh(rho_f);
    double cosv;
    if (!i.horo && !j.horo) {
        const double ci = std::cosh(i.value), cj = std::cosh(j.value);
        const double num = cf * cf * ci * cj - std::cosh(i.value + j.value);
        const double den = std::sqrt(cf * cf * ci * ci - 1.0) * std::sqrt(cf * cf * cj * cj - 1.0);
        cosv = num / den;
    } else if (i.horo && j.horo) {
        cosv = 1.0 - 2.0 / (cf * cf);
    } else {
        const double rho = i.horo ? j.value : i.value;  // the finite one
        const double cj = std::cosh(rho);
        const double num = cf * cf * cj - std::exp(rho);
        const double den = cf * std::sqrt(cf * cf * cj * cj - 1.0);
        cosv = num / den;
    }
    return std::acos(std::clamp(cosv, -1.0, 1.0));
}

inline double face_angle_sum(double x, const std::vector<std::pair<Petal, Petal>>& corners,
                             bool hyperbolic) {
    double th = 0.0;
    for (const auto& [a, b] : corners)
        th += hyperbolic ? face_corner_angle_hyp(x, a, b)
                         : face_corner_angle_euclid(x, a.value, b.value);
    return th;
}

inline double solve_face_radius(double x0, const std::vector<std::pair<Petal, Petal>>& corners,
                                bool hyperbolic, double target) {
    double lo = x0, hi = x0;
    if (face_angle_sum(x0, corners, hyperbolic) > target) {
        do {
            hi *= 2.0;
        } while (face_angle_sum(hi, corners, hyperbolic) > target && hi < 1e300);
        lo = hi / 2.0;
    } else {
        do {
            lo *= 0.5;
        } while (face_angle_sum(lo, corners, hyperbolic) < target && lo > 1e-300);
        hi = lo * 2.0;
    }
    double x = 0.5 * (lo + hi);
    double fx = face_angle_sum(x, corners, hyperbolic) - target;
    for (int it = 0; it < 80; ++it) {
        if (fx > 0)
            lo = x;
        else
            hi = x;
        // secant step against a nearby sample, bisection fallback
        const double x2 = 0.5 * (lo + hi);
        const double f2 = face_angle_sum(x2, corners, hyperbolic) - target;
        double next;
        if (f2 != fx) {
            next = x2 - f2 * (x2 - x) / (f2 - fx);
            if (!(next > lo && next < hi)) next = x2;
        } else {
            next = x2;
        }
        if (std::abs(next - x) <= 1e-16 * std::abs(x)) return next;
        x = next;
        fx = face_angle_sum(x, corners, hyperbolic) - target;
        if (hi - lo <= 1e-16 * hi) break;
    }
    return x;
}

struct PackingProblem {
    const PlaneNetwork* net;
    bool hyperbolic;
    FaceId outer;
    std::vector<char> on_boundary;     // vertices on the outer face
    std::vector<double> vrad;          // r or rho per vertex (unused at horocycles)
    std::vector<char> vhoro;           // disc model boundary flag
    std::vector<double> frad;          // per face, interior only
    std::vector<std::vector<FaceId>> vertex_faces;  // interior faces around each vertex
};

// one Gauss-Seidel sweep of exact per-coordinate angle solves;
// returns the max angle-sum residual before the update
inline double sweep(PackingProblem& p) {
    const auto& net = *p.net;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double resid = 0.0;
    std::vector<double> k;
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
        if (p.vhoro[v]) continue;
        if (!p.hyperbolic && p.on_boundary[v]) continue;  // pinned
        k.clear();
        for (FaceId f : p.vertex_faces[v])
            k.push_back(p.hyperbolic ? std::tanh(p.frad[f]) : p.frad[f]);
        const double s = p.hyperbolic ? std::sinh(p.vrad[v]) : p.vrad[v];
        resid = std::max(resid, std::abs(vertex_angle_sum(s, k) - two_pi));
        const double s_new = solve_vertex_radius(s, k, two_pi);
        p.vrad[v] = p.hyperbolic ? std::asinh(s_new) : s_new;
    }
    std::vector<std::pair<Petal, Petal>> corners;
    for (FaceId f = 0; f < net.face_count(); ++f) {
        if (f == p.outer) continue;
        corners.clear();
        for (DartId d : net.face_darts(f)) {
            VertexId u = net.dart_origin(d);
            VertexId w = net.dart_head(d);
            corners.push_back({{p.vrad[u], p.vhoro[u] != 0}, {p.vrad[w], p.vhoro[w] != 0}});
        }
        resid = std::max(resid,
                         std::abs(face_angle_sum(p.frad[f], corners, p.hyperbolic) - two_pi));
        p.frad[f] = solve_face_radius(p.frad[f], corners, p.hyperbolic, two_pi);
    }
    return resid;
}

} // namespace detail

namespace detail {

using Cpx = std::complex<double>;

struct Layout {
    // node = vertex id, or V + face id; positions are euclidean centres in the
    // plane model and hyperbolic centres (Poincare coordinates) in the disc
    // model; horocyclic nodes hold their ideal boundary point
    std::vector<Cpx> pos;
    std::vector<char> placed;
};

inline Cpx mobius_to_origin(Cpx x, Cpx w) { return (w - x) / (1.0 - std::conj(x) * w); }
inline Cpx mobius_from_origin(Cpx x, Cpx w) { return (w + x) / (1.0 + std::conj(x) * w); }

struct TrianglePlacer {
    const PlaneNetwork* net;
    const PackingProblem* prob;
    Layout* lay;

    std::int32_t node_of_vertex(VertexId v) const { return v; }
    std::int32_t node_of_face(FaceId f) const { return net->vertex_count() + f; }

    bool finite_node(std::int32_t node) const {
        return node >= net->vertex_count() || !prob->vhoro[node];
    }

    // centre-to-centre distance in the governing geometry
    double dist(std::int32_t a, std::int32_t b) const {
        const auto V = net->vertex_count();
        const bool hyp = prob->hyperbolic;
        if (a > b) std::swap(a, b);
        if (b < V) {  // vertex-vertex (tangent)
            return prob->vrad[a] + prob->vrad[b];
        }
        if (a < V) {  // vertex-face (orthogonal)
            const double rv = prob->vrad[a], rf = prob->frad[b - V];
            return hyp ? std::acosh(std::cosh(rv) * std::cosh(rf))
                       : std::sqrt(rv * rv + rf * rf);
        }
        throw Error("internal: face-face distance not needed");
    }

    // interior angle of the corner triangle of dart d at one of its nodes
    double angle_at(DartId d, std::int32_t node) const {
        const auto V = net->vertex_count();
        const VertexId v = net->dart_origin(d), u = net->dart_head(d);
        const FaceId f = net->face_of(d);
        const bool hyp = prob->hyperbolic;
        if (node >= V) {
            Petal a{prob->vrad[v], prob->vhoro[v] != 0};
            Petal b{prob->vrad[u], prob->vhoro[u] != 0};
            return hyp ? face_corner_angle_hyp(prob->frad[f], a, b)
                       : face_corner_angle_euclid(prob->frad[f], a.value, b.value);
        }
        const double k = hyp ? std::tanh(prob->frad[f]) : prob->frad[f];
        const double s = hyp ? std::sinh(prob->vrad[node]) : prob->vrad[node];
        return std::atan2(k, s);
    }

    Cpx direction(std::int32_t from, std::int32_t to) const {
        if (!prob->hyperbolic) {
            Cpx d = lay->pos[to] - lay->pos[from];
            return d / std::abs(d);
        }
        Cpx d = mobius_to_origin(lay->pos[from], lay->pos[to]);
        return d / std::abs(d);
    }

    void put(std::int32_t node, std::int32_t pivot, Cpx dir, double angle_sign, double angle) {
        const Cpx rot = std::polar(1.0, angle_sign * angle) * dir;
        if (!prob->hyperbolic) {
            lay->pos[node] = lay->pos[pivot] + rot * dist(pivot, node);
        } else if (!finite_node(node)) {
            lay->pos[node] = mobius_from_origin(lay->pos[pivot], rot);  // ideal point
        } else {
            const double t = std::tanh(dist(pivot, node) / 2.0);
            lay->pos[node] = mobius_from_origin(lay->pos[pivot], rot * t);
        }
        lay->placed[node] = 1;
    }

    /*
     * Place the missing corner of the triangle of dart d, whose nodes in
     * counterclockwise cyclic order are (v, u, f). Rotating by the interior
     * angle at a pivot maps the ray toward the cyclic successor onto the ray
     * toward the predecessor. The pivot must be a finite placed node.
     */
    bool complete(DartId d) {
        std::int32_t nodes[3] = {node_of_vertex(net->dart_origin(d)),
                                 node_of_vertex(net->dart_head(d)),
                                 node_of_face(net->face_of(d))};
        int missing = -1, n_placed = 0;
        for (int i = 0; i < 3; ++i) {
            if (lay->placed[nodes[i]])
                ++n_placed;
            else
                missing = i;
        }
        if (n_placed == 3) return true;
        if (n_placed < 2) return false;
        const int succ = (missing + 1) % 3, pred = (missing + 2) % 3;
        // pivots: succ rotates backward (-angle) toward its predecessor =
        // missing; pred rotates forward (+angle) toward its successor
        for (auto [pivot, other, sign] :
             {std::tuple{nodes[pred], nodes[succ], +1.0}, {nodes[succ], nodes[pred], -1.0}}) {
            if (!finite_node(pivot)) continue;
            const double ang = angle_at(d, pivot);
            put(nodes[missing], pivot, direction(pivot, other), sign, ang);
            return true;
        }
        return false;
    }
};

} // namespace detail

inline DoublePacking solve_double_packing(const PlaneNetwork& net, const PackingOptions& opt) {
    if (!is_internally_polyhedral(net))
        throw Error("double packing needs a simple, (internally) 3-connected plane network");

    detail::PackingProblem p;
    p.net = &net;
    p.hyperbolic = (opt.model == PackingModel::unit_disc);
    p.outer = net.outer_face();
    const auto V = net.vertex_count();
    const auto F = net.face_count();
    p.on_boundary.assign(V, 0);
    for (DartId d : net.face_darts(p.outer)) p.on_boundary[net.dart_origin(d)] = 1;
    p.vhoro.assign(V, 0);
    p.vrad.assign(V, 1.0);
    if (p.hyperbolic) {
        for (VertexId v = 0; v < V; ++v) p.vhoro[v] = p.on_boundary[v];
    } else {
        if (!opt.boundary_radii.empty() && static_cast<std::int32_t>(opt.boundary_radii.size()) != V)
            throw Error("boundary_radii must have one entry per vertex");
        for (VertexId v = 0; v < V; ++v)
            if (p.on_boundary[v])
                p.vrad[v] = opt.boundary_radii.empty() ? opt.boundary_radius
                                                       : opt.boundary_radii[v];
        for (VertexId v = 0; v < V; ++v)
            if (p.on_boundary[v] && !(p.vrad[v] > 0.0))
                throw Error("pinned boundary radii must be positive");
    }
    p.frad.assign(F, 1.0);
    p.vertex_faces.assign(V, {});
    for (VertexId v = 0; v < V; ++v)
        for (DartId d : net.darts_of(v))
            if (net.face_of(d) != p.outer) p.vertex_faces[v].push_back(net.face_of(d));

    double resid = std::numeric_limits<double>::infinity();
    std::int32_t sweeps = 0;
    while (sweeps < opt.max_sweeps) {
        resid = detail::sweep(p);
        ++sweeps;
        if (resid < opt.tolerance) break;
    }
    if (resid >= opt.tolerance)
        throw Error("packing iteration did not converge: angle residual " +
                    std::to_string(resid) + " after " + std::to_string(sweeps) + " sweeps");

    // breadth-first placement over corner triangles from a deterministic seed
    detail::Layout lay;
    lay.pos.assign(V + F, {0.0, 0.0});
    lay.placed.assign(V + F, 0);
    detail::TrianglePlacer placer{&net, &p, &lay};

    DartId seed = -1;
    for (DartId d = 0; d < net.dart_count() && seed < 0; ++d)
        if (net.face_of(d) != p.outer && !p.on_boundary[net.dart_origin(d)]) seed = d;
    for (DartId d = 0; d < net.dart_count() && seed < 0; ++d)
        if (net.face_of(d) != p.outer) seed = d;
    if (seed < 0) throw Error("no interior face to seed the layout");
    {
        const VertexId v0 = net.dart_origin(seed);
        const FaceId f0 = net.face_of(seed);
        const auto fnode = placer.node_of_face(f0);
        lay.pos[fnode] = {0.0, 0.0};
        lay.placed[fnode] = 1;
        if (placer.finite_node(v0)) {
            const double dd = placer.dist(fnode, v0);
            lay.pos[v0] = p.hyperbolic ? detail::Cpx(std::tanh(dd / 2.0), 0.0)
                                       : detail::Cpx(dd, 0.0);
        } else {
            lay.pos[v0] = {1.0, 0.0};
        }
        lay.placed[v0] = 1;
        if (!placer.complete(seed)) throw Error("internal: seed triangle placement failed");
    }
    {
        std::vector<char> queued(net.dart_count(), 0);
        std::vector<DartId> queue{seed};
        queued[seed] = 1;
        std::size_t head = 0;
        std::vector<DartId> deferred;
        while (head < queue.size()) {
            DartId d = queue[head++];
            if (!placer.complete(d)) {
                deferred.push_back(d);
                if (deferred.size() > queue.size() + net.dart_count())
                    throw Error("layout stalled: could not place every circle");
                continue;
            }
            const DartId nbrs[3] = {PlaneNetwork::dart_reversal(d), net.face_next(d),
                                    PlaneNetwork::dart_reversal(net.next_around_origin(d))};
            for (DartId nd : nbrs) {
                if (net.face_of(nd) == p.outer || queued[nd]) continue;
                queued[nd] = 1;
                queue.push_back(nd);
            }
            if (head == queue.size() && !deferred.empty()) {
                for (DartId dd : deferred) queue.push_back(dd);
                deferred.clear();
            }
        }
        for (std::int32_t nd = 0; nd < V + F; ++nd) {
            const bool needed = nd < V || (nd - V != p.outer);
            if (needed && !lay.placed[nd]) throw Error("layout incomplete: unreachable circle");
        }
    }

    DoublePacking out;
    out.model = opt.model;
    out.outer_face = p.outer;
    out.primal.resize(V);
    out.dual.resize(F);
    out.dual_present.assign(F, 0);
    out.horocycle.assign(V, 0);
    if (!p.hyperbolic) {
        for (VertexId v = 0; v < V; ++v)
            out.primal[v] = {lay.pos[v].real(), lay.pos[v].imag(), p.vrad[v]};
        for (FaceId f = 0; f < F; ++f)
            if (f != p.outer) {
                const auto nd = placer.node_of_face(f);
                out.dual[f] = {lay.pos[nd].real(), lay.pos[nd].imag(), p.frad[f]};
                out.dual_present[f] = 1;
            }
    } else {
        auto to_euclid = [](detail::Cpx centre, double rho) {
            const double m = std::abs(centre);
            const double d = disc_distance_from_origin(m);
            const double e_far = std::tanh((d + rho) / 2.0);
            const double e_near = std::tanh((d - rho) / 2.0);
            const double r = 0.5 * (e_far - e_near);
            const double c = 0.5 * (e_far + e_near);
            detail::Cpx dir = (m > 0) ? centre / m : detail::Cpx(1.0, 0.0);
            return Circle{c * dir.real(), c * dir.imag(), r};
        };
        for (VertexId v = 0; v < V; ++v)
            if (!p.vhoro[v]) out.primal[v] = to_euclid(lay.pos[v], p.vrad[v]);
        for (FaceId f = 0; f < F; ++f)
            if (f != p.outer) {
                out.dual[f] = to_euclid(lay.pos[placer.node_of_face(f)], p.frad[f]);
                out.dual_present[f] = 1;
            }
        // horocycles: ideal point plus tangency to a finite placed neighbour
        for (VertexId v = 0; v < V; ++v) {
            if (!p.vhoro[v]) continue;
            out.horocycle[v] = 1;
            const detail::Cpx xi = lay.pos[v] / std::abs(lay.pos[v]);
            double k = -1.0;
            for (DartId d : net.darts_of(v)) {
                VertexId u = net.dart_head(d);
                if (p.vhoro[u]) continue;
                const Circle& cu = out.primal[u];
                const double dot = xi.real() * cu.x + xi.imag() * cu.y;
                const double den = 2.0 * (1.0 - dot + cu.r);
                k = (1.0 - 2.0 * dot + cu.x * cu.x + cu.y * cu.y - cu.r * cu.r) / den;
                break;
            }
            if (k < 0.0) {
                for (DartId d : net.darts_of(v)) {
                    FaceId f = net.face_of(d);
                    if (f == p.outer) continue;
                    const Circle& cf = out.dual[f];
                    const double dot = xi.real() * cf.x + xi.imag() * cf.y;
                    k = (1.0 - 2.0 * dot + cf.x * cf.x + cf.y * cf.y - cf.r * cf.r) /
                        (2.0 * (1.0 - dot));
                    break;
                }
            }
            if (!(k > 0.0)) throw Error("horocycle sizing failed");
            out.primal[v] = {(1.0 - k) * xi.real(), (1.0 - k) * xi.imag(), k};
        }
    }

    // residual report over the realized euclidean circles
    ResidualReport rep;
    rep.sweeps = sweeps;
    rep.angle_sum = resid;
    auto tangency = [](const Circle& a, const Circle& b) {
        const double dist = std::hypot(a.x - b.x, a.y - b.y);
        return std::abs(dist - (a.r + b.r)) / (a.r + b.r);
    };
    auto orthogonality = [](const Circle& a, const Circle& b) {
        const double d2 = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
        return std::abs(d2 - a.r * a.r - b.r * b.r) / (a.r * a.r + b.r * b.r);
    };
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        auto [u, w] = net.edge_endpoints(e);
        rep.tangency = std::max(rep.tangency, tangency(out.primal[u], out.primal[w]));
        const FaceId fl = net.face_of(2 * e), fr = net.face_of(2 * e + 1);
        if (fl != p.outer && fr != p.outer)
            rep.tangency = std::max(rep.tangency, tangency(out.dual[fl], out.dual[fr]));
    }
    for (VertexId v = 0; v < V; ++v)
        for (DartId d : net.darts_of(v)) {
            const FaceId f = net.face_of(d);
            if (f == p.outer) continue;
            rep.orthogonality =
                std::max(rep.orthogonality, orthogonality(out.primal[v], out.dual[f]));
        }
    if (p.hyperbolic) {
        for (VertexId v = 0; v < V; ++v)
            rep.containment = std::max(
                rep.containment, std::hypot(out.primal[v].x, out.primal[v].y) + out.primal[v].r - 1.0);
        for (FaceId f = 0; f < F; ++f)
            if (out.dual_present[f])
                rep.containment = std::max(
                    rep.containment, std::hypot(out.dual[f].x, out.dual[f].y) + out.dual[f].r - 1.0);
    }
    out.residuals = rep;
    return out;
}

namespace detail {

inline Circle circumcircle(Cpx a, Cpx b, Cpx c) {
    const double ax = a.real(), ay = a.imag();
    const double bx = b.real(), by = b.imag();
    const double cx = c.real(), cy = c.imag();
    const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (d == 0.0) throw Error("circumcircle of collinear points");
    const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    const double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    const double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    return {ux, uy, std::hypot(ax - ux, ay - uy)};
}

inline Circle map_circle_disc(const Circle& c, Cpx t, double rot) {
    auto mob = [&](Cpx w) {
        Cpx m = (w - t) / (1.0 - std::conj(t) * w);
        return std::polar(1.0, rot) * m;
    };
    const Cpx z{c.x, c.y};
    return circumcircle(mob(z + Cpx{c.r, 0.0}), mob(z + Cpx{0.0, c.r}), mob(z - Cpx{c.r, 0.0}));
}

} // namespace detail

/**
 * Normalize the packing at an edge (x, y): move the tangency point of the two
 * circles to the origin and rotate so the centre of x sits on the negative
 * real axis and y on the positive one. Disc automorphism in the disc model,
 * similarity in the plane model; all contacts are preserved.
 */
inline DoublePacking mobius_normalize(const DoublePacking& packing, const PlaneNetwork& net,
                                      EdgeId edge) {
    if (edge < 0 || edge >= net.edge_count()) throw Error("mobius_normalize: bad edge");
    auto [x, y] = net.edge_endpoints(edge);
    const Circle cx = packing.primal[x];
    const Circle cy = packing.primal[y];
    const double gap = std::hypot(cy.x - cx.x, cy.y - cx.y);
    const detail::Cpx tang{cx.x + cx.r * (cy.x - cx.x) / gap, cx.y + cx.r * (cy.y - cx.y) / gap};

    DoublePacking out = packing;
    if (packing.model == PackingModel::euclidean_plane) {
        const double phi = std::atan2(cy.y - cx.y, cy.x - cx.x);
        auto apply = [&](Circle& c) {
            const detail::Cpx z = (detail::Cpx{c.x, c.y} - tang) * std::polar(1.0, -phi);
            c.x = z.real();
            c.y = z.imag();
        };
        for (auto& c : out.primal) apply(c);
        for (FaceId f = 0; f < static_cast<FaceId>(out.dual.size()); ++f)
            if (out.dual_present[f]) apply(out.dual[f]);
        return out;
    }
    // disc: move the tangency point to the origin, then rotate exactly; the
    // rotation angle comes from the translated circle of x, since a Mobius map
    // does not send centres to centres
    auto translate = [&](Circle& c) { c = detail::map_circle_disc(c, tang, 0.0); };
    for (auto& c : out.primal) translate(c);
    for (FaceId f = 0; f < static_cast<FaceId>(out.dual.size()); ++f)
        if (out.dual_present[f]) translate(out.dual[f]);
    const double phi = std::numbers::pi - std::atan2(out.primal[x].y, out.primal[x].x);
    const double cph = std::cos(phi), sph = std::sin(phi);
    auto rotate = [&](Circle& c) {
        const double nx = cph * c.x - sph * c.y;
        const double ny = sph * c.x + cph * c.y;
        c.x = nx;
        c.y = ny;
    };
    for (auto& c : out.primal) rotate(c);
    for (FaceId f = 0; f < static_cast<FaceId>(out.dual.size()); ++f)
        if (out.dual_present[f]) rotate(out.dual[f]);
    return out;
}

/// per-vertex view of the disc-model geometry
struct HyperbolicStats {
    double sigma = 0.0;             // 1 - |z(v)|, euclidean gap to the unit circle
    double radius = 0.0;            // hyperbolic radius (inf on horocycles)
    double area = 0.0;              // 4 pi sinh^2(radius / 2)
    Point centre{0.0, 0.0};         // hyperbolic centre; ideal point on horocycles
};

inline HyperbolicStats hyperbolic_stats(const DoublePacking& p, VertexId v) {
    HyperbolicStats st;
    st.sigma = 1.0 - std::hypot(p.primal[v].x, p.primal[v].y);
    st.radius = p.hyperbolic_radius(v);
    st.area = p.is_horocycle(v) ? std::numeric_limits<double>::infinity()
                                : hyperbolic_disc_area(st.radius);
    st.centre = p.hyperbolic_centre(v);
    return st;
}

/// hyperbolic area of the union of the primal circles over A (disjoint
/// interiors); +inf when A touches a boundary horocycle
inline double hyperbolic_area(const DoublePacking& p, const std::vector<VertexId>& a) {
    double sum = 0.0;
    for (VertexId v : a) {
        if (p.is_horocycle(v)) return std::numeric_limits<double>::infinity();
        sum += hyperbolic_disc_area(p.hyperbolic_radius(v));
    }
    return sum;
}

/// hyperbolic diameter of the set of hyperbolic centres over A; exact pairwise
/// scan up to 2000 points, multi-seed farthest-point refinement above
inline double hyperbolic_diam(const DoublePacking& p, const std::vector<VertexId>& a) {
    if (a.empty()) return 0.0;
    for (VertexId v : a)
        if (p.is_horocycle(v)) return std::numeric_limits<double>::infinity();
    std::vector<Point> pts;
    pts.reserve(a.size());
    for (VertexId v : a) pts.push_back(p.hyperbolic_centre(v));
    const std::size_t n = pts.size();
    if (n <= 2000) {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                best = std::max(best, disc_distance(pts[i], pts[j]));
        return best;
    }
    double best = 0.0;
    for (std::size_t seed : {std::size_t{0}, n / 3, 2 * n / 3}) {
        std::size_t cur = seed;
        for (int round = 0; round < 8; ++round) {
            double far = -1.0;
            std::size_t arg = cur;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = disc_distance(pts[cur], pts[j]);
                if (d > far) {
                    far = d;
                    arg = j;
                }
            }
            if (far <= best) break;
            best = far;
            cur = arg;
        }
    }
    return best;
}

struct RingAudit {
    std::map<std::pair<std::int32_t, std::int32_t>, double> vertex_face;    // (deg v, deg f)
    std::map<std::pair<std::int32_t, std::int32_t>, double> vertex_vertex;  // (deg v, deg u)
    double max_vertex_face = 0.0;
    double max_vertex_vertex = 0.0;
};

/// maxima of the adjacent euclidean radius ratios r(v)/r(f) and r(v)/r(u),
/// reported per (degree, codegree) class; interior circles only by default
inline RingAudit ring_audit(const DoublePacking& p, const PlaneNetwork& net,
                            bool interior_only = true) {
    RingAudit audit;
    std::vector<char> boundary(net.vertex_count(), 0);
    for (DartId d : net.face_darts(net.outer_face())) boundary[net.dart_origin(d)] = 1;
    auto usable = [&](VertexId v) {
        return !p.is_horocycle(v) && (!interior_only || !boundary[v]);
    };
    auto bump = [](std::map<std::pair<std::int32_t, std::int32_t>, double>& m,
                   std::pair<std::int32_t, std::int32_t> key, double val) {
        auto it = m.find(key);
        if (it == m.end())
            m[key] = val;
        else
            it->second = std::max(it->second, val);
    };
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
        if (!usable(v)) continue;
        for (DartId d : net.darts_of(v)) {
            const FaceId f = net.face_of(d);
            if (f != net.outer_face() && p.dual_present[f]) {
                const double ratio = p.primal[v].r / p.dual[f].r;
                bump(audit.vertex_face, {net.degree(v), net.face_degree(f)}, ratio);
                audit.max_vertex_face = std::max(audit.max_vertex_face, ratio);
            }
            const VertexId u = net.dart_head(d);
            if (usable(u)) {
                const double ratio = p.primal[v].r / p.primal[u].r;
                bump(audit.vertex_vertex, {net.degree(v), net.degree(u)}, ratio);
                audit.max_vertex_vertex = std::max(audit.max_vertex_vertex, ratio);
            }
        }
    }
    return audit;
}

} // namespace usf
