#pragma once

#include "usf/planar_map.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace usf {

enum class ResistanceMode { plain, free_proxy, wired };

struct ResistanceQuery {
    std::vector<VertexId> source;  // A
    std::vector<VertexId> target;  // B
    ResistanceMode mode = ResistanceMode::plain;
};

namespace detail {

/**
 * Solve the discrete Dirichlet problem: potential fixed on the given vertices,
 * harmonic (conductance-weighted) everywhere else. `dropped` marks vertices
 * removed from the network entirely (used for the free proxy); their entries
 * come back as NaN. Parallel edges merge by conductance summation here.
 */
inline std::vector<double> harmonic_potential(const PlaneNetwork& net,
                                              const std::vector<std::pair<VertexId, double>>& fixed,
                                              const std::vector<char>& dropped = {}) {
    const auto n = net.vertex_count();
    std::vector<double> phi(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> is_fixed(n, 0);
    for (auto [v, val] : fixed) {
        if (v < 0 || v >= n) throw Error("potential fixed at invalid vertex");
        if (!dropped.empty() && dropped[v]) throw Error("potential fixed at a dropped vertex");
        is_fixed[v] = 1;
        phi[v] = val;
    }
    auto alive = [&](VertexId v) { return dropped.empty() || !dropped[v]; };

    std::vector<std::int32_t> idx(n, -1);
    std::int32_t n_unknown = 0;
    for (VertexId v = 0; v < n; ++v)
        if (alive(v) && !is_fixed[v]) idx[v] = n_unknown++;
    if (n_unknown == 0) return phi;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(net.edge_count()) * 4 + n_unknown);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknown);
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        auto [u, w] = net.edge_endpoints(e);
        if (u == w) continue;
        if (!alive(u) || !alive(w)) continue;
        const double c = net.conductance(e);
        if (idx[u] >= 0) {
            trip.emplace_back(idx[u], idx[u], c);
            if (idx[w] >= 0)
                trip.emplace_back(idx[u], idx[w], -c);
            else
                rhs[idx[u]] += c * phi[w];
        }
        if (idx[w] >= 0) {
            trip.emplace_back(idx[w], idx[w], c);
            if (idx[u] >= 0)
                trip.emplace_back(idx[w], idx[u], -c);
            else
                rhs[idx[w]] += c * phi[u];
        }
    }
    Eigen::SparseMatrix<double> lap(n_unknown, n_unknown);
    lap.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(lap);
    if (solver.info() != Eigen::Success) throw Error("Dirichlet solve: factorization failed");
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw Error("Dirichlet solve failed");
    // one step of iterative refinement; the acceptance tolerances sit at 1e-8
    Eigen::VectorXd r = rhs - lap * x;
    x += solver.solve(r);
    for (VertexId v = 0; v < n; ++v)
        if (idx[v] >= 0) phi[v] = x[idx[v]];
    return phi;
}

inline void check_sets(const PlaneNetwork& net, const std::vector<VertexId>& a,
                       const std::vector<VertexId>& b) {
    if (a.empty() || b.empty()) throw Error("resistance query needs nonempty source and target");
    std::vector<char> in_a(net.vertex_count(), 0);
    for (VertexId v : a) {
        if (v < 0 || v >= net.vertex_count()) throw Error("vertex id out of range");
        in_a[v] = 1;
    }
    for (VertexId v : b) {
        if (v < 0 || v >= net.vertex_count()) throw Error("vertex id out of range");
        if (in_a[v]) throw Error("source and target sets must be disjoint");
    }
}

} // namespace detail

/**
 * Effective resistance between the query's source and target sets, through the
 * harmonic potential (1 on A, 0 on B). Wired mode adds the boundary vertex to
 * the target; the free proxy removes the boundary vertex from the network.
 */
inline double effective_resistance(const PlaneNetwork& net, const ResistanceQuery& query) {
    detail::check_sets(net, query.source, query.target);
    if (query.mode == ResistanceMode::plain || query.mode == ResistanceMode::free_proxy) {
        // resistance is symmetric; canonicalize the role assignment so that
        // R(A,B) and R(B,A) run the identical linear system
        auto key = [](std::vector<VertexId> s) {
            std::sort(s.begin(), s.end());
            return s;
        };
        if (key(query.target) < key(query.source))
            return effective_resistance(net, {query.target, query.source, query.mode});
    }
    std::vector<VertexId> targets = query.target;
    std::vector<char> dropped;
    if (query.mode == ResistanceMode::wired) {
        if (!net.boundary_vertex()) throw Error("wired mode needs a boundary vertex");
        VertexId b = *net.boundary_vertex();
        if (std::find(targets.begin(), targets.end(), b) == targets.end()) targets.push_back(b);
        for (VertexId v : query.source)
            if (v == b) throw Error("source contains the boundary vertex");
    } else if (query.mode == ResistanceMode::free_proxy) {
        if (net.boundary_vertex()) {
            dropped.assign(net.vertex_count(), 0);
            dropped[*net.boundary_vertex()] = 1;
            for (VertexId v : query.source)
                if (dropped[v]) throw Error("source contains the boundary vertex");
            for (VertexId v : targets)
                if (dropped[v]) throw Error("target contains the boundary vertex");
        }
    }

    // reachability: the target must be reachable from the source in the working graph
    {
        std::vector<char> vis(net.vertex_count(), 0);
        std::vector<VertexId> stack(query.source.begin(), query.source.end());
        for (VertexId v : stack) vis[v] = 1;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (DartId d : net.darts_of(v)) {
                VertexId w = net.dart_head(d);
                if ((dropped.empty() || !dropped[w]) && !vis[w]) {
                    vis[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        bool reach = false;
        for (VertexId v : targets) reach = reach || vis[v];
        if (!reach) throw Error("target set unreachable from source");
    }

    std::vector<std::pair<VertexId, double>> fixed;
    for (VertexId v : query.source) fixed.emplace_back(v, 1.0);
    for (VertexId v : targets) fixed.emplace_back(v, 0.0);
    auto phi = detail::harmonic_potential(net, fixed, dropped);

    std::vector<char> in_a(net.vertex_count(), 0);
    for (VertexId v : query.source) in_a[v] = 1;
    double current = 0.0;
    for (VertexId v : query.source)
        for (DartId d : net.darts_of(v)) {
            VertexId w = net.dart_head(d);
            if (w == v || in_a[w]) continue;
            if (!dropped.empty() && dropped[w]) continue;
            current += net.conductance(PlaneNetwork::dart_edge(d)) * (1.0 - phi[w]);
        }
    if (!(current > 0.0)) throw Error("effective conductance vanished");
    return 1.0 / current;
}

/// probability that the walk from v reaches B before C (0 if unreachable)
inline double hitting_probability(const PlaneNetwork& net, VertexId v,
                                  const std::vector<VertexId>& hit_set,
                                  const std::vector<VertexId>& avoid_set) {
    detail::check_sets(net, hit_set, avoid_set);
    for (VertexId u : hit_set)
        if (u == v) return 1.0;
    for (VertexId u : avoid_set)
        if (u == v) return 0.0;
    std::vector<std::pair<VertexId, double>> fixed;
    for (VertexId u : hit_set) fixed.emplace_back(u, 1.0);
    for (VertexId u : avoid_set) fixed.emplace_back(u, 0.0);
    auto phi = detail::harmonic_potential(net, fixed);
    return phi[v];
}

/// P_v(tau_boundary < tau_v^+) = C_eff(v <-> boundary) / c(v)
inline double escape_probability(const PlaneNetwork& net, VertexId v) {
    if (!net.boundary_vertex()) throw Error("escape probability needs a wired truncation");
    VertexId b = *net.boundary_vertex();
    if (v == b) throw Error("escape probability queried at the boundary vertex");
    ResistanceQuery q{{v}, {b}, ResistanceMode::plain};
    double reff = effective_resistance(net, q);
    return 1.0 / (reff * net.vertex_conductance(v));
}

/// UST_G(e in T) = c(e) R_eff(e- <-> e+); the wired marginal when the network
/// carries a boundary vertex
inline double kirchhoff_marginal(const PlaneNetwork& net, EdgeId e) {
    if (e < 0 || e >= net.edge_count()) throw Error("edge id out of range");
    if (net.is_loop_edge(e)) throw Error("Kirchhoff marginal undefined for loop edges");
    auto [u, w] = net.edge_endpoints(e);
    ResistanceQuery q{{u}, {w}, ResistanceMode::plain};
    return net.conductance(e) * effective_resistance(net, q);
}

struct GapRow {
    std::int32_t depth = 0;  // retained vertex count of the truncation
    double r_free = 0.0;
    double r_wired = 0.0;
};

/**
 * Free vs wired effective resistance along a nested truncation sequence.
 * Free uses the induced subgraph, wired the glued boundary vertex as an
 * ordinary vertex. Each row is checked against the triangle bound
 * R_wired <= 3 max{R(A <-> B + boundary), R(B <-> A + boundary)}.
 */
inline std::vector<GapRow> wired_free_gap(const PlaneNetwork& net,
                                          const std::vector<std::vector<char>>& truncations,
                                          const std::vector<VertexId>& a,
                                          const std::vector<VertexId>& b) {
    detail::check_sets(net, a, b);
    std::vector<GapRow> rows;
    for (const auto& retained : truncations) {
        for (VertexId v : a)
            if (!retained[v]) throw Error("truncation must retain the source set");
        for (VertexId v : b)
            if (!retained[v]) throw Error("truncation must retain the target set");
        auto tr = wired_truncation(net, retained);
        auto remap = [&](const std::vector<VertexId>& s) {
            std::vector<VertexId> out;
            for (VertexId v : s) out.push_back(tr.parent_to_vertex[v]);
            return out;
        };
        std::vector<VertexId> ta = remap(a), tb = remap(b);
        GapRow row;
        row.depth = 0;
        for (char r : retained) row.depth += (r != 0);
        if (tr.net.boundary_vertex()) {
            row.r_wired = effective_resistance(tr.net, {ta, tb, ResistanceMode::plain});
            row.r_free = effective_resistance(tr.net, {ta, tb, ResistanceMode::free_proxy});
            double rab = effective_resistance(tr.net, {ta, tb, ResistanceMode::wired});
            double rba = effective_resistance(tr.net, {tb, ta, ResistanceMode::wired});
            if (row.r_wired > 3.0 * std::max(rab, rba) * (1.0 + 1e-9))
                throw Error("triangle bound violated in gap table");
        } else {
            row.r_wired = row.r_free = effective_resistance(tr.net, {ta, tb, ResistanceMode::plain});
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace usf
