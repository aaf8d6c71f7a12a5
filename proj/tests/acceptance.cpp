// Acceptance suite: runs every shipping criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is the failure count.

#include <chrono>
#include <cstdio>
#include <map>

#include "test_graphs.hpp"
#include "usf/electrical.hpp"
#include "usf/enumeration.hpp"
#include "usf/experiments.hpp"
#include "usf/forest.hpp"
#include "usf/generators.hpp"
#include "usf/packing.hpp"
#include "usf/tail.hpp"

using namespace usf;
using namespace usf::testgraphs;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    g_failures += !ok;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), format, args...);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_packing_residuals() {
    struct Case {
        std::string name;
        PlaneNetwork net;
        PackingModel model;
    };
    std::vector<Case> cases;
    cases.push_back({"tetrahedron", tetrahedron(), PackingModel::euclidean_plane});
    cases.push_back({"cube", cube_graph(), PackingModel::euclidean_plane});
    cases.push_back({"{3,7} depth 6", tessellation_ball({3, 7, 6}), PackingModel::unit_disc});
    cases.push_back({"{4,5} depth 5", tessellation_ball({4, 5, 5}), PackingModel::unit_disc});
    cases.push_back({"tube(20)", tube(20, 1.0), PackingModel::euclidean_plane});
    bool ok = true;
    std::string detail = "packing residuals < 1e-7:";
    for (auto& c : cases) {
        const auto t0 = Clock::now();
        PackingOptions opt;
        opt.model = c.model;
        auto p = solve_double_packing(c.net, opt);
        const double el = seconds_since(t0);
        const double worst = std::max(p.residuals.tangency, p.residuals.orthogonality);
        const bool good = worst < 1e-7 && p.residuals.containment < 1e-9 && el < 120.0;
        ok = ok && good;
        detail += fmt(" %s %.1e/%.0fs", c.name.c_str(), worst, el);
    }
    report(1, ok, detail);
}

// ---------------------------------------------------------------- criterion 2
void criterion_tube_radii() {
    PackingOptions opt;
    opt.model = PackingModel::euclidean_plane;
    auto p = solve_double_packing(tube(20, 1.0), opt);
    const double target = 3.0 + 2.0 * std::sqrt(2.0);
    double worst = 0.0;
    for (int i = 6; i <= 14; ++i)
        for (int j = 0; j < 4; ++j) {
            const double ratio = p.primal[4 * (i + 1) + j].r / p.primal[4 * i + j].r;
            worst = std::max(worst, std::abs(ratio - 5.8284) / 5.8284);
        }
    report(2, worst < 0.02,
           fmt("tube(20) radii ratio vs 3+2*sqrt(2)=%.4f: worst rel err %.2e on rings 6..14",
               target, worst));
}

// ---------------------------------------------------------------- criterion 3
void criterion_tube_hitting() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double c : {0.25, 1.0, 4.0}) {
        auto t = tube(60, c);
        std::vector<VertexId> off;
        for (VertexId v = 0; v < t.vertex_count(); ++v)
            if (v % 4 != 0) off.push_back(v);
        const double a = tube_column_decay(c);
        for (int i = 1; i <= 10; ++i) {
            const double p = hitting_probability(t, 4 * i, {0}, off);
            worst = std::max(worst, std::abs(p - std::pow(a, i)));
        }
    }
    const double el = seconds_since(t0);
    report(3, worst <= 1e-8 && el < 5.0,
           fmt("tube(60) column hitting vs (1+c-sqrt(c^2+2c))^i: worst abs err %.2e, %.2fs",
               worst, el));
}

// ---------------------------------------------------------------- criterion 4
std::string g_c4_csv;

void criterion_kirchhoff(std::uint64_t seed) {
    const auto t0 = Clock::now();
    const int n = 100'000;
    struct Case {
        std::string name;
        PlaneNetwork net;
        VertexId root;
    };
    std::vector<Case> cases;
    cases.push_back({"triangle", triangle(), 0});
    cases.push_back({"weighted-triangle", triangle({1, 1, 2}), 0});
    cases.push_back({"4-cycle", four_cycle(), 0});
    cases.push_back({"3x3-free", grid_ball(3), 0});
    {
        std::vector<char> keep(25, 0);
        for (int y = 1; y <= 3; ++y)
            for (int x = 1; x <= 3; ++x) keep[y * 5 + x] = 1;
        auto tr = wired_truncation(grid_ball(5), keep);
        cases.push_back({"3x3-wired", std::move(tr.net), *tr.net.boundary_vertex()});
    }
    bool ok = true;
    double worst_z = 0.0;
    g_c4_csv = "net,edge,empirical,kirchhoff,z\n";
    for (auto& c : cases) {
        WalkTables tables(c.net);
        std::vector<double> count(c.net.edge_count(), 0.0);
        for (int i = 0; i < n; ++i) {
            auto f = wilson_ust(tables, c.root, {seed, static_cast<std::uint64_t>(i)});
            for (EdgeId e = 0; e < c.net.edge_count(); ++e) count[e] += f.in_forest[e];
        }
        for (EdgeId e = 0; e < c.net.edge_count(); ++e) {
            const double p = kirchhoff_marginal(c.net, e);
            const double sigma = std::max(std::sqrt(p * (1 - p) / n), 1e-12);
            const double z = std::abs(count[e] / n - p) / sigma;
            worst_z = std::max(worst_z, z);
            ok = ok && z < 4.0;
            g_c4_csv += c.name + "," + std::to_string(e) + "," + format_double(count[e] / n) +
                        "," + format_double(p) + "," + format_double(z) + "\n";
        }
    }
    const double el = seconds_since(t0);
    report(4, ok && el < 60.0,
           fmt("Wilson marginals vs c(e)R_eff at N=1e5 on 5 networks: worst z %.2f, %.0fs",
               worst_z, el));
}

// ---------------------------------------------------------------- criterion 5
void criterion_exact_laws(std::uint64_t seed) {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail = "exact laws:";

    // UST empirical vs enumeration, TV < 0.01 at N = 1e5
    for (auto [name, net] : {std::pair<std::string, PlaneNetwork>{"4-cycle", four_cycle()},
                             {"weighted-triangle", triangle({1, 1, 2})}}) {
        auto dist = enumerate_trees(net);
        WalkTables tables(net);
        const int n = 100'000;
        std::map<std::vector<EdgeId>, double> law;
        for (int i = 0; i < n; ++i) {
            auto f = wilson_ust(tables, 0, {seed + 1, static_cast<std::uint64_t>(i)});
            std::vector<EdgeId> t;
            for (EdgeId e = 0; e < net.edge_count(); ++e)
                if (f.in_forest[e]) t.push_back(e);
            law[t] += 1.0 / n;
        }
        double tv = 0.0;
        for (std::size_t i = 0; i < dist.trees.size(); ++i) {
            auto it = law.find(dist.trees[i]);
            tv += 0.5 * std::abs(dist.probabilities[i] - (it == law.end() ? 0.0 : it->second));
        }
        ok = ok && tv < 0.01;
        detail += fmt(" TV(%s)=%.4f", name.c_str(), tv);
    }

    // duality at the distribution level, exact by enumeration
    for (auto [name, net] : {std::pair<std::string, PlaneNetwork>{"2x3", rect_grid(3, 2)},
                             {"3x3", grid_ball(3)}}) {
        auto d = dual(net).net;
        auto primal = enumerate_trees(net);
        auto dualust = enumerate_trees(d);
        std::map<std::vector<EdgeId>, double> complement_law;
        for (std::size_t i = 0; i < primal.trees.size(); ++i) {
            std::vector<char> in_t(net.edge_count(), 0);
            for (EdgeId e : primal.trees[i]) in_t[e] = 1;
            std::vector<EdgeId> comp;
            for (EdgeId e = 0; e < net.edge_count(); ++e)
                if (!in_t[e]) comp.push_back(e);
            complement_law[comp] += primal.probabilities[i];
        }
        double worst = complement_law.size() == dualust.trees.size() ? 0.0 : 1.0;
        for (std::size_t i = 0; i < dualust.trees.size(); ++i) {
            auto it = complement_law.find(dualust.trees[i]);
            const double got = (it == complement_law.end()) ? 0.0 : it->second;
            worst = std::max(worst, std::abs(got - dualust.probabilities[i]));
        }
        ok = ok && worst < 1e-12;
        detail += fmt(" dual(%s)=%.1e", name.c_str(), worst);
    }

    // spatial Markov property by enumeration
    for (auto [name, net, a, b] :
         {std::tuple<std::string, PlaneNetwork, EdgeId, EdgeId>{"2x3", rect_grid(3, 2), 0, 5},
          {"3x3", grid_ball(3), 0, 5}}) {
        const double disc = check_spatial_markov(net, {a}, {b});
        ok = ok && disc < 1e-12;
        detail += fmt(" markov(%s)=%.1e", name.c_str(), disc);
    }

    const double el = seconds_since(t0);
    ok = ok && el < 120.0;
    detail += fmt(" %.0fs", el);
    report(5, ok, detail);
}

// ---------------------------------------------------------------- criterion 6
void criterion_pareto() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail = "tail estimator calibration:";
    for (double alpha : {0.5, 1.0}) {
        SplitRng rng(424242, 0);
        std::vector<double> sample;
        sample.reserve(100'000);
        for (int i = 0; i < 100'000; ++i) {
            double u = rng.next_unit();
            while (u == 0.0) u = rng.next_unit();
            sample.push_back(std::pow(u, -1.0 / alpha));
        }
        auto f = fit_tail(sample);
        ok = ok && std::abs(f.slope + alpha) <= 0.05;
        detail += fmt(" alpha=%.1f slope=%.3f", alpha, f.slope);
    }
    const double el = seconds_since(t0);
    ok = ok && el < 10.0;
    detail += fmt(" %.1fs", el);
    report(6, ok, detail);
}

// ------------------------------------------------------------ criteria 7 + 8
WiredPastResult g_wired_a, g_wired_b;
FreeLengthResult g_free_a, g_free_b;
ParabolicRow g_par_a[3], g_par_b[3];

void criteria_wired_exponents(std::uint64_t seed) {
    const auto t0 = Clock::now();
    ExperimentSpec spec;
    spec.p = 3;
    spec.q = 7;
    spec.depth = 8;
    spec.n_samples = 20'000;
    spec.seed = seed;
    spec.threads = 0;
    g_wired_a = run_wired_past_experiment(spec);
    const double el = seconds_since(t0);
    const auto& r = g_wired_a;
    const bool ok7 = r.censored_fraction < 0.10 && r.diameter_fit.slope >= -1.25 &&
                     r.diameter_fit.slope <= -0.80 && el < 2700.0;
    report(7, ok7,
           fmt("wired diameter exponent on {3,7} depth 8, N=2e4: slope %.3f in [-1.25,-0.80], "
               "censored %.3f, atom z %.2f, %.0fs",
               r.diameter_fit.slope, r.censored_fraction, r.atom_z, el));
    const bool ok8 = r.area_fit.slope >= -0.65 && r.area_fit.slope <= -0.40;
    report(8, ok8,
           fmt("wired area exponent, same run: slope %.3f in [-0.65,-0.40]", r.area_fit.slope));

    spec.threads = 1;
    g_wired_b = run_wired_past_experiment(spec);
}

// ---------------------------------------------------------------- criterion 9
void criterion_free_length(std::uint64_t seed) {
    const auto t0 = Clock::now();
    ExperimentSpec spec;
    spec.depth = 8;
    spec.n_samples = 20'000;
    spec.seed = seed;
    spec.threads = 0;
    g_free_a = run_free_length_experiment(spec);
    const double el = seconds_since(t0);
    const bool ok = g_free_a.fit.slope >= -0.65 && g_free_a.fit.slope <= -0.38 && el < 2700.0;
    report(9, ok,
           fmt("free length exponent on {3,7} depth 8, N=2e4: slope %.3f in [-0.65,-0.38], %.0fs",
               g_free_a.fit.slope, el));

    spec.threads = 1;
    g_free_b = run_free_length_experiment(spec);

    // recurrent control (recorded, not asserted): path length tail on a grid
    auto grid = grid_ball(17);
    WalkTables tables(grid);
    const VertexId x = 8 * 17 + 8, y = x + 1;
    std::vector<double> lens(4000, 0.0);
    detail::parallel_for(4000, 0, [&](std::int64_t i) {
        auto f = wilson_ust(tables, x, {seed + 7, static_cast<std::uint64_t>(i)});
        lens[i] = static_cast<double>(tree_path(grid, f, x, y)->size());
    });
    TailGridRule rule;
    rule.kind = TailGridRule::Kind::integer;
    rule.lower_quantile = 0.5;
    rule.upper_quantile = 0.85;
    auto control = fit_tail(lens, rule);
    std::printf("[info] recurrent grid control (17x17): length slope %.3f (recorded, not asserted)\n",
                control.slope);
}

// --------------------------------------------------------------- criterion 10
void criterion_parabolic(std::uint64_t seed) {
    const auto t0 = Clock::now();
    const double cs[3] = {0.1, 1.0, 10.0};
    bool bounds_ok = true;
    for (int k = 0; k < 3; ++k) {
        g_par_a[k] = run_parabolic_experiment(cs[k], 60, 20'000, seed, 0);
        const auto& row = g_par_a[k];
        for (std::size_t i = 0; i < row.reach_probability.size(); ++i) {
            const double p = row.reach_probability[i];
            const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / 20'000.0);
            if (p < row.reach_bound[i] - 4.0 * sigma) bounds_ok = false;
        }
    }
    const double slope_light = g_par_a[2].fit.slope;  // c = 10
    const double slope_heavy = g_par_a[0].fit.slope;  // c = 0.1
    const bool ordered = std::abs(slope_light) >= 2.0 * std::abs(slope_heavy);
    const double el = seconds_since(t0);
    report(10, ordered && bounds_ok && el < 1200.0,
           fmt("parabolic non-universality on tube(60), N=2e4: |slope(c=10)|=%.2f >= "
               "2|slope(c=0.1)|=%.2f, reach bounds %s, %.0fs",
               std::abs(slope_light), 2.0 * std::abs(slope_heavy),
               bounds_ok ? "dominated" : "VIOLATED", el));

    for (int k = 0; k < 3; ++k) g_par_b[k] = run_parabolic_experiment(cs[k], 60, 20'000, seed, 1);
}

// --------------------------------------------------------------- criterion 11
// rebuild the criterion-4 marginal table for the rerun comparison
std::string kirchhoff_csv_rerun(std::uint64_t seed) {
    const int n = 100'000;
    std::vector<std::pair<std::string, PlaneNetwork>> cases;
    cases.emplace_back("triangle", triangle());
    cases.emplace_back("weighted-triangle", triangle({1, 1, 2}));
    cases.emplace_back("4-cycle", four_cycle());
    cases.emplace_back("3x3-free", grid_ball(3));
    std::vector<VertexId> roots{0, 0, 0, 0};
    {
        std::vector<char> keep(25, 0);
        for (int y = 1; y <= 3; ++y)
            for (int x = 1; x <= 3; ++x) keep[y * 5 + x] = 1;
        auto tr = wired_truncation(grid_ball(5), keep);
        roots.push_back(*tr.net.boundary_vertex());
        cases.emplace_back("3x3-wired", std::move(tr.net));
    }
    std::string csv = "net,edge,empirical,kirchhoff,z\n";
    for (std::size_t k = 0; k < cases.size(); ++k) {
        auto& [name, net] = cases[k];
        WalkTables tables(net);
        std::vector<double> count(net.edge_count(), 0.0);
        for (int i = 0; i < n; ++i) {
            auto f = wilson_ust(tables, roots[k], {seed, static_cast<std::uint64_t>(i)});
            for (EdgeId e = 0; e < net.edge_count(); ++e) count[e] += f.in_forest[e];
        }
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            const double p = kirchhoff_marginal(net, e);
            const double sigma = std::max(std::sqrt(p * (1 - p) / n), 1e-12);
            const double z = std::abs(count[e] / n - p) / sigma;
            csv += name + "," + std::to_string(e) + "," + format_double(count[e] / n) + "," +
                   format_double(p) + "," + format_double(z) + "\n";
        }
    }
    return csv;
}

void criterion_determinism(std::uint64_t seed) {
    bool ok = true;
    std::string detail = "determinism across worker counts:";

    const bool wired_same =
        g_wired_a.diameter.to_csv() == g_wired_b.diameter.to_csv() &&
        g_wired_a.area.to_csv() == g_wired_b.area.to_csv() &&
        fit_csv(g_wired_a.diameter_fit, g_wired_a.censored_fraction) ==
            fit_csv(g_wired_b.diameter_fit, g_wired_b.censored_fraction) &&
        fit_csv(g_wired_a.area_fit, g_wired_a.censored_fraction) ==
            fit_csv(g_wired_b.area_fit, g_wired_b.censored_fraction);
    ok = ok && wired_same;
    detail += fmt(" wired=%s", wired_same ? "byte-identical" : "DIFFER");

    const bool free_same = g_free_a.length.to_csv() == g_free_b.length.to_csv() &&
                           fit_csv(g_free_a.fit, g_free_a.censored_fraction) ==
                               fit_csv(g_free_b.fit, g_free_b.censored_fraction);
    ok = ok && free_same;
    detail += fmt(" free=%s", free_same ? "byte-identical" : "DIFFER");

    bool par_same = true;
    for (int k = 0; k < 3; ++k)
        par_same = par_same && g_par_a[k].reach.to_csv() == g_par_b[k].reach.to_csv() &&
                   fit_csv(g_par_a[k].fit, g_par_a[k].censored_fraction) ==
                       fit_csv(g_par_b[k].fit, g_par_b[k].censored_fraction);
    ok = ok && par_same;
    detail += fmt(" parabolic=%s", par_same ? "byte-identical" : "DIFFER");

    const bool marg_same = kirchhoff_csv_rerun(seed) == g_c4_csv;
    ok = ok && marg_same;
    detail += fmt(" marginals=%s", marg_same ? "byte-identical" : "DIFFER");

    report(11, ok, detail);
}

} // namespace

int main() {
    const std::uint64_t seed = 11;
    std::printf("usf acceptance suite (seed %llu)\n", static_cast<unsigned long long>(seed));
    criterion_packing_residuals();
    criterion_tube_radii();
    criterion_tube_hitting();
    criterion_kirchhoff(seed);
    criterion_exact_laws(seed);
    criterion_pareto();
    criteria_wired_exponents(seed);
    criterion_free_length(seed);
    criterion_parabolic(seed);
    criterion_determinism(seed);
    std::printf("%d criteria failed\n", g_failures);
    return g_failures > 0 ? 1 : 0;
}
