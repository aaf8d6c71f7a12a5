#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "usf/forest.hpp"
#include "usf/packing.hpp"
#include "usf/planar_map.hpp"

namespace usf {

/// shortest round-trip decimal for a double (used by all deterministic output)
inline std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// 17-significant-digit form used by the packing dump
inline std::string format_double17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ss.str())));
    return buf;
}

namespace detail {

struct LineReader {
    std::istream& in;
    std::string line{};
    int lineno = 0;

    bool next() {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error("parse error at line " + std::to_string(lineno) + ": " + what);
    }
};

} // namespace detail

/*
 * planenet v1: the plain-text graph format.
 *   planenet v1
 *   outer <origin> <head> <edge>      # dart with the outer face on its left
 *   boundary <vertex>                 # present only on wired truncations
 *   v <id> <nbr>:<edge> ...           # counterclockwise rotation per vertex
 *   e <id> <conductance>
 */
inline void write_planenet(const PlaneNetwork& net, std::ostream& out) {
    out << "planenet v1\n";
    auto hint = net.outer_hint();
    out << "outer " << hint.origin << ' ' << hint.head << ' ' << hint.edge << '\n';
    if (net.boundary_vertex()) out << "boundary " << *net.boundary_vertex() << '\n';
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
        out << "v " << v;
        for (auto [w, e] : net.rotation_list(v)) out << ' ' << w << ':' << e;
        out << '\n';
    }
    for (EdgeId e = 0; e < net.edge_count(); ++e)
        out << "e " << e << ' ' << format_double(net.conductance(e)) << '\n';
}

inline PlaneNetwork read_planenet(std::istream& in) {
    detail::LineReader rd{in};
    if (!rd.next() || rd.line != "planenet v1") rd.fail("expected 'planenet v1' header");
    OuterFaceHint hint{-1, -1, -1};
    std::optional<VertexId> boundary;
    std::vector<std::pair<VertexId, std::vector<std::pair<VertexId, EdgeId>>>> vlines;
    std::vector<std::pair<EdgeId, double>> elines;
    while (rd.next()) {
        std::istringstream ss(rd.line);
        std::string tag;
        ss >> tag;
        if (tag == "outer") {
            if (!(ss >> hint.origin >> hint.head >> hint.edge)) rd.fail("bad outer line");
        } else if (tag == "boundary") {
            VertexId b;
            if (!(ss >> b)) rd.fail("bad boundary line");
            boundary = b;
        } else if (tag == "v") {
            VertexId id;
            if (!(ss >> id)) rd.fail("bad vertex id");
            std::vector<std::pair<VertexId, EdgeId>> lst;
            std::string tok;
            while (ss >> tok) {
                auto colon = tok.find(':');
                if (colon == std::string::npos) rd.fail("expected <nbr>:<edge> token");
                try {
                    lst.emplace_back(std::stoi(tok.substr(0, colon)),
                                     std::stoi(tok.substr(colon + 1)));
                } catch (const std::exception&) {
                    rd.fail("bad dart token '" + tok + "'");
                }
            }
            vlines.emplace_back(id, std::move(lst));
        } else if (tag == "e") {
            EdgeId id;
            std::string val;
            if (!(ss >> id >> val)) rd.fail("bad edge line");
            double c;
            auto res = std::from_chars(val.data(), val.data() + val.size(), c);
            if (res.ec != std::errc{}) rd.fail("bad conductance '" + val + "'");
            elines.emplace_back(id, c);
        } else {
            rd.fail("unknown record '" + tag + "'");
        }
    }
    if (hint.edge < 0) throw Error("planenet file lacks the outer face record");
    RotationSystem rot(vlines.size());
    for (auto& [id, lst] : vlines) {
        if (id < 0 || id >= static_cast<VertexId>(vlines.size()))
            throw Error("vertex id out of range in planenet file");
        rot[id] = std::move(lst);
    }
    std::vector<double> cond(elines.size());
    for (auto [id, c] : elines) {
        if (id < 0 || id >= static_cast<EdgeId>(elines.size()))
            throw Error("edge id out of range in planenet file");
        cond[id] = c;
    }
    return PlaneNetwork::from_rotation_system(rot, std::move(cond), hint, boundary);
}

/*
 * forest v1: the forest dump, header plus included edge ids in increasing
 * order, one per line.
 */
inline void write_forest(const SpanningForest& f, std::ostream& out) {
    out << "forest v1\n";
    for (EdgeId e = 0; e < static_cast<EdgeId>(f.in_forest.size()); ++e)
        if (f.in_forest[e]) out << e << '\n';
}

inline std::vector<EdgeId> read_forest(std::istream& in) {
    detail::LineReader rd{in};
    if (!rd.next() || rd.line != "forest v1") rd.fail("expected 'forest v1' header");
    std::vector<EdgeId> edges;
    while (rd.next()) {
        std::istringstream ss(rd.line);
        EdgeId e;
        if (!(ss >> e)) rd.fail("bad edge id");
        edges.push_back(e);
    }
    return edges;
}

/*
 * dcp v1: the packing dump. Header, model line, then one line per circle:
 * kind (v/f), id, centre x, centre y, radius at 17 significant digits.
 */
inline void write_dcp(const DoublePacking& p, std::ostream& out) {
    out << "dcp v1\n";
    out << "model " << (p.model == PackingModel::unit_disc ? "disc" : "euclidean") << '\n';
    for (std::size_t v = 0; v < p.primal.size(); ++v)
        out << "v " << v << ' ' << format_double17(p.primal[v].x) << ' '
            << format_double17(p.primal[v].y) << ' ' << format_double17(p.primal[v].r) << '\n';
    for (std::size_t f = 0; f < p.dual.size(); ++f)
        if (p.dual_present[f])
            out << "f " << f << ' ' << format_double17(p.dual[f].x) << ' '
                << format_double17(p.dual[f].y) << ' ' << format_double17(p.dual[f].r) << '\n';
}

inline DoublePacking read_dcp(std::istream& in) {
    detail::LineReader rd{in};
    if (!rd.next() || rd.line != "dcp v1") rd.fail("expected 'dcp v1' header");
    if (!rd.next() || rd.line.rfind("model ", 0) != 0) rd.fail("expected model line");
    DoublePacking p;
    const std::string model = rd.line.substr(6);
    if (model == "disc")
        p.model = PackingModel::unit_disc;
    else if (model == "euclidean")
        p.model = PackingModel::euclidean_plane;
    else
        rd.fail("unknown model '" + model + "'");
    std::vector<std::tuple<char, std::int32_t, Circle>> circles;
    std::int32_t max_v = -1, max_f = -1;
    while (rd.next()) {
        std::istringstream ss(rd.line);
        std::string kind;
        std::int32_t id;
        double x, y, r;
        if (!(ss >> kind >> id >> x >> y >> r) || (kind != "v" && kind != "f"))
            rd.fail("bad circle line");
        circles.emplace_back(kind[0], id, Circle{x, y, r});
        (kind[0] == 'v' ? max_v : max_f) = std::max(kind[0] == 'v' ? max_v : max_f, id);
    }
    p.primal.resize(max_v + 1);
    p.dual.resize(max_f + 1);
    p.dual_present.assign(max_f + 1, 0);
    p.horocycle.assign(max_v + 1, 0);
    for (auto& [kind, id, c] : circles) {
        if (kind == 'v') {
            p.primal[id] = c;
            if (p.model == PackingModel::unit_disc)
                p.horocycle[id] = (std::hypot(c.x, c.y) + c.r > 1.0 - 1e-9);
        } else {
            p.dual[id] = c;
            p.dual_present[id] = 1;
        }
    }
    p.outer_face = max_f + 1;  // the absent face; callers pair dumps with their network
    return p;
}

template <typename T>
void save_file(const std::filesystem::path& path, const T& value,
               void (*writer)(const T&, std::ostream&)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    writer(value, out);
}

} // namespace usf
