#pragma once

#include <string>

#include "usf/io.hpp"
#include "usf/packing.hpp"

namespace usf {

/**
 * SVG rendering of a double packing: primal circles filled with solid
 * boundaries, dual circles dashed, an optional forest drawn as chords between
 * primal centres, and an optional highlighted vertex set filled distinctly.
 */
inline std::string render_svg(const DoublePacking& p, const PlaneNetwork& net,
                              const std::vector<EdgeId>& forest_edges = {},
                              const std::vector<VertexId>& highlight = {}) {
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    auto grow = [&](const Circle& c) {
        lo_x = std::min(lo_x, c.x - c.r);
        lo_y = std::min(lo_y, c.y - c.r);
        hi_x = std::max(hi_x, c.x + c.r);
        hi_y = std::max(hi_y, c.y + c.r);
    };
    for (const auto& c : p.primal) grow(c);
    for (std::size_t f = 0; f < p.dual.size(); ++f)
        if (p.dual_present[f]) grow(p.dual[f]);
    const double span = std::max(hi_x - lo_x, hi_y - lo_y);
    const double margin = 0.02 * span;
    const double stroke = span / 600.0;

    std::vector<char> lit(net.vertex_count(), 0);
    for (VertexId v : highlight)
        if (v >= 0 && v < net.vertex_count()) lit[v] = 1;

    std::string out;
    auto num = [](double x) { return format_double(x); };
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(lo_x - margin) + " " +
           num(lo_y - margin) + " " + num(span + 2 * margin) + " " + num(span + 2 * margin) +
           "\">\n";
    // y axis flipped so the mathematical orientation is upright
    out += "<g transform=\"translate(0," + num(2 * lo_y + span) + ") scale(1,-1)\">\n";
    for (std::size_t f = 0; f < p.dual.size(); ++f) {
        if (!p.dual_present[f]) continue;
        const Circle& c = p.dual[f];
        out += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(c.y) + "\" r=\"" + num(c.r) +
               "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"" + num(stroke) +
               "\" stroke-dasharray=\"" + num(4 * stroke) + " " + num(3 * stroke) + "\"/>\n";
    }
    for (std::size_t v = 0; v < p.primal.size(); ++v) {
        const Circle& c = p.primal[v];
        const char* fill = lit[v] ? "#e0604a" : "#bcd6ee";
        out += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(c.y) + "\" r=\"" + num(c.r) +
               "\" fill=\"" + fill + "\" fill-opacity=\"0.85\" stroke=\"#1a3a5c\" stroke-width=\"" +
               num(stroke) + "\"/>\n";
    }
    for (EdgeId e : forest_edges) {
        if (e < 0 || e >= net.edge_count()) throw Error("render: forest edge out of range");
        auto [u, w] = net.edge_endpoints(e);
        out += "<line x1=\"" + num(p.primal[u].x) + "\" y1=\"" + num(p.primal[u].y) + "\" x2=\"" +
               num(p.primal[w].x) + "\" y2=\"" + num(p.primal[w].y) +
               "\" stroke=\"#092215\" stroke-width=\"" + num(1.8 * stroke) + "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace usf
