#pragma once

#include "usf/planar_map.hpp"

namespace usf {

namespace detail {

// canonical encoding of a combinatorial map rooted at a dart: darts are
// labelled in discovery order following (reversal, rotation step), and the
// encoding lists the labels those two permutations produce
inline std::vector<std::int32_t> rooted_encoding(const PlaneNetwork& net, DartId root,
                                                 bool mirror) {
    const auto nd = net.dart_count();
    std::vector<std::int32_t> label(nd, -1);
    std::vector<DartId> by_label;
    by_label.reserve(nd);
    auto visit = [&](DartId d) {
        if (label[d] < 0) {
            label[d] = static_cast<std::int32_t>(by_label.size());
            by_label.push_back(d);
        }
    };
    auto step = [&](DartId d) {
        if (!mirror) return net.next_around_origin(d);
        // inverse of the rotation
        DartId x = d;
        while (net.next_around_origin(x) != d) x = net.next_around_origin(x);
        return x;
    };
    visit(root);
    for (std::size_t i = 0; i < by_label.size(); ++i) {
        DartId d = by_label[i];
        visit(PlaneNetwork::dart_reversal(d));
        visit(step(d));
    }
    std::vector<std::int32_t> enc;
    enc.reserve(2 * nd);
    for (DartId d : by_label) {
        enc.push_back(label[PlaneNetwork::dart_reversal(d)]);
        enc.push_back(label[step(d)]);
    }
    return enc;
}

} // namespace detail

/// canonical form over all roots and both orientations; two maps are
/// isomorphic (allowing reflection) iff their canonical forms agree
inline std::vector<std::int32_t> canonical_map_form(const PlaneNetwork& net) {
    std::vector<std::int32_t> best;
    for (bool mirror : {false, true})
        for (DartId d = 0; d < net.dart_count(); ++d) {
            auto enc = detail::rooted_encoding(net, d, mirror);
            if (best.empty() || enc < best) best = std::move(enc);
        }
    return best;
}

inline bool maps_isomorphic(const PlaneNetwork& a, const PlaneNetwork& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
        a.face_count() != b.face_count())
        return false;
    return canonical_map_form(a) == canonical_map_form(b);
}

} // namespace usf
