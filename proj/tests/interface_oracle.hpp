#ifndef VOTERLAB_TESTS_INTERFACE_ORACLE_HPP
#define VOTERLAB_TESTS_INTERFACE_ORACLE_HPP

// Test-only reference for the exploration path: depth-first enumeration of
// every simple triangle path from the SW entry to the NE exit whose crossed
// edges are all bichromatic with the 0-site on the left of the direction of
// travel (measured geometrically between triangle centroids). Shares no code
// with the tracer's turn rule.

#include <algorithm>
#include <vector>

#include "voterlab/interface.hpp"

namespace voterlab::testkit {

inline std::vector<DualVertex> all_triangles(int L) {
    std::vector<DualVertex> out;
    for (int i = 0; i + 1 < L; ++i)
        for (int j = 0; j + 1 < L; ++j) {
            out.push_back({i, j, true});
            out.push_back({i, j, false});
        }
    return out;
}

inline std::vector<Site> shared_corners(const DualVertex& a, const DualVertex& b) {
    std::vector<Site> out;
    for (const Site& s : a.corners()) {
        const auto cb = b.corners();
        if (std::find(cb.begin(), cb.end(), s) != cb.end()) out.push_back(s);
    }
    return out;
}

// Orients edge {s, t} crossed while moving from `from` to `to`; returns false if it is
// monochromatic or has the 1-site on the left.
inline bool crossing_ok(const BoxGeometry& g, const std::vector<Vote>& votes, const Site& s, const Site& t,
                        const PlanarPoint& from, const PlanarPoint& to, CrossedEdge* edge) {
    const Vote vs = votes[g.index(s)];
    const Vote vt = votes[g.index(t)];
    if (vs == vt) return false;
    const Site& zero = vs == 0 ? s : t;
    const Site& one = vs == 0 ? t : s;
    const PlanarPoint z = embed(zero);
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    const double cross = dx * (z.y - from.y) - dy * (z.x - from.x);
    if (cross <= 0) return false;
    if (edge) *edge = {zero, one};
    return true;
}

struct BruteForcePaths {
    std::vector<std::vector<CrossedEdge>> found;
};

inline void dfs(const BoxGeometry& g, const std::vector<Vote>& votes, const std::vector<DualVertex>& tris,
                std::vector<int>& path, std::vector<char>& used, std::vector<CrossedEdge>& edges, int target,
                BruteForcePaths& out) {
    const int cur = path.back();
    if (cur == target) {
        // exit through the NE border edge, heading out of the box
        const int L = g.side_length();
        const Site a{L - 2, L - 1};
        const Site b{L - 1, L - 1};
        const PlanarPoint c = tris[cur].centroid();
        const PlanarPoint m{(embed(a).x + embed(b).x) / 2, (embed(a).y + embed(b).y) / 2};
        CrossedEdge e{};
        if (crossing_ok(g, votes, a, b, c, m, &e)) {
            edges.push_back(e);
            out.found.push_back(edges);
            edges.pop_back();
        }
    }
    for (std::size_t k = 0; k < tris.size(); ++k) {
        if (used[k]) continue;
        const auto shared = shared_corners(tris[cur], tris[k]);
        if (shared.size() != 2) continue;
        CrossedEdge e{};
        if (!crossing_ok(g, votes, shared[0], shared[1], tris[cur].centroid(), tris[k].centroid(), &e)) continue;
        used[k] = 1;
        path.push_back(static_cast<int>(k));
        edges.push_back(e);
        dfs(g, votes, tris, path, used, edges, target, out);
        edges.pop_back();
        path.pop_back();
        used[k] = 0;
    }
}

inline BruteForcePaths brute_force_interfaces(const BoxGeometry& g, const std::vector<Vote>& votes) {
    const int L = g.side_length();
    const auto tris = all_triangles(L);
    const auto index_of = [&](const DualVertex& v) {
        return static_cast<int>(std::find(tris.begin(), tris.end(), v) - tris.begin());
    };
    const int start = index_of({0, 0, true});
    const int target = index_of({L - 2, L - 2, false});
    BruteForcePaths out;
    // entry through {(0,0),(1,0)} from below
    const PlanarPoint below{0.5, -0.5};
    CrossedEdge e{};
    if (!crossing_ok(g, votes, {0, 0}, {1, 0}, below, tris[start].centroid(), &e)) return out;
    std::vector<int> path{start};
    std::vector<char> used(tris.size(), 0);
    used[start] = 1;
    std::vector<CrossedEdge> edges{e};
    dfs(g, votes, tris, path, used, edges, target, out);
    return out;
}

}  // namespace voterlab::testkit

#endif
