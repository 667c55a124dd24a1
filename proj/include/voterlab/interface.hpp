#ifndef VOTERLAB_INTERFACE_HPP
#define VOTERLAB_INTERFACE_HPP

//! \file interface.hpp
//! Chordal exploration path on the dual hexagonal lattice.
//!
//! Dual vertices are the unit triangles of the box. The path enters through
//! the lattice edge {(0,0),(1,0)} at the SW colour change and leaves through
//! {(L-2,L-1),(L-1,L-1)} at the NE colour change, keeping 0-sites on its left
//! and 1-sites on its right. In each triangle the only choice is decided by
//! the third vertex: a 0 becomes the new left endpoint, a 1 the new right one.

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace voterlab {

class InvalidBoundaryError : public DomainError {
  public:
    using DomainError::DomainError;
};

// Unit triangle: up = {(i,j),(i+1,j),(i,j+1)}, down = {(i+1,j),(i,j+1),(i+1,j+1)}.
struct DualVertex {
    int i = 0;
    int j = 0;
    bool up = true;

    friend constexpr bool operator==(const DualVertex&, const DualVertex&) = default;

    std::array<Site, 3> corners() const {
        if (up) return {Site{i, j}, Site{i + 1, j}, Site{i, j + 1}};
        return {Site{i + 1, j}, Site{i, j + 1}, Site{i + 1, j + 1}};
    }

    PlanarPoint centroid() const {
        PlanarPoint c{};
        for (const Site& s : corners()) {
            const PlanarPoint p = embed(s);
            c.x += p.x / 3.0;
            c.y += p.y / 3.0;
        }
        return c;
    }
};

inline DualVertex triangle_of(const Site& a, const Site& b, const Site& c) {
    const int i = std::min({a.i, b.i, c.i});
    const int j = std::min({a.j, b.j, c.j});
    const Site base{i, j};
    return {i, j, a == base || b == base || c == base};
}

// Crossed lattice edge: `left` holds vote 0, `right` holds vote 1.
struct CrossedEdge {
    Site left;
    Site right;

    friend constexpr bool operator==(const CrossedEdge&, const CrossedEdge&) = default;
};

struct InterfacePath {
    std::vector<CrossedEdge> dual_edges;
    std::vector<DualVertex> dual_vertices;

    std::size_t length() const noexcept { return dual_edges.size(); }
};

namespace detail {

// Lattice directions in counter-clockwise order of their embedded angle.
inline constexpr std::array<Site, 6> kCcwDirections{Site{1, 0},  Site{0, 1},  Site{-1, 1},
                                                    Site{-1, 0}, Site{0, -1}, Site{1, -1}};

inline int direction_index(const Site& from, const Site& to) {
    const Site d{to.i - from.i, to.j - from.j};
    for (int k = 0; k < 6; ++k)
        if (kCcwDirections[k] == d) return k;
    throw DomainError("sites " + to_string(from) + " and " + to_string(to) + " are not adjacent");
}

inline Site shifted(const Site& s, int k) {
    const Site& d = kCcwDirections[((k % 6) + 6) % 6];
    return {s.i + d.i, s.j + d.j};
}

inline std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) << 32 | static_cast<std::uint32_t>(b);
}

}  // namespace detail

inline void check_two_arc_boundary(const BoxGeometry& g, const std::vector<Vote>& votes) {
    if (votes.size() != static_cast<std::size_t>(g.num_sites())) {
        throw InvalidBoundaryError("configuration has " + std::to_string(votes.size()) + " sites, expected " +
                                   std::to_string(g.num_sites()));
    }
    for (int s = 0; s < g.num_sites(); ++s) {
        if (votes[s] > 1) throw InvalidBoundaryError("vote at " + to_string(g.site(s)) + " is not 0/1");
        if (g.is_boundary(s) && votes[s] != g.fixed_vote(s)) {
            throw InvalidBoundaryError("boundary vote at " + to_string(g.site(s)) +
                                       " breaks the west/north = 0, east/south = 1 convention");
        }
    }
}

// `votes` covers the whole box, boundary included.
inline InterfacePath trace_interface(const BoxGeometry& g, const std::vector<Vote>& votes) {
    check_two_arc_boundary(g, votes);
    const int L = g.side_length();
    const CrossedEdge exit_edge{{L - 2, L - 1}, {L - 1, L - 1}};
    const std::size_t max_triangles = 2 * static_cast<std::size_t>(L - 1) * (L - 1);

    InterfacePath path;
    Site left{0, 0};
    Site right{1, 0};
    int dir = 0;  // direction index of right - left
    path.dual_edges.push_back({left, right});
    while (true) {
        const Site apex = detail::shifted(left, dir + 1);
        if (!g.contains(apex)) {
            if (!(CrossedEdge{left, right} == exit_edge)) {
                throw ConsistencyError("exploration left the box away from the NE corner");
            }
            break;
        }
        path.dual_vertices.push_back(triangle_of(left, right, apex));
        if (path.dual_vertices.size() > max_triangles) throw ConsistencyError("exploration path revisits triangles");
        if (votes[g.index(apex)] == 0) {
            left = apex;
            dir -= 1;
        } else {
            right = apex;
            dir += 1;
        }
        path.dual_edges.push_back({left, right});
    }
    return path;
}

enum class SideLabel : std::uint8_t { left = 0, right = 1 };

struct SidePartition {
    std::vector<SideLabel> label;  // per site index

    SideLabel at(const BoxGeometry& g, const Site& s) const { return label[g.index(s)]; }
};

// Flood fill of the lattice with the crossed edges removed.
inline SidePartition side_partition(const BoxGeometry& g, const std::vector<Vote>& votes, const InterfacePath& path) {
    (void)votes;
    std::unordered_set<std::uint64_t> cut;
    cut.reserve(path.dual_edges.size() * 2);
    for (const CrossedEdge& e : path.dual_edges) cut.insert(detail::edge_key(g.index(e.left), g.index(e.right)));

    const int n = g.num_sites();
    std::vector<int> component(n, -1);
    int components = 0;
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (component[start] >= 0) continue;
        component[start] = components;
        stack.push_back(start);
        while (!stack.empty()) {
            const int s = stack.back();
            stack.pop_back();
            const Site a = g.site(s);
            for (const Site& o : kNeighborOffsets) {
                const Site b{a.i + o.i, a.j + o.j};
                if (!g.contains(b)) continue;
                const int t = g.index(b);
                if (component[t] >= 0 || cut.contains(detail::edge_key(s, t))) continue;
                component[t] = components;
                stack.push_back(t);
            }
        }
        ++components;
    }
    if (components != 2) {
        throw ConsistencyError("interface splits the box into " + std::to_string(components) +
                               " components instead of 2");
    }
    SidePartition sp;
    sp.label.resize(n);
    const int left_component = component[g.index(g.sw_corner())];
    for (int s = 0; s < n; ++s) sp.label[s] = component[s] == left_component ? SideLabel::left : SideLabel::right;
    for (int s = 0; s < n; ++s) {
        if (!g.is_boundary(s)) continue;
        const SideLabel expected = g.fixed_vote(s) == 0 ? SideLabel::left : SideLabel::right;
        if (sp.label[s] != expected) throw ConsistencyError("boundary site on the wrong side of the interface");
    }
    return sp;
}

// Largest distance from a path triangle centroid to the segment joining the SW and NE corners.
inline double max_displacement(const BoxGeometry& g, const InterfacePath& path) {
    const PlanarPoint a = embed(g.sw_corner());
    const PlanarPoint b = embed(g.ne_corner());
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double best = 0.0;
    for (const DualVertex& v : path.dual_vertices) {
        const PlanarPoint c = v.centroid();
        const double t = std::clamp(((c.x - a.x) * dx + (c.y - a.y) * dy) / len2, 0.0, 1.0);
        best = std::max(best, distance(c, {a.x + t * dx, a.y + t * dy}));
    }
    return best;
}

inline bool cuts_class(const BoxGeometry& g, const SidePartition& sp, const std::vector<Site>& class_sites) {
    if (class_sites.empty()) throw DomainError("cuts_class: empty class");
    bool left = false;
    bool right = false;
    for (const Site& s : class_sites) {
        if (sp.at(g, s) == SideLabel::left) {
            left = true;
        } else {
            right = true;
        }
    }
    return left && right;
}

}  // namespace voterlab

#endif  // VOTERLAB_INTERFACE_HPP
