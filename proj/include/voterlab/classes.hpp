#ifndef VOTERLAB_CLASSES_HPP
#define VOTERLAB_CLASSES_HPP

//! \file classes.hpp
//! Statistics of the coalescence partition of a sample.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "interface.hpp"

namespace voterlab {

struct ClassSizes {
    std::vector<int> size_of;  // indexed by class id (a site index); 0 for non-ids
    std::vector<int> ids;      // ascending
};

inline ClassSizes class_sizes(const SampleOutcome& out) {
    ClassSizes cs;
    cs.size_of.assign(out.class_of.size(), 0);
    for (int c : out.class_of)
        if (c >= 0) ++cs.size_of[c];
    for (std::size_t s = 0; s < cs.size_of.size(); ++s)
        if (cs.size_of[s] > 0) cs.ids.push_back(static_cast<int>(s));
    return cs;
}

// Ties go to the smallest class id.
inline int largest_class(const ClassSizes& cs) {
    int best = -1;
    for (int id : cs.ids)
        if (best < 0 || cs.size_of[id] > cs.size_of[best]) best = id;
    return best;
}

inline int largest_class(const SampleOutcome& out) { return largest_class(class_sizes(out)); }

inline void check_class_id(const SampleOutcome& out, int id) {
    if (id < 0 || id >= static_cast<int>(out.class_of.size()) || out.class_of[id] != id) {
        throw DomainError("no class with id " + std::to_string(id));
    }
}

inline std::vector<Site> class_members(const SampleOutcome& out, int id) {
    check_class_id(out, id);
    std::vector<Site> members;
    for (std::size_t s = 0; s < out.class_of.size(); ++s)
        if (out.class_of[s] == id) members.push_back(out.geometry.site(static_cast<int>(s)));
    return members;
}

// Labels maximal lattice-connected sets of sites sharing a class.
// Returns a per-site component label (-1 on the boundary) and component sizes.
inline std::pair<std::vector<int>, std::vector<int>> label_class_components(const SampleOutcome& out) {
    const BoxGeometry& g = out.geometry;
    const int n = g.num_sites();
    const auto& off = g.index_offsets();
    std::vector<int> label(n, -1);
    std::vector<int> sizes;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (g.is_boundary(s) || label[s] >= 0) continue;
        const int comp = static_cast<int>(sizes.size());
        sizes.push_back(0);
        label[s] = comp;
        stack.push_back(s);
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            ++sizes[comp];
            for (int d : off) {
                const int b = a + d;
                if (g.is_boundary(b) || label[b] >= 0 || out.class_of[b] != out.class_of[a]) continue;
                label[b] = comp;
                stack.push_back(b);
            }
        }
    }
    return {std::move(label), std::move(sizes)};
}

inline std::vector<std::vector<Site>> connected_components(const SampleOutcome& out, int id) {
    check_class_id(out, id);
    const auto [label, sizes] = label_class_components(out);
    std::vector<std::vector<Site>> comps;
    std::vector<int> slot(sizes.size(), -1);
    for (std::size_t s = 0; s < label.size(); ++s) {
        if (out.class_of[s] != id) continue;
        int& k = slot[label[s]];
        if (k < 0) {
            k = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[k].push_back(out.geometry.site(static_cast<int>(s)));
    }
    return comps;
}

namespace detail {

inline double cross(const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain.
inline std::vector<PlanarPoint> convex_hull(std::vector<PlanarPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    if (pts.size() < 3) return pts;
    std::vector<PlanarPoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace detail

inline double diameter(const std::vector<Site>& sites) {
    std::vector<PlanarPoint> pts;
    pts.reserve(sites.size());
    for (const Site& s : sites) pts.push_back(embed(s));
    const auto hull = detail::convex_hull(std::move(pts));
    double best = 0.0;
    for (std::size_t a = 0; a < hull.size(); ++a)
        for (std::size_t b = a + 1; b < hull.size(); ++b) best = std::max(best, distance(hull[a], hull[b]));
    return best;
}

inline double class_diameter(const SampleOutcome& out, int id) { return diameter(class_members(out, id)); }

struct ClassReport {
    int class_origin_size = 0;
    int class_max_size = 0;
    int conn_origin_size = 0;
    int conn_max_size = 0;
    double largest_class_diameter = 0.0;
    bool cuts_largest = false;
    std::vector<std::pair<int, int>> top_k;  // (class id, size), descending size then ascending id
};

inline std::vector<std::pair<int, int>> top_classes(const ClassSizes& cs, std::size_t k) {
    std::vector<std::pair<int, int>> all;
    all.reserve(cs.ids.size());
    for (int id : cs.ids) all.emplace_back(id, cs.size_of[id]);
    const std::size_t keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                      [](const auto& a, const auto& b) { return a.second > b.second || (a.second == b.second && a.first < b.first); });
    all.resize(keep);
    return all;
}

// `sides` is the partition induced by the sample's interface; without it cuts_largest stays false.
inline ClassReport class_report(const SampleOutcome& out, const SidePartition* sides = nullptr, std::size_t top_k = 0) {
    const BoxGeometry& g = out.geometry;
    const ClassSizes cs = class_sizes(out);
    const auto [label, comp_sizes] = label_class_components(out);
    const int origin = g.index(g.center());
    const int largest = largest_class(cs);

    ClassReport r;
    r.class_origin_size = cs.size_of[out.class_of[origin]];
    r.class_max_size = cs.size_of[largest];
    r.conn_origin_size = comp_sizes[label[origin]];
    r.conn_max_size = *std::max_element(comp_sizes.begin(), comp_sizes.end());
    const auto members = class_members(out, largest);
    r.largest_class_diameter = diameter(members);
    if (sides) r.cuts_largest = cuts_class(g, *sides, members);
    r.top_k = top_classes(cs, top_k);
    return r;
}

// For each c, the fraction of samples whose largest class has diameter >= c * L.
inline std::vector<double> diameter_exceedance(const std::vector<double>& diameters, int L,
                                               const std::vector<double>& cs) {
    ensure<DomainError>(!diameters.empty(), "diameter_exceedance: no samples");
    std::vector<double> out;
    out.reserve(cs.size());
    for (double c : cs) {
        const auto hits = std::count_if(diameters.begin(), diameters.end(), [&](double d) { return d >= c * L; });
        out.push_back(static_cast<double>(hits) / static_cast<double>(diameters.size()));
    }
    return out;
}

}  // namespace voterlab

#endif  // VOTERLAB_CLASSES_HPP
