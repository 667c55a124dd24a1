#ifndef VOTERLAB_RENDER_HPP
#define VOTERLAB_RENDER_HPP

//! \file render.hpp
//! SVG picture of a sample: one hexagonal cell per site coloured by vote,
//! optional colouring of the largest classes, the interface as a polyline
//! through the visited triangles, and the SW-NE diagonal for reference.

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "classes.hpp"
#include "engine.hpp"
#include "geometry.hpp"
#include "interface.hpp"

namespace voterlab {

struct RenderOptions {
    std::size_t top_k = 0;
    bool draw_interface = true;
    bool draw_diagonal = true;
    double pixels_per_unit = 0.0;  // 0 picks a size around 900 px wide
};

inline void render_svg(std::ostream& os, const SampleOutcome& out, const RenderOptions& opt = {}) {
    static constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#17becf",
                                                          "#e377c2", "#bcbd22", "#8c564b", "#7f7f7f", "#aec7e8"};
    const BoxGeometry& g = out.geometry;
    const int L = g.side_length();
    const double width_units = 1.5 * (L - 1) + 2.0;
    const double height_units = 0.5 * kSqrt3 * (L - 1) + 2.0;
    const double scale = opt.pixels_per_unit > 0.0 ? opt.pixels_per_unit : std::max(0.5, 900.0 / width_units);
    const double W = width_units * scale;
    const double H = height_units * scale;
    auto X = [&](double x) { return (x + 1.0) * scale; };
    auto Y = [&](double y) { return H - (y + 1.0) * scale; };
    auto pt = [&](const PlanarPoint& p) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", X(p.x), Y(p.y));
        return std::string(buf);
    };

    std::vector<int> highlight(g.num_sites(), -1);
    if (opt.top_k > 0) {
        const auto top = top_classes(class_sizes(out), opt.top_k);
        for (int s = 0; s < g.num_sites(); ++s) {
            for (std::size_t k = 0; k < top.size(); ++k)
                if (out.class_of[s] == top[k].first) highlight[s] = static_cast<int>(k);
        }
    }

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double r = 1.0 / kSqrt3;  // circumradius of a hexagonal cell
    for (int s = 0; s < g.num_sites(); ++s) {
        const PlanarPoint c = embed(g.site(s));
        std::string poly;
        for (int k = 0; k < 6; ++k) {
            const double a = (30.0 + 60.0 * k) * 3.14159265358979323846 / 180.0;
            if (k) poly += ' ';
            poly += pt({c.x + r * std::cos(a), c.y + r * std::sin(a)});
        }
        const char* fill = out.votes[s] ? "#d62728" : "#222222";
        if (highlight[s] >= 0) fill = kPalette[static_cast<std::size_t>(highlight[s]) % kPalette.size()];
        os << "<polygon points=\"" << poly << "\" fill=\"" << fill << "\"";
        if (g.is_boundary(s)) os << " fill-opacity=\"0.6\"";
        os << "/>\n";
    }
    if (opt.draw_diagonal) {
        os << "<polyline points=\"" << pt(embed(g.sw_corner())) << ' ' << pt(embed(g.ne_corner()))
           << "\" fill=\"none\" stroke=\"#4444ff\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n";
    }
    if (opt.draw_interface) {
        const InterfacePath path = trace_interface(g, out.votes);
        auto midpoint = [](const CrossedEdge& e) {
            const PlanarPoint a = embed(e.left);
            const PlanarPoint b = embed(e.right);
            return PlanarPoint{(a.x + b.x) / 2, (a.y + b.y) / 2};
        };
        os << "<polyline points=\"" << pt(midpoint(path.dual_edges.front()));
        for (const auto& v : path.dual_vertices) os << ' ' << pt(v.centroid());
        os << ' ' << pt(midpoint(path.dual_edges.back())) << "\" fill=\"none\" stroke=\"#00c000\" stroke-width=\""
           << std::max(1.0, scale / 4) << "\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace voterlab

#endif  // VOTERLAB_RENDER_HPP
