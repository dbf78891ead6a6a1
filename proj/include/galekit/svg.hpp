#pragma once

#include "galekit/secfan.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace galekit {

namespace detail {

// affine section x+y+z = 1 drawn in a fixed triangle, matching the
// combinatorics of the spherical sections in the figures
struct SectionPoint {
    double x = 0, y = 0;
};

inline SectionPoint section_point(const IntVec& v) {
    Rat s = Rat(v[0]) + Rat(v[1]) + Rat(v[2]);
    if (s <= 0) throw std::invalid_argument("section_point: ray outside the positive section");
    double a = double(Rat(v[0]) / s), b = double(Rat(v[1]) / s), c = double(Rat(v[2]) / s);
    // triangle corners for e1, e2, e3
    const double ax = 60, ay = 540, bx = 560, by = 540, cx = 310, cy = 60;
    return {a * ax + b * bx + c * cx, a * ay + b * by + c * cy};
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

// Rank-3 section figure: markers for the distinct columns of Q, the moving
// cone, and one polygon per moving chamber, labelled in report order.
inline std::string render_section_svg(const IntMat& Q, const std::vector<Chamber>& moving) {
    if (Q.rows() != 3)
        throw std::invalid_argument("render_section_svg: section figures need rank 3");
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"620\" height=\"600\" "
           "viewBox=\"0 0 620 600\">\n";
    svg += "<rect width=\"620\" height=\"600\" fill=\"white\"/>\n";

    auto outline = [&](const std::vector<IntVec>& rays) {
        std::vector<detail::SectionPoint> pts;
        double cx = 0, cy = 0;
        for (const IntVec& r : rays) {
            pts.push_back(detail::section_point(r));
            cx += pts.back().x;
            cy += pts.back().y;
        }
        cx /= double(pts.size());
        cy /= double(pts.size());
        std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
            return std::atan2(p.y - cy, p.x - cx) < std::atan2(q.y - cy, q.x - cx);
        });
        std::string s;
        for (size_t i = 0; i < pts.size(); ++i) {
            if (i) s += ' ';
            s += detail::fmt(pts[i].x) + "," + detail::fmt(pts[i].y);
        }
        return s;
    };
    auto path_of = [&](const std::vector<IntVec>& rays, const std::string& style) {
        std::string pts = outline(rays), d = "M ";
        for (char ch : pts) {
            if (ch == ' ')
                d += " L ";
            else if (ch == ',')
                d += ' ';
            else
                d += ch;
        }
        d += " Z";
        return "<path d=\"" + d + "\" " + style + "/>\n";
    };

    // the Gale dual cone as background, then Mov; one polygon per chamber
    Cone qcone = gale_cone(Q);
    svg += path_of(qcone.rays(), "fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"");
    svg += path_of(mov_cone(Q).rays(), "fill=\"#eeeeee\" stroke=\"#444444\" stroke-width=\"1\"");
    for (size_t k = 0; k < moving.size(); ++k) {
        svg += "<polygon points=\"" + outline(moving[k].cone.rays()) +
               "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
        double cx = 0, cy = 0;
        for (const IntVec& r : moving[k].cone.rays()) {
            auto p = detail::section_point(r);
            cx += p.x;
            cy += p.y;
        }
        cx /= double(moving[k].cone.rays().size());
        cy /= double(moving[k].cone.rays().size());
        svg += "<text x=\"" + detail::fmt(cx) + "\" y=\"" + detail::fmt(cy) +
               "\" font-size=\"14\" text-anchor=\"middle\">\xce\xb3" + std::to_string(k + 1) +
               "</text>\n";
    }

    // one marker per distinct column
    std::set<IntVec> seen;
    for (int j = 0; j < Q.cols(); ++j) {
        IntVec col = make_primitive(Q.col(j));
        if (!seen.insert(col).second) continue;
        auto p = detail::section_point(col);
        svg += "<circle cx=\"" + detail::fmt(p.x) + "\" cy=\"" + detail::fmt(p.y) +
               "\" r=\"3\" fill=\"black\"/>\n";
        svg += "<text x=\"" + detail::fmt(p.x + 6) + "\" y=\"" + detail::fmt(p.y - 6) +
               "\" font-size=\"11\">q" + std::to_string(j + 1) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

inline void write_section_svg(const IntMat& Q, const std::vector<Chamber>& moving,
                              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_section_svg: cannot open " + path);
    out << render_section_svg(Q, moving);
}

}  // namespace galekit
