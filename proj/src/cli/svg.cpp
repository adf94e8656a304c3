#include "iterplan/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace iterplan::cli {

namespace {

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00")
        s = "0.00";
    return s;
}

std::string tick_label(double v)
{
    char buf[32];
    if (v != 0 && (std::fabs(v) >= 1e5 || std::fabs(v) < 1e-2))
        std::snprintf(buf, sizeof buf, "%.0e", v);
    else
        std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;
    double px0 = 0, px1 = 1; // pixel range

    [[nodiscard]] double map(double v) const
    {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double t = ((log ? std::log10(v) : v) - a) / (b - a);
        return px0 + t * (px1 - px0);
    }

    [[nodiscard]] std::vector<double> ticks() const
    {
        std::vector<double> out;
        if (log) {
            for (double d = std::floor(std::log10(lo)); d <= std::ceil(std::log10(hi)) + 1e-9; d += 1) {
                const double v = std::pow(10.0, d);
                if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9))
                    out.push_back(v);
            }
            return out;
        }
        const double raw = (hi - lo) / 5;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0})
            if (raw <= m * mag) {
                step = m * mag;
                break;
            }
        for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
            out.push_back(std::fabs(v) < step * 1e-9 ? 0.0 : v);
        return out;
    }
};

Axis value_axis(double lo, double hi, double px0, double px1)
{
    if (!(hi > lo)) {
        lo = std::min(lo, 0.0);
        hi = lo + 1;
    }
    Axis a{lo, hi, false, px0, px1};
    // Round the top to the next tick.
    const auto t = a.ticks();
    const double step = t.size() > 1 ? t[1] - t[0] : (hi - lo);
    a.hi = std::ceil(hi / step - 1e-9) * step;
    return a;
}

} // namespace

std::string svg_chart(const std::vector<RunRow>& rows, PlotKind kind)
{
    constexpr double width = 640, height = 420, left = 70, right = 140, top = 40, bottom = 55;
    const bool overhead = kind == PlotKind::overhead;
    std::set<std::size_t> us, ts;
    for (const auto& r : rows) {
        us.insert(r.universe);
        ts.insert(r.targets);
    }
    const bool by_targets = us.size() <= 1 && ts.size() > 1;

    struct Mark {
        std::string sorter;
        double x, y, err;
    };
    std::vector<Mark> marks;
    if (kind == PlotKind::scatter) {
        for (const auto& r : rows)
            if (!std::isnan(r.sim_s))
                marks.push_back({r.sorter, static_cast<double>(by_targets ? r.targets : r.universe), r.sim_s, 0});
    } else {
        for (const auto& p : aggregate(rows, overhead))
            marks.push_back({p.sorter, p.x, p.mean, p.err3});
    }

    std::vector<std::string> sorters;
    for (const auto& m : marks)
        if (std::find(sorters.begin(), sorters.end(), m.sorter) == sorters.end())
            sorters.push_back(m.sorter);
    std::sort(sorters.begin(), sorters.end());

    double xlo = 1, xhi = 10, ylo = 0, yhi = 1;
    if (!marks.empty()) {
        xlo = xhi = marks[0].x;
        yhi = -1e300;
        for (const auto& m : marks) {
            xlo = std::min(xlo, m.x);
            xhi = std::max(xhi, m.x);
            ylo = std::min(ylo, m.y - m.err);
            yhi = std::max(yhi, m.y + m.err);
        }
        yhi *= 1.05;
    }
    Axis xa;
    if (xlo > 0 && xhi / xlo >= 100) {
        xa = {std::pow(10.0, std::floor(std::log10(xlo))), std::pow(10.0, std::ceil(std::log10(xhi))), true,
              left, width - right};
    } else {
        const double pad = xhi > xlo ? 0.05 * (xhi - xlo) : std::max(1.0, 0.05 * xlo);
        xa = value_axis(std::max(0.0, xlo - pad), xhi + pad, left, width - right);
        xa.lo = std::max(0.0, xlo - pad);
    }
    const Axis ya = value_axis(ylo, yhi, height - bottom, top);

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    const char* title = kind == PlotKind::overhead ? "overhead ratio" : "simulated duration (s)";
    s += "<text x=\"" + num(width / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" + title +
         "</text>\n";

    // Axes and ticks.
    s += "<g stroke=\"black\" fill=\"none\">\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(height - bottom) + "\" x2=\"" + num(width - right) +
         "\" y2=\"" + num(height - bottom) + "\"/>\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(height - bottom) + "\"/>\n";
    s += "</g>\n<g fill=\"black\">\n";
    for (double v : xa.ticks()) {
        const double px = xa.map(v);
        s += "<line x1=\"" + num(px) + "\" y1=\"" + num(height - bottom) + "\" x2=\"" + num(px) + "\" y2=\"" +
             num(height - bottom + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(px) + "\" y=\"" + num(height - bottom + 18) + "\" text-anchor=\"middle\">" +
             tick_label(v) + "</text>\n";
    }
    for (double v : ya.ticks()) {
        const double py = ya.map(v);
        s += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(left) + "\" y2=\"" + num(py) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + tick_label(v) +
             "</text>\n";
    }
    s += "<text x=\"" + num((left + width - right) / 2) + "\" y=\"" + num(height - 15) +
         "\" text-anchor=\"middle\">" + (by_targets ? "cells to cover" : "universe size") + "</text>\n";
    s += "</g>\n";

    for (std::size_t k = 0; k < sorters.size(); ++k) {
        const std::string colour = palette[k % std::size(palette)];
        std::vector<const Mark*> series;
        for (const auto& m : marks)
            if (m.sorter == sorters[k])
                series.push_back(&m);
        std::stable_sort(series.begin(), series.end(), [](const Mark* a, const Mark* b) { return a->x < b->x; });

        s += "<g class=\"series\" data-sorter=\"" + escape(sorters[k]) + "\" stroke=\"" + colour + "\" fill=\"" +
             colour + "\">\n";
        if (kind != PlotKind::scatter && series.size() > 1) {
            s += "<polyline fill=\"none\" points=\"";
            for (std::size_t i = 0; i < series.size(); ++i)
                s += (i ? " " : "") + num(xa.map(series[i]->x)) + "," + num(ya.map(series[i]->y));
            s += "\"/>\n";
        }
        for (const Mark* m : series) {
            const double px = xa.map(m->x);
            if (m->err > 0)
                s += "<line x1=\"" + num(px) + "\" y1=\"" + num(ya.map(m->y - m->err)) + "\" x2=\"" + num(px) +
                     "\" y2=\"" + num(ya.map(m->y + m->err)) + "\"/>\n";
            s += "<circle cx=\"" + num(px) + "\" cy=\"" + num(ya.map(m->y)) + "\" r=\"3\"/>\n";
        }
        s += "</g>\n";
        const double ly = top + 10 + 18 * static_cast<double>(k);
        s += "<line x1=\"" + num(width - right + 15) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(width - right + 35) +
             "\" y2=\"" + num(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(width - right + 40) + "\" y=\"" + num(ly + 4) + "\">" + escape(sorters[k]) +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string svg_flight_path(const missions::MissionConfig& c, const missions::MissionResult& result)
{
    const GridMap& g = c.grid;
    const double h = g.pitch / 2;
    const double ca = std::cos(g.axis_heading), sa = std::sin(g.axis_heading);
    auto corner = [&](CellId id, double dx, double dy) {
        const Point p = cell_center(g, id);
        return Point{p.x + dx * ca - dy * sa, p.y + dx * sa + dy * ca};
    };

    // World bounds from the grid corners and the flown path.
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    auto extend = [&](Point p) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    };
    const CellId last = static_cast<CellId>(g.size() - 1);
    for (CellId id : {CellId{0}, g.at(0, g.cols - 1), g.at(g.rows - 1, 0), last})
        for (double dx : {-h, h})
            for (double dy : {-h, h})
                extend(corner(id, dx, dy));
    for (const auto& r : result.log.records)
        if (r.kind == missions::RecordKind::pose)
            extend(r.pose.position);

    constexpr double margin = 20, max_px = 800;
    const double scale = max_px / std::max(maxx - minx, maxy - miny);
    const double width = (maxx - minx) * scale + 2 * margin;
    const double height = (maxy - miny) * scale + 2 * margin;
    auto px = [&](Point p) { return num(margin + (p.x - minx) * scale) + "," + num(margin + (maxy - p.y) * scale); };
    auto cell_poly = [&](CellId id, const std::string& attrs) {
        return "<polygon points=\"" + px(corner(id, -h, -h)) + " " + px(corner(id, h, -h)) + " " +
               px(corner(id, h, h)) + " " + px(corner(id, -h, h)) + "\" " + attrs + "/>\n";
    };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";

    // Individual cell outlines only for grids small enough to read.
    s += "<g class=\"grid\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.5\">\n";
    if (g.size() <= 10'000) {
        for (CellId id = 0; id < g.size(); ++id)
            s += cell_poly(id, "");
    }
    s += "<polygon points=\"" + px(corner(0, -h, -h)) + " " + px(corner(g.at(0, g.cols - 1), h, -h)) + " " +
         px(corner(last, h, h)) + " " + px(corner(g.at(g.rows - 1, 0), -h, h)) + "\" stroke=\"#888888\"/>\n";
    s += "</g>\n";

    auto shade = [&](const std::vector<CellId>& cells, const char* cls, const char* fill) {
        if (cells.empty())
            return;
        s += std::string("<g class=\"") + cls + "\" fill=\"" + fill + "\" fill-opacity=\"0.35\" stroke=\"none\">\n";
        for (CellId id : cells)
            s += cell_poly(id, "");
        s += "</g>\n";
    };
    shade(c.patrol, "patrol", "#4a90d9");
    shade(c.roi, "roi", "#f5a623");
    shade(c.cover, "cover", "#7ed321");
    shade(c.fire, "fire", "#d0021b");
    if (c.target)
        shade({*c.target}, "target", "#bd10e0");
    for (std::size_t k = 0; k < c.waypoints.size(); ++k) {
        const Point p = cell_center(g, c.waypoints[k]);
        s += "<text class=\"waypoint\" x=\"" + num(margin + (p.x - minx) * scale) + "\" y=\"" +
             num(margin + (maxy - p.y) * scale + 4) + "\" text-anchor=\"middle\">" + std::to_string(k + 1) +
             "</text>\n";
    }

    s += "<polyline class=\"path\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\" points=\"";
    bool first = true;
    for (const auto& r : result.log.records)
        if (r.kind == missions::RecordKind::pose) {
            s += (first ? "" : " ") + px(r.pose.position);
            first = false;
        }
    s += "\"/>\n";

    // Photo markers, one per cell, sized by how many photos were taken there.
    std::map<CellId, std::size_t> photos;
    for (const auto& r : result.log.records)
        if (r.kind == missions::RecordKind::photo && r.cell)
            ++photos[*r.cell];
    s += "<g class=\"photos\" fill=\"#d0021b\" fill-opacity=\"0.8\" stroke=\"black\" stroke-width=\"0.5\">\n";
    for (const auto& [id, count] : photos) {
        const Point p = cell_center(g, id);
        const double r = std::min(3 + 1.5 * std::log2(static_cast<double>(count)), g.pitch * scale / 2);
        s += "<circle cx=\"" + num(margin + (p.x - minx) * scale) + "\" cy=\"" + num(margin + (maxy - p.y) * scale) +
             "\" r=\"" + num(r) + "\" data-count=\"" + std::to_string(count) + "\"/>\n";
    }
    s += "</g>\n";

    const Point home = cell_center(g, c.home);
    s += "<rect class=\"home\" x=\"" + num(margin + (home.x - minx) * scale - 4) + "\" y=\"" +
         num(margin + (maxy - home.y) * scale - 4) + "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
    s += "</svg>\n";
    return s;
}

} // namespace iterplan::cli
