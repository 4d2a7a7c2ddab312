#include "plot.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace pensive::cli {

namespace {

constexpr double kSize = 640.0;
constexpr double kMargin = 24.0;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

struct Box {
    double xmin{std::numeric_limits<double>::infinity()}, xmax{-std::numeric_limits<double>::infinity()};
    double ymin{std::numeric_limits<double>::infinity()}, ymax{-std::numeric_limits<double>::infinity()};

    void add(Vec2 p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

class Canvas {
public:
    explicit Canvas(const Box& b) {
        double w = std::max(b.xmax - b.xmin, 1e-12), h = std::max(b.ymax - b.ymin, 1e-12);
        scale_ = (kSize - 2 * kMargin) / std::max(w, h);
        x0_ = b.xmin - 0.5 * (std::max(w, h) - w);
        y1_ = b.ymax + 0.5 * (std::max(w, h) - h);
    }
    std::string xy(Vec2 p) const { return num(px(p.x)) + "," + num(py(p.y)); }
    double px(double x) const { return kMargin + (x - x0_) * scale_; }
    double py(double y) const { return kMargin + (y1_ - y) * scale_; }
    double len(double d) const { return d * scale_; }

    std::string polyline(const std::vector<Vec2>& pts, bool closed) const {
        std::string out = closed ? "<polygon points=\"" : "<polyline points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out += ' ';
            out += xy(pts[i]);
        }
        return out + "\"/>\n";
    }

private:
    double scale_{1.0}, x0_{0.0}, y1_{0.0};
};

}  // namespace

bool PlotData::empty() const {
    return boundary.empty() && chords.empty() && slide_arcs.empty() && impacts.empty() && reflections.empty() &&
           vortex_paths.empty() && circles.empty() && scatter.empty();
}

std::string render_svg(const PlotData& d) {
    if (d.empty()) throw Error(ErrorKind::EmptyPlot, "nothing to draw");
    Box box;
    for (Vec2 p : d.boundary) box.add(p);
    for (const auto& [a, b] : d.chords) {
        box.add(a);
        box.add(b);
    }
    for (const auto& arc : d.slide_arcs) for (Vec2 p : arc) box.add(p);
    for (Vec2 p : d.impacts) box.add(p);
    for (Vec2 p : d.reflections) box.add(p);
    for (const auto& path : d.vortex_paths) for (Vec2 p : path.points) box.add(p);
    for (const auto& [c, r] : d.circles) {
        box.add(c - Vec2{r, r});
        box.add(c + Vec2{r, r});
    }
    for (Vec2 p : d.scatter) box.add(p);
    Canvas cv(box);

    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kSize) + "\" height=\"" +
         num(kSize) + "\" viewBox=\"0 0 " + num(kSize) + " " + num(kSize) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!d.title.empty()) {
        s += "<text x=\"" + num(kMargin) + "\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">" + d.title +
             "</text>\n";
    }
    if (!d.boundary.empty()) {
        s += "<g id=\"boundary\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
        s += cv.polyline(d.boundary, true);
        s += "</g>\n";
    }
    if (!d.circles.empty()) {
        s += "<g id=\"annotations\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"2,3\">\n";
        for (const auto& [c, r] : d.circles) {
            s += "<circle cx=\"" + num(cv.px(c.x)) + "\" cy=\"" + num(cv.py(c.y)) + "\" r=\"" + num(cv.len(r)) +
                 "\"/>\n";
        }
        s += "</g>\n";
    }
    if (!d.chords.empty()) {
        s += "<g id=\"chords\" stroke=\"#1f77b4\" stroke-width=\"0.8\" stroke-opacity=\"0.8\">\n";
        for (const auto& [a, b] : d.chords) {
            s += "<line x1=\"" + num(cv.px(a.x)) + "\" y1=\"" + num(cv.py(a.y)) + "\" x2=\"" + num(cv.px(b.x)) +
                 "\" y2=\"" + num(cv.py(b.y)) + "\"/>\n";
        }
        s += "</g>\n";
    }
    if (!d.slide_arcs.empty()) {
        s += "<g id=\"slide-arcs\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2.5\">\n";
        for (const auto& arc : d.slide_arcs) s += cv.polyline(arc, false);
        s += "</g>\n";
    }
    if (!d.vortex_paths.empty()) {
        s += "<g id=\"vortex-paths\" fill=\"none\" stroke-width=\"1.2\">\n";
        for (const auto& path : d.vortex_paths) {
            std::string line = cv.polyline(path.points, false);
            std::string style = std::string(" stroke=\"") + kPalette[path.color % 6] + "\"";
            if (path.dashed) style += " stroke-dasharray=\"6,4\"";
            line.insert(line.find(' '), style);
            s += line;
        }
        s += "</g>\n";
    }
    auto markers = [&](const std::vector<Vec2>& pts, const char* id, const char* fill) {
        if (pts.empty()) return;
        s += std::string("<g id=\"") + id + "\" fill=\"" + fill + "\">\n";
        for (Vec2 p : pts) {
            s += "<circle cx=\"" + num(cv.px(p.x)) + "\" cy=\"" + num(cv.py(p.y)) + "\" r=\"2.5\"/>\n";
        }
        s += "</g>\n";
    };
    markers(d.impacts, "impacts", "#1f77b4");
    markers(d.reflections, "reflections", "#d62728");
    if (!d.scatter.empty()) {
        s += "<g id=\"scatter\" fill=\"black\">\n";
        for (Vec2 p : d.scatter) {
            s += "<rect x=\"" + num(cv.px(p.x) - 0.5) + "\" y=\"" + num(cv.py(p.y) - 0.5) +
                 "\" width=\"1\" height=\"1\"/>\n";
        }
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace pensive::cli
