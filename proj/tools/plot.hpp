#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pensive/common.hpp"

namespace pensive::cli {

struct StyledPath {
    std::vector<Vec2> points;
    bool dashed{false};
    int color{0};
};

// Everything is in data coordinates; render_svg fits the union bounding box.
struct PlotData {
    std::string title;
    std::vector<Vec2> boundary;  // closed polyline
    std::vector<std::pair<Vec2, Vec2>> chords;
    std::vector<std::vector<Vec2>> slide_arcs;
    std::vector<Vec2> impacts;
    std::vector<Vec2> reflections;
    std::vector<StyledPath> vortex_paths;
    std::vector<std::pair<Vec2, double>> circles;  // annotation circles
    std::vector<Vec2> scatter;

    bool empty() const;
};

// SVG 1.1 document with one <g> layer per element family. Throws EmptyPlot on empty data.
std::string render_svg(const PlotData& data);

}  // namespace pensive::cli
