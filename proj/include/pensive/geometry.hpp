#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pensive/common.hpp"

namespace pensive {

enum class CurveKind { Disk, Ellipse, NeumannOval, Generic, Polygon };

const char* to_string(CurveKind k);

struct Frame {
    Vec2 point;
    Vec2 tangent;
    double curvature{0.0};
};

struct Chord {
    double s2{0.0};
    double theta2{0.0};
    double length{0.0};
};

// Interior angle 2*pi*m/n at a polygon vertex.
struct RationalAngle {
    int m{0};
    int n{1};
};

struct PolygonData {
    std::vector<Vec2> vertices;
    std::vector<double> edge_lengths;
    std::vector<double> vertex_s;  // arc-length position of each vertex
    std::vector<RationalAngle> angles;  // empty when not declared
    long long lcm_denominator{0};       // N, zero when angles are not declared
};

// Smooth curve given by a periodic parameter u; evaluates gamma, gamma', gamma''.
class ParamCurve {
public:
    virtual ~ParamCurve() = default;
    virtual double period() const = 0;
    virtual void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const = 0;
};

class BoundaryCurve {
public:
    static BoundaryCurve disk(double radius);
    static BoundaryCurve ellipse(double a, double b);
    static BoundaryCurve neumann_oval(double lambda);
    // Closed curve through the given points (periodic cubic spline, counterclockwise).
    static BoundaryCurve from_samples(const std::vector<Vec2>& points);
    static BoundaryCurve polygon(const std::vector<Vec2>& vertices,
                                 const std::vector<RationalAngle>& angles = {});
    static BoundaryCurve regular_polygon(int sides, double circumradius);

    CurveKind kind() const;
    bool smooth() const { return kind() != CurveKind::Polygon; }
    bool convex() const;
    double perimeter() const;
    double signed_area() const;
    std::string describe() const;

    // Shape parameters: radius for disks, (a, b) for ellipses, lambda for ovals.
    double param(int i) const;
    const PolygonData& polygon_data() const;

    double wrap_s(double s) const { return wrap(s, perimeter()); }
    double arc_advance(double s, double delta) const { return wrap_s(s + delta); }

    Vec2 point(double s) const;
    Frame frame(double s) const;
    Chord chord(double s, double theta) const;
    // First boundary crossing of the ray origin + t * dir (t > 0) from an interior point.
    // theta2 is measured like chord(): incoming direction against the tangent.
    Chord ray_hit(Vec2 origin, Vec2 dir) const;
    std::pair<double, double> curvature_bounds() const;
    // Winding-number test against a dense boundary polyline.
    bool contains(Vec2 q) const;

    // Smooth kinds: conversion between arc length and the underlying parameter.
    double param_of(double s) const;
    double arclength_of(double u) const;
    const ParamCurve& param_curve() const;

    // Brute-force chord via a dense polyline; used as an independent check.
    Chord polyline_chord(double s, double theta, int samples = 200000) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit BoundaryCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
};

// Neumann-oval conformal map and its inverse on complex numbers stored as Vec2.
struct NeumannMap {
    double lambda{0.0};
    double scale{1.0};
    explicit NeumannMap(double lambda_);
    Vec2 forward(Vec2 z) const;
    Vec2 inverse(Vec2 w) const;
    // Complex derivative F'(Z).
    Vec2 derivative(Vec2 z) const;
};

double neumann_scale(double lambda);

}  // namespace pensive
