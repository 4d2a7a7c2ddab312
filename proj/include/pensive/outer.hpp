#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pensive/billiard.hpp"

namespace pensive {

// Exterior point in tangent coordinates. Right coordinates: X = gamma(s) + r * T(s),
// so X sits on the forward tangent ray; alpha is the direction angle of T(s).
struct OuterPoint {
    Vec2 X;
    double s{0.0};
    double alpha{0.0};
    double r{0.0};
};

OuterPoint tangent_coordinates(const BoundaryCurve& curve, Vec2 X);
// Left coordinates: X = gamma(s) - r * T(s).
OuterPoint left_tangent_coordinates(const BoundaryCurve& curve, Vec2 X);

// Swept-area delay stored as the tangent rotation angle(r) = 2 a(r) / r^2.
class OuterDelay {
public:
    static OuterDelay zero();
    static OuterDelay from_area(std::function<double(double)> area, std::string name = "custom_area");
    static OuterDelay from_angle(std::function<double(double)> angle, std::string name = "custom_angle");
    // a(r) = coefficient * r^power
    static OuterDelay power_area(double coefficient, double power);

    double angle(double r) const { return angle_(r); }
    double area(double r) const { return 0.5 * r * r * angle_(r); }
    const std::string& describe() const { return name_; }

private:
    std::function<double(double)> angle_;
    std::string name_;
};

Vec2 outer_step(const BoundaryCurve& curve, Vec2 X);
// Inverse map, built from the left tangent.
Vec2 outer_step_inverse(const BoundaryCurve& curve, Vec2 Y);
Vec2 pensive_outer_step(const BoundaryCurve& curve, const OuterDelay& delay, Vec2 X);

// Arc length where the tangent direction has turned by `turn` from the tangent at s.
double advance_tangent(const BoundaryCurve& curve, double s, double turn);

// Area swept by the tangent segment of length r while its foot moves from s_from to s_to.
double planar_swept_area(const BoundaryCurve& curve, double s_from, double s_to, double r);

// Central-difference Jacobian of (x, y) -> (alpha, r); its determinant should be 1/r.
Mat2 tangent_coordinate_jacobian(const BoundaryCurve& curve, Vec2 X, double h = 1e-6);

std::vector<Vec2> exterior_samples(const BoundaryCurve& curve, int count, std::uint64_t seed, double r_min,
                                   double r_max);

struct AreaCheck {
    double max_error{0.0};
    std::vector<double> determinants;
};

AreaCheck area_preservation_check(const BoundaryCurve& curve, const OuterDelay& delay,
                                  const std::vector<Vec2>& points, double h = 1e-6);

struct Vec3 {
    double x{0.0}, y{0.0}, z{0.0};
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    double norm() const;
    Vec3 unit() const { return *this * (1.0 / norm()); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

struct SphereJet {
    Vec3 p, d1, d2, d3;
};

// Closed curve on the unit sphere with its first two derivatives in some parameter.
class SphericalCurve {
public:
    // Without `has_third`, d3 is filled in by a central difference of d2.
    SphericalCurve(double period, std::function<SphereJet(double)> eval, bool unit_speed, bool has_third);

    // Circle at angular radius `colatitude` around `axis`, unit speed, counterclockwise
    // seen from outside above the axis.
    static SphericalCurve small_circle(Vec3 axis, double colatitude);

    double period() const { return period_; }
    bool unit_speed() const { return unit_speed_; }
    SphereJet jet(double s) const { return eval_(s); }
    Vec3 point(double s) const { return eval_(s).p; }

    // Dual curve s -> gamma(s) x gamma'(s); needs a unit-speed curve.
    SphericalCurve dual() const;

private:
    double period_;
    std::function<SphereJet(double)> eval_;
    bool unit_speed_;
    bool has_third_;
};

double sphere_swept_integrand(const SphericalCurve& curve, double s);
double sphere_swept_area(const SphericalCurve& curve, double s1, double s2, double theta);

// Swept area on the dual side for a billiard shift: shift(theta) * (1 - cos theta).
double dual_swept_area(const DelayFunction& delay, double theta);

struct DualitySample {
    double s{0.0}, theta{0.0};
    double error{0.0};
};

struct DualityReport {
    double max_error{0.0};
    std::vector<DualitySample> samples;
};

DualityReport sphere_duality_check(const SphericalCurve& curve, const DelayFunction& delay, int samples);

}  // namespace pensive
