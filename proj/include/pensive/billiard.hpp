#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pensive/delay.hpp"
#include "pensive/geometry.hpp"

namespace pensive {

struct PhasePoint {
    double s{0.0};
    double theta{kPi / 2};

    double p() const { return std::cos(theta); }
    static PhasePoint from_p(double s, double p) { return {s, std::acos(p)}; }
};

struct StepRecord {
    PhasePoint next;
    double impact_s{0.0};
    Vec2 impact;
    Vec2 reflect;
    double chord_length{0.0};
};

struct Trajectory {
    std::vector<PhasePoint> points;
    std::vector<Vec2> impacts;
    std::vector<Vec2> reflections;
    std::vector<double> impact_s;
    std::string delay;
    std::string curve;
    std::optional<std::string> error;
};

PhasePoint classical_step(const BoundaryCurve& curve, const PhasePoint& x);
PhasePoint pensive_step(const BoundaryCurve& curve, const DelayFunction& delay, const PhasePoint& x);
StepRecord pensive_step_record(const BoundaryCurve& curve, const DelayFunction& delay,
                               const PhasePoint& x);

// Rotation angle of the pensive map on the unit disk for incidence theta.
double disk_rotation_angle(const DelayFunction& delay, double theta);
double caustic_radius(double radius, double theta);

Trajectory iterate(const BoundaryCurve& curve, const DelayFunction& delay, const PhasePoint& x0,
                   int steps);

using Mat2 = std::array<std::array<double, 2>, 2>;

// Central-difference Jacobian of (s, p) -> (S, P); rows are (S, P), columns (s, p).
Mat2 pensive_jacobian_sp(const BoundaryCurve& curve, const DelayFunction& delay,
                         const PhasePoint& x, double h = 1e-6);
inline double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

// Interval-exchange data for a rational polygon. Each accessible angle theta_k gets a
// sheet of length perimeter * sin(theta_k); on the sheet the boundary is read forwards
// or backwards so that every bounce becomes a translation of the transversal coordinate.
struct IETPiece {
    int level{0};          // index of the launch angle
    int target_level{0};   // index of the angle after the step
    double s_begin{0.0};
    double s_end{0.0};
    double slope{1.0};     // +1 for a translation, -1 where a flip cannot be avoided
    double shift{0.0};     // image = slope * x + shift in transversal coordinates
    double chord_length{0.0};  // at the midpoint; the flow's roof function
};

struct IETRealization {
    std::vector<double> angles;
    std::vector<double> offsets;
    std::vector<int> orientation;  // +1 reads s forwards, -1 backwards
    double perimeter{0.0};
    double total_length{0.0};
    std::vector<IETPiece> pieces;

    int level_of(double theta, double tol = 1e-8) const;
    double transversal(int level, double s) const;
    const IETPiece* locate(int level, double s) const;
};

IETRealization iet_realize(const BoundaryCurve& polygon, const DelayFunction& delay, double theta0);

}  // namespace pensive
