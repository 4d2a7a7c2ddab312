#pragma once

#include <optional>
#include <vector>

#include "pensive/billiard.hpp"

namespace pensive {

struct BounceObjective {
    double value{0.0};
    double derivative{0.0};
    double p_in{0.0};        // incidence cosine seen from A
    double p_out{0.0};       // cosine of the exit toward B, signed as seen from B
    double slide_to{0.0};    // arc length where the ball leaves toward B
};

BounceObjective single_bounce_objective(const BoundaryCurve& curve, const DelayFunction& delay,
                                        Vec2 A, Vec2 B, double s);

// Transit options. In lifted mode S is a lift of the landing arc length measured
// forward from s (s < S < s + 2 * perimeter); otherwise S is taken modulo the perimeter.
struct TransitOptions {
    bool lifted{false};
    std::optional<double> hint;  // continue the branch nearest to this launch cosine
    int grid{256};
};

struct PStarResult {
    std::vector<double> roots;
    double chosen{0.0};
    bool ambiguous{false};
};

PStarResult p_star(const BoundaryCurve& curve, const DelayFunction& delay, double s, double S,
                   const TransitOptions& opt = {});

struct GeneratingFunctionEval {
    double s{0.0}, S{0.0};
    double p_star{0.0};
    double P{0.0};          // exit cosine at the landing point
    double H{0.0};
    double dH_ds{0.0}, dH_dS{0.0};
    bool ambiguous{false};
};

GeneratingFunctionEval generating_function(const BoundaryCurve& curve, const DelayFunction& delay,
                                           double s, double S, const TransitOptions& opt = {});

struct PeriodicOrbit {
    int winding{0};   // p
    int period{0};    // q
    std::vector<double> s;       // lifted arc lengths s_1..s_q
    std::vector<double> theta;
    double action{0.0};
    double gradient_norm{0.0};
    double closure_error{0.0};   // after q forward pensive steps
    int iterations{0};
};

struct OrbitSearchOptions {
    double tolerance{1e-9};
    int max_iterations{60};
    double fd_step{1e-6};
};

// Critical point of the discrete action sum H(s_i, s_{i+1}) with s_{q+1} = s_1 + p * perimeter.
// Each seed lists q starting arc lengths; an empty seed list uses equally spaced seeds.
PeriodicOrbit periodic_orbit_search(const BoundaryCurve& curve, const DelayFunction& delay,
                                    int p, int q, const std::vector<std::vector<double>>& seeds = {},
                                    const OrbitSearchOptions& opt = {});

// Roots of 2 theta + shift(theta) = 2 pi p / q on the unit disk.
std::vector<double> disk_orbit_angles(const DelayFunction& delay, int p, int q);

}  // namespace pensive
