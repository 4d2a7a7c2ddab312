#pragma once

#include <string>
#include <utility>

#include "pensive/billiard.hpp"

namespace pensive {

struct CBJacobian {
    double s{0.0}, theta{0.0};
    double S{0.0}, Theta{0.0};
    double chord_length{0.0};
    double kappa_s{0.0}, kappa_S{0.0};
    double dS_ds{0.0}, dS_dtheta{0.0};
    double dTheta_ds{0.0}, dTheta_dtheta{0.0};

    double det() const { return dS_ds * dTheta_dtheta - dS_dtheta * dTheta_ds; }
    // Equals one when the classical map preserves sin(theta) dtheta ds.
    double weighted_det() const { return det() * std::sin(Theta) / std::sin(theta); }
};

CBJacobian cb_jacobian(const BoundaryCurve& curve, double s, double theta);

// Finite-difference Jacobian of the classical map in (s, theta), for cross-checks.
CBJacobian cb_jacobian_numeric(const BoundaryCurve& curve, double s, double theta, double h = 1e-6);

double pensive_dS_dtheta(const BoundaryCurve& curve, const DelayFunction& delay, double s,
                         double theta);

// Phase point whose classical chord arrives at arc length S with incidence Theta.
PhasePoint classical_preimage(const BoundaryCurve& curve, double S, double Theta);

enum class TwistVerdict { Right, Left, Inconclusive };

const char* to_string(TwistVerdict v);

struct TwistReport {
    TwistVerdict verdict{TwistVerdict::Inconclusive};
    std::string curve;
    std::string delay;
    double r{0.0}, R{0.0};
    double right_bound{0.0};  // slope must stay above this for a right twist
    double left_bound{0.0};   // slope must stay below this for a left twist
    double slope_inf{0.0}, slope_sup{0.0};

    std::string text() const;
};

TwistReport twist_certificate(const BoundaryCurve& curve, const DelayFunction& delay);

// Range of rotation numbers swept by the pensive map on a table of perimeter 2L.
std::pair<double, double> twist_interval(const DelayFunction& delay, double half_perimeter);

}  // namespace pensive
