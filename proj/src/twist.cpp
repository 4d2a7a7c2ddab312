#include "pensive/twist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pensive {

CBJacobian cb_jacobian(const BoundaryCurve& curve, double s, double theta) {
    if (!curve.smooth()) throw Error(ErrorKind::Unsupported, "classical Jacobian needs a smooth curve");
    Chord c = curve.chord(s, theta);
    CBJacobian J;
    J.s = curve.wrap_s(s);
    J.theta = theta;
    J.S = c.s2;
    J.Theta = c.theta2;
    J.chord_length = c.length;
    J.kappa_s = curve.frame(s).curvature;
    J.kappa_S = curve.frame(c.s2).curvature;
    const double d = c.length, sin_in = std::sin(theta), sin_out = std::sin(c.theta2);
    J.dS_ds = (J.kappa_s * d - sin_in) / sin_out;
    J.dS_dtheta = d / sin_out;
    J.dTheta_ds = (J.kappa_S * J.kappa_s * d - J.kappa_S * sin_in - J.kappa_s * sin_out) / sin_out;
    J.dTheta_dtheta = (J.kappa_S * d - sin_out) / sin_out;
    return J;
}

CBJacobian cb_jacobian_numeric(const BoundaryCurve& curve, double s, double theta, double h) {
    const double P = curve.perimeter();
    Chord c = curve.chord(s, theta);
    Chord sp = curve.chord(s + h, theta), sm = curve.chord(s - h, theta);
    Chord tp = curve.chord(s, theta + h), tm = curve.chord(s, theta - h);
    CBJacobian J;
    J.s = curve.wrap_s(s);
    J.theta = theta;
    J.S = c.s2;
    J.Theta = c.theta2;
    J.chord_length = c.length;
    J.dS_ds = wrap_centered(sp.s2 - sm.s2, P) / (2 * h);
    J.dS_dtheta = wrap_centered(tp.s2 - tm.s2, P) / (2 * h);
    J.dTheta_ds = (sp.theta2 - sm.theta2) / (2 * h);
    J.dTheta_dtheta = (tp.theta2 - tm.theta2) / (2 * h);
    return J;
}

double pensive_dS_dtheta(const BoundaryCurve& curve, const DelayFunction& delay, double s,
                         double theta) {
    CBJacobian J = cb_jacobian(curve, s, theta);
    const double sin_out = std::sin(J.Theta);
    return J.chord_length / sin_out +
           delay.tilde_prime(J.Theta) * (J.kappa_S * J.chord_length - sin_out) / sin_out;
}

PhasePoint classical_preimage(const BoundaryCurve& curve, double S, double Theta) {
    // Reversibility: the chord launched backwards from (S, pi - Theta) retraces the path.
    Chord back = curve.chord(S, kPi - Theta);
    return {back.s2, kPi - back.theta2};
}

const char* to_string(TwistVerdict v) {
    switch (v) {
        case TwistVerdict::Right: return "Right";
        case TwistVerdict::Left: return "Left";
        case TwistVerdict::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

std::string TwistReport::text() const {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "curve: %s\nr: %.12g\nR: %.12g\ndelay: %s\nslope_inf: %.12g\nslope_sup: %.12g\n"
                  "right_bound: %.12g\nleft_bound: %.12g\nverdict: %s\n",
                  curve.c_str(), r, R, delay.c_str(), slope_inf, slope_sup, right_bound, left_bound,
                  to_string(verdict));
    return buf;
}

namespace {

// Infimum and supremum of the shift derivative over (0, pi).
std::pair<double, double> slope_range(const DelayFunction& delay) {
    const double inf = std::numeric_limits<double>::infinity();
    const double k = delay.parameter();
    switch (delay.kind()) {
        case DelayKind::Zero:
        case DelayKind::Constant: return {0.0, 0.0};
        case DelayKind::Linear: return {k, k};
        case DelayKind::Puck: return {-inf, -k};
        case DelayKind::Vortex: return {0.0, k};
        default: break;
    }
    double lo = inf, hi = -inf;
    const int grid = 1024;
    for (int i = 1; i < grid; ++i) {
        double v = delay.tilde_prime(kPi * i / grid);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double th : {1e-9, kPi - 1e-9}) {
        double v = delay.tilde_prime(th);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (delay.kind() == DelayKind::GeneralizedPuck) {
        auto lim = delay.endpoint_limits();
        if (std::isinf(lim.first)) lo = -inf;
    }
    return {lo, hi};
}

}  // namespace

TwistReport twist_certificate(const BoundaryCurve& curve, const DelayFunction& delay) {
    auto [kmin, kmax] = curve.curvature_bounds();
    if (!(kmin > 0)) throw Error(ErrorKind::HypothesisFailed, "curvature must be positive");
    TwistReport rep;
    rep.curve = curve.describe();
    rep.delay = delay.describe();
    rep.R = 1.0 / kmin;
    rep.r = 1.0 / kmax;
    if (rep.r <= 0.5 * rep.R) {
        throw Error(ErrorKind::HypothesisFailed, "curvature radii violate R/2 < r");
    }
    rep.right_bound = -2.0 * rep.r / (2.0 * (rep.R / rep.r) - 1.0);
    rep.left_bound = -2.0 * rep.R / (2.0 * (rep.r / rep.R) - 1.0);
    auto [lo, hi] = slope_range(delay);
    rep.slope_inf = lo;
    rep.slope_sup = hi;
    if (lo > rep.right_bound) {
        rep.verdict = TwistVerdict::Right;
    } else if (hi < rep.left_bound) {
        rep.verdict = TwistVerdict::Left;
    } else {
        rep.verdict = TwistVerdict::Inconclusive;
    }
    return rep;
}

std::pair<double, double> twist_interval(const DelayFunction& delay, double half_perimeter) {
    auto [at0, atpi] = delay.endpoint_limits();
    const double perimeter = 2.0 * half_perimeter;
    double a = at0 / perimeter, b = 1.0 + atpi / perimeter;
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace pensive
