#include "pensive/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace pensive {

namespace {

void check_landing(const BoundaryCurve& curve, double s) {
    if (curve.smooth()) return;
    const double P = curve.perimeter();
    for (double v : curve.polygon_data().vertex_s) {
        if (std::abs(wrap_centered(s - v, P)) < 1e-9) {
            throw Error(ErrorKind::CornerHit, "slide lands on a polygon vertex");
        }
    }
}

}  // namespace

PhasePoint classical_step(const BoundaryCurve& curve, const PhasePoint& x) {
    Chord c = curve.chord(x.s, x.theta);
    return {c.s2, c.theta2};
}

StepRecord pensive_step_record(const BoundaryCurve& curve, const DelayFunction& delay,
                               const PhasePoint& x) {
    Chord c = curve.chord(x.s, x.theta);
    StepRecord r;
    r.impact_s = c.s2;
    r.chord_length = c.length;
    double landing = curve.arc_advance(c.s2, delay.tilde(c.theta2));
    check_landing(curve, landing);
    r.next = {landing, c.theta2};
    r.impact = curve.point(c.s2);
    r.reflect = curve.point(landing);
    return r;
}

PhasePoint pensive_step(const BoundaryCurve& curve, const DelayFunction& delay, const PhasePoint& x) {
    Chord c = curve.chord(x.s, x.theta);
    double landing = curve.arc_advance(c.s2, delay.tilde(c.theta2));
    check_landing(curve, landing);
    return {landing, c.theta2};
}

double disk_rotation_angle(const DelayFunction& delay, double theta) {
    return 2.0 * theta + delay.tilde(theta);
}

double caustic_radius(double radius, double theta) { return radius * std::abs(std::cos(theta)); }

Trajectory iterate(const BoundaryCurve& curve, const DelayFunction& delay, const PhasePoint& x0,
                   int steps) {
    Trajectory t;
    t.delay = delay.describe();
    t.curve = curve.describe();
    t.points.push_back(x0);
    PhasePoint x = x0;
    for (int k = 0; k < steps; ++k) {
        try {
            StepRecord r = pensive_step_record(curve, delay, x);
            t.impacts.push_back(r.impact);
            t.reflections.push_back(r.reflect);
            t.impact_s.push_back(r.impact_s);
            t.points.push_back(r.next);
            x = r.next;
        } catch (const Error& e) {
            t.error = e.what();
            break;
        }
    }
    return t;
}

Mat2 pensive_jacobian_sp(const BoundaryCurve& curve, const DelayFunction& delay,
                         const PhasePoint& x, double h) {
    const double P = curve.perimeter();
    const double p0 = x.p();
    auto at = [&](double s, double p) { return pensive_step(curve, delay, PhasePoint::from_p(s, p)); };
    PhasePoint sp = at(x.s + h, p0), sm = at(x.s - h, p0);
    PhasePoint pp = at(x.s, p0 + h), pm = at(x.s, p0 - h);
    Mat2 J;
    J[0][0] = wrap_centered(sp.s - sm.s, P) / (2 * h);
    J[0][1] = wrap_centered(pp.s - pm.s, P) / (2 * h);
    J[1][0] = (sp.p() - sm.p()) / (2 * h);
    J[1][1] = (pp.p() - pm.p()) / (2 * h);
    return J;
}

int IETRealization::level_of(double theta, double tol) const {
    for (std::size_t k = 0; k < angles.size(); ++k) {
        if (std::abs(angles[k] - theta) < tol) return static_cast<int>(k);
    }
    return -1;
}

double IETRealization::transversal(int level, double s) const {
    double along = orientation[level] > 0 ? s : perimeter - s;
    return offsets[level] + along * std::sin(angles[level]);
}

const IETPiece* IETRealization::locate(int level, double s) const {
    for (const auto& piece : pieces) {
        if (piece.level == level && s >= piece.s_begin && s < piece.s_end) return &piece;
    }
    return nullptr;
}

IETRealization iet_realize(const BoundaryCurve& polygon, const DelayFunction& delay, double theta0) {
    if (polygon.kind() != CurveKind::Polygon) {
        throw Error(ErrorKind::Unsupported, "interval exchange realization needs a polygon");
    }
    const PolygonData& data = polygon.polygon_data();
    if (data.angles.empty()) {
        throw Error(ErrorKind::Unsupported, "polygon angles are not declared rational");
    }
    if (!polygon.convex()) throw Error(ErrorKind::Unsupported, "polygon must be convex");
    if (!(theta0 > 0 && theta0 < kPi)) throw Error(ErrorKind::InvalidAngle, "theta0 outside (0, pi)");

    const std::size_t n = data.vertices.size();
    const double P = polygon.perimeter();
    std::vector<double> edge_angle(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 e = data.vertices[(i + 1) % n] - data.vertices[i];
        edge_angle[i] = std::atan2(e.y, e.x);
    }

    // Breadth-first closure of the angle orbit; each bounce flips the sheet orientation.
    std::vector<std::pair<double, int>> levels{{theta0, 1}};
    std::deque<std::pair<double, int>> queue{{theta0, 1}};
    const std::size_t cap = 4 * static_cast<std::size_t>(data.lcm_denominator) + 8;
    auto known = [&](double th) {
        for (const auto& lv : levels) {
            if (std::abs(lv.first - th) < 1e-9) return true;
        }
        return false;
    };
    while (!queue.empty()) {
        auto [th, orient] = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double next = wrap(edge_angle[j] - edge_angle[i] - th, kTwoPi);
                if (next <= 1e-12 || next >= kPi - 1e-12 || known(next)) continue;
                levels.push_back({next, -orient});
                queue.push_back({next, -orient});
                if (levels.size() > cap) throw Error(ErrorKind::Unsupported, "angle orbit is not finite");
            }
        }
    }
    std::sort(levels.begin(), levels.end());
    IETRealization out;
    out.perimeter = P;
    double acc = 0.0;
    for (const auto& [th, orient] : levels) {
        out.angles.push_back(th);
        out.orientation.push_back(orient);
        out.offsets.push_back(acc);
        acc += P * std::sin(th);
    }
    out.total_length = acc;

    for (std::size_t k = 0; k < out.angles.size(); ++k) {
        const double th = out.angles[k];
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 A = data.vertices[i];
            const Vec2 E = data.vertices[(i + 1) % n] - A;
            const double len = data.edge_lengths[i], s0 = data.vertex_s[i];
            const Vec2 d = (E / len).rotated(th);
            std::vector<double> cuts{s0, s0 + len};
            for (std::size_t m = 0; m < n; ++m) {
                if (m == i || m == (i + 1) % n) continue;
                double den = cross(E, d);
                double w = cross(data.vertices[m] - A, d) / den;
                if (w > 0.0 && w < 1.0) cuts.push_back(s0 + w * len);
            }
            std::sort(cuts.begin(), cuts.end());
            std::vector<double> refined;
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                double a = cuts[c], b = cuts[c + 1];
                refined.push_back(a);
                if (b - a < 1e-12) continue;
                double mid = 0.5 * (a + b);
                Chord ch = polygon.chord(mid, th);
                double slope = -std::sin(th) / std::sin(ch.theta2);
                double land_mid = ch.s2 + delay.tilde(ch.theta2);
                // Cut where the landing point wraps through s = 0.
                double land_lo = land_mid - std::abs((a - mid) * slope);
                double land_hi = land_mid + std::abs((b - mid) * slope);
                for (double q = std::ceil(land_lo / P) * P; q < land_hi; q += P) {
                    double sc = mid + (q - land_mid) / slope;
                    if (sc > a && sc < b) refined.push_back(sc);
                }
            }
            refined.push_back(cuts.back());
            std::sort(refined.begin(), refined.end());
            for (std::size_t c = 0; c + 1 < refined.size(); ++c) {
                double a = refined[c], b = refined[c + 1];
                if (b - a < 1e-12) continue;
                double mid = 0.5 * (a + b);
                Chord ch = polygon.chord(mid, th);
                double landing = wrap(ch.s2 + delay.tilde(ch.theta2), P);
                int target = out.level_of(ch.theta2, 1e-8);
                if (target < 0) throw Error(ErrorKind::NotFound, "reached angle outside the orbit");
                IETPiece piece;
                piece.level = static_cast<int>(k);
                piece.target_level = target;
                piece.s_begin = a;
                piece.s_end = b;
                // Raw chords reverse the boundary orientation.
                piece.slope = -1.0 * out.orientation[k] * out.orientation[target];
                piece.shift = out.transversal(target, landing) -
                              piece.slope * out.transversal(piece.level, mid);
                piece.chord_length = ch.length;
                out.pieces.push_back(piece);
            }
        }
    }
    return out;
}

}  // namespace pensive
