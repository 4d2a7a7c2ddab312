#include "pensive/outer.hpp"

#include "pensive/quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace pensive {

namespace {

constexpr int kScan = 512;

template <class F>
double bracket_root(F&& f, double a, double b, double fa, double fb) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                               boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

void require_strictly_convex(const BoundaryCurve& curve) {
    if (!curve.smooth()) throw Error(ErrorKind::Unsupported, "outer billiards need a smooth curve");
    if (!curve.convex() || curve.curvature_bounds().first <= 0.0) {
        throw Error(ErrorKind::Unsupported, "outer billiards need a strictly convex curve");
    }
}

// Tangency with X on the forward ray (forward = true) or on the backward ray.
OuterPoint tangency(const BoundaryCurve& curve, Vec2 X, bool forward) {
    require_strictly_convex(curve);
    if (curve.contains(X)) throw Error(ErrorKind::NotExterior, "point lies inside the curve");
    const double P = curve.perimeter();
    auto support = [&](double s) {
        Frame f = curve.frame(s);
        return cross(f.tangent, X - f.point);
    };
    double best = -1.0;
    double best_s = 0.0;
    double prev_s = 0.0, prev = support(0.0);
    for (int k = 1; k <= kScan; ++k) {
        double s = P * k / kScan;
        double cur = support(s);
        if ((prev <= 0.0) != (cur <= 0.0)) {
            double root = bracket_root(support, prev_s, s, prev, cur);
            Frame f = curve.frame(root);
            double along = dot(f.tangent, X - f.point);
            if ((forward ? along : -along) > best) {
                best = forward ? along : -along;
                best_s = root;
            }
        }
        prev_s = s;
        prev = cur;
    }
    const double scale = std::sqrt(std::abs(curve.signed_area()));
    if (best <= 1e-12 * scale) throw Error(ErrorKind::NotExterior, "point lies on the curve");
    Frame f = curve.frame(best_s);
    return {X, curve.wrap_s(best_s), std::atan2(f.tangent.y, f.tangent.x), best};
}

}  // namespace

OuterPoint tangent_coordinates(const BoundaryCurve& curve, Vec2 X) { return tangency(curve, X, true); }

OuterPoint left_tangent_coordinates(const BoundaryCurve& curve, Vec2 X) { return tangency(curve, X, false); }

OuterDelay OuterDelay::zero() {
    OuterDelay d;
    d.angle_ = [](double) { return 0.0; };
    d.name_ = "zero";
    return d;
}

OuterDelay OuterDelay::from_area(std::function<double(double)> area, std::string name) {
    OuterDelay d;
    d.angle_ = [area = std::move(area)](double r) { return 2.0 * area(r) / (r * r); };
    d.name_ = std::move(name);
    return d;
}

OuterDelay OuterDelay::from_angle(std::function<double(double)> angle, std::string name) {
    OuterDelay d;
    d.angle_ = std::move(angle);
    d.name_ = std::move(name);
    return d;
}

OuterDelay OuterDelay::power_area(double coefficient, double power) {
    OuterDelay d;
    d.angle_ = [coefficient, power](double r) { return 2.0 * coefficient * std::pow(r, power - 2.0); };
    d.name_ = "power_area(" + std::to_string(coefficient) + "," + std::to_string(power) + ")";
    return d;
}

Vec2 outer_step(const BoundaryCurve& curve, Vec2 X) {
    OuterPoint c = tangent_coordinates(curve, X);
    return 2.0 * curve.point(c.s) - X;
}

Vec2 outer_step_inverse(const BoundaryCurve& curve, Vec2 Y) {
    OuterPoint c = left_tangent_coordinates(curve, Y);
    return 2.0 * curve.point(c.s) - Y;
}

double advance_tangent(const BoundaryCurve& curve, double s, double turn) {
    const double P = curve.perimeter();
    const double laps = std::floor(turn / kTwoPi);
    const double rem = turn - laps * kTwoPi;
    if (rem <= 1e-15) return s + laps * P;
    Vec2 t0 = curve.frame(s).tangent;
    auto turned = [&](double u) {
        if (u >= s + P) return kTwoPi - rem;
        Vec2 t = curve.frame(u).tangent;
        return wrap(std::atan2(cross(t0, t), dot(t0, t)), kTwoPi) - rem;
    };
    double prev_u = s, prev = -rem;
    for (int k = 1; k <= kScan; ++k) {
        double u = s + P * k / kScan;
        double cur = turned(u);
        if (cur >= 0.0) return bracket_root(turned, prev_u, u, prev, cur) + laps * P;
        prev_u = u;
        prev = cur;
    }
    return s + (laps + 1.0) * P;
}

Vec2 pensive_outer_step(const BoundaryCurve& curve, const OuterDelay& delay, Vec2 X) {
    OuterPoint c = tangent_coordinates(curve, X);
    double landing = advance_tangent(curve, c.s, delay.angle(c.r));
    Frame f = curve.frame(curve.wrap_s(landing));
    return f.point - c.r * f.tangent;
}

double planar_swept_area(const BoundaryCurve& curve, double s_from, double s_to, double r) {
    auto column = [&](double s) {
        Frame f = curve.frame(curve.wrap_s(s));
        Vec2 normal = f.tangent.perp();
        return quad::gauss8(
            [&](double lam) {
                Vec2 moving = f.tangent + lam * f.curvature * normal;
                return std::abs(cross(moving, f.tangent));
            },
            0.0, r);
    };
    return quad::integrate(column, s_from, s_to, 1e-13);
}

Mat2 tangent_coordinate_jacobian(const BoundaryCurve& curve, Vec2 X, double h) {
    auto at = [&](Vec2 q) { return tangent_coordinates(curve, q); };
    OuterPoint xp = at(X + Vec2{h, 0}), xm = at(X - Vec2{h, 0});
    OuterPoint yp = at(X + Vec2{0, h}), ym = at(X - Vec2{0, h});
    Mat2 J;
    J[0][0] = wrap_centered(xp.alpha - xm.alpha, kTwoPi) / (2 * h);
    J[0][1] = wrap_centered(yp.alpha - ym.alpha, kTwoPi) / (2 * h);
    J[1][0] = (xp.r - xm.r) / (2 * h);
    J[1][1] = (yp.r - ym.r) / (2 * h);
    return J;
}

std::vector<Vec2> exterior_samples(const BoundaryCurve& curve, int count, std::uint64_t seed, double r_min,
                                   double r_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> us(0.0, curve.perimeter()), ur(r_min, r_max);
    std::vector<Vec2> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        Frame f = curve.frame(us(rng));
        out.push_back(f.point + ur(rng) * f.tangent);
    }
    return out;
}

AreaCheck area_preservation_check(const BoundaryCurve& curve, const OuterDelay& delay,
                                  const std::vector<Vec2>& points, double h) {
    AreaCheck out;
    for (Vec2 X : points) {
        auto F = [&](Vec2 q) { return pensive_outer_step(curve, delay, q); };
        Vec2 dx = (F(X + Vec2{h, 0}) - F(X - Vec2{h, 0})) / (2 * h);
        Vec2 dy = (F(X + Vec2{0, h}) - F(X - Vec2{0, h})) / (2 * h);
        double d = dx.x * dy.y - dx.y * dy.x;
        out.determinants.push_back(d);
        out.max_error = std::max(out.max_error, std::abs(d - 1.0));
    }
    return out;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

SphericalCurve::SphericalCurve(double period, std::function<SphereJet(double)> eval, bool unit_speed,
                               bool has_third)
    : period_(period), eval_(std::move(eval)), unit_speed_(unit_speed), has_third_(has_third) {
    if (!(period > 0.0)) throw Error(ErrorKind::InvalidParameter, "spherical curve period must be positive");
    for (int k = 0; k < 16; ++k) {
        if (std::abs(eval_(period * k / 16).p.norm() - 1.0) > 1e-10) {
            throw Error(ErrorKind::InvalidParameter, "spherical curve leaves the unit sphere");
        }
    }
    if (!has_third_) {
        auto base = eval_;
        const double h = 1e-4 * period;
        eval_ = [base, h](double s) {
            SphereJet j = base(s);
            j.d3 = (base(s + h).d2 - base(s - h).d2) * (0.5 / h);
            return j;
        };
        has_third_ = true;
    }
}

SphericalCurve SphericalCurve::small_circle(Vec3 axis, double colatitude) {
    if (!(colatitude > 0.0 && colatitude < kPi)) {
        throw Error(ErrorKind::InvalidParameter, "colatitude must lie in (0, pi)");
    }
    const Vec3 a = axis.unit();
    Vec3 helper = std::abs(a.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = (helper - a * dot(helper, a)).unit();
    const Vec3 e2 = cross(a, e1);
    const double rho = std::sin(colatitude), h = std::cos(colatitude);
    auto eval = [=](double s) {
        double phi = s / rho, c = std::cos(phi), sn = std::sin(phi);
        SphereJet j;
        j.p = a * h + (e1 * c + e2 * sn) * rho;
        j.d1 = e2 * c - e1 * sn;
        j.d2 = (e1 * c + e2 * sn) * (-1.0 / rho);
        j.d3 = (e1 * sn - e2 * c) * (1.0 / (rho * rho));
        return j;
    };
    return SphericalCurve(kTwoPi * rho, eval, true, true);
}

SphericalCurve SphericalCurve::dual() const {
    if (!unit_speed_) throw Error(ErrorKind::InvalidParameter, "dual curve needs arc-length parametrization");
    auto base = eval_;
    auto eval = [base](double s) {
        SphereJet g = base(s);
        SphereJet d;
        d.p = cross(g.p, g.d1);
        d.d1 = cross(g.p, g.d2);
        d.d2 = cross(g.d1, g.d2) + cross(g.p, g.d3);
        return d;
    };
    return SphericalCurve(period_, eval, false, false);
}

double sphere_swept_integrand(const SphericalCurve& curve, double s) {
    SphereJet j = curve.jet(s);
    return std::abs(dot(j.d2, cross(j.p, j.d1))) / dot(j.d1, j.d1);
}

double sphere_swept_area(const SphericalCurve& curve, double s1, double s2, double theta) {
    double integral = quad::integrate([&](double s) { return sphere_swept_integrand(curve, s); }, s1, s2, 1e-13);
    return (1.0 - std::cos(theta)) * integral;
}

double dual_swept_area(const DelayFunction& delay, double theta) {
    return delay.tilde(theta) * (1.0 - std::cos(theta));
}

namespace {

void require_spherically_convex(const SphericalCurve& curve) {
    if (!curve.unit_speed()) throw Error(ErrorKind::InvalidParameter, "curve must be arc-length parametrized");
    const int n = 256;
    Vec3 centroid;
    for (int k = 0; k < n; ++k) centroid = centroid + curve.point(curve.period() * k / n);
    if (centroid.norm() < 1e-9) throw Error(ErrorKind::Unsupported, "curve is not inside an open hemisphere");
    Vec3 pole = centroid.unit();
    for (int k = 0; k < n; ++k) {
        SphereJet j = curve.jet(curve.period() * k / n);
        if (dot(j.p, pole) <= 1e-9) throw Error(ErrorKind::Unsupported, "curve is not inside an open hemisphere");
        if (dot(j.d2, cross(j.p, j.d1)) <= 0.0) {
            throw Error(ErrorKind::Unsupported, "geodesic curvature is not positive");
        }
    }
}

// Pole of the great circle leaving gamma(s) at angle theta, toward the inside.
Vec3 launch_pole(const SphereJet& j, double theta) {
    Vec3 inward = cross(j.p, j.d1);
    Vec3 dir = j.d1 * std::cos(theta) + inward * std::sin(theta);
    return cross(j.p, dir);
}

struct SphereBounce {
    Vec3 incoming_pole;
    Vec3 outgoing_pole;
    double theta{0.0};
};

SphereBounce spherical_pensive_step(const SphericalCurve& curve, const DelayFunction& delay, double s,
                                    double theta) {
    const double P = curve.period();
    const Vec3 pole = launch_pole(curve.jet(s), theta);
    auto side = [&](double u) { return dot(pole, curve.point(u)); };
    double prev_u = s + P / kScan, prev = side(prev_u);
    double hit = std::nan("");
    for (int k = 2; k < kScan; ++k) {
        double u = s + P * k / kScan;
        double cur = side(u);
        if (prev < 0.0 && cur >= 0.0) {
            hit = bracket_root(side, prev_u, u, prev, cur);
            break;
        }
        prev_u = u;
        prev = cur;
    }
    if (std::isnan(hit)) throw Error(ErrorKind::NotFound, "geodesic chord did not return to the curve");

    SphereJet q = curve.jet(hit);
    Vec3 travel = cross(pole, q.p);
    Vec3 inward = cross(q.p, q.d1);
    double theta2 = std::atan2(-dot(travel, inward), dot(travel, q.d1));

    // Carry the (tangent, inward normal) frame along the curve and relaunch at the same angle.
    SphereJet landing = curve.jet(hit + delay.tilde(theta2));
    return {pole, launch_pole(landing, theta2), theta2};
}

Vec3 dual_tangent(const SphereJet& j) { return j.d1.unit(); }

Vec3 pensive_outer_on_dual(const SphericalCurve& dual, const DelayFunction& delay, Vec3 X) {
    const double P = dual.period();
    auto support = [&](double u) {
        SphereJet j = dual.jet(u);
        return dot(X, cross(j.p, j.d1));
    };
    double foot = std::nan("");
    double prev_u = 0.0, prev = support(0.0);
    for (int k = 1; k <= kScan; ++k) {
        double u = P * k / kScan;
        double cur = support(u);
        if ((prev <= 0.0) != (cur <= 0.0)) {
            double root = bracket_root(support, prev_u, u, prev, cur);
            if (dot(X, dual_tangent(dual.jet(root))) < 0.0) foot = root;
        }
        prev_u = u;
        prev = cur;
    }
    if (std::isnan(foot)) throw Error(ErrorKind::NotFound, "no tangent great circle through the pole");

    SphereJet at = dual.jet(foot);
    const double seg = std::atan2(-dot(X, dual_tangent(at)), dot(X, at.p));
    const double target = dual_swept_area(delay, seg);

    double end = foot;
    if (target != 0.0) {
        auto excess = [&](double u) { return sphere_swept_area(dual, foot, u, seg) - target; };
        const double dir = target > 0.0 ? 1.0 : -1.0;
        double a = foot, fa = -target;
        double b = foot + dir * P / 16, fb = excess(b);
        while ((fb > 0.0) == (fa > 0.0)) {
            a = b;
            fa = fb;
            b += dir * P / 16;
            fb = excess(b);
        }
        end = a < b ? bracket_root(excess, a, b, fa, fb) : bracket_root(excess, b, a, fb, fa);
    }
    SphereJet q = dual.jet(end);
    return q.p * std::cos(seg) + dual_tangent(q) * std::sin(seg);
}

}  // namespace

DualityReport sphere_duality_check(const SphericalCurve& curve, const DelayFunction& delay, int samples) {
    require_spherically_convex(curve);
    if (samples <= 0) throw Error(ErrorKind::InvalidParameter, "sample count must be positive");
    const SphericalCurve dual = curve.dual();
    const double golden = 0.6180339887498949;
    DualityReport report;
    for (int k = 0; k < samples; ++k) {
        double s = curve.period() * k / samples;
        double frac = std::fmod(0.5 + k * golden, 1.0);
        double theta = 0.15 + (kPi - 0.3) * frac;
        SphereBounce b = spherical_pensive_step(curve, delay, s, theta);
        Vec3 image = pensive_outer_on_dual(dual, delay, b.incoming_pole);
        double err = (image - b.outgoing_pole).norm();
        report.samples.push_back({s, theta, err});
        report.max_error = std::max(report.max_error, err);
    }
    return report;
}

}  // namespace pensive
