#include "pensive/geometry.hpp"

#include "pensive/quadrature.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <cstdio>
#include <limits>
#include <numeric>

namespace pensive {

namespace {

using cplx = std::complex<double>;

using quad::gauss8;

Vec2 as_vec(cplx z) { return {z.real(), z.imag()}; }
cplx as_cplx(Vec2 v) { return {v.x, v.y}; }

class DiskParam final : public ParamCurve {
public:
    explicit DiskParam(double r) : r_(r) {}
    double period() const override { return kTwoPi; }
    void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
        double c = std::cos(u), s = std::sin(u);
        p = {r_ * c, r_ * s};
        d1 = {-r_ * s, r_ * c};
        d2 = {-r_ * c, -r_ * s};
    }

private:
    double r_;
};

class EllipseParam final : public ParamCurve {
public:
    EllipseParam(double a, double b) : a_(a), b_(b) {}
    double period() const override { return kTwoPi; }
    void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
        double c = std::cos(u), s = std::sin(u);
        p = {a_ * c, b_ * s};
        d1 = {-a_ * s, b_ * c};
        d2 = {-a_ * c, -b_ * s};
    }

private:
    double a_, b_;
};

class NeumannParam final : public ParamCurve {
public:
    explicit NeumannParam(double lambda) : map_(lambda) {}
    double period() const override { return kTwoPi; }
    void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
        const double l2 = map_.lambda * map_.lambda, a = map_.scale;
        cplx Z = std::polar(1.0, u);
        cplx w = l2 * Z * Z;
        cplx den = 1.0 - w;
        cplx F = a * Z / den;
        cplx F1 = a * (1.0 + w) / (den * den);
        cplx F2 = a * 2.0 * l2 * Z * (3.0 + w) / (den * den * den);
        cplx I(0.0, 1.0);
        p = as_vec(F);
        d1 = as_vec(F1 * I * Z);
        d2 = as_vec(-F2 * Z * Z - F1 * Z);
    }

private:
    NeumannMap map_;
};

// Periodic cubic spline through points parametrized by cumulative chord length.
class SplineParam final : public ParamCurve {
public:
    explicit SplineParam(const std::vector<Vec2>& pts) : pts_(pts) {
        const std::size_t n = pts_.size();
        knots_.resize(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            knots_[i + 1] = knots_[i] + distance(pts_[i], pts_[(i + 1) % n]);
        }
        mx_ = second_derivatives([&](std::size_t i) { return pts_[i % n].x; });
        my_ = second_derivatives([&](std::size_t i) { return pts_[i % n].y; });
    }

    double period() const override { return knots_.back(); }

    void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
        const std::size_t n = pts_.size();
        double t = wrap(u, period());
        std::size_t i = std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin();
        i = std::clamp<std::size_t>(i, 1, n) - 1;
        const std::size_t j = (i + 1) % n;
        const double h = knots_[i + 1] - knots_[i];
        const double A = knots_[i + 1] - t, B = t - knots_[i];
        auto comp = [&](double yi, double yj, double Mi, double Mj, double& v, double& v1,
                        double& v2) {
            double ci = yi / h - Mi * h / 6.0, cj = yj / h - Mj * h / 6.0;
            v = Mi * A * A * A / (6 * h) + Mj * B * B * B / (6 * h) + ci * A + cj * B;
            v1 = -Mi * A * A / (2 * h) + Mj * B * B / (2 * h) - ci + cj;
            v2 = (Mi * A + Mj * B) / h;
        };
        comp(pts_[i].x, pts_[j].x, mx_[i], mx_[j], p.x, d1.x, d2.x);
        comp(pts_[i].y, pts_[j].y, my_[i], my_[j], p.y, d1.y, d2.y);
    }

private:
    template <class Y>
    std::vector<double> second_derivatives(Y&& y) const {
        const std::size_t n = pts_.size();
        std::vector<double> h(n), rhs(n), M(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) h[i] = knots_[i + 1] - knots_[i];
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t im = (i + n - 1) % n;
            rhs[i] = 6.0 * ((y(i + 1) - y(i)) / h[i] - (y(i) - y(im)) / h[im]);
        }
        // The cyclic system is strictly diagonally dominant; Gauss-Seidel converges fast.
        for (int sweep = 0; sweep < 500; ++sweep) {
            double change = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
                double next = (rhs[i] - h[im] * M[im] - h[i] * M[ip]) / (2.0 * (h[im] + h[i]));
                change = std::max(change, std::abs(next - M[i]));
                scale = std::max(scale, std::abs(next));
                M[i] = next;
            }
            if (change <= 1e-15 * std::max(scale, 1.0)) break;
        }
        return M;
    }

    std::vector<Vec2> pts_;
    std::vector<double> knots_;
    std::vector<double> mx_, my_;
};

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

}  // namespace

const char* to_string(CurveKind k) {
    switch (k) {
        case CurveKind::Disk: return "disk";
        case CurveKind::Ellipse: return "ellipse";
        case CurveKind::NeumannOval: return "neumann_oval";
        case CurveKind::Generic: return "generic";
        case CurveKind::Polygon: return "polygon";
    }
    return "unknown";
}

double neumann_scale(double lambda) {
    double l4 = std::pow(lambda, 4);
    return (1.0 - l4) / std::sqrt(1.0 + l4);
}

NeumannMap::NeumannMap(double lambda_) : lambda(lambda_), scale(neumann_scale(lambda_)) {}

Vec2 NeumannMap::forward(Vec2 z) const {
    cplx Z = as_cplx(z);
    return as_vec(scale * Z / (1.0 - lambda * lambda * Z * Z));
}

Vec2 NeumannMap::derivative(Vec2 z) const {
    cplx w = lambda * lambda * as_cplx(z) * as_cplx(z);
    return as_vec(scale * (1.0 + w) / ((1.0 - w) * (1.0 - w)));
}

Vec2 NeumannMap::inverse(Vec2 wv) const {
    // lambda^2 w Z^2 + a Z - w = 0, root through the origin branch.
    cplx w = as_cplx(wv);
    cplx Z = 2.0 * w / (scale + std::sqrt(scale * scale + 4.0 * lambda * lambda * w * w));
    for (int it = 0; it < 3; ++it) {
        cplx F = scale * Z / (1.0 - lambda * lambda * Z * Z);
        cplx dF = as_cplx(derivative(as_vec(Z)));
        Z -= (F - w) / dF;
    }
    return as_vec(Z);
}

struct BoundaryCurve::Impl {
    CurveKind kind{CurveKind::Disk};
    std::array<double, 2> params{0.0, 0.0};
    std::shared_ptr<const ParamCurve> pc;
    int panels{0};
    double panel_width{0.0};
    std::vector<double> cumulative;
    double perimeter{0.0};
    double area{0.0};
    double kappa_min{0.0}, kappa_max{0.0};
    bool convex{true};
    PolygonData poly;

    double speed(double u) const {
        Vec2 p, d1, d2;
        pc->eval(u, p, d1, d2);
        return d1.norm();
    }

    void build_smooth(int n_panels) {
        panels = n_panels;
        const double T = pc->period();
        panel_width = T / panels;
        cumulative.assign(panels + 1, 0.0);
        double twice_area = 0.0;
        for (int k = 0; k < panels; ++k) {
            double a = k * panel_width, b = a + panel_width;
            cumulative[k + 1] = cumulative[k] + gauss8([&](double u) { return speed(u); }, a, b);
            twice_area += gauss8(
                [&](double u) {
                    Vec2 p, d1, d2;
                    pc->eval(u, p, d1, d2);
                    return cross(p, d1);
                },
                a, b);
        }
        perimeter = cumulative.back();
        area = 0.5 * twice_area;
        kappa_min = std::numeric_limits<double>::infinity();
        kappa_max = -kappa_min;
        const int scan = 4096;
        for (int k = 0; k < scan; ++k) {
            Vec2 p, d1, d2;
            pc->eval(T * k / scan, p, d1, d2);
            double n = d1.norm();
            double kap = cross(d1, d2) / (n * n * n);
            kappa_min = std::min(kappa_min, kap);
            kappa_max = std::max(kappa_max, kap);
        }
        convex = kappa_min >= -1e-9;
    }

    double arclength(double u) const {
        if (kind == CurveKind::Disk) return params[0] * u;
        const double T = pc->period();
        double turns = std::floor(u / T);
        double ur = u - turns * T;
        int k = std::min(static_cast<int>(ur / panel_width), panels - 1);
        double a = k * panel_width;
        return turns * perimeter + cumulative[k] +
               gauss8([&](double v) { return speed(v); }, a, ur);
    }

    double param(double s) const {
        if (kind == CurveKind::Disk) return wrap(s, perimeter) / params[0];
        double sr = wrap(s, perimeter);
        int k = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), sr) -
                                 cumulative.begin()) - 1;
        k = std::clamp(k, 0, panels - 1);
        double frac = (sr - cumulative[k]) / (cumulative[k + 1] - cumulative[k]);
        double u = (k + frac) * panel_width;
        for (int it = 0; it < 12; ++it) {
            double f = arclength(u) - sr;
            u -= f / speed(u);
            if (std::abs(f) < 1e-15 * perimeter) break;
        }
        return u;
    }

    void build_polygon(const std::vector<Vec2>& v, const std::vector<RationalAngle>& ang) {
        const std::size_t n = v.size();
        poly.vertices = v;
        poly.edge_lengths.resize(n);
        poly.vertex_s.resize(n);
        double acc = 0.0, twice_area = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            poly.vertex_s[i] = acc;
            poly.edge_lengths[i] = distance(v[i], v[(i + 1) % n]);
            acc += poly.edge_lengths[i];
            twice_area += cross(v[i], v[(i + 1) % n]);
        }
        perimeter = acc;
        area = 0.5 * twice_area;
        convex = true;
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 e0 = v[i] - v[(i + n - 1) % n], e1 = v[(i + 1) % n] - v[i];
            if (cross(e0, e1) < 0) convex = false;
        }
        poly.angles = ang;
        poly.lcm_denominator = 0;
        if (!ang.empty()) {
            if (ang.size() != n) {
                throw Error(ErrorKind::InvalidParameter, "one rational angle per vertex required");
            }
            long long N = 1;
            for (std::size_t i = 0; i < n; ++i) {
                Vec2 e0 = v[i] - v[(i + n - 1) % n], e1 = v[(i + 1) % n] - v[i];
                double interior = kPi - std::atan2(cross(e0, e1), dot(e0, e1));
                double declared = kTwoPi * ang[i].m / ang[i].n;
                if (std::abs(interior - declared) > 1e-12) {
                    throw Error(ErrorKind::InvalidParameter,
                                "declared angle does not match vertex " + std::to_string(i));
                }
                N = lcm_ll(N, ang[i].n / std::gcd(ang[i].m, ang[i].n));
            }
            poly.lcm_denominator = N;
        }
    }
};

BoundaryCurve BoundaryCurve::disk(double radius) {
    if (!(radius > 0)) throw Error(ErrorKind::InvalidParameter, "disk radius must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = CurveKind::Disk;
    impl->params = {radius, 0.0};
    impl->pc = std::make_shared<DiskParam>(radius);
    impl->build_smooth(64);
    impl->perimeter = kTwoPi * radius;
    impl->area = kPi * radius * radius;
    impl->kappa_min = impl->kappa_max = 1.0 / radius;
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
    if (!(a > 0 && b > 0)) throw Error(ErrorKind::InvalidParameter, "ellipse axes must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = CurveKind::Ellipse;
    impl->params = {a, b};
    impl->pc = std::make_shared<EllipseParam>(a, b);
    impl->build_smooth(4096);
    double lo = std::min(a, b), hi = std::max(a, b);
    impl->kappa_min = lo / (hi * hi);
    impl->kappa_max = hi / (lo * lo);
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::neumann_oval(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "neumann oval requires 0 <= lambda < 1");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = CurveKind::NeumannOval;
    impl->params = {lambda, neumann_scale(lambda)};
    impl->pc = std::make_shared<NeumannParam>(lambda);
    impl->build_smooth(4096);
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::from_samples(const std::vector<Vec2>& points) {
    if (points.size() < 4) throw Error(ErrorKind::InvalidParameter, "need at least 4 sample points");
    std::vector<Vec2> pts = points;
    if (distance(pts.front(), pts.back()) < 1e-14) pts.pop_back();
    double twice_area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) twice_area += cross(pts[i], pts[(i + 1) % pts.size()]);
    if (twice_area < 0) std::reverse(pts.begin(), pts.end());
    auto impl = std::make_shared<Impl>();
    impl->kind = CurveKind::Generic;
    impl->params = {static_cast<double>(pts.size()), 0.0};
    impl->pc = std::make_shared<SplineParam>(pts);
    impl->build_smooth(std::max<int>(4096, 8 * static_cast<int>(pts.size())));
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::polygon(const std::vector<Vec2>& vertices,
                                     const std::vector<RationalAngle>& angles) {
    if (vertices.size() < 3) throw Error(ErrorKind::InvalidParameter, "polygon needs 3 vertices");
    auto impl = std::make_shared<Impl>();
    impl->kind = CurveKind::Polygon;
    impl->params = {static_cast<double>(vertices.size()), 0.0};
    impl->build_polygon(vertices, angles);
    if (impl->area <= 0) throw Error(ErrorKind::InvalidParameter, "polygon must be counterclockwise");
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::regular_polygon(int sides, double circumradius) {
    if (sides < 3) throw Error(ErrorKind::InvalidParameter, "polygon needs 3 vertices");
    std::vector<Vec2> v;
    for (int k = 0; k < sides; ++k) {
        double a = kPi / 2 + kTwoPi * k / sides;
        v.emplace_back(circumradius * std::cos(a), circumradius * std::sin(a));
    }
    int m = sides - 2, n = 2 * sides, g = std::gcd(m, n);
    std::vector<RationalAngle> ang(sides, RationalAngle{m / g, n / g});
    return polygon(v, ang);
}

CurveKind BoundaryCurve::kind() const { return impl_->kind; }
bool BoundaryCurve::convex() const { return impl_->convex; }
double BoundaryCurve::perimeter() const { return impl_->perimeter; }
double BoundaryCurve::signed_area() const { return impl_->area; }
double BoundaryCurve::param(int i) const { return impl_->params.at(i); }

const PolygonData& BoundaryCurve::polygon_data() const {
    if (kind() != CurveKind::Polygon) throw Error(ErrorKind::Unsupported, "not a polygon");
    return impl_->poly;
}

const ParamCurve& BoundaryCurve::param_curve() const {
    if (!smooth()) throw Error(ErrorKind::Unsupported, "polygon has no smooth parametrization");
    return *impl_->pc;
}

std::string BoundaryCurve::describe() const {
    char buf[128];
    switch (kind()) {
        case CurveKind::Disk: std::snprintf(buf, sizeof buf, "disk(R=%g)", param(0)); break;
        case CurveKind::Ellipse:
            std::snprintf(buf, sizeof buf, "ellipse(a=%g,b=%g)", param(0), param(1));
            break;
        case CurveKind::NeumannOval:
            std::snprintf(buf, sizeof buf, "neumann_oval(lambda=%g)", param(0));
            break;
        case CurveKind::Generic:
            std::snprintf(buf, sizeof buf, "generic(%d points)", static_cast<int>(param(0)));
            break;
        case CurveKind::Polygon:
            std::snprintf(buf, sizeof buf, "polygon(%d vertices)", static_cast<int>(param(0)));
            break;
    }
    return buf;
}

double BoundaryCurve::param_of(double s) const {
    if (!smooth()) throw Error(ErrorKind::Unsupported, "polygon has no smooth parametrization");
    return impl_->param(s);
}

double BoundaryCurve::arclength_of(double u) const {
    if (!smooth()) throw Error(ErrorKind::Unsupported, "polygon has no smooth parametrization");
    return impl_->arclength(u);
}

Vec2 BoundaryCurve::point(double s) const {
    if (smooth()) {
        Vec2 p, d1, d2;
        impl_->pc->eval(impl_->param(s), p, d1, d2);
        return p;
    }
    const auto& P = impl_->poly;
    double sr = wrap_s(s);
    std::size_t i = std::upper_bound(P.vertex_s.begin(), P.vertex_s.end(), sr) - P.vertex_s.begin() - 1;
    const std::size_t n = P.vertices.size();
    double w = (sr - P.vertex_s[i]) / P.edge_lengths[i];
    return P.vertices[i] + (P.vertices[(i + 1) % n] - P.vertices[i]) * w;
}

Frame BoundaryCurve::frame(double s) const {
    if (smooth()) {
        Vec2 p, d1, d2;
        impl_->pc->eval(impl_->param(s), p, d1, d2);
        double n = d1.norm();
        return {p, d1 / n, cross(d1, d2) / (n * n * n)};
    }
    const auto& P = impl_->poly;
    const std::size_t n = P.vertices.size();
    double sr = wrap_s(s);
    std::size_t i = std::upper_bound(P.vertex_s.begin(), P.vertex_s.end(), sr) - P.vertex_s.begin() - 1;
    double offset = sr - P.vertex_s[i];
    if (offset < 1e-9 || P.edge_lengths[i] - offset < 1e-9) {
        throw Error(ErrorKind::CornerUndefined, "tangent undefined at polygon vertex");
    }
    Vec2 e = (P.vertices[(i + 1) % n] - P.vertices[i]) / P.edge_lengths[i];
    return {point(s), e, 0.0};
}

std::pair<double, double> BoundaryCurve::curvature_bounds() const {
    if (!smooth()) throw Error(ErrorKind::Unsupported, "curvature bounds need a smooth curve");
    return {impl_->kappa_min, impl_->kappa_max};
}

bool BoundaryCurve::contains(Vec2 q) const {
    std::vector<Vec2> ring;
    if (smooth()) {
        const int n = 2048;
        const double T = impl_->pc->period();
        for (int k = 0; k < n; ++k) {
            Vec2 p, d1, d2;
            impl_->pc->eval(T * k / n, p, d1, d2);
            ring.push_back(p);
        }
    } else {
        ring = impl_->poly.vertices;
    }
    double winding = 0.0;
    for (std::size_t k = 0; k < ring.size(); ++k) {
        Vec2 a = ring[k] - q, b = ring[(k + 1) % ring.size()] - q;
        winding += std::atan2(cross(a, b), dot(a, b));
    }
    return std::abs(winding) > kPi;
}

Chord BoundaryCurve::chord(double s, double theta) const {
    if (!(theta >= 1e-6 && theta <= kPi - 1e-6)) {
        throw Error(ErrorKind::InvalidAngle, "shot angle must lie in (1e-6, pi - 1e-6)");
    }
    if (!smooth()) {
        const auto& P = impl_->poly;
        const std::size_t n = P.vertices.size();
        Frame f0 = frame(s);
        const double sr = wrap_s(s);
        std::size_t e0 = std::upper_bound(P.vertex_s.begin(), P.vertex_s.end(), sr) - P.vertex_s.begin() - 1;
        Vec2 d = f0.tangent.rotated(theta);
        double best_t = std::numeric_limits<double>::infinity();
        std::size_t best_e = 0;
        double best_w = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == e0) continue;
            Vec2 A = P.vertices[j], B = P.vertices[(j + 1) % n], E = B - A;
            double den = cross(d, E);
            if (std::abs(den) < 1e-300) continue;
            double t = cross(A - f0.point, E) / den;
            double w = cross(A - f0.point, d) / den;
            if (t > 1e-12 && w >= -1e-12 && w <= 1.0 + 1e-12 && t < best_t) {
                best_t = t;
                best_e = j;
                best_w = std::clamp(w, 0.0, 1.0);
            }
        }
        if (!std::isfinite(best_t)) throw Error(ErrorKind::CornerHit, "ray missed every edge");
        double along = best_w * P.edge_lengths[best_e];
        if (along < 1e-9 || P.edge_lengths[best_e] - along < 1e-9) {
            throw Error(ErrorKind::CornerHit, "ray lands on a polygon vertex");
        }
        Vec2 T2 = (P.vertices[(best_e + 1) % n] - P.vertices[best_e]) / P.edge_lengths[best_e];
        Chord c;
        c.s2 = wrap_s(P.vertex_s[best_e] + along);
        c.theta2 = std::atan2(cross(d, T2), dot(d, T2));
        c.length = best_t;
        return c;
    }

    const ParamCurve& pc = *impl_->pc;
    const double T = pc.period();
    const double u0 = impl_->param(s);
    Vec2 p0, t0, k0;
    pc.eval(u0, p0, t0, k0);
    const Vec2 d = t0.unit().rotated(theta);
    auto g = [&](double u) {
        Vec2 p, d1, d2;
        pc.eval(u, p, d1, d2);
        return cross(d, p - p0);
    };
    const bool cvx = impl_->convex;
    const int M = cvx ? 256 : 4096;
    const double step = T / M;

    double lo = step;
    for (int it = 0; it < 200 && g(u0 + lo) >= 0.0; ++it) lo *= 0.5;
    double hi = step;
    for (int it = 0; it < 200 && g(u0 + T - hi) <= 0.0; ++it) hi *= 0.5;

    std::vector<double> us;
    us.push_back(u0 + lo);
    for (int k = 1; k < M; ++k) {
        double u = u0 + k * step;
        if (u > u0 + lo && u < u0 + T - hi) us.push_back(u);
    }
    us.push_back(u0 + T - hi);

    auto refine = [&](double a, double b) {
        double ga = g(a);
        double u = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            Vec2 p, d1, d2;
            pc.eval(u, p, d1, d2);
            double gu = cross(d, p - p0), gp = cross(d, d1);
            if (gu == 0.0) break;
            if ((gu < 0) == (ga < 0)) a = u; else b = u;
            double nu = (gp != 0.0) ? u - gu / gp : 0.5 * (a + b);
            if (!(nu > a && nu < b)) nu = 0.5 * (a + b);
            if (std::abs(nu - u) <= 1e-16 * T) { u = nu; break; }
            u = nu;
            if (b - a <= 4e-16 * T) break;
        }
        return u;
    };

    double best_t = std::numeric_limits<double>::infinity();
    double best_u = 0.0;
    double prev = g(us[0]);
    for (std::size_t i = 1; i < us.size(); ++i) {
        double cur = g(us[i]);
        if ((prev < 0) != (cur < 0)) {
            double u = refine(us[i - 1], us[i]);
            Vec2 p, d1, d2;
            pc.eval(u, p, d1, d2);
            double t = dot(d, p - p0);
            if (t > 0 && t < best_t) {
                best_t = t;
                best_u = u;
            }
            if (cvx && std::isfinite(best_t)) break;
        }
        prev = cur;
    }
    if (!std::isfinite(best_t)) throw Error(ErrorKind::NotFound, "no boundary intersection along ray");
    Vec2 p2, d1, d2;
    pc.eval(best_u, p2, d1, d2);
    Vec2 T2 = d1.unit();
    Chord c;
    c.s2 = wrap_s(impl_->arclength(best_u));
    c.theta2 = std::atan2(cross(d, T2), dot(d, T2));
    c.length = distance(p2, p0);
    return c;
}

Chord BoundaryCurve::ray_hit(Vec2 origin, Vec2 dir) const {
    const Vec2 d = dir.unit();
    if (!smooth()) {
        const auto& P = impl_->poly;
        const std::size_t n = P.vertices.size();
        double best_t = std::numeric_limits<double>::infinity();
        Chord c;
        for (std::size_t j = 0; j < n; ++j) {
            Vec2 A = P.vertices[j], E = P.vertices[(j + 1) % n] - A;
            double den = cross(d, E);
            if (std::abs(den) < 1e-300) continue;
            double t = cross(A - origin, E) / den;
            double w = cross(A - origin, d) / den;
            if (t > 0.0 && w >= 0.0 && w <= 1.0 && t < best_t) {
                best_t = t;
                Vec2 T2 = E / P.edge_lengths[j];
                c = {wrap_s(P.vertex_s[j] + w * P.edge_lengths[j]), std::atan2(cross(d, T2), dot(d, T2)), t};
            }
        }
        if (!std::isfinite(best_t)) throw Error(ErrorKind::NotFound, "ray misses the polygon");
        return c;
    }
    const ParamCurve& pc = *impl_->pc;
    const double T = pc.period();
    auto g = [&](double u) {
        Vec2 p, d1, d2;
        pc.eval(u, p, d1, d2);
        return cross(d, p - origin);
    };
    const int M = impl_->convex ? 512 : 4096;
    double best_t = std::numeric_limits<double>::infinity(), best_u = 0.0;
    double prev = g(0.0);
    for (int k = 1; k <= M; ++k) {
        double a = T * (k - 1) / M, b = T * k / M;
        double cur = g(b);
        if ((prev < 0) != (cur < 0)) {
            double ga = prev;
            for (int it = 0; it < 200 && b - a > 4e-16 * T; ++it) {
                double m = 0.5 * (a + b), gm = g(m);
                if ((gm < 0) == (ga < 0)) { a = m; ga = gm; } else { b = m; }
            }
            double u = 0.5 * (a + b);
            Vec2 p, d1, d2;
            pc.eval(u, p, d1, d2);
            double t = dot(d, p - origin);
            if (t > 0 && t < best_t) {
                best_t = t;
                best_u = u;
            }
        }
        prev = cur;
    }
    if (!std::isfinite(best_t)) throw Error(ErrorKind::NotFound, "ray does not reach the boundary");
    Vec2 p2, d1, d2;
    pc.eval(best_u, p2, d1, d2);
    Vec2 T2 = d1.unit();
    return {wrap_s(impl_->arclength(best_u)), std::atan2(cross(d, T2), dot(d, T2)), distance(p2, origin)};
}

Chord BoundaryCurve::polyline_chord(double s, double theta, int samples) const {
    const double P = perimeter();
    std::vector<Vec2> pts(samples);
    for (int k = 0; k < samples; ++k) pts[k] = point(P * k / samples);
    Frame f0 = frame(s);
    Vec2 d = f0.tangent.rotated(theta);
    double best_t = std::numeric_limits<double>::infinity(), best_s = 0.0;
    const double min_t = 1e-7 * std::sqrt(std::abs(signed_area()));
    for (int k = 0; k < samples; ++k) {
        Vec2 A = pts[k], B = pts[(k + 1) % samples], E = B - A;
        double den = cross(d, E);
        if (den == 0.0) continue;
        double t = cross(A - f0.point, E) / den;
        double w = cross(A - f0.point, d) / den;
        if (t > min_t && w >= 0.0 && w <= 1.0 && t < best_t) {
            best_t = t;
            best_s = P * (k + w) / samples;
        }
    }
    if (!std::isfinite(best_t)) throw Error(ErrorKind::NotFound, "polyline oracle found no hit");
    Vec2 T2 = smooth() ? frame(best_s).tangent : (point(best_s + 1e-7) - point(best_s - 1e-7)).unit();
    return {wrap_s(best_s), std::atan2(cross(d, T2), dot(d, T2)), best_t};
}

}  // namespace pensive
