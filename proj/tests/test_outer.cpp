#include "doctest.h"

#include <cmath>
#include <random>

#include "pensive/outer.hpp"
#include "pensive/quadrature.hpp"

using namespace pensive;

namespace {

BoundaryCurve rounded_square() {
    std::vector<Vec2> pts;
    for (int k = 0; k < 400; ++k) {
        double phi = kTwoPi * k / 400;
        double rad = 1.0 + 0.05 * std::cos(4 * phi);
        pts.push_back({rad * std::cos(phi), rad * std::sin(phi)});
    }
    return BoundaryCurve::from_samples(pts);
}

double total_turn(const BoundaryCurve& curve, double s0, double s1) {
    return quad::integrate([&](double s) { return curve.frame(curve.wrap_s(s)).curvature; }, s0, s1, 1e-14);
}

}  // namespace

TEST_CASE("circle tangent from an exterior point") {
    auto circle = BoundaryCurve::disk(1.0);
    OuterPoint c = tangent_coordinates(circle, {2.0, 0.0});
    CHECK(c.r == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    Vec2 P = circle.point(c.s);
    CHECK(P.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(P.y < 0.0);
    Frame f = circle.frame(c.s);
    CHECK(distance(f.point + c.r * f.tangent, c.X) < 1e-10);
    for (double d : {1.1, 3.0, 25.0}) {
        CHECK(tangent_coordinates(circle, {d, 0.0}).r == doctest::Approx(std::sqrt(d * d - 1)).epsilon(1e-12));
    }
}

TEST_CASE("ellipse tangent agrees with the polar-line construction") {
    // Polar of (3,1) for x^2/4 + y^2 = 1 is 3x/4 + y = 1; it meets the ellipse at (0,1) and (24/13,-5/13).
    auto ell = BoundaryCurve::ellipse(2.0, 1.0);
    Vec2 X{3.0, 1.0};
    OuterPoint right = tangent_coordinates(ell, X);
    OuterPoint left = left_tangent_coordinates(ell, X);
    CHECK(distance(ell.point(right.s), Vec2{24.0 / 13, -5.0 / 13}) < 1e-8);
    CHECK(distance(ell.point(left.s), Vec2{0.0, 1.0}) < 1e-8);
    CHECK(right.r == doctest::Approx(std::sqrt(549.0) / 13).epsilon(1e-10));
    CHECK(left.r == doctest::Approx(3.0).epsilon(1e-10));

    // Support line: the whole curve stays on one side of the line through X and P.
    Vec2 P = ell.point(right.s);
    Vec2 d = (X - P).unit();
    double worst = 1e9;
    for (int k = 0; k < 20000; ++k) worst = std::min(worst, cross(d, ell.point(ell.perimeter() * k / 20000) - P));
    CHECK(worst > -1e-8);
}

TEST_CASE("points inside or on the curve are rejected") {
    auto ell = BoundaryCurve::ellipse(2.0, 1.0);
    CHECK_THROWS_AS(tangent_coordinates(ell, {0.5, 0.2}), Error);
    try {
        tangent_coordinates(ell, {0.0, 0.0});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotExterior);
    }
    CHECK_THROWS_AS(tangent_coordinates(BoundaryCurve::regular_polygon(5, 1.0), {3.0, 0.0}), Error);
}

TEST_CASE("outer step reflects through the tangency point") {
    auto circle = BoundaryCurve::disk(1.0);
    Vec2 X{2.0, 0.0};
    Vec2 Y = outer_step(circle, X);
    Vec2 P = circle.point(tangent_coordinates(circle, X).s);
    CHECK(distance(Y, P) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(distance(Y + X, 2.0 * P) < 1e-12);

    auto ell = BoundaryCurve::ellipse(2.0, 1.0);
    for (Vec2 Z : exterior_samples(ell, 50, 3, 0.1, 4.0)) {
        Vec2 W = outer_step(ell, Z);
        CHECK(distance(outer_step_inverse(ell, W), Z) < 1e-9);
        OuterPoint a = tangent_coordinates(ell, Z), b = left_tangent_coordinates(ell, W);
        CHECK(std::abs(a.r - b.r) < 1e-9);
        CHECK(std::abs(wrap_centered(a.alpha - b.alpha, kTwoPi)) < 1e-9);
    }
}

TEST_CASE("far field of a rounded square") {
    auto sq = rounded_square();
    for (double phi : {0.1, 1.0, 2.5, 4.0}) {
        Vec2 X{200 * std::cos(phi), 200 * std::sin(phi)};
        CHECK(std::abs(outer_step(sq, X).norm() / X.norm() - 1.0) < 0.01);
    }
}

TEST_CASE("pensive outer step with zero area is the classical step") {
    auto ell = BoundaryCurve::ellipse(1.5, 1.0);
    for (Vec2 X : exterior_samples(ell, 30, 7, 0.2, 3.0)) {
        CHECK(distance(pensive_outer_step(ell, OuterDelay::zero(), X), outer_step(ell, X)) < 1e-12);
    }
}

TEST_CASE("half-turn area on the unit circle") {
    // Tangency jumps to the antipode: Y = -P + r T(P) = X - 2P. Each step turns alpha by pi - 2 atan(r).
    auto circle = BoundaryCurve::disk(1.0);
    auto half_turn = OuterDelay::from_area([](double r) { return r * r * kPi / 2; }, "half_turn");
    for (Vec2 X : exterior_samples(circle, 20, 11, 0.1, 3.0)) {
        OuterPoint c = tangent_coordinates(circle, X);
        CHECK(half_turn.angle(c.r) == doctest::Approx(kPi).epsilon(1e-12));
        Vec2 Y = pensive_outer_step(circle, half_turn, X);
        CHECK(distance(Y, X - 2.0 * circle.point(c.s)) < 1e-9);
        OuterPoint next = tangent_coordinates(circle, Y);
        CHECK(std::abs(next.r - c.r) < 1e-9);
        CHECK(std::abs(wrap_centered(next.alpha - c.alpha + 2 * std::atan(c.r) - kPi, kTwoPi)) < 1e-9);
    }
}

TEST_CASE("delay stored as an angle reproduces the area") {
    auto d = OuterDelay::power_area(1.0, 3.0);
    for (double r : {0.1, 0.7, 2.0}) {
        CHECK(std::abs(d.area(r) - r * r * r) < 1e-12 * r * r * r);
        CHECK(std::abs(d.angle(r) - 2.0 * r) < 1e-12);
    }
    auto byangle = OuterDelay::from_angle([](double r) { return 0.3 / r; });
    CHECK(byangle.area(2.0) == doctest::Approx(0.5 * 4 * 0.15));
}

TEST_CASE("pensive outer step keeps r and sweeps the prescribed area") {
    auto ell = BoundaryCurve::ellipse(1.5, 1.0);
    auto cubic = OuterDelay::power_area(1.0, 3.0);
    for (Vec2 X : exterior_samples(ell, 25, 5, 0.2, 2.0)) {
        OuterPoint c = tangent_coordinates(ell, X);
        Vec2 Y = pensive_outer_step(ell, cubic, X);
        OuterPoint back = left_tangent_coordinates(ell, Y);
        CHECK(std::abs(back.r - c.r) < 1e-9);
        double landing = advance_tangent(ell, c.s, cubic.angle(c.r));
        double swept = planar_swept_area(ell, c.s, landing, c.r);
        CHECK(std::abs(swept - cubic.area(c.r)) < 1e-8);
        CHECK(std::abs(wrap_centered(back.s - landing, ell.perimeter())) < 1e-9);
    }
}

TEST_CASE("planar swept area is half r squared times the turning") {
    auto oval = BoundaryCurve::neumann_oval(0.3);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, oval.perimeter()), ur(0.1, 3.0);
    for (int k = 0; k < 20; ++k) {
        double s0 = u(rng), s1 = s0 + u(rng), r = ur(rng);
        double turn = total_turn(oval, s0, s1);
        CHECK(std::abs(planar_swept_area(oval, s0, s1, r) - 0.5 * r * r * turn) < 1e-10);
    }
}

TEST_CASE("tangent coordinates carry the area form r dr dalpha") {
    auto ell = BoundaryCurve::ellipse(2.0, 1.0);
    for (Vec2 X : exterior_samples(ell, 50, 9, 0.3, 3.0)) {
        double r = tangent_coordinates(ell, X).r;
        CHECK(std::abs(std::abs(det(tangent_coordinate_jacobian(ell, X, 1e-6))) - 1.0 / r) < 1e-6);
    }
}

TEST_CASE("area preservation of the outer maps") {
    auto circle = BoundaryCurve::disk(1.0);
    CHECK(area_preservation_check(circle, OuterDelay::zero(), exterior_samples(circle, 50, 1, 0.2, 3.0), 1e-5)
              .max_error < 1e-6);
    auto ell = BoundaryCurve::ellipse(1.5, 1.0);
    AreaCheck cubic =
        area_preservation_check(ell, OuterDelay::power_area(1.0, 3.0), exterior_samples(ell, 200, 2, 0.3, 2.0), 1e-5);
    CHECK(cubic.determinants.size() == 200);
    CHECK(cubic.max_error < 1e-5);

    // Out of hypothesis: a kink in a(r). Only reported.
    auto kink = OuterDelay::from_area([](double r) { return r < 1.0 ? 0.2 * r * r : 0.2 * r * r * r; });
    AreaCheck rep = area_preservation_check(ell, kink, exterior_samples(ell, 20, 4, 0.3, 2.0), 1e-5);
    CHECK(rep.determinants.size() == 20);
}

TEST_CASE("spherical swept area: great circle and latitude bands") {
    auto equator = SphericalCurve::small_circle({0, 0, 1}, kPi / 2);
    for (double s : {0.0, 1.0, 4.0}) CHECK(sphere_swept_integrand(equator, s) < 1e-14);
    CHECK(std::abs(sphere_swept_area(equator, 0.0, equator.period(), 0.7)) < 1e-13);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (int k = 0; k < 20; ++k) {
        double a = u(rng), b = u(rng);
        double h1 = std::max(a, b), h2 = std::min(a, b);
        auto band = SphericalCurve::small_circle({0, 0, 1}, std::acos(h1));
        double theta = std::acos(h2 / h1);
        CHECK(std::abs(sphere_swept_area(band, 0.0, band.period(), theta) - kTwoPi * (h1 - h2)) < 1e-8);
    }
}

TEST_CASE("spherical swept area matches lattice sampling of the swept region") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    Vec3 axis = Vec3{g(rng), g(rng), g(rng)}.unit();
    const double colat = 0.9, theta = 0.8;
    auto circle = SphericalCurve::small_circle(axis, colat);
    const double s1 = 0.3, s2 = 0.3 + 0.6 * circle.period();
    const double expected = sphere_swept_area(circle, s1, s2, theta);

    // Region {cos(b) p(s) + sin(b) p'(s)}: a point at height z over the circle plane has cos(b) = z / h,
    // and its azimuth exceeds the foot azimuth by atan2(sin b, rho cos b).
    const double h = std::cos(colat), rho = std::sin(colat);
    const Vec3 e1 = (circle.point(0.0) - axis * h) * (1.0 / rho);
    const Vec3 e2 = cross(axis, e1);
    const int N = 2000000;
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    long hits = 0;
    for (int i = 0; i < N; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / N;
        double ring = std::sqrt(1.0 - z * z), lon = golden_angle * i;
        Vec3 q{ring * std::cos(lon), ring * std::sin(lon), z};
        double height = dot(q, axis);
        double c = height / h;
        if (c < std::cos(theta) || c > 1.0) continue;
        double b = std::acos(c);
        double azimuth = std::atan2(dot(q, e2), dot(q, e1));
        double foot = wrap(azimuth - std::atan2(std::sin(b), rho * std::cos(b)), kTwoPi) * rho;
        double lifted = foot < s1 ? foot + circle.period() : foot;
        if (lifted <= s2) ++hits;
    }
    double sampled = 4.0 * kPi * hits / N;
    CHECK(std::abs(sampled / expected - 1.0) < 1e-3);
}

TEST_CASE("dual curve integrand is identically one") {
    for (double colat : {0.2, 0.7, 1.3}) {
        auto circle = SphericalCurve::small_circle(Vec3{0.3, -0.4, 1.0}, colat);
        auto dual = circle.dual();
        for (int k = 0; k < 16; ++k) {
            double s = circle.period() * k / 16;
            CHECK(std::abs(dual.point(s).norm() - 1.0) < 1e-10);
            CHECK(std::abs(sphere_swept_integrand(dual, s) - 1.0) < 1e-6);
        }
    }
    // Same curve without analytic third derivatives.
    auto analytic = SphericalCurve::small_circle({0, 0, 1}, 0.8);
    SphericalCurve numeric(analytic.period(), [&](double s) { return analytic.jet(s); }, true, false);
    for (int k = 0; k < 8; ++k) {
        CHECK(std::abs(sphere_swept_integrand(numeric.dual(), 0.37 * k) - 1.0) < 1e-6);
    }
    SphericalCurve slow(1.0, [&](double s) { return analytic.jet(s); }, false, true);
    CHECK_THROWS_AS(slow.dual(), Error);
}

TEST_CASE("spherical billiard and outer billiard on the dual curve agree") {
    auto cap = SphericalCurve::small_circle(Vec3{0.2, 0.1, 1.0}, 0.6);
    DualityReport classical = sphere_duality_check(cap, DelayFunction::zero(), 50);
    CHECK(classical.samples.size() == 50);
    CHECK(classical.max_error < 1e-6);
    DualityReport shifted = sphere_duality_check(cap, DelayFunction::constant(0.4), 50);
    CHECK(shifted.max_error < 1e-6);
    DualityReport linear = sphere_duality_check(cap, DelayFunction::linear(0.5), 30);
    CHECK(linear.max_error < 1e-6);

    CHECK(dual_swept_area(DelayFunction::constant(0.4), kPi / 2) == doctest::Approx(0.4).epsilon(1e-15));

    auto wide = SphericalCurve::small_circle({0, 0, 1}, 2.0);
    CHECK_THROWS_AS(sphere_duality_check(wide, DelayFunction::zero(), 5), Error);
    auto great = SphericalCurve::small_circle({0, 0, 1}, kPi / 2);
    try {
        sphere_duality_check(great, DelayFunction::zero(), 5);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unsupported);
    }
}
