#include "doctest.h"

#include <random>

#include "pensive/twist.hpp"

using namespace pensive;

TEST_CASE("classical Jacobian on the unit disk") {
    auto disk = BoundaryCurve::disk(1.0);
    CBJacobian J = cb_jacobian(disk, 0.4, 0.9);
    CHECK(J.dS_dtheta == doctest::Approx(2.0));
    CHECK(J.dTheta_dtheta == doctest::Approx(1.0));
    CHECK(J.dS_ds == doctest::Approx(1.0));
    CHECK(std::abs(J.dTheta_ds) < 1e-12);
    CHECK_THROWS_AS(cb_jacobian(BoundaryCurve::regular_polygon(4, 1.0), 0.3, 1.0), Error);
}

TEST_CASE("analytic classical Jacobian matches finite differences") {
    std::vector<BoundaryCurve> curves{BoundaryCurve::ellipse(2.0, 1.0), BoundaryCurve::neumann_oval(0.3),
                                      BoundaryCurve::disk(1.5)};
    std::mt19937_64 rng(13);
    for (const auto& c : curves) {
        std::uniform_real_distribution<double> us(0, c.perimeter()), ut(0.1, kPi - 0.1);
        for (int i = 0; i < 100; ++i) {
            double s = us(rng), th = ut(rng);
            CBJacobian a = cb_jacobian(c, s, th), n = cb_jacobian_numeric(c, s, th);
            CHECK(std::abs(a.dS_ds - n.dS_ds) < 1e-5);
            CHECK(std::abs(a.dS_dtheta - n.dS_dtheta) < 1e-5);
            CHECK(std::abs(a.dTheta_ds - n.dTheta_ds) < 1e-5);
            CHECK(std::abs(a.dTheta_dtheta - n.dTheta_dtheta) < 1e-5);
            CHECK(std::abs(a.weighted_det() - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("disk twist sign follows the -2R threshold") {
    for (double R : {0.5, 1.0, 2.0}) {
        auto disk = BoundaryCurve::disk(R);
        for (double C : {-2 * R - 0.1, -2 * R + 0.1}) {
            double v = pensive_dS_dtheta(disk, DelayFunction::linear(C), 0.3, 1.1);
            CHECK((v > 0) == (C > -2 * R));
        }
        // Certificate flips within grid resolution of -2R.
        CHECK(twist_certificate(disk, DelayFunction::linear(-2 * R + 1e-9)).verdict == TwistVerdict::Right);
        CHECK(twist_certificate(disk, DelayFunction::linear(-2 * R - 1e-9)).verdict == TwistVerdict::Left);
    }
}

TEST_CASE("zero delay is a right twist on convex curves") {
    auto e = BoundaryCurve::ellipse(1.1, 1.0);
    CHECK(pensive_dS_dtheta(e, DelayFunction::zero(), 0.7, 0.8) > 0);
    CHECK_THROWS_AS(twist_certificate(BoundaryCurve::ellipse(1.3, 1.0), DelayFunction::zero()), Error);
    CHECK(twist_certificate(e, DelayFunction::zero()).verdict == TwistVerdict::Right);
}

TEST_CASE("vortex billiard certified right; tall puck certified left") {
    auto e = BoundaryCurve::ellipse(1.2, 1.0);
    auto v = twist_certificate(e, DelayFunction::vortex(e.perimeter() / 2));
    CHECK(v.verdict == TwistVerdict::Right);
    auto rep = twist_certificate(e, DelayFunction::puck(1.0));
    const double threshold = 2 * rep.R / (2 * (rep.r / rep.R) - 1);
    CHECK(twist_certificate(e, DelayFunction::puck(threshold * (1 + 1e-9))).verdict == TwistVerdict::Left);
    CHECK(twist_certificate(e, DelayFunction::puck(threshold * (1 - 1e-9))).verdict ==
          TwistVerdict::Inconclusive);
    CHECK(rep.text().find("verdict: ") != std::string::npos);
}

TEST_CASE("certificate soundness by sampling") {
    auto e = BoundaryCurve::ellipse(1.2, 1.0);
    auto rep = twist_certificate(e, DelayFunction::puck(1.0));
    const double threshold = 2 * rep.R / (2 * (rep.r / rep.R) - 1);
    auto tall = DelayFunction::puck(threshold * 1.01);
    auto vortex = DelayFunction::vortex(e.perimeter() / 2);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> us(0, e.perimeter()), ut(1e-3, kPi - 1e-3);
    for (int i = 0; i < 10000; ++i) {
        double s = us(rng), th = ut(rng);
        REQUIRE(pensive_dS_dtheta(e, vortex, s, th) > 0);
        REQUIRE(pensive_dS_dtheta(e, tall, s, th) < 0);
    }
}

TEST_CASE("thin ellipse is not a twist map") {
    const double eps = 0.05, theta0 = kPi / 3;
    auto e = BoundaryCurve::ellipse(1 / eps, eps);
    auto puck = DelayFunction::puck(1.0);
    // Vertices of minimal (top) and maximal (right end) curvature.
    const double s_top = e.perimeter() / 4, s_end = 0.0;
    PhasePoint at_min = classical_preimage(e, s_top, theta0);
    PhasePoint at_max = classical_preimage(e, s_end, theta0);
    PhasePoint check = classical_step(e, at_min);
    CHECK(std::abs(wrap_centered(check.s - s_top, e.perimeter())) < 1e-9);
    CHECK(check.theta == doctest::Approx(theta0));
    double v_min = pensive_dS_dtheta(e, puck, at_min.s, at_min.theta);
    double v_max = pensive_dS_dtheta(e, puck, at_max.s, at_max.theta);
    CHECK(v_min > 0);
    CHECK(v_max < 0);
    const double slope = puck.tilde_prime(theta0);
    CHECK(std::abs(v_min - (-slope)) < 0.2);
    CHECK(std::abs(v_max - slope * (2 / std::pow(std::cos(theta0), 2) - 1)) < 0.5);
    CHECK_THROWS_AS(twist_certificate(e, puck), Error);
}

TEST_CASE("rotation intervals") {
    auto puck = twist_interval(DelayFunction::puck(1.0), kPi);
    CHECK(std::isinf(puck.first));
    CHECK(puck.first < 0);
    CHECK(std::isinf(puck.second));
    auto vortex = twist_interval(DelayFunction::vortex(kPi), kPi);
    CHECK(vortex.first == doctest::Approx(0.5 * (1 - 1 / std::sqrt(2.0))));
    CHECK(vortex.second == doctest::Approx(1 + 0.5 * (1 + 1 / std::sqrt(2.0))));
    auto zero = twist_interval(DelayFunction::zero(), 2.0);
    CHECK(zero.first == 0.0);
    CHECK(zero.second == 1.0);
}
