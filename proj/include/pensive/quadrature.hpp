#pragma once

#include <array>
#include <cmath>

namespace pensive::quad {

inline constexpr std::array<double, 4> kNode = {0.1834346424956498, 0.5255324099163290,
                                                0.7966664774136267, 0.9602898564975363};
inline constexpr std::array<double, 4> kWeight = {0.3626837833783620, 0.3137066458778873,
                                                  0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss8(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += kWeight[i] * (f(mid - half * kNode[i]) + f(mid + half * kNode[i]));
    }
    return acc * half;
}

namespace detail {
template <class F>
double adapt(F& f, double a, double b, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss8(f, a, m), right = gauss8(f, m, b);
    const double both = left + right;
    const double err = std::abs(both - whole);
    if (depth <= 0 || err <= tol || err <= 1e-15 * std::abs(both)) return both;
    return adapt(f, a, m, left, 0.5 * tol, depth - 1) + adapt(f, m, b, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive 8-point Gauss-Legendre with bisection; absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, int max_depth = 30) {
    if (a == b) return 0.0;
    return detail::adapt(f, a, b, gauss8(f, a, b), tol, max_depth);
}

}  // namespace pensive::quad
