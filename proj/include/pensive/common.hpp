#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pensive {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr Vec2 operator/(double k) const { return {x / k, y / k}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    Vec2 unit() const { double n = norm(); return {x / n, y / n}; }
    // Counterclockwise quarter turn.
    constexpr Vec2 perp() const { return {-y, x}; }
    Vec2 rotated(double a) const {
        double c = std::cos(a), s = std::sin(a);
        return {c * x - s * y, s * x + c * y};
    }
};

inline constexpr Vec2 operator*(double k, const Vec2& v) { return v * k; }
inline constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

enum class ErrorKind {
    CornerUndefined,
    InvalidAngle,
    CornerHit,
    InvalidParameter,
    Unsupported,
    OutOfRange,
    NotTransitive,
    Ambiguous,
    NotFound,
    InvalidPoint,
    HypothesisFailed,
    BoundarySingularity,
    DiagonalSingularity,
    EventStop,
    ReportIncomplete,
    NotExterior,
    AmbiguousEvent,
    EmptyPlot,
    ConfigError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Reduce x into [0, period).
inline double wrap(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

// Representative of x modulo period closest to zero, in [-period/2, period/2).
inline double wrap_centered(double x, double period) {
    return wrap(x + 0.5 * period, period) - 0.5 * period;
}

}  // namespace pensive
