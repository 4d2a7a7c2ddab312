#include "pensive/delay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pensive/common.hpp"
#include "pensive/quadrature.hpp"

namespace pensive {

namespace {

constexpr double kQuadTol = 1e-13;

void require_open_unit(double p) {
    if (!(std::abs(p) < 1.0)) throw Error(ErrorKind::OutOfRange, "|p| must be < 1");
}

// Integrate g over y in [0,1] after y = t^2 near 0 and y = 1 - t^2 near 1, which
// tames the inverse-square-root growth at the rims when |p| -> 1.
template <class G>
double rim_integral(G&& g) {
    const double tmax = std::sqrt(0.5);
    auto lower = [&](double t) { return 2.0 * t * g(t * t); };
    auto upper = [&](double t) { return 2.0 * t * g(1.0 - t * t); };
    return quad::integrate(lower, 0.0, tmax, kQuadTol) + quad::integrate(upper, 0.0, tmax, kQuadTol);
}

}  // namespace

PuckMetric::PuckMetric(std::function<double(double)> f, std::string name)
    : f_(std::move(f)), name_(std::move(name)) {
    if (std::abs(f_(0.0) - 1.0) > 1e-12 || std::abs(f_(1.0) - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidParameter, "metric must satisfy f(0) = f(1) = 1");
    }
    bool flat = true;
    for (int k = 0; k <= 256; ++k) {
        double v = f_(k / 256.0);
        if (v < 1.0 - 1e-12) throw Error(ErrorKind::InvalidParameter, "metric must satisfy f >= 1");
        if (std::abs(v - 1.0) > 1e-15) flat = false;
    }
    flat_ = flat;
}

PuckMetric PuckMetric::flat() {
    return PuckMetric([](double) { return 1.0; }, "flat");
}

PuckMetric PuckMetric::parabolic(double amplitude) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "parabolic(%g)", amplitude);
    return PuckMetric([amplitude](double y) { return 1.0 + amplitude * y * (1.0 - y); }, buf);
}

PuckMetric PuckMetric::sine(double amplitude) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "sine(%g)", amplitude);
    return PuckMetric(
        [amplitude](double y) {
            double s = std::sin(kPi * y);
            return 1.0 + amplitude * s * s;
        },
        buf);
}

PuckMetric PuckMetric::from_table(std::vector<std::pair<double, double>> samples) {
    std::sort(samples.begin(), samples.end());
    if (samples.size() < 2 || samples.front().first != 0.0 || samples.back().first != 1.0) {
        throw Error(ErrorKind::InvalidParameter, "metric table must span y = 0 .. 1");
    }
    return PuckMetric(
        [samples](double y) {
            auto it = std::upper_bound(samples.begin(), samples.end(), std::make_pair(y, -1e300));
            if (it == samples.begin()) return samples.front().second;
            if (it == samples.end()) return samples.back().second;
            auto lo = *(it - 1), hi = *it;
            double w = (y - lo.first) / (hi.first - lo.first);
            return lo.second + w * (hi.second - lo.second);
        },
        "table");
}

double generalized_puck_delay(const PuckMetric& metric, double p) {
    require_open_unit(p);
    if (p == 0.0) return 0.0;
    return rim_integral([&](double y) {
        double f = metric(y);
        return (p / f) / std::sqrt(1.0 - p * p / f);
    });
}

double generalized_puck_delay_derivative(const PuckMetric& metric, double p) {
    require_open_unit(p);
    return rim_integral([&](double y) {
        double f = metric(y);
        double w = 1.0 - p * p / f;
        return 1.0 / (f * w * std::sqrt(w));
    });
}

double generalized_puck_potential(const PuckMetric& metric, double p) {
    require_open_unit(p);
    if (p == 0.0) return 1.0;
    return rim_integral([&](double y) { return 1.0 / std::sqrt(1.0 - p * p / metric(y)); });
}

const char* to_string(DelayKind k) {
    switch (k) {
        case DelayKind::Zero: return "zero";
        case DelayKind::Constant: return "constant";
        case DelayKind::Linear: return "linear";
        case DelayKind::Puck: return "puck";
        case DelayKind::Vortex: return "vortex";
        case DelayKind::GeneralizedPuck: return "generalized_puck";
        case DelayKind::Custom: return "custom";
    }
    return "unknown";
}

DelayFunction DelayFunction::zero() { return DelayFunction(); }

DelayFunction DelayFunction::constant(double c) {
    DelayFunction d;
    d.kind_ = DelayKind::Constant;
    d.param_ = c;
    return d;
}

DelayFunction DelayFunction::linear(double slope) {
    DelayFunction d;
    d.kind_ = DelayKind::Linear;
    d.param_ = slope;
    return d;
}

DelayFunction DelayFunction::puck(double height) {
    if (!(height > 0)) throw Error(ErrorKind::InvalidParameter, "puck height must be positive");
    DelayFunction d;
    d.kind_ = DelayKind::Puck;
    d.param_ = height;
    return d;
}

DelayFunction DelayFunction::vortex(double half_perimeter) {
    if (!(half_perimeter > 0)) throw Error(ErrorKind::InvalidParameter, "vortex scale must be positive");
    DelayFunction d;
    d.kind_ = DelayKind::Vortex;
    d.param_ = half_perimeter;
    return d;
}

DelayFunction DelayFunction::generalized_puck(PuckMetric metric) {
    DelayFunction d;
    d.kind_ = DelayKind::GeneralizedPuck;
    d.metric_ = std::make_shared<const PuckMetric>(std::move(metric));
    return d;
}

DelayFunction DelayFunction::custom(std::function<double(double)> ell,
                                    std::function<double(double)> ell_prime, std::string name) {
    if (!ell || !ell_prime) {
        throw Error(ErrorKind::InvalidParameter, "custom delay needs both the shift and its derivative");
    }
    DelayFunction d;
    d.kind_ = DelayKind::Custom;
    d.custom_ell_ = std::move(ell);
    d.custom_prime_ = std::move(ell_prime);
    d.name_ = std::move(name);
    return d;
}

std::string DelayFunction::describe() const {
    char buf[96];
    switch (kind_) {
        case DelayKind::Zero: return "zero";
        case DelayKind::Constant: std::snprintf(buf, sizeof buf, "constant(%g)", param_); return buf;
        case DelayKind::Linear: std::snprintf(buf, sizeof buf, "linear(%g)", param_); return buf;
        case DelayKind::Puck: std::snprintf(buf, sizeof buf, "puck(h=%g)", param_); return buf;
        case DelayKind::Vortex: std::snprintf(buf, sizeof buf, "vortex(L=%g)", param_); return buf;
        case DelayKind::GeneralizedPuck: return "generalized_puck(" + metric_->name() + ")";
        case DelayKind::Custom: return "custom(" + name_ + ")";
    }
    return "unknown";
}

double DelayFunction::ell(double p) const {
    switch (kind_) {
        case DelayKind::Zero: return 0.0;
        case DelayKind::Constant: return param_;
        case DelayKind::Linear: return param_ * std::acos(std::clamp(p, -1.0, 1.0));
        case DelayKind::Puck: require_open_unit(p); return param_ * p / std::sqrt(1.0 - p * p);
        case DelayKind::Vortex: return param_ * (1.0 - p / std::sqrt(1.0 + p * p));
        case DelayKind::GeneralizedPuck: return generalized_puck_delay(*metric_, p);
        case DelayKind::Custom: return custom_ell_(p);
    }
    return 0.0;
}

double DelayFunction::ell_prime(double p) const {
    switch (kind_) {
        case DelayKind::Zero:
        case DelayKind::Constant: return 0.0;
        case DelayKind::Linear: require_open_unit(p); return -param_ / std::sqrt(1.0 - p * p);
        case DelayKind::Puck: {
            require_open_unit(p);
            double w = 1.0 - p * p;
            return param_ / (w * std::sqrt(w));
        }
        case DelayKind::Vortex: {
            double w = 1.0 + p * p;
            return -param_ / (w * std::sqrt(w));
        }
        case DelayKind::GeneralizedPuck: return generalized_puck_delay_derivative(*metric_, p);
        case DelayKind::Custom: return custom_prime_(p);
    }
    return 0.0;
}

double DelayFunction::tilde(double theta) const {
    switch (kind_) {
        case DelayKind::Linear: return param_ * theta;
        case DelayKind::Puck: return param_ / std::tan(theta);
        default: return ell(std::cos(theta));
    }
}

double DelayFunction::tilde_prime(double theta) const {
    switch (kind_) {
        case DelayKind::Linear: return param_;
        case DelayKind::Puck: {
            double s = std::sin(theta);
            return -param_ / (s * s);
        }
        case DelayKind::Vortex: {
            double c = std::cos(theta), w = 1.0 + c * c;
            return param_ * std::sin(theta) / (w * std::sqrt(w));
        }
        default: return -std::sin(theta) * ell_prime(std::cos(theta));
    }
}

double DelayFunction::potential(double p) const {
    require_open_unit(p);
    switch (kind_) {
        case DelayKind::Zero:
        case DelayKind::Constant: return 0.0;
        case DelayKind::Linear: return param_ * (std::sqrt(1.0 - p * p) - 1.0);
        case DelayKind::Puck: return param_ / std::sqrt(1.0 - p * p) - param_;
        case DelayKind::Vortex: return param_ / std::sqrt(1.0 + p * p) - param_;
        case DelayKind::GeneralizedPuck: return generalized_puck_potential(*metric_, p) - 1.0;
        case DelayKind::Custom:
            return quad::integrate([&](double q) { return q * custom_prime_(q); }, 0.0, p, 1e-10);
    }
    return 0.0;
}

std::pair<double, double> DelayFunction::endpoint_limits() const {
    const double inf = std::numeric_limits<double>::infinity();
    switch (kind_) {
        case DelayKind::Zero: return {0.0, 0.0};
        case DelayKind::Constant: return {param_, param_};
        case DelayKind::Linear: return {0.0, param_ * kPi};
        case DelayKind::Puck: return {inf, -inf};
        case DelayKind::Vortex:
            return {param_ * (1.0 - 1.0 / std::sqrt(2.0)), param_ * (1.0 + 1.0 / std::sqrt(2.0))};
        case DelayKind::GeneralizedPuck:
            if (metric_->is_flat()) return {inf, -inf};
            return {ell(1.0 - 1e-12), ell(-1.0 + 1e-12)};
        case DelayKind::Custom: return {ell(1.0 - 1e-12), ell(-1.0 + 1e-12)};
    }
    return {0.0, 0.0};
}

}  // namespace pensive
