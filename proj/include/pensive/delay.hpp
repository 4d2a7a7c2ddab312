#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pensive {

// Warped-product metric f(y) ds^2 + dy^2 on a unit-height cylinder.
class PuckMetric {
public:
    PuckMetric(std::function<double(double)> f, std::string name);

    static PuckMetric flat();
    // f(y) = 1 + amplitude * y (1 - y)
    static PuckMetric parabolic(double amplitude);
    // f(y) = 1 + amplitude * sin^2(pi y)
    static PuckMetric sine(double amplitude);
    // Piecewise-linear profile through (y, f) samples covering [0, 1].
    static PuckMetric from_table(std::vector<std::pair<double, double>> samples);

    double operator()(double y) const { return f_(y); }
    const std::string& name() const { return name_; }
    bool is_flat() const { return flat_; }

private:
    std::function<double(double)> f_;
    std::string name_;
    bool flat_{false};
};

// Horizontal shift of a geodesic crossing the cylinder with launch cosine p.
double generalized_puck_delay(const PuckMetric& metric, double p);
double generalized_puck_delay_derivative(const PuckMetric& metric, double p);
// Unnormalized potential: equals 1 at p = 0.
double generalized_puck_potential(const PuckMetric& metric, double p);

enum class DelayKind { Zero, Constant, Linear, Puck, Vortex, GeneralizedPuck, Custom };

const char* to_string(DelayKind k);

class DelayFunction {
public:
    static DelayFunction zero();
    static DelayFunction constant(double c);
    // Shift C * theta.
    static DelayFunction linear(double slope);
    static DelayFunction puck(double height);
    static DelayFunction vortex(double half_perimeter);
    static DelayFunction generalized_puck(PuckMetric metric);
    // Custom shift given in p = cos(theta) together with its p-derivative.
    static DelayFunction custom(std::function<double(double)> ell,
                                std::function<double(double)> ell_prime, std::string name);

    DelayKind kind() const { return kind_; }
    double parameter() const { return param_; }
    std::string describe() const;

    double ell(double p) const;
    double ell_prime(double p) const;
    double tilde(double theta) const;
    double tilde_prime(double theta) const;
    // Potential normalized to vanish at p = 0.
    double potential(double p) const;
    // Limits of the shift as theta -> 0+ and theta -> pi-; may be infinite.
    std::pair<double, double> endpoint_limits() const;

private:
    DelayKind kind_{DelayKind::Zero};
    double param_{0.0};
    std::shared_ptr<const PuckMetric> metric_;
    std::function<double(double)> custom_ell_, custom_prime_;
    std::string name_;
};

inline double potential(const DelayFunction& d, double p) { return d.potential(p); }

}  // namespace pensive
