#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pensive/billiard.hpp"
#include "pensive/outer.hpp"
#include "pensive/vortex.hpp"
#include "plot.hpp"

namespace pensive::cli {

struct CommonOptions {
    std::string out_dir{"out"};
    std::uint64_t seed{0};
    bool svg{true};
};

struct CurveSpec {
    std::string kind{"disk"};  // disk, ellipse, oval, polygon
    double radius{1.0};
    double a{2.0}, b{1.0};
    double lambda{0.2};
    int sides{3};

    BoundaryCurve build() const;
};

struct DelaySpec {
    std::string kind{"vortex"};  // zero, constant, linear, puck, vortex
    double param{0.0};           // vortex: half perimeter, taken from the curve when not positive

    DelayFunction build(const BoundaryCurve& curve) const;
};

struct SimulateConfig {
    CurveSpec curve;
    DelaySpec delay;
    double s0{0.0};
    double theta0{1.0};
    int steps{200};
};

struct PhaseConfig {
    CurveSpec curve;
    DelaySpec delay;
    int orbits{20};
    int steps{300};
};

struct OrbitConfig {
    CurveSpec curve;
    DelaySpec delay;
    int p{1};
    int q{3};
};

struct TwistConfig {
    CurveSpec curve;
    DelaySpec delay;
    std::vector<double> heights;  // when given, sweeps puck(h) instead of using `delay`
};

struct VortexConfig {
    std::string mode{"limit"};  // limit, fission, free
    std::string domain{"disk"};  // disk, oval, half_plane
    double radius{1.0};
    double lambda{0.2};
    double s0{0.0};
    double theta0{1.2};
    std::vector<double> eps{0.02, 0.01, 0.005};
    std::vector<double> thetas{0.5235987755982988, 1.0471975511965976, 1.5707963267948966};
    std::vector<double> vortices;  // free mode: x, y, circulation triples
    double duration{10.0};
    double sample_dt{0.05};
    double tol{1e-10};
};

struct MultiDipoleConfig {
    CurveSpec curve;
    std::vector<double> launches{0.0, 1.5707963267948966};  // s, theta pairs
    double speed{1.0};
    double duration{20.0};
};

struct OuterConfig {
    std::string mode{"plane"};  // plane, sphere
    CurveSpec curve{"ellipse", 1.0, 1.5, 1.0, 0.2, 3};
    std::string area{"zero"};   // zero, power
    double area_coeff{1.0};
    double area_power{3.0};
    double x0{2.5}, y0{0.5};
    int steps{500};
    double colatitude{0.6};
    DelaySpec delay{"constant", 0.4};
    int samples{50};
};

// Each runner validates its configuration (ConfigError naming the key), writes its
// artifacts under options.out_dir and returns the written paths.
std::vector<std::string> run_simulate(const CommonOptions& options, const SimulateConfig& cfg);
std::vector<std::string> run_phase(const CommonOptions& options, const PhaseConfig& cfg);
std::vector<std::string> run_orbit(const CommonOptions& options, const OrbitConfig& cfg);
std::vector<std::string> run_twist(const CommonOptions& options, const TwistConfig& cfg);
std::vector<std::string> run_vortex(const CommonOptions& options, const VortexConfig& cfg);
std::vector<std::string> run_multidipole(const CommonOptions& options, const MultiDipoleConfig& cfg);
std::vector<std::string> run_outer(const CommonOptions& options, const OuterConfig& cfg);

PlotData trajectory_plot(const BoundaryCurve& curve, const DelayFunction& delay, const Trajectory& t);

// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace pensive::cli
