#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace pensive::cli {

namespace {

void add_curve(CLI::App* app, CurveSpec& c) {
    app->add_option("--curve", c.kind, "disk, ellipse, oval or polygon")->capture_default_str();
    app->add_option("--radius", c.radius, "disk radius or polygon circumradius")->capture_default_str();
    app->add_option("--a", c.a, "ellipse semi-axis along x")->capture_default_str();
    app->add_option("--b", c.b, "ellipse semi-axis along y")->capture_default_str();
    app->add_option("--lambda", c.lambda, "Neumann oval parameter")->capture_default_str();
    app->add_option("--sides", c.sides, "regular polygon side count")->capture_default_str();
}

void add_delay(CLI::App* app, DelaySpec& d) {
    app->add_option("--delay", d.kind, "zero, constant, linear, puck or vortex")->capture_default_str();
    app->add_option("--delay_param", d.param, "constant value, slope, puck height or half perimeter")
        ->capture_default_str();
}

CLI::App* subcommand(CLI::App& app, const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->configurable();
    return sub;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Pensive billiards, vortex dipoles and outer billiards"};
    app.set_config("--config", "", "INI file; one [section] per subcommand, keys mirror the long flags");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    CommonOptions common;
    bool no_svg = false;
    app.add_option("--out_dir", common.out_dir, "output directory (PENSIVE_OUT_DIR overrides)")
        ->capture_default_str();
    app.add_option("--seed", common.seed, "random seed")->capture_default_str();
    app.add_flag("--no_svg", no_svg, "skip SVG output");

    SimulateConfig sim;
    CLI::App* c_sim = subcommand(app, "simulate", "iterate the pensive billiard map");
    add_curve(c_sim, sim.curve);
    add_delay(c_sim, sim.delay);
    c_sim->add_option("--s0", sim.s0)->capture_default_str();
    c_sim->add_option("--theta0", sim.theta0)->capture_default_str();
    c_sim->add_option("--steps", sim.steps)->capture_default_str();

    PhaseConfig phase;
    CLI::App* c_phase = subcommand(app, "phase", "phase portrait from random seeds");
    add_curve(c_phase, phase.curve);
    add_delay(c_phase, phase.delay);
    c_phase->add_option("--orbits", phase.orbits)->capture_default_str();
    c_phase->add_option("--steps", phase.steps)->capture_default_str();

    OrbitConfig orbit;
    CLI::App* c_orbit = subcommand(app, "orbit", "periodic orbit of rotation type p/q");
    add_curve(c_orbit, orbit.curve);
    add_delay(c_orbit, orbit.delay);
    c_orbit->add_option("--p", orbit.p)->capture_default_str();
    c_orbit->add_option("--q", orbit.q)->capture_default_str();

    TwistConfig twist;
    CLI::App* c_twist = subcommand(app, "twist", "twist certificates, optionally over a puck height sweep");
    add_curve(c_twist, twist.curve);
    add_delay(c_twist, twist.delay);
    c_twist->add_option("--heights", twist.heights, "puck heights to sweep");

    VortexConfig vortex;
    CLI::App* c_vortex = subcommand(app, "vortex", "point-vortex runs: limit, fission or free");
    c_vortex->add_option("--mode", vortex.mode)->capture_default_str();
    c_vortex->add_option("--domain", vortex.domain, "disk, oval or half_plane")->capture_default_str();
    c_vortex->add_option("--radius", vortex.radius)->capture_default_str();
    c_vortex->add_option("--lambda", vortex.lambda)->capture_default_str();
    c_vortex->add_option("--s0", vortex.s0)->capture_default_str();
    c_vortex->add_option("--theta0", vortex.theta0)->capture_default_str();
    c_vortex->add_option("--eps", vortex.eps)->capture_default_str();
    c_vortex->add_option("--thetas", vortex.thetas)->capture_default_str();
    c_vortex->add_option("--vortices", vortex.vortices, "x, y, circulation triples");
    c_vortex->add_option("--duration", vortex.duration)->capture_default_str();
    c_vortex->add_option("--sample_dt", vortex.sample_dt)->capture_default_str();
    c_vortex->add_option("--tol", vortex.tol)->capture_default_str();

    MultiDipoleConfig multi;
    CLI::App* c_multi = subcommand(app, "multidipole", "event-driven dipoles in the zero-size limit");
    add_curve(c_multi, multi.curve);
    c_multi->add_option("--launches", multi.launches, "s, theta pairs")->capture_default_str();
    c_multi->add_option("--speed", multi.speed)->capture_default_str();
    c_multi->add_option("--duration", multi.duration)->capture_default_str();

    OuterConfig outer;
    CLI::App* c_outer = subcommand(app, "outer", "planar outer orbits or the spherical duality check");
    c_outer->add_option("--mode", outer.mode, "plane or sphere")->capture_default_str();
    add_curve(c_outer, outer.curve);
    c_outer->add_option("--area", outer.area, "zero or power")->capture_default_str();
    c_outer->add_option("--area_coeff", outer.area_coeff)->capture_default_str();
    c_outer->add_option("--area_power", outer.area_power)->capture_default_str();
    c_outer->add_option("--x0", outer.x0)->capture_default_str();
    c_outer->add_option("--y0", outer.y0)->capture_default_str();
    c_outer->add_option("--steps", outer.steps)->capture_default_str();
    c_outer->add_option("--colatitude", outer.colatitude)->capture_default_str();
    add_delay(c_outer, outer.delay);
    c_outer->add_option("--samples", outer.samples)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    common.svg = !no_svg;
    if (const char* env = std::getenv("PENSIVE_OUT_DIR"); env && *env) common.out_dir = env;

    try {
        std::vector<std::string> written;
        if (c_sim->parsed()) written = run_simulate(common, sim);
        if (c_phase->parsed()) written = run_phase(common, phase);
        if (c_orbit->parsed()) written = run_orbit(common, orbit);
        if (c_twist->parsed()) written = run_twist(common, twist);
        if (c_vortex->parsed()) written = run_vortex(common, vortex);
        if (c_multi->parsed()) written = run_multidipole(common, multi);
        if (c_outer->parsed()) written = run_outer(common, outer);
        for (const auto& w : written) std::cout << w << '\n';
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.kind() == ErrorKind::ConfigError ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace pensive::cli
