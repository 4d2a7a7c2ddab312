#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "pensive/twist.hpp"
#include "pensive/variational.hpp"

namespace pensive::cli {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw Error(ErrorKind::ConfigError, key + ": " + why);
}

void require_positive(const std::string& key, double v) {
    if (!(v > 0.0)) bad(key, "must be positive");
}

void require_angle(const std::string& key, double theta) {
    if (!(theta > 0.0 && theta < kPi)) bad(key, "must lie strictly between 0 and pi");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class Csv {
public:
    Csv(const std::string& path, const std::string& header) : out_(path) {
        if (!out_) throw Error(ErrorKind::ConfigError, "out_dir: cannot write " + path);
        out_ << header << '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }
    void row(std::initializer_list<double> values) {
        std::vector<std::string> cells;
        for (double v : values) cells.push_back(fmt(v));
        row(cells);
    }

private:
    std::ofstream out_;
};

std::string prepare(const CommonOptions& o, const std::string& file) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / file).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ConfigError, "out_dir: cannot write " + path);
    out << text;
}

std::vector<Vec2> boundary_polyline(const BoundaryCurve& curve, int n = 400) {
    std::vector<Vec2> pts;
    for (int k = 0; k < n; ++k) pts.push_back(curve.point(curve.perimeter() * k / n));
    return pts;
}

std::vector<Vec2> boundary_arc(const BoundaryCurve& curve, double s0, double s1, int n = 40) {
    std::vector<Vec2> pts;
    for (int k = 0; k <= n; ++k) pts.push_back(curve.point(curve.wrap_s(s0 + (s1 - s0) * k / n)));
    return pts;
}

VortexDomain build_domain(const VortexConfig& cfg) {
    if (cfg.domain == "disk") {
        require_positive("radius", cfg.radius);
        return VortexDomain::disk(cfg.radius);
    }
    if (cfg.domain == "oval") return VortexDomain::neumann_oval(cfg.lambda);
    if (cfg.domain == "half_plane") return VortexDomain::half_plane();
    bad("domain", "expected disk, oval or half_plane");
}

}  // namespace

BoundaryCurve CurveSpec::build() const {
    if (kind == "disk") {
        require_positive("radius", radius);
        return BoundaryCurve::disk(radius);
    }
    if (kind == "ellipse") {
        require_positive("a", a);
        require_positive("b", b);
        return BoundaryCurve::ellipse(a, b);
    }
    if (kind == "oval") {
        if (!(lambda > 0.0 && lambda < 1.0)) bad("lambda", "must lie in (0, 1)");
        return BoundaryCurve::neumann_oval(lambda);
    }
    if (kind == "polygon") {
        if (sides < 3) bad("sides", "need at least 3");
        require_positive("radius", radius);
        return BoundaryCurve::regular_polygon(sides, radius);
    }
    bad("curve", "expected disk, ellipse, oval or polygon");
}

DelayFunction DelaySpec::build(const BoundaryCurve& curve) const {
    if (kind == "zero") return DelayFunction::zero();
    if (kind == "constant") return DelayFunction::constant(param);
    if (kind == "linear") return DelayFunction::linear(param);
    if (kind == "puck") {
        require_positive("delay_param", param);
        return DelayFunction::puck(param);
    }
    if (kind == "vortex") return DelayFunction::vortex(param > 0.0 ? param : 0.5 * curve.perimeter());
    bad("delay", "expected zero, constant, linear, puck or vortex");
}

PlotData trajectory_plot(const BoundaryCurve& curve, const DelayFunction& delay, const Trajectory& t) {
    PlotData d;
    d.title = t.curve + " / " + t.delay;
    d.boundary = boundary_polyline(curve);
    for (std::size_t k = 0; k < t.impacts.size(); ++k) {
        d.chords.push_back({curve.point(t.points[k].s), t.impacts[k]});
        double shift = delay.tilde(t.points[k + 1].theta);
        if (shift != 0.0) d.slide_arcs.push_back(boundary_arc(curve, t.impact_s[k], t.impact_s[k] + shift));
    }
    d.impacts = t.impacts;
    d.reflections = t.reflections;
    if (curve.kind() == CurveKind::Disk && !t.points.empty()) {
        d.circles.push_back({{0.0, 0.0}, caustic_radius(curve.param(0), t.points.back().theta)});
    }
    return d;
}

std::vector<std::string> run_simulate(const CommonOptions& o, const SimulateConfig& cfg) {
    BoundaryCurve curve = cfg.curve.build();
    DelayFunction delay = cfg.delay.build(curve);
    require_angle("theta0", cfg.theta0);
    if (cfg.steps <= 0) bad("steps", "must be positive");

    Trajectory t = iterate(curve, delay, {cfg.s0, cfg.theta0}, cfg.steps);
    std::vector<std::string> written{prepare(o, "trajectory.csv")};
    {
        Csv csv(written.back(), "step,s,theta,p,impact_x,impact_y,reflect_x,reflect_y");
        Vec2 start = curve.point(cfg.s0);
        csv.row({0.0, t.points[0].s, t.points[0].theta, t.points[0].p(), start.x, start.y, start.x, start.y});
        for (std::size_t k = 0; k < t.impacts.size(); ++k) {
            const PhasePoint& x = t.points[k + 1];
            csv.row({double(k + 1), x.s, x.theta, x.p(), t.impacts[k].x, t.impacts[k].y, t.reflections[k].x,
                     t.reflections[k].y});
        }
    }
    if (o.svg && !t.impacts.empty()) {
        written.push_back(prepare(o, "trajectory.svg"));
        write_text(written.back(), render_svg(trajectory_plot(curve, delay, t)));
    }
    if (t.error) throw std::runtime_error(*t.error);
    return written;
}

std::vector<std::string> run_phase(const CommonOptions& o, const PhaseConfig& cfg) {
    BoundaryCurve curve = cfg.curve.build();
    DelayFunction delay = cfg.delay.build(curve);
    if (cfg.orbits <= 0) bad("orbits", "must be positive");
    if (cfg.steps <= 0) bad("steps", "must be positive");

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> us(0.0, curve.perimeter()), ut(0.05, kPi - 0.05);
    std::vector<std::string> written{prepare(o, "phase.csv")};
    PlotData plot;
    plot.title = "phase portrait: " + curve.describe() + " / " + delay.describe();
    const double P = curve.perimeter();
    plot.boundary = {{0.0, 0.0}, {P, 0.0}, {P, kPi}, {0.0, kPi}};
    {
        Csv csv(written.back(), "orbit,step,s,theta,p");
        for (int orbit = 0; orbit < cfg.orbits; ++orbit) {
            PhasePoint x0{us(rng), ut(rng)};
            Trajectory t = iterate(curve, delay, x0, cfg.steps);
            for (std::size_t k = 0; k < t.points.size(); ++k) {
                const PhasePoint& x = t.points[k];
                csv.row({double(orbit), double(k), x.s, x.theta, x.p()});
                plot.scatter.push_back({x.s, x.theta});
            }
        }
    }
    if (o.svg) {
        written.push_back(prepare(o, "phase.svg"));
        write_text(written.back(), render_svg(plot));
    }
    return written;
}

std::vector<std::string> run_orbit(const CommonOptions& o, const OrbitConfig& cfg) {
    BoundaryCurve curve = cfg.curve.build();
    DelayFunction delay = cfg.delay.build(curve);
    if (cfg.q <= 0) bad("q", "must be positive");

    PeriodicOrbit orbit = periodic_orbit_search(curve, delay, cfg.p, cfg.q);
    std::vector<std::string> written{prepare(o, "orbit.csv")};
    {
        Csv csv(written.back(), "i,s,theta");
        for (int i = 0; i < cfg.q; ++i) csv.row({double(i + 1), orbit.s[i], orbit.theta[i]});
    }
    written.push_back(prepare(o, "orbit_meta.txt"));
    write_text(written.back(), "type = " + std::to_string(cfg.p) + "/" + std::to_string(cfg.q) +
                                   "\naction = " + fmt(orbit.action) + "\nresidual = " + fmt(orbit.closure_error) +
                                   "\ngradient_norm = " + fmt(orbit.gradient_norm) + "\niterations = " +
                                   std::to_string(orbit.iterations) + "\n");
    if (o.svg) {
        Trajectory t = iterate(curve, delay, {orbit.s[0], orbit.theta[0]}, cfg.q);
        written.push_back(prepare(o, "orbit.svg"));
        write_text(written.back(), render_svg(trajectory_plot(curve, delay, t)));
    }
    return written;
}

std::vector<std::string> run_twist(const CommonOptions& o, const TwistConfig& cfg) {
    BoundaryCurve curve = cfg.curve.build();
    std::vector<DelayFunction> delays;
    if (cfg.heights.empty()) {
        delays.push_back(cfg.delay.build(curve));
    } else {
        for (double h : cfg.heights) {
            require_positive("heights", h);
            delays.push_back(DelayFunction::puck(h));
        }
    }
    std::vector<std::string> written{prepare(o, "twist.csv")};
    Csv csv(written.back(), "delay,verdict,r,R,right_bound,left_bound,slope_inf,slope_sup,puck_threshold");
    for (const auto& d : delays) {
        TwistReport rep = twist_certificate(curve, d);
        double denom = 2.0 * rep.r / rep.R - 1.0;
        double threshold = denom > 0.0 ? 2.0 * rep.R / denom : std::numeric_limits<double>::infinity();
        csv.row({d.describe(), to_string(rep.verdict), fmt(rep.r), fmt(rep.R), fmt(rep.right_bound),
                 fmt(rep.left_bound), fmt(rep.slope_inf), fmt(rep.slope_sup), fmt(threshold)});
    }
    return written;
}

std::vector<std::string> run_vortex(const CommonOptions& o, const VortexConfig& cfg) {
    require_positive("tol", cfg.tol);
    std::vector<std::string> written;
    if (cfg.mode == "limit") {
        VortexDomain domain = build_domain(cfg);
        require_angle("theta0", cfg.theta0);
        if (cfg.eps.empty()) bad("eps", "needs at least one value");
        for (double e : cfg.eps) require_positive("eps", e);
        written.push_back(prepare(o, "limit.csv"));
        Csv csv(written.back(), "eps,ds,dtheta,exit_time,v_plus,v_minus,max_relative_drift");
        for (double e : cfg.eps) {
            LimitReport r = dipole_billiard_limit_check(domain, {cfg.s0, cfg.theta0}, e, cfg.tol);
            csv.row({r.eps, r.ds, r.dtheta, r.exit_time, r.v_plus, r.v_minus, r.max_relative_drift});
        }
        return written;
    }
    if (cfg.mode == "fission") {
        if (cfg.eps.empty()) bad("eps", "needs at least one value");
        require_positive("eps", cfg.eps[0]);
        written.push_back(prepare(o, "fission.csv"));
        Csv csv(written.back(), "theta,eps,v_plus,v_minus,predicted_plus,predicted_minus,height_plus,height_minus");
        for (double th : cfg.thetas) {
            require_angle("thetas", th);
            FissionMeasurement m = simulate_half_plane_fission(th, cfg.eps[0], cfg.tol);
            FissionOutcome f = fission_outcome(1.0, th);
            csv.row({th, cfg.eps[0], m.v_plus, m.v_minus, f.v_plus, f.v_minus, m.height_plus, m.height_minus});
        }
        return written;
    }
    if (cfg.mode != "free") bad("mode", "expected limit, fission or free");

    if (cfg.vortices.empty() || cfg.vortices.size() % 3 != 0) bad("vortices", "expected x, y, circulation triples");
    require_positive("duration", cfg.duration);
    require_positive("sample_dt", cfg.sample_dt);
    VortexConfiguration config;
    config.domain = build_domain(cfg);
    for (std::size_t i = 0; i < cfg.vortices.size(); i += 3) {
        config.z.push_back({cfg.vortices[i], cfg.vortices[i + 1]});
        config.gamma.push_back(cfg.vortices[i + 2]);
    }
    try {
        config.validate();
    } catch (const Error& e) {
        bad("vortices", e.what());
    }
    IntegrateOptions opt;
    opt.tol = cfg.tol;
    std::vector<VortexSample> kept{{0.0, config.z, 0.0, 0.0}};
    double next = cfg.sample_dt;
    VortexTrajectory traj = integrate(config, cfg.duration, opt, [&](const VortexSample& s) {
        if (s.t >= next - 1e-12) {
            kept.push_back(s);
            while (next <= s.t + 1e-12) next += cfg.sample_dt;
        }
        return true;
    });
    if (kept.back().t < traj.last().t) kept.push_back(traj.last());

    const std::size_t n = config.z.size();
    std::string header = "t";
    for (std::size_t i = 1; i <= n; ++i) header += ",x_" + std::to_string(i) + ",y_" + std::to_string(i);
    written.push_back(prepare(o, "vortex.csv"));
    {
        Csv csv(written.back(), header);
        for (const auto& s : kept) {
            std::vector<std::string> cells{fmt(s.t)};
            for (Vec2 z : s.z) {
                cells.push_back(fmt(z.x));
                cells.push_back(fmt(z.y));
            }
            csv.row(cells);
        }
    }
    if (o.svg) {
        PlotData plot;
        plot.title = "vortices in " + config.domain.describe();
        if (config.domain.kind() != DomainKind::HalfPlane) {
            plot.boundary = boundary_polyline(config.domain.boundary());
        }
        for (std::size_t i = 0; i < n; ++i) {
            StyledPath path;
            path.color = static_cast<int>(i);
            path.dashed = config.gamma[i] < 0.0;
            for (const auto& s : kept) path.points.push_back(s.z[i]);
            plot.vortex_paths.push_back(path);
        }
        written.push_back(prepare(o, "vortex.svg"));
        write_text(written.back(), render_svg(plot));
    }
    if (traj.event) throw Error(ErrorKind::EventStop, *traj.event);
    return written;
}

std::vector<std::string> run_multidipole(const CommonOptions& o, const MultiDipoleConfig& cfg) {
    BoundaryCurve table = cfg.curve.build();
    if (cfg.launches.empty() || cfg.launches.size() % 2 != 0) bad("launches", "expected s, theta pairs");
    require_positive("speed", cfg.speed);
    require_positive("duration", cfg.duration);
    std::vector<DipoleLaunch> launches;
    for (std::size_t i = 0; i < cfg.launches.size(); i += 2) {
        require_angle("launches", cfg.launches[i + 1]);
        launches.push_back({cfg.launches[i], cfg.launches[i + 1], cfg.speed});
    }
    MultiDipoleResult res = multi_dipole_simulate(table, launches, cfg.duration);

    std::vector<std::string> written{prepare(o, "events.csv")};
    {
        Csv csv(written.back(), "t,kind,location,angles,speeds");
        for (const auto& e : res.events) {
            csv.row({fmt(e.t), to_string(e.kind), fmt(e.s), fmt(e.theta), fmt(e.speed_a) + ";" + fmt(e.speed_b)});
        }
    }
    if (o.svg && (!res.chords.empty() || !res.arcs.empty())) {
        PlotData plot;
        plot.title = "dipoles in " + table.describe();
        plot.boundary = boundary_polyline(table);
        for (const auto& seg : res.chords) {
            plot.vortex_paths.push_back({{seg.from, seg.to}, seg.dipole % 2 == 1, seg.dipole});
        }
        for (const auto& arc : res.arcs) plot.slide_arcs.push_back(boundary_arc(table, arc.s0, arc.s1));
        written.push_back(prepare(o, "events.svg"));
        write_text(written.back(), render_svg(plot));
    }
    if (res.error) throw std::runtime_error(*res.error);
    return written;
}

std::vector<std::string> run_outer(const CommonOptions& o, const OuterConfig& cfg) {
    std::vector<std::string> written;
    if (cfg.mode == "sphere") {
        if (!(cfg.colatitude > 0.0 && cfg.colatitude < kPi)) bad("colatitude", "must lie in (0, pi)");
        if (cfg.samples <= 0) bad("samples", "must be positive");
        SphericalCurve cap = SphericalCurve::small_circle({0.0, 0.0, 1.0}, cfg.colatitude);
        DelayFunction delay = cfg.delay.build(BoundaryCurve::disk(std::sin(cfg.colatitude)));
        DualityReport rep = sphere_duality_check(cap, delay, cfg.samples);
        written.push_back(prepare(o, "duality.csv"));
        Csv csv(written.back(), "sample,s,theta,error");
        for (std::size_t k = 0; k < rep.samples.size(); ++k) {
            csv.row({double(k), rep.samples[k].s, rep.samples[k].theta, rep.samples[k].error});
        }
        return written;
    }
    if (cfg.mode != "plane") bad("mode", "expected plane or sphere");
    BoundaryCurve curve = cfg.curve.build();
    OuterDelay delay = OuterDelay::zero();
    if (cfg.area == "power") {
        delay = OuterDelay::power_area(cfg.area_coeff, cfg.area_power);
    } else if (cfg.area != "zero") {
        bad("area", "expected zero or power");
    }
    if (cfg.steps <= 0) bad("steps", "must be positive");
    Vec2 X{cfg.x0, cfg.y0};
    if (curve.contains(X)) bad("x0", "starting point must lie outside the curve");

    written.push_back(prepare(o, "outer.csv"));
    PlotData plot;
    plot.title = "outer orbit: " + curve.describe() + " / " + delay.describe();
    plot.boundary = boundary_polyline(curve);
    {
        Csv csv(written.back(), "step,x,y,alpha,r");
        for (int k = 0; k <= cfg.steps; ++k) {
            OuterPoint c = tangent_coordinates(curve, X);
            csv.row({double(k), X.x, X.y, c.alpha, c.r});
            plot.scatter.push_back(X);
            if (k < cfg.steps) X = pensive_outer_step(curve, delay, X);
        }
    }
    if (o.svg) {
        written.push_back(prepare(o, "outer.svg"));
        write_text(written.back(), render_svg(plot));
    }
    return written;
}

}  // namespace pensive::cli
