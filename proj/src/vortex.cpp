#include "pensive/vortex.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace pensive {

namespace {

using cplx = std::complex<double>;
namespace odeint = boost::numeric::odeint;

cplx as_c(Vec2 v) { return {v.x, v.y}; }
Vec2 as_v(cplx c) { return {c.real(), c.imag()}; }

// Gradient of log|g| for analytic g, given g'/g.
Vec2 log_grad(cplx ratio) { return as_v(std::conj(ratio)); }

constexpr double kInv2Pi = 1.0 / kTwoPi;

cplx oval_second_derivative(const NeumannMap& m, cplx Z) {
    const double l2 = m.lambda * m.lambda;
    cplx w = l2 * Z * Z;
    return 2.0 * m.scale * l2 * Z * (3.0 + w) / ((1.0 - w) * (1.0 - w) * (1.0 - w));
}

double disk_greens(cplx z, cplx w, double R) {
    return kInv2Pi * std::log(std::abs(R * R - z * std::conj(w)) / (R * std::abs(z - w)));
}

cplx disk_greens_grad(cplx z, cplx w, double R) {
    cplx g = -std::conj(w) / (R * R - z * std::conj(w)) - 1.0 / (z - w);
    return std::conj(g) * kInv2Pi;
}

}  // namespace

const char* to_string(DomainKind k) {
    switch (k) {
        case DomainKind::HalfPlane: return "half_plane";
        case DomainKind::Disk: return "disk";
        case DomainKind::NeumannOval: return "neumann_oval";
    }
    return "?";
}

VortexDomain VortexDomain::half_plane() { return VortexDomain(); }

VortexDomain VortexDomain::disk(double radius) {
    if (!(radius > 0)) throw Error(ErrorKind::InvalidParameter, "disk radius must be positive");
    VortexDomain d;
    d.kind_ = DomainKind::Disk;
    d.param_ = radius;
    return d;
}

VortexDomain VortexDomain::neumann_oval(double lambda) {
    if (!(lambda >= 0 && lambda < 1)) throw Error(ErrorKind::InvalidParameter, "lambda must lie in [0, 1)");
    VortexDomain d;
    d.kind_ = DomainKind::NeumannOval;
    d.param_ = lambda;
    return d;
}

std::string VortexDomain::describe() const {
    if (kind_ == DomainKind::HalfPlane) return "half_plane";
    return std::string(to_string(kind_)) + "(" + std::to_string(param_) + ")";
}

bool VortexDomain::inside(Vec2 z) const {
    switch (kind_) {
        case DomainKind::HalfPlane: return z.y > 0;
        case DomainKind::Disk: return z.norm() < param_;
        case DomainKind::NeumannOval: return NeumannMap(param_).inverse(z).norm() < 1.0;
    }
    return false;
}

double VortexDomain::boundary_distance(Vec2 z) const {
    switch (kind_) {
        case DomainKind::HalfPlane: return z.y;
        case DomainKind::Disk: return param_ - z.norm();
        case DomainKind::NeumannOval: {
            NeumannMap m(param_);
            Vec2 Z = m.inverse(z);
            return (1.0 - Z.norm()) * m.derivative(Z).norm();
        }
    }
    return 0.0;
}

BoundaryCurve VortexDomain::boundary() const {
    switch (kind_) {
        case DomainKind::Disk: return BoundaryCurve::disk(param_);
        case DomainKind::NeumannOval: return BoundaryCurve::neumann_oval(param_);
        default: throw Error(ErrorKind::Unsupported, "the half-plane has no billiard table");
    }
}

void VortexDomain::require_inside(Vec2 z) const {
    if (!inside(z)) throw Error(ErrorKind::BoundarySingularity, "point is not inside the domain");
}

double VortexDomain::greens(Vec2 z, Vec2 w) const {
    require_inside(z);
    require_inside(w);
    if (z.x == w.x && z.y == w.y) throw Error(ErrorKind::DiagonalSingularity, "Green's function on the diagonal");
    switch (kind_) {
        case DomainKind::HalfPlane:
            return kInv2Pi * (std::log(std::abs(as_c(z) - std::conj(as_c(w)))) - std::log(distance(z, w)));
        case DomainKind::Disk: return disk_greens(as_c(z), as_c(w), param_);
        case DomainKind::NeumannOval: {
            NeumannMap m(param_);
            return disk_greens(as_c(m.inverse(z)), as_c(m.inverse(w)), 1.0);
        }
    }
    return 0.0;
}

Vec2 VortexDomain::grad_greens(Vec2 z, Vec2 w) const {
    require_inside(z);
    require_inside(w);
    if (z.x == w.x && z.y == w.y) throw Error(ErrorKind::DiagonalSingularity, "Green's function on the diagonal");
    switch (kind_) {
        case DomainKind::HalfPlane: {
            cplx zc = as_c(z), wc = as_c(w);
            return (log_grad(1.0 / (zc - std::conj(wc))) - log_grad(1.0 / (zc - wc))) * kInv2Pi;
        }
        case DomainKind::Disk: return as_v(disk_greens_grad(as_c(z), as_c(w), param_));
        case DomainKind::NeumannOval: {
            NeumannMap m(param_);
            Vec2 Z = m.inverse(z);
            cplx g = disk_greens_grad(as_c(Z), as_c(m.inverse(w)), 1.0);
            return as_v(g / std::conj(as_c(m.derivative(Z))));
        }
    }
    return {};
}

double VortexDomain::robin(Vec2 z) const {
    require_inside(z);
    switch (kind_) {
        case DomainKind::HalfPlane: return kInv2Pi * std::log(2.0 * z.y);
        case DomainKind::Disk: return kInv2Pi * std::log((param_ * param_ - dot(z, z)) / param_);
        case DomainKind::NeumannOval: {
            NeumannMap m(param_);
            Vec2 Z = m.inverse(z);
            return kInv2Pi * (std::log(1.0 - dot(Z, Z)) + std::log(m.derivative(Z).norm()));
        }
    }
    return 0.0;
}

Vec2 VortexDomain::grad_robin(Vec2 z) const {
    require_inside(z);
    switch (kind_) {
        case DomainKind::HalfPlane: return {0.0, kInv2Pi / z.y};
        case DomainKind::Disk: return z * (-2.0 * kInv2Pi / (param_ * param_ - dot(z, z)));
        case DomainKind::NeumannOval: {
            NeumannMap m(param_);
            cplx Z = as_c(m.inverse(z));
            cplx f1 = as_c(m.derivative(as_v(Z)));
            cplx in_disk = -2.0 * kInv2Pi * Z / (1.0 - std::norm(Z));
            cplx from_map = std::conj(oval_second_derivative(m, Z) / f1) * kInv2Pi;
            return as_v((in_disk + from_map) / std::conj(f1));
        }
    }
    return {};
}

void VortexConfiguration::validate() const {
    if (z.size() != gamma.size() || z.empty()) {
        throw Error(ErrorKind::InvalidParameter, "positions and circulations must match and be non-empty");
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!domain.inside(z[i])) throw Error(ErrorKind::BoundarySingularity, "vortex outside the domain");
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            if (distance(z[i], z[j]) == 0.0) throw Error(ErrorKind::DiagonalSingularity, "coincident vortices");
        }
    }
}

std::vector<Vec2> vortex_rhs(const VortexConfiguration& c) {
    const std::size_t n = c.z.size();
    std::vector<Vec2> vel(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 g = c.domain.grad_robin(c.z[i]) * (0.5 * c.gamma[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) g = g + c.domain.grad_greens(c.z[i], c.z[j]) * c.gamma[j];
        }
        vel[i] = {g.y, -g.x};
    }
    return vel;
}

double vortex_hamiltonian(const VortexConfiguration& c) {
    double H = 0.0;
    for (std::size_t i = 0; i < c.z.size(); ++i) {
        H += 0.5 * c.gamma[i] * c.gamma[i] * c.domain.robin(c.z[i]);
        for (std::size_t j = i + 1; j < c.z.size(); ++j) H += c.gamma[i] * c.gamma[j] * c.domain.greens(c.z[i], c.z[j]);
    }
    return H;
}

double vortex_impulse(const VortexConfiguration& c) {
    double m = 0.0;
    for (std::size_t i = 0; i < c.z.size(); ++i) m += c.gamma[i] * c.z[i].y;
    return m;
}

VortexTrajectory integrate(const VortexConfiguration& config, double duration, const IntegrateOptions& opt,
                           const VortexObserver& observer) {
    if (!(opt.tol > 0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");
    config.validate();
    using State = std::vector<double>;
    const std::size_t n = config.z.size();
    VortexConfiguration work = config;
    auto load = [&](const State& x) {
        for (std::size_t i = 0; i < n; ++i) work.z[i] = {x[2 * i], x[2 * i + 1]};
    };
    auto system = [&](const State& x, State& dxdt, double) {
        load(x);
        auto v = vortex_rhs(work);
        for (std::size_t i = 0; i < n; ++i) {
            dxdt[2 * i] = v[i].x;
            dxdt[2 * i + 1] = v[i].y;
        }
    };
    auto sample_of = [&](double t) {
        VortexSample s;
        s.t = t;
        s.z = work.z;
        s.energy = vortex_hamiltonian(work);
        s.impulse = vortex_impulse(work);
        return s;
    };

    State x(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        x[2 * i] = config.z[i].x;
        x[2 * i + 1] = config.z[i].y;
    }
    VortexTrajectory out;
    double t = config.t;
    const double t_end = config.t + duration;
    load(x);
    out.samples.push_back(sample_of(t));
    const double H0 = out.samples[0].energy, M0 = out.samples[0].impulse;
    const double H_scale = std::abs(H0) > 0 ? std::abs(H0) : 1.0;
    double gamma_scale = 0.0;
    for (double g : config.gamma) gamma_scale += std::abs(g);

    auto stepper = odeint::make_controlled(opt.tol, opt.tol, odeint::runge_kutta_dopri5<State>());
    double dt = std::min(opt.max_step, 1e-3);
    double H_prev = H0;
    for (std::size_t step = 0; step < opt.max_steps && t < t_end; ++step) {
        dt = std::min({dt, opt.max_step, t_end - t});
        if (dt < 1e-15) {
            out.event = "step size underflow";
            break;
        }
        const State backup = x;
        const double t_before = t, dt_before = dt;
        odeint::controlled_step_result res;
        try {
            res = stepper.try_step(system, x, t, dt);
        } catch (const Error&) {
            x = backup;
            t = t_before;
            dt = 0.5 * dt_before;
            stepper.reset();
            ++out.rejected_steps;
            continue;
        }
        if (res == odeint::fail) {
            ++out.rejected_steps;
            continue;
        }
        load(x);
        double H;
        try {
            H = vortex_hamiltonian(work);
        } catch (const Error&) {
            x = backup;
            t = t_before;
            dt = 0.5 * dt_before;
            stepper.reset();
            ++out.rejected_steps;
            continue;
        }
        if (std::abs(H - H_prev) > opt.tol * H_scale && dt_before > 1e-12) {
            x = backup;
            t = t_before;
            dt = 0.5 * dt_before;
            stepper.reset();
            ++out.rejected_steps;
            continue;
        }
        H_prev = H;
        VortexSample s = sample_of(t);
        out.max_relative_drift = std::max(out.max_relative_drift, std::abs(s.energy - H0) / H_scale);
        if (config.domain.kind() == DomainKind::HalfPlane && gamma_scale > 0) {
            out.max_impulse_drift = std::max(out.max_impulse_drift, std::abs(s.impulse - M0) / gamma_scale);
        }
        out.samples.push_back(s);

        double closest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (config.domain.boundary_distance(work.z[i]) < opt.stop_distance) {
                out.event = "vortex " + std::to_string(i) + " reached the boundary";
            }
            for (std::size_t j = i + 1; j < n; ++j) closest = std::min(closest, distance(work.z[i], work.z[j]));
        }
        if (closest < opt.stop_distance) out.event = "vortex collision";
        if (out.event) break;
        if (observer && !observer(s)) {
            out.halted_by_observer = true;
            break;
        }
    }
    return out;
}

FissionOutcome fission_outcome(double speed, double theta) {
    const double c = std::cos(theta), r = std::sqrt(1.0 + c * c);
    FissionOutcome f;
    f.v_plus = speed * (r - c);
    f.v_minus = speed * (r + c);
    f.height_plus = r + c;
    f.height_minus = r - c;
    return f;
}

FusionOutcome fusion_outcome(double height_plus, double height_minus, double gamma, double x_plus,
                             double x_minus) {
    if (!(height_plus > 0 && height_minus > 0)) {
        throw Error(ErrorKind::InvalidParameter, "heights must be positive");
    }
    constexpr double chi2 = MetallicConstants::silver * MetallicConstants::silver;
    const double ratio = height_plus / height_minus;
    FusionOutcome f;
    f.meeting_x = (x_plus * height_plus + x_minus * height_minus) / (height_plus + height_minus);
    f.merge = ratio > 1.0 / chi2 && ratio < chi2;
    if (!f.merge) return f;
    const double diff = height_plus - height_minus;
    const double disc = -height_plus * height_plus + 6 * height_plus * height_minus - height_minus * height_minus;
    f.normal_angle = std::atan(std::sqrt(diff * diff / disc));
    // The axis angle is measured from the boundary; the heading is perpendicular to it,
    // tilted toward the side of the higher (slower) positive vortex.
    f.exit_angle = 0.5 * kPi - (diff >= 0 ? f.normal_angle : -f.normal_angle);
    f.speed = gamma / (2 * kTwoPi * std::sqrt(height_plus * height_minus));
    return f;
}

double vortex_delay_from_fission(double theta, double L) {
    FissionOutcome f = fission_outcome(1.0, theta);
    return 2 * L * f.v_plus / (f.v_plus + f.v_minus);
}

const char* to_string(PairRegime r) {
    switch (r) {
        case PairRegime::MergeDipole: return "merge_dipole";
        case PairRegime::Pass: return "pass";
        case PairRegime::LeapfrogReversing: return "leapfrog_reversing";
        case PairRegime::Cusp: return "cusp";
        case PairRegime::LeapfrogNoReverse: return "leapfrog_no_reverse";
        case PairRegime::PassOnce: return "pass_once";
    }
    return "?";
}

PairRegime pair_classification(double mu, bool same_sign) {
    mu = std::abs(mu);
    const double chi = MetallicConstants::silver, phi = MetallicConstants::golden;
    if (!same_sign) return mu < chi ? PairRegime::MergeDipole : PairRegime::Pass;
    if (std::abs(mu - phi) <= 1e-12) return PairRegime::Cusp;
    if (mu < phi) return PairRegime::LeapfrogReversing;
    if (mu < chi) return PairRegime::LeapfrogNoReverse;
    return PairRegime::PassOnce;
}

FissionMeasurement simulate_half_plane_fission(double theta, double eps, double tol) {
    if (!(theta > 0 && theta < kPi)) throw Error(ErrorKind::InvalidAngle, "theta outside (0, pi)");
    const double y0 = 40 * eps;
    Vec2 heading{std::cos(theta), -std::sin(theta)};
    Vec2 side = heading.perp();
    Vec2 centre{0.0, y0};
    VortexConfiguration c;
    c.z = {centre + side * eps, centre - side * eps};
    c.gamma = {2 * kTwoPi * eps, -2 * kTwoPi * eps};
    IntegrateOptions opt;
    opt.tol = tol;
    opt.max_step = 20 * eps;
    const double spread = 80 * eps;
    auto run = integrate(c, 4 * y0 / std::sin(theta) + 1000 * eps, opt,
                         [&](const VortexSample& s) { return s.z[0].x - s.z[1].x < spread; });
    if (!run.halted_by_observer) throw Error(ErrorKind::ReportIncomplete, "vortices did not separate");
    const VortexSample& last = run.last();
    c.z = last.z;
    auto v = vortex_rhs(c);
    FissionMeasurement m;
    m.v_plus = v[0].norm();
    m.v_minus = v[1].norm();
    m.height_plus = last.z[0].y / eps;
    m.height_minus = last.z[1].y / eps;
    m.time = last.t;
    return m;
}

PairRun simulate_half_plane_pair(double gamma1, double gamma2, double h1, double h2, double eps, double gap,
                                 double duration, double tol) {
    if (!(h1 > 0 && h2 > 0 && eps > 0 && gap > 0)) throw Error(ErrorKind::InvalidParameter, "bad pair setup");
    VortexConfiguration c;
    c.z = {{-0.5 * gap, eps * h1}, {0.5 * gap, eps * h2}};
    c.gamma = {2 * kTwoPi * eps * gamma1, 2 * kTwoPi * eps * gamma2};
    IntegrateOptions opt;
    opt.tol = tol;
    const double rise = 30 * eps * std::max(h1, h2);
    PairRun out;
    auto run = integrate(c, duration, opt, [&](const VortexSample& s) {
        if (0.5 * (s.z[0].y + s.z[1].y) > rise) {
            out.outcome = PairOutcome::Merge;
            return false;
        }
        if (s.z[0].x - s.z[1].x > 0.5 * gap) {
            out.outcome = PairOutcome::Pass;
            return false;
        }
        return true;
    });
    const VortexSample& last = run.last();
    out.time = last.t;
    out.final_separation = distance(last.z[0], last.z[1]);
    if (out.outcome == PairOutcome::Merge) {
        c.z = last.z;
        auto v = vortex_rhs(c);
        Vec2 mean = (v[0] + v[1]) * 0.5;
        out.exit_angle = std::atan2(mean.y, mean.x);
        out.speed = mean.norm();
    }
    return out;
}

double locate_fusion_threshold(double eps, double rel_width, double tol) {
    const double gap = 100 * eps;
    auto outcome = [&](double ratio) {
        double r = std::sqrt(ratio);
        PairRun run = simulate_half_plane_pair(1.0, -1.0, r, 1.0 / r, eps, gap, 60.0, tol);
        if (run.outcome == PairOutcome::Undecided) {
            throw Error(ErrorKind::ReportIncomplete, "pair run undecided at ratio " + std::to_string(ratio));
        }
        return run.outcome;
    };
    double lo = 3.0, hi = 9.0;
    if (outcome(lo) != PairOutcome::Merge || outcome(hi) != PairOutcome::Pass) {
        throw Error(ErrorKind::NotFound, "threshold is not bracketed");
    }
    while (hi / lo - 1.0 > rel_width) {
        double mid = std::sqrt(lo * hi);
        (outcome(mid) == PairOutcome::Merge ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

LimitReport dipole_billiard_limit_check(const VortexDomain& domain, const PhasePoint& x0, double eps, double tol) {
    BoundaryCurve curve = domain.boundary();
    const double P = curve.perimeter();
    const double size = std::sqrt(std::abs(curve.signed_area()) / kPi);
    Chord ch = curve.chord(x0.s, x0.theta);
    Vec2 A = curve.point(x0.s), B = curve.point(ch.s2);
    Vec2 heading = (B - A).unit();
    Vec2 centre = (A + B) * 0.5;
    if (!(2 * eps < domain.boundary_distance(centre))) {
        throw Error(ErrorKind::InvalidParameter, "dipole does not fit inside the domain");
    }
    VortexConfiguration c;
    c.domain = domain;
    c.z = {centre + heading.perp() * eps, centre - heading.perp() * eps};
    c.gamma = {2 * kTwoPi * eps, -2 * kTwoPi * eps};
    IntegrateOptions opt;
    opt.tol = tol;

    LimitReport rep;
    rep.eps = eps;
    bool split = false, far_recorded = false;
    auto run = integrate(c, 40.0 * size, opt, [&](const VortexSample& s) {
        const double sep = distance(s.z[0], s.z[1]);
        if (sep > 20 * eps) split = true;
        if (!far_recorded && sep > 0.3 * size) {
            VortexConfiguration now = c;
            now.z = s.z;
            auto v = vortex_rhs(now);
            rep.v_plus = v[0].norm();
            rep.v_minus = v[1].norm();
            far_recorded = true;
        }
        Vec2 mid = (s.z[0] + s.z[1]) * 0.5;
        return !(split && sep < 6 * eps && domain.boundary_distance(mid) > 0.1 * size);
    });
    if (!run.halted_by_observer) {
        throw Error(ErrorKind::ReportIncomplete,
                    run.event ? "integration stopped: " + *run.event : "dipole did not re-form and leave");
    }
    const VortexSample& last = run.last();
    c.z = last.z;
    auto v = vortex_rhs(c);
    Vec2 u = ((v[0] + v[1]) * 0.5).unit();
    Vec2 mid = (last.z[0] + last.z[1]) * 0.5;
    Chord back = curve.ray_hit(mid, u * -1.0);
    rep.ode_exit = {back.s2, kPi - back.theta2};
    rep.pensive_exit = pensive_step(curve, DelayFunction::vortex(0.5 * P), x0);
    rep.ds = std::abs(wrap_centered(rep.ode_exit.s - rep.pensive_exit.s, P));
    rep.dtheta = std::abs(rep.ode_exit.theta - rep.pensive_exit.theta);
    rep.exit_time = last.t;
    rep.max_relative_drift = run.max_relative_drift;
    return rep;
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Fission: return "fission";
        case EventKind::Fusion: return "fusion";
        case EventKind::Pass: return "pass";
    }
    return "?";
}

namespace {

struct Flight {
    int id;
    double t0, t_hit;
    double speed;
    Vec2 from, to;
    double s_hit, theta_hit;
};

struct Monopole {
    int sign;
    int origin;
    double t0, s0, velocity;
    double at(double t) const { return s0 + velocity * (t - t0); }
};

}  // namespace

MultiDipoleResult multi_dipole_simulate(const BoundaryCurve& table, const std::vector<DipoleLaunch>& dipoles,
                                        double duration, double tie_tol) {
    const double P = table.perimeter();
    MultiDipoleResult out;
    std::vector<Flight> flights;
    std::vector<Monopole> monos;
    int next_id = 0;
    auto launch = [&](double t, double s, double theta, double speed) {
        if (!(speed > 0)) throw Error(ErrorKind::InvalidParameter, "dipole speed must be positive");
        Chord ch = table.chord(s, theta);
        Flight f{next_id++, t, t + ch.length / speed, speed, table.point(s), table.point(ch.s2), ch.s2, ch.theta2};
        flights.push_back(f);
    };
    auto close_arc = [&](const Monopole& m, double t) {
        out.arcs.push_back({m.sign, m.origin, m.t0, t, m.s0, m.at(t)});
    };
    auto net = [&] {
        int total = 0;
        for (const auto& m : monos) total += m.sign;
        return total;
    };
    auto finish = [&](double t) {
        for (const auto& f : flights) {
            double frac = std::clamp((t - f.t0) / (f.t_hit - f.t0), 0.0, 1.0);
            out.chords.push_back({f.id, f.t0, t, f.from, f.from + (f.to - f.from) * frac});
        }
        for (const auto& m : monos) close_arc(m, t);
        out.end_time = t;
    };

    try {
        for (const auto& d : dipoles) launch(0.0, d.s, d.theta, d.speed);
    } catch (const Error& e) {
        out.error = e.what();
        return out;
    }

    double now = 0.0;
    const double lap_tol = 1e-9 * P;
    while (true) {
        double best_t = std::numeric_limits<double>::infinity();
        int flight_idx = -1, ma = -1, mb = -1;
        for (std::size_t k = 0; k < flights.size(); ++k) {
            if (flights[k].t_hit < best_t) {
                best_t = flights[k].t_hit;
                flight_idx = static_cast<int>(k);
            }
        }
        for (std::size_t i = 0; i < monos.size(); ++i) {
            for (std::size_t j = i + 1; j < monos.size(); ++j) {
                const double w = monos[i].velocity - monos[j].velocity;
                if (w == 0.0) continue;
                double gap = wrap(monos[j].at(now) - monos[i].at(now), P);
                double dist = w > 0 ? gap : P - gap;
                if (dist <= lap_tol) dist += P;
                double t = now + dist / std::abs(w);
                if (t < best_t) {
                    best_t = t;
                    flight_idx = -1;
                    ma = static_cast<int>(i);
                    mb = static_cast<int>(j);
                }
            }
        }
        if (!(best_t < duration)) {
            finish(duration);
            return out;
        }
        now = best_t;

        const double where = flight_idx >= 0 ? flights[flight_idx].s_hit : wrap(monos[ma].at(now), P);
        int crowd = 0;
        for (const auto& m : monos) {
            if (std::abs(wrap_centered(m.at(now) - where, P)) <= tie_tol) ++crowd;
        }
        for (const auto& f : flights) {
            if (std::abs(f.t_hit - now) <= tie_tol && std::abs(wrap_centered(f.s_hit - where, P)) <= tie_tol) ++crowd;
        }
        if (crowd >= 3) {
            out.error = std::string(to_string(ErrorKind::AmbiguousEvent)) + ": three vortices meet at s = " +
                        std::to_string(where);
            finish(now);
            return out;
        }

        try {
            if (flight_idx >= 0) {
                Flight f = flights[flight_idx];
                flights.erase(flights.begin() + flight_idx);
                out.chords.push_back({f.id, f.t0, now, f.from, f.to});
                FissionOutcome fo = fission_outcome(f.speed, f.theta_hit);
                monos.push_back({+1, f.id, now, f.s_hit, fo.v_plus});
                monos.push_back({-1, f.id, now, f.s_hit, -fo.v_minus});
                DipoleEvent ev{now, EventKind::Fission, f.s_hit, f.theta_hit, fo.v_plus, fo.v_minus, f.id, f.id, net(), false};
                out.events.push_back(ev);
                continue;
            }
            Monopole a = monos[ma], b = monos[mb];
            DipoleEvent ev;
            ev.t = now;
            ev.s = where;
            ev.speed_a = std::abs(a.velocity);
            ev.speed_b = std::abs(b.velocity);
            ev.origin_a = a.origin;
            ev.origin_b = b.origin;
            ev.kind = EventKind::Pass;
            if (a.sign != b.sign) {
                const Monopole& plus = a.sign > 0 ? a : b;
                const Monopole& minus = a.sign > 0 ? b : a;
                FusionOutcome fu = fusion_outcome(1.0 / std::abs(plus.velocity), 1.0 / std::abs(minus.velocity), 1.0);
                if (fu.merge) {
                    close_arc(a, now);
                    close_arc(b, now);
                    monos.erase(monos.begin() + mb);
                    monos.erase(monos.begin() + ma);
                    ev.kind = EventKind::Fusion;
                    ev.theta = fu.exit_angle;
                    ev.exchange = a.origin != b.origin;
                    launch(now, where, fu.exit_angle, std::sqrt(std::abs(plus.velocity * minus.velocity)));
                }
            }
            ev.net_circulation = net();
            out.events.push_back(ev);
        } catch (const Error& e) {
            out.error = e.what();
            finish(now);
            return out;
        }
    }
}

}  // namespace pensive
