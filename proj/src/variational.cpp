#include "pensive/variational.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pensive {

namespace {

template <class F>
double bracket_root(F&& f, double a, double b, double fa, double fb) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                               boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

double transit_residual(const BoundaryCurve& curve, const DelayFunction& delay, double s, double S,
                        bool lifted, double p, double* exit_cos = nullptr) {
    const double P = curve.perimeter();
    Chord c = curve.chord(s, std::acos(p));
    if (exit_cos) *exit_cos = std::cos(c.theta2);
    double shift = delay.tilde(c.theta2);
    if (lifted) return s + wrap(c.s2 - s, P) + shift - S;
    return wrap_centered(c.s2 + shift - S, P);
}

constexpr double kEdge = 1.0 - 1e-9;

}  // namespace

BounceObjective single_bounce_objective(const BoundaryCurve& curve, const DelayFunction& delay,
                                        Vec2 A, Vec2 B, double s) {
    if (!curve.contains(A) || !curve.contains(B)) {
        throw Error(ErrorKind::InvalidPoint, "endpoints must lie inside the table");
    }
    Frame f = curve.frame(s);
    Vec2 ra = f.point - A;
    const double da = ra.norm();
    Vec2 u = ra / da;
    const double pa = dot(u, f.tangent);
    const double pa_prime = (1.0 - pa * pa) / da + f.curvature * dot(u, f.tangent.perp());
    BounceObjective out;
    out.p_in = pa;
    out.slide_to = curve.arc_advance(s, delay.ell(pa));
    Frame g = curve.frame(out.slide_to);
    Vec2 rb = g.point - B;
    const double db = rb.norm();
    out.p_out = dot(rb / db, g.tangent);
    out.value = da + delay.potential(pa) + db;
    out.derivative = (pa + out.p_out) * (1.0 + delay.ell_prime(pa) * pa_prime);
    return out;
}

PStarResult p_star(const BoundaryCurve& curve, const DelayFunction& delay, double s, double S,
                   const TransitOptions& opt) {
    const double P = curve.perimeter();
    auto r = [&](double p) { return transit_residual(curve, delay, s, S, opt.lifted, p); };
    auto jump = [&](double a, double b) { return !opt.lifted && std::abs(a - b) > 0.5 * P; };

    PStarResult out;
    if (opt.hint) {
        // Walk outward from the hint to the nearest sign change.
        double p0 = std::clamp(*opt.hint, -kEdge, kEdge);
        double r0 = r(p0);
        if (r0 == 0.0) {
            out.roots = {p0};
            out.chosen = p0;
            return out;
        }
        double step = 1e-4;
        double best = std::numeric_limits<double>::quiet_NaN();
        for (int dir : {-1, 1}) {
            double a = p0, ra = r0;
            for (double st = step; st < 4.0; st *= 1.6) {
                double b = std::clamp(p0 + dir * st, -kEdge, kEdge);
                double rb = r(b);
                if (!jump(ra, rb) && (ra < 0) != (rb < 0)) {
                    double root = bracket_root(r, std::min(a, b), std::max(a, b), a < b ? ra : rb,
                                               a < b ? rb : ra);
                    if (std::isnan(best) || std::abs(root - p0) < std::abs(best - p0)) best = root;
                    break;
                }
                if (b == -kEdge || b == kEdge) break;
                a = b;
                ra = rb;
            }
        }
        if (!std::isnan(best)) {
            out.roots = {best};
            out.chosen = best;
            return out;
        }
    }

    const int n = opt.grid + 2;
    std::vector<double> ps(n), rs(n);
    bool flat = true;
    for (int k = 0; k < n; ++k) {
        if (k == 0) ps[k] = -kEdge;
        else if (k == n - 1) ps[k] = kEdge;
        else ps[k] = -1.0 + 2.0 * (k - 0.5) / opt.grid;
        rs[k] = r(ps[k]);
        if (k > 0 && k < n - 1 && std::abs(rs[k]) > 1e-12) flat = false;
    }
    if (flat) throw Error(ErrorKind::NotTransitive, "transit residual vanishes identically");
    for (int k = 0; k + 1 < n; ++k) {
        if (rs[k] == 0.0) {
            out.roots.push_back(ps[k]);
            continue;
        }
        if (jump(rs[k], rs[k + 1]) || (rs[k] < 0) == (rs[k + 1] < 0) || rs[k + 1] == 0.0) continue;
        out.roots.push_back(bracket_root(r, ps[k], ps[k + 1], rs[k], rs[k + 1]));
    }
    if (rs[n - 1] == 0.0) out.roots.push_back(ps[n - 1]);
    if (out.roots.empty()) throw Error(ErrorKind::NotTransitive, "no transit direction found");
    out.ambiguous = out.roots.size() > 1;
    out.chosen = out.roots.front();
    if (opt.hint) {
        for (double root : out.roots) {
            if (std::abs(root - *opt.hint) < std::abs(out.chosen - *opt.hint)) out.chosen = root;
        }
    }
    return out;
}

GeneratingFunctionEval generating_function(const BoundaryCurve& curve, const DelayFunction& delay,
                                           double s, double S, const TransitOptions& opt) {
    PStarResult ps = p_star(curve, delay, s, S, opt);
    Chord c = curve.chord(s, std::acos(ps.chosen));
    GeneratingFunctionEval g;
    g.s = s;
    g.S = S;
    g.p_star = ps.chosen;
    g.P = std::cos(c.theta2);
    g.H = c.length + delay.potential(g.P);
    g.dH_ds = -g.p_star;
    g.dH_dS = g.P;
    g.ambiguous = ps.ambiguous;
    return g;
}

namespace {

struct ActionState {
    Eigen::VectorXd gradient;
    std::vector<double> p_out;  // launch cosine at s_i
    double action{0.0};
};

ActionState evaluate_action(const BoundaryCurve& curve, const DelayFunction& delay, int p,
                            const Eigen::VectorXd& x, const std::vector<double>& hints) {
    const int q = static_cast<int>(x.size());
    const double shift = p * curve.perimeter();
    ActionState st;
    st.gradient = Eigen::VectorXd::Zero(q);
    st.p_out.resize(q);
    std::vector<double> p_in(q);
    for (int i = 0; i < q; ++i) {
        double a = x[i];
        double b = (i + 1 < q) ? x[i + 1] : x[0] + shift;
        TransitOptions opt;
        opt.lifted = true;
        if (!hints.empty()) opt.hint = hints[i];
        GeneratingFunctionEval g = generating_function(curve, delay, a, b, opt);
        st.action += g.H;
        st.p_out[i] = g.p_star;
        p_in[(i + 1) % q] = g.P;
    }
    for (int i = 0; i < q; ++i) st.gradient[i] = p_in[i] - st.p_out[i];
    return st;
}

}  // namespace

PeriodicOrbit periodic_orbit_search(const BoundaryCurve& curve, const DelayFunction& delay, int p,
                                    int q, const std::vector<std::vector<double>>& seeds,
                                    const OrbitSearchOptions& opt) {
    if (q < 1) throw Error(ErrorKind::InvalidParameter, "orbit period must be positive");
    const double P = curve.perimeter();
    std::vector<std::vector<double>> starts = seeds;
    if (starts.empty()) {
        for (double offset : {0.0, P / (3.0 * q), 0.37 * P}) {
            std::vector<double> seed(q);
            for (int i = 0; i < q; ++i) seed[i] = offset + i * p * P / q;
            starts.push_back(seed);
        }
    }

    for (const auto& seed : starts) {
        if (static_cast<int>(seed.size()) != q) {
            throw Error(ErrorKind::InvalidParameter, "seed length must equal the period");
        }
        Eigen::VectorXd x(q);
        for (int i = 0; i < q; ++i) x[i] = seed[i];
        try {
            ActionState st = evaluate_action(curve, delay, p, x, {});
            int it = 0;
            for (; it < opt.max_iterations && st.gradient.lpNorm<Eigen::Infinity>() >= opt.tolerance;
                 ++it) {
                Eigen::MatrixXd hess(q, q);
                for (int j = 0; j < q; ++j) {
                    Eigen::VectorXd xp = x, xm = x;
                    xp[j] += opt.fd_step;
                    xm[j] -= opt.fd_step;
                    hess.col(j) = (evaluate_action(curve, delay, p, xp, st.p_out).gradient -
                                   evaluate_action(curve, delay, p, xm, st.p_out).gradient) /
                                  (2 * opt.fd_step);
                }
                hess = 0.5 * (hess + hess.transpose()).eval();
                Eigen::VectorXd step = hess.completeOrthogonalDecomposition().solve(-st.gradient);
                if (!step.allFinite()) step = -st.gradient;
                const double gnorm = st.gradient.norm();
                bool accepted = false;
                for (double damp = 1.0; damp > 1e-6; damp *= 0.5) {
                    Eigen::VectorXd trial = x + damp * step;
                    try {
                        ActionState ts = evaluate_action(curve, delay, p, trial, st.p_out);
                        if (ts.gradient.norm() < gnorm) {
                            x = trial;
                            st = ts;
                            accepted = true;
                            break;
                        }
                    } catch (const Error&) {
                    }
                }
                if (!accepted) {
                    // Damped gradient fallback on the action itself.
                    Eigen::VectorXd trial = x - 1e-2 * st.gradient;
                    ActionState ts = evaluate_action(curve, delay, p, trial, st.p_out);
                    if (ts.gradient.norm() >= gnorm) break;
                    x = trial;
                    st = ts;
                }
            }
            if (st.gradient.lpNorm<Eigen::Infinity>() >= opt.tolerance) continue;

            PeriodicOrbit orb;
            orb.winding = p;
            orb.period = q;
            orb.action = st.action;
            orb.gradient_norm = st.gradient.lpNorm<Eigen::Infinity>();
            orb.iterations = it;
            for (int i = 0; i < q; ++i) {
                orb.s.push_back(x[i]);
                orb.theta.push_back(std::acos(st.p_out[i]));
            }
            PhasePoint z{curve.wrap_s(orb.s[0]), orb.theta[0]};
            for (int i = 0; i < q; ++i) z = pensive_step(curve, delay, z);
            orb.closure_error = std::max(std::abs(wrap_centered(z.s - orb.s[0], P)),
                                         std::abs(z.theta - orb.theta[0]));
            return orb;
        } catch (const Error&) {
            continue;
        }
    }
    throw Error(ErrorKind::NotFound, "orbit search did not converge from any seed");
}

std::vector<double> disk_orbit_angles(const DelayFunction& delay, int p, int q) {
    const double target = kTwoPi * p / q;
    auto g = [&](double th) { return disk_rotation_angle(delay, th) - target; };
    const int n = 2048;
    std::vector<double> roots;
    double a = 1e-9, ga = g(a);
    for (int k = 1; k <= n; ++k) {
        double b = (k == n) ? kPi - 1e-9 : kPi * k / n;
        double gb = g(b);
        if (ga == 0.0) roots.push_back(a);
        else if ((ga < 0) != (gb < 0) && gb != 0.0) roots.push_back(bracket_root(g, a, b, ga, gb));
        a = b;
        ga = gb;
    }
    return roots;
}

}  // namespace pensive
