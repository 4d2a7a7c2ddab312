#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pensive/billiard.hpp"

namespace pensive {

enum class DomainKind { HalfPlane, Disk, NeumannOval };

const char* to_string(DomainKind k);

// Upper half-plane, disk of radius R centred at the origin, or the Neumann oval
// with the same normalisation as BoundaryCurve::neumann_oval.
class VortexDomain {
public:
    static VortexDomain half_plane();
    static VortexDomain disk(double radius);
    static VortexDomain neumann_oval(double lambda);

    DomainKind kind() const { return kind_; }
    double parameter() const { return param_; }
    std::string describe() const;

    bool inside(Vec2 z) const;
    double boundary_distance(Vec2 z) const;
    // Table used by the limit model; Unsupported for the half-plane.
    BoundaryCurve boundary() const;

    double greens(Vec2 z, Vec2 w) const;
    Vec2 grad_greens(Vec2 z, Vec2 w) const;  // gradient in z
    double robin(Vec2 z) const;
    Vec2 grad_robin(Vec2 z) const;

private:
    DomainKind kind_{DomainKind::HalfPlane};
    double param_{0.0};
    void require_inside(Vec2 z) const;
};

struct VortexConfiguration {
    std::vector<Vec2> z;
    std::vector<double> gamma;
    VortexDomain domain = VortexDomain::half_plane();
    double t{0.0};

    void validate() const;
};

std::vector<Vec2> vortex_rhs(const VortexConfiguration& config);
double vortex_hamiltonian(const VortexConfiguration& config);
// Sum of gamma_i * y_i; conserved on the half-plane.
double vortex_impulse(const VortexConfiguration& config);

struct IntegrateOptions {
    double tol{1e-10};          // local error tolerance and per-step energy drift bound
    double max_step{0.05};
    double stop_distance{1e-8};
    std::size_t max_steps{2000000};
};

struct VortexSample {
    double t{0.0};
    std::vector<Vec2> z;
    double energy{0.0};
    double impulse{0.0};
};

struct VortexTrajectory {
    std::vector<VortexSample> samples;
    double max_relative_drift{0.0};
    double max_impulse_drift{0.0};
    std::size_t rejected_steps{0};
    std::optional<std::string> event;  // EventStop reason, when the run ended early
    bool halted_by_observer{false};

    const VortexSample& last() const { return samples.back(); }
};

// Called after every accepted step; returning false ends the run.
using VortexObserver = std::function<bool(const VortexSample&)>;

VortexTrajectory integrate(const VortexConfiguration& config, double duration,
                           const IntegrateOptions& opt = {}, const VortexObserver& observer = {});

struct MetallicConstants {
    static constexpr double silver = 2.4142135623730950488;  // 1 + sqrt 2
    static constexpr double golden = 1.6180339887498948482;  // (1 + sqrt 5) / 2
    static double silver_residual() { return silver * silver - 2 * silver - 1; }
    static double golden_residual() { return golden * golden - golden - 1; }
};

// Incidence angle theta is the billiard angle between the incoming direction and
// the positively oriented boundary tangent. The positive vortex runs with the
// boundary orientation.
struct FissionOutcome {
    double v_plus{0.0}, v_minus{0.0};
    double height_plus{0.0}, height_minus{0.0};  // per unit half-separation
};

FissionOutcome fission_outcome(double speed, double theta);

struct FusionOutcome {
    bool merge{false};
    double normal_angle{0.0};  // angle of the merged dipole axis to the boundary
    double exit_angle{0.0};    // billiard angle of the outgoing dipole
    double speed{0.0};
    double meeting_x{0.0};
};

FusionOutcome fusion_outcome(double height_plus, double height_minus, double gamma,
                             double x_plus = 0.0, double x_minus = 0.0);

double vortex_delay_from_fission(double theta, double L);

enum class PairRegime { MergeDipole, Pass, LeapfrogReversing, Cusp, LeapfrogNoReverse, PassOnce };

const char* to_string(PairRegime r);

PairRegime pair_classification(double mu, bool same_sign);

// Direct half-plane runs. Circulations are scaled by eps and by 4 pi, so a
// dipole of half-separation eps travels at unit speed.
struct FissionMeasurement {
    double v_plus{0.0}, v_minus{0.0};
    double height_plus{0.0}, height_minus{0.0};  // divided by eps
    double time{0.0};
};

FissionMeasurement simulate_half_plane_fission(double theta, double eps, double tol = 1e-10);

enum class PairOutcome { Merge, Pass, Undecided };

struct PairRun {
    PairOutcome outcome{PairOutcome::Undecided};
    double exit_angle{0.0};  // merged dipole heading against +x
    double speed{0.0};
    double time{0.0};
    double final_separation{0.0};
};

// Vortex 1 starts at (-gap/2, eps*h1), vortex 2 at (gap/2, eps*h2).
PairRun simulate_half_plane_pair(double gamma1, double gamma2, double h1, double h2, double eps,
                                 double gap, double duration, double tol = 1e-10);

// Bisection on the height ratio h+/h- (> 1) for the merge/pass transition.
double locate_fusion_threshold(double eps, double rel_width = 2e-3, double tol = 1e-10);

struct LimitReport {
    double eps{0.0};
    PhasePoint ode_exit;
    PhasePoint pensive_exit;
    double ds{0.0};
    double dtheta{0.0};
    double v_plus{0.0}, v_minus{0.0};  // boundary speeds while the vortices are far apart
    double exit_time{0.0};
    double max_relative_drift{0.0};
};

// One bounce of a dipole of half-separation eps launched along the chord from x0.
LimitReport dipole_billiard_limit_check(const VortexDomain& domain, const PhasePoint& x0, double eps,
                                        double tol = 1e-10);

// Event-driven limit model for several dipoles of equal strength.
struct DipoleLaunch {
    double s{0.0};
    double theta{kPi / 2};
    double speed{1.0};
};

enum class EventKind { Fission, Fusion, Pass };

const char* to_string(EventKind k);

struct DipoleEvent {
    double t{0.0};
    EventKind kind{EventKind::Fission};
    double s{0.0};
    double theta{0.0};          // incidence angle (fission) or exit angle (fusion)
    double speed_a{0.0}, speed_b{0.0};
    int origin_a{-1}, origin_b{-1};  // ids of the dipoles the vortices split from
    int net_circulation{0};
    bool exchange{false};
};

struct DipoleSegment {
    int dipole{0};
    double t0{0.0}, t1{0.0};
    Vec2 from, to;
};

struct MonopoleArc {
    int sign{1};
    int origin{0};
    double t0{0.0}, t1{0.0};
    double s0{0.0}, s1{0.0};  // lifted arc lengths
};

struct MultiDipoleResult {
    std::vector<DipoleEvent> events;
    std::vector<DipoleSegment> chords;
    std::vector<MonopoleArc> arcs;
    std::optional<std::string> error;  // AmbiguousEvent message when the run aborted
    double end_time{0.0};
};

MultiDipoleResult multi_dipole_simulate(const BoundaryCurve& table, const std::vector<DipoleLaunch>& dipoles,
                                        double duration, double tie_tol = 1e-9);

}  // namespace pensive
