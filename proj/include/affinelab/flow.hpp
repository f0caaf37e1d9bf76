#pragma once

#include "affinelab/body.hpp"
#include "affinelab/functionals.hpp"

#include <iosfwd>
#include <limits>
#include <vector>

namespace affinelab {

// State of the affine normal flow ds/dt = -(s'' + s)^{-1/3}.
struct FlowState {
    ConvexBody body;
    double time = 0.0;
};

// Adaptive step control: dt is chosen so the relative change of min r per
// step stays below max_rel_change and the explicit RK4 step stays inside
// its stability region for the linearized highest mode.
struct StepController {
    double safety = 0.8;
    double max_rel_change = 1e-3;
    double dt_min = 1e-12;
    double t_max = std::numeric_limits<double>::infinity();
    int max_rejects = 40;
};

struct SnapshotDiagnostics {
    double time = 0.0;
    double area = 0.0;
    double omega_1 = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double min_radius = 0.0;
    // aligned with FlowTrace::p_list
    std::vector<double> omega_p;
    std::vector<double> ratio;
    std::vector<double> entropy;
    std::vector<double> entropy_power_form;
};

struct FlowTrace {
    std::vector<FlowState> snapshots;
    std::vector<SnapshotDiagnostics> diagnostics;
    std::vector<double> p_list;
    std::vector<double> accepted_dt;
};

// One explicit RK4 step of the method-of-lines system; the result is
// revalidated. Throws StepRejected if any stage or the result leaves the
// class of valid bodies.
FlowState flow_step(const FlowState& state, double dt);

// Adaptive integration with n_snapshots uniformly spaced snapshot times
// (including the initial state). Requires t_end below the extinction
// horizon (3/4) (min s)^{4/3} of the initial body.
FlowTrace evolve_to(const FlowState& state, double t_end,
                    const StepController& controller,
                    const std::vector<double>& p_list, int n_snapshots = 64);

// Max relative residual of dA/dt = -Omega_1 (central differences at
// interior snapshots). Needs >= 3 snapshots.
double check_area_ode(const FlowTrace& trace);

// True iff the inner trace stays support-dominated by the outer one at all
// common snapshot times, within tol. Throws NotNested if the initial data
// is not nested.
bool check_containment(const FlowTrace& inner, const FlowTrace& outer,
                       double tol = 1e-8);

// Max over snapshots and angles of
//   s(theta,0) - (4/3)^{3/4} (c2/c1) t^{3/4} - s(theta,t);
// nonpositive (up to tolerance) when B_{c1} <= K_0 <= B_{c2}.
double check_lower_bound(const FlowTrace& trace, double c1, double c2);

// Minimum relative slack of dOmega_p/dt >= ((p-2)/(p+2)) Omega_p Omega_1 / A
// + coeff(p) * entropy, normalized by Omega_p at each interior snapshot.
double check_lemma61(const FlowTrace& trace, double p);

// Branchwise coefficient of the entropy term.
double lemma61_coefficient(double p);

// Tabular text export: t, A, Omega_1, Omega_p..., sigma_min, sigma_max,
// min_r with a header row.
void write_trace(std::ostream& os, const FlowTrace& trace);

} // namespace affinelab
