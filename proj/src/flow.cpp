#include "affinelab/flow.hpp"

#include "affinelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace affinelab {

namespace {

// RK4 on the real axis is stable for |dt * lambda| <= 2.785; the stiffest
// linearized mode has lambda = (1/3) (min r)^{-4/3} (n/2)^2.
constexpr double kRk4Stability = 2.785;

struct Rhs {
    std::vector<double> speed;  // -(s'' + s)^{-1/3}
    double min_radius = 0.0;
};

// Returns false if the intermediate state leaves the valid class.
bool eval_rhs(const std::vector<double>& s, Rhs& out) {
    for (double v : s)
        if (!(v > 0.0) || !std::isfinite(v)) return false;
    const TrigSeries series(s);
    std::vector<double> r = series.grid_derivative(2);
    double rmin = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(s.size());
    for (int j = 0; j < n; ++j) {
        r[j] += s[j];
        rmin = std::min(rmin, r[j]);
    }
    if (!(rmin > 0.0)) return false;
    out.speed.resize(n);
    for (int j = 0; j < n; ++j) out.speed[j] = -1.0 / std::cbrt(r[j]);
    out.min_radius = rmin;
    return true;
}

bool rk4_step(const std::vector<double>& s, double dt,
              std::vector<double>& out) {
    const int n = static_cast<int>(s.size());
    Rhs k1, k2, k3, k4;
    std::vector<double> tmp(n);
    if (!eval_rhs(s, k1)) return false;
    for (int j = 0; j < n; ++j) tmp[j] = s[j] + 0.5 * dt * k1.speed[j];
    if (!eval_rhs(tmp, k2)) return false;
    for (int j = 0; j < n; ++j) tmp[j] = s[j] + 0.5 * dt * k2.speed[j];
    if (!eval_rhs(tmp, k3)) return false;
    for (int j = 0; j < n; ++j) tmp[j] = s[j] + dt * k3.speed[j];
    if (!eval_rhs(tmp, k4)) return false;
    out.resize(n);
    for (int j = 0; j < n; ++j)
        out[j] = s[j] + dt / 6.0 *
                            (k1.speed[j] + 2.0 * k2.speed[j] +
                             2.0 * k3.speed[j] + k4.speed[j]);
    return true;
}

// Predicted step size: the min-r budget (max_rel_change per step) and the
// linearized stability cap, both scaled by safety.
double propose_dt(const ConvexBody& body, const StepController& ctrl) {
    const int n = body.samples();
    const auto& r = body.radius();
    const int j_min = static_cast<int>(
        std::min_element(r.begin(), r.end()) - r.begin());

    // rate of change of r = s'' + s at the argmin: (f'' + f) with f = ds/dt
    Rhs f;
    if (!eval_rhs(body.support(), f))
        throw StepRejected("propose_dt: state is not evolvable");
    const TrigSeries fs(f.speed);
    const std::vector<double> fpp = fs.grid_derivative(2);
    const double rate = std::abs(fpp[j_min] + f.speed[j_min]);
    const double dt_budget =
        ctrl.max_rel_change * r[j_min] / std::max(rate, 1e-300);

    const double half = 0.5 * n;
    const double lambda_max =
        (1.0 / 3.0) * std::pow(body.min_radius(), -4.0 / 3.0) * half * half;
    const double dt_stable = kRk4Stability / lambda_max;

    return ctrl.safety * std::min(dt_budget, dt_stable);
}

SnapshotDiagnostics diagnose(const FlowState& st,
                             const std::vector<double>& p_list) {
    SnapshotDiagnostics d;
    d.time = st.time;
    d.area = st.body.area();
    d.min_radius = st.body.min_radius();
    const auto prof = affine_support(st.body);
    d.sigma_min = prof.sigma_min;
    d.sigma_max = prof.sigma_max;
    double w1 = 0.0;
    for (double e : prof.arc_element) w1 += e;
    d.omega_1 = w1 * st.body.grid().delta();
    for (double p : p_list) {
        const auto summary = iso_ratio(st.body, p);
        d.omega_p.push_back(summary.omega_p);
        d.ratio.push_back(summary.ratio);
        const auto ent = entropy_integral(st.body, p);
        d.entropy.push_back(ent.value);
        d.entropy_power_form.push_back(ent.power_form);
    }
    return d;
}

} // namespace

FlowState flow_step(const FlowState& state, double dt) {
    if (!(dt > 0.0)) throw Error("flow_step: dt must be positive");
    std::vector<double> next;
    if (!rk4_step(state.body.support(), dt, next))
        throw StepRejected("flow_step: intermediate state left the convex class");
    try {
        return {ConvexBody::from_samples(state.body.grid(), std::move(next)),
                state.time + dt};
    } catch (const Error& e) {
        throw StepRejected(std::string("flow_step: ") + e.what());
    }
}

FlowTrace evolve_to(const FlowState& state, double t_end,
                    const StepController& controller,
                    const std::vector<double>& p_list, int n_snapshots) {
    if (n_snapshots < 2) throw Error("evolve_to: need at least 2 snapshots");
    const double t0 = state.time;
    if (!(t_end > t0)) throw Error("evolve_to: t_end must exceed start time");
    const double horizon = 0.75 * std::pow(state.body.min_support(), 4.0 / 3.0);
    if (t_end - t0 >= horizon)
        throw HorizonExceeded("evolve_to: t_end - t0 = " +
                              std::to_string(t_end - t0) +
                              " reaches the extinction horizon " +
                              std::to_string(horizon));
    if (t_end > controller.t_max)
        throw Error("evolve_to: t_end exceeds controller.t_max");

    FlowTrace trace;
    trace.p_list = p_list;
    trace.snapshots.push_back(state);
    trace.diagnostics.push_back(diagnose(state, p_list));

    FlowState cur = state;
    for (int k = 1; k < n_snapshots; ++k) {
        const double t_snap = t0 + (t_end - t0) * k / (n_snapshots - 1);
        while (cur.time < t_snap) {
            double dt = std::min(propose_dt(cur.body, controller),
                                 t_snap - cur.time);
            const double r_before = cur.body.min_radius();
            int rejects = 0;
            for (;;) {
                if (dt < controller.dt_min)
                    throw ExtinctionReached(
                        "evolve_to: dt fell below dt_min at t = " +
                        std::to_string(cur.time));
                try {
                    FlowState next = flow_step(cur, dt);
                    const double rel =
                        std::abs(next.body.min_radius() - r_before) / r_before;
                    if (rel > 1.5 * controller.max_rel_change)
                        throw StepRejected("min r moved by " +
                                           std::to_string(rel));
                    cur = std::move(next);
                    trace.accepted_dt.push_back(dt);
                    break;
                } catch (const StepRejected&) {
                    if (++rejects > controller.max_rejects)
                        throw ExtinctionReached(
                            "evolve_to: step rejected " +
                            std::to_string(rejects) + " times at t = " +
                            std::to_string(cur.time));
                    dt *= 0.5;
                }
            }
        }
        cur.time = t_snap;  // land exactly on the snapshot time
        trace.snapshots.push_back(cur);
        trace.diagnostics.push_back(diagnose(cur, p_list));
    }
    return trace;
}

double check_area_ode(const FlowTrace& trace) {
    const auto& d = trace.diagnostics;
    if (d.size() < 3)
        throw Error("check_area_ode: need at least 3 snapshots");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
        const double dadt =
            (d[i + 1].area - d[i - 1].area) / (d[i + 1].time - d[i - 1].time);
        worst = std::max(worst, std::abs(dadt + d[i].omega_1) / d[i].omega_1);
    }
    return worst;
}

bool check_containment(const FlowTrace& inner, const FlowTrace& outer,
                       double tol) {
    if (inner.snapshots.empty() || outer.snapshots.empty())
        throw Error("check_containment: empty trace");
    const std::size_t common =
        std::min(inner.snapshots.size(), outer.snapshots.size());
    const auto& a0 = inner.snapshots[0].body;
    const auto& b0 = outer.snapshots[0].body;
    if (!(a0.grid() == b0.grid()))
        throw GridMismatch("check_containment: traces on different grids");
    for (int j = 0; j < a0.samples(); ++j)
        if (a0.support()[j] > b0.support()[j] + tol)
            throw NotNested("check_containment: initial bodies are not nested");
    for (std::size_t i = 1; i < common; ++i) {
        if (std::abs(inner.snapshots[i].time - outer.snapshots[i].time) > 1e-12)
            throw Error("check_containment: snapshot times are not synchronized");
        const auto& sa = inner.snapshots[i].body.support();
        const auto& sb = outer.snapshots[i].body.support();
        for (int j = 0; j < a0.samples(); ++j)
            if (sa[j] > sb[j] + tol) return false;
    }
    return true;
}

double check_lower_bound(const FlowTrace& trace, double c1, double c2) {
    if (trace.snapshots.empty()) throw Error("check_lower_bound: empty trace");
    const auto& body0 = trace.snapshots[0].body;
    if (body0.min_support() < c1 - 1e-9 || body0.max_support() > c2 + 1e-9)
        throw BadSandwich("check_lower_bound: initial support not in [c1, c2]");
    const double coeff = std::pow(4.0 / 3.0, 0.75) * c2 / c1;
    double worst = -std::numeric_limits<double>::infinity();
    const auto& s0 = body0.support();
    for (std::size_t i = 1; i < trace.snapshots.size(); ++i) {
        const double t = trace.snapshots[i].time - trace.snapshots[0].time;
        const double drop = coeff * std::pow(t, 0.75);
        const auto& st = trace.snapshots[i].body.support();
        for (int j = 0; j < body0.samples(); ++j)
            worst = std::max(worst, s0[j] - drop - st[j]);
    }
    return worst;
}

double lemma61_coefficient(double p) {
    if (!(p >= 1.0)) throw InvalidP("lemma61_coefficient: p must be >= 1");
    if (p <= 2.0)
        return 2.0 * (p - 1.0) * (4.0 * p * p + 3.0 * p + 2.0) /
               std::pow(p + 2.0, 3);
    return 6.0 * p / ((p + 2.0) * (p + 2.0));
}

double check_lemma61(const FlowTrace& trace, double p) {
    if (!(p >= 1.0)) throw InvalidP("check_lemma61: p must be >= 1");
    const auto it = std::find(trace.p_list.begin(), trace.p_list.end(), p);
    if (it == trace.p_list.end())
        throw Error("check_lemma61: p not in the trace's p_list");
    const std::size_t pi = it - trace.p_list.begin();
    const auto& d = trace.diagnostics;
    if (d.size() < 3) throw Error("check_lemma61: need at least 3 snapshots");

    const double coeff = lemma61_coefficient(p);
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
        const double lhs = (d[i + 1].omega_p[pi] - d[i - 1].omega_p[pi]) /
                           (d[i + 1].time - d[i - 1].time);
        const double rhs = (p - 2.0) / (p + 2.0) * d[i].omega_p[pi] *
                               d[i].omega_1 / d[i].area +
                           coeff * d[i].entropy[pi];
        min_slack = std::min(min_slack, (lhs - rhs) / d[i].omega_p[pi]);
    }
    return min_slack;
}

void write_trace(std::ostream& os, const FlowTrace& trace) {
    os << "t,A,Omega_1";
    char buf[64];
    for (double p : trace.p_list) {
        std::snprintf(buf, sizeof(buf), ",Omega_p_%g", p);
        os << buf;
    }
    os << ",sigma_min,sigma_max,min_r\n";
    for (const auto& d : trace.diagnostics) {
        std::snprintf(buf, sizeof(buf), "%.12e,%.12e,%.12e", d.time, d.area,
                      d.omega_1);
        os << buf;
        for (double w : d.omega_p) {
            std::snprintf(buf, sizeof(buf), ",%.12e", w);
            os << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.12e,%.12e,%.12e\n", d.sigma_min,
                      d.sigma_max, d.min_radius);
        os << buf;
    }
}

} // namespace affinelab
