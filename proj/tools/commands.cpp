#include "commands.hpp"

#include "svg.hpp"

#include "affinelab/errors.hpp"
#include "affinelab/flow.hpp"
#include "affinelab/functionals.hpp"
#include "affinelab/generators.hpp"
#include "affinelab/stability.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace affinelab::cli {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

std::string fnum(double v, const char* spec = "%.12e") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct RunSetup {
    Config cfg;
    AngularGrid grid;
    std::vector<double> p_list;
    double p = 2.0;
    fs::path out_dir;
    StepController controller;
    double t_end = 0.2;
    int snapshots = 64;
};

RunSetup load_setup(const GlobalOptions& opts) {
    if (opts.config_path.empty())
        throw ConfigError("a config file is required (--config <path>)");
    Config cfg = load_config(opts.config_path);
    const ConfigSection* exp = cfg.find("experiment");
    int n = opts.grid_override;
    if (n == 0 && exp) n = exp->get_int_or("grid", 512);
    if (n == 0) n = 512;

    RunSetup setup{std::move(cfg), AngularGrid(n), {}, 2.0, opts.out_dir, {}, 0.2, 64};
    const ConfigSection* e = setup.cfg.find("experiment");
    if (e && e->has("p_list")) {
        const auto it = e->entries.find("p_list");
        setup.p_list = parse_double_list(it->second.first, it->second.second);
    } else {
        setup.p_list = {1.0, 2.0, 3.0};
    }
    if (e) setup.p = e->get_double_or("p", 2.0);

    if (const ConfigSection* f = setup.cfg.find("flow")) {
        setup.t_end = f->get_double_or("t_end", 0.2);
        setup.snapshots = f->get_int_or("snapshots", 64);
        setup.controller.max_rel_change = f->get_double_or("max_rel_change", 1e-3);
        setup.controller.safety = f->get_double_or("safety", 0.8);
        setup.controller.dt_min = f->get_double_or("dt_min", 1e-12);
    }
    fs::create_directories(setup.out_dir);
    return setup;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) throw Error("cannot open output file: " + (dir / name).string());
    return os;
}

} // namespace

std::string BodySpec::label() const {
    std::string out = family;
    const std::string p = params_field();
    if (!p.empty()) out += "(" + p + ")";
    if (!path.empty()) out += "(" + path + ")";
    return out;
}

std::string BodySpec::params_field() const {
    std::string out;
    for (const auto& [key, value] : params) {
        if (!out.empty()) out += ";";
        out += key + "=" + fnum(value, "%.10g");
    }
    return out;
}

ConvexBody BodySpec::build(const AngularGrid& grid) const {
    auto get = [&](const std::string& key, double fallback,
                   bool required = false) {
        for (const auto& [k, v] : params)
            if (k == key) return v;
        if (required)
            throw ConfigError("body family '" + family + "' needs parameter '" +
                              key + "'");
        return fallback;
    };
    if (family == "disk") return bodies::disk(get("R", 1.0), grid);
    if (family == "ellipse")
        return bodies::ellipse_body(get("a", 1.0, true), get("b", 1.0, true),
                                    get("phi", 0.0), grid);
    if (family == "cosine_perturbed")
        return bodies::cosine_perturbed(get("a", 0.0, true),
                                        static_cast<int>(get("k", 1.0, true)),
                                        grid);
    if (family == "superellipse")
        return bodies::superellipse(get("q", 3.0, true), grid);
    if (family == "file") {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open body file: " + path);
        return resample(read_body(in), grid);
    }
    throw ConfigError("unknown body family: '" + family + "'");
}

std::vector<BodySpec> expand_bodies(const Config& cfg) {
    std::vector<BodySpec> out;
    for (const ConfigSection* section : cfg.all("body")) {
        const std::string family = section->get("family");
        std::string ranged_key;
        ValueRange range;
        BodySpec base;
        base.family = family;
        for (const auto& [key, entry] : section->entries) {
            if (key == "family") continue;
            if (key == "path") {
                base.path = entry.first;
                continue;
            }
            const ValueRange r = parse_range(entry.first, entry.second);
            if (r.is_range) {
                if (!ranged_key.empty())
                    throw ConfigError(
                        "config line " + std::to_string(entry.second) +
                        ": only one ranged parameter per [body] section");
                ranged_key = key;
                range = r;
            } else {
                base.params.emplace_back(key, r.values[0]);
            }
        }
        if (ranged_key.empty()) {
            out.push_back(base);
        } else {
            for (double v : range.values) {
                BodySpec spec = base;
                spec.params.emplace_back(ranged_key, v);
                out.push_back(std::move(spec));
            }
        }
    }
    if (out.empty()) throw ConfigError("config defines no [body] sections");
    return out;
}

// ---------------------------------------------------------------------------
// functionals

int cmd_functionals(const GlobalOptions& opts) {
    RunSetup setup = load_setup(opts);
    const auto specs = expand_bodies(setup.cfg);
    auto os = open_output(setup.out_dir, "functionals.csv");

    os << "family,parameters,n,A";
    for (double p : setup.p_list)
        os << ",Omega_p_" << fnum(p, "%g") << ",ratio_p_" << fnum(p, "%g")
           << ",deficit_p_" << fnum(p, "%g");
    os << ",sigma_min_pi,sigma_max_pi\n";

    for (const auto& spec : specs) {
        const ConvexBody body = spec.build(setup.grid);
        os << spec.family << "," << spec.params_field() << "," << setup.grid.size()
           << "," << fnum(body.area());
        for (double p : setup.p_list) {
            const auto summary = iso_ratio(body, p);
            os << "," << fnum(summary.omega_p) << "," << fnum(summary.ratio)
               << "," << fnum(summary.deficit_epsilon);
        }
        const ConvexBody normalized = scale(body, std::sqrt(kPi / body.area()));
        const auto [lo, hi] = sigma_window(normalized);
        os << "," << fnum(lo) << "," << fnum(hi) << "\n";
    }
    std::cout << "functionals: " << specs.size() << " bodies -> "
              << (setup.out_dir / "functionals.csv").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// flow

namespace {

void plot_boundaries(const fs::path& dir, const std::string& name,
                     const FlowTrace& trace) {
    SvgPlot plot(480, 480, "boundary curves along the flow");
    std::vector<std::pair<double, double>> all;
    const int n = trace.snapshots.front().body.samples();
    const std::size_t stride = std::max<std::size_t>(1, (trace.snapshots.size() - 1) / 7);
    std::vector<std::vector<std::pair<double, double>>> curves;
    for (std::size_t i = 0; i < trace.snapshots.size(); i += stride) {
        std::vector<std::pair<double, double>> curve;
        for (int j = 0; j < n; ++j) {
            const Vec2 x = trace.snapshots[i].body.boundary_point(
                trace.snapshots[i].body.grid().angle(j));
            curve.emplace_back(x.x, x.y);
            all.emplace_back(x.x, x.y);
        }
        curves.push_back(std::move(curve));
    }
    plot.fit_axes(all, "x", "y", true);
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const int shade = 30 + static_cast<int>(180.0 * c / std::max<std::size_t>(1, curves.size() - 1));
        char color[16];
        std::snprintf(color, sizeof(color), "#1030%02x", 255 - shade);
        plot.polyline(curves[c], color, 1.0, true);
    }
    auto os = open_output(dir, name);
    plot.write(os);
}

void plot_series(const fs::path& dir, const std::string& name,
                 const FlowTrace& trace) {
    SvgPlot plot(520, 360, "flow diagnostics");
    plot.caption("A (blue), Omega_1 (red), sigma window (green)");
    std::vector<std::pair<double, double>> a, w1, smin, smax, all;
    for (const auto& d : trace.diagnostics) {
        a.emplace_back(d.time, d.area);
        w1.emplace_back(d.time, d.omega_1);
        smin.emplace_back(d.time, d.sigma_min);
        smax.emplace_back(d.time, d.sigma_max);
    }
    for (const auto& s : {a, w1, smin, smax}) all.insert(all.end(), s.begin(), s.end());
    plot.fit_axes(all, "t", "value");
    plot.polyline(a, "#1f77b4", 1.5);
    plot.polyline(w1, "#d62728", 1.5);
    plot.polyline(smin, "#2ca02c", 1.0);
    plot.polyline(smax, "#2ca02c", 1.0);
    auto os = open_output(dir, name);
    plot.write(os);
}

} // namespace

int cmd_flow(const GlobalOptions& opts) {
    RunSetup setup = load_setup(opts);
    const auto specs = expand_bodies(setup.cfg);
    const ConfigSection* f = setup.cfg.find("flow");
    const bool containment = f && f->get_bool_or("containment", false);
    if (containment && specs.size() != 2)
        throw ConfigError("containment mode needs exactly two [body] sections "
                          "(inner first)");

    std::vector<FlowTrace> traces;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        ConvexBody body = specs[i].build(setup.grid);
        FlowTrace trace;
        try {
            trace = evolve_to({std::move(body), 0.0}, setup.t_end,
                              setup.controller, setup.p_list, setup.snapshots);
        } catch (const Error& e) {
            throw Error("flow of body " + specs[i].label() + ": " + e.what());
        }
        // re-check the area monotonicity at output time
        for (std::size_t s = 1; s < trace.diagnostics.size(); ++s)
            if (!(trace.diagnostics[s].area < trace.diagnostics[s - 1].area))
                throw Error("flow of body " + specs[i].label() +
                            ": area is not strictly decreasing at snapshot " +
                            std::to_string(s));
        const std::string stem = "trace_" + std::to_string(i);
        auto os = open_output(setup.out_dir, stem + ".csv");
        write_trace(os, trace);
        plot_boundaries(setup.out_dir, "boundaries_" + std::to_string(i) + ".svg",
                        trace);
        plot_series(setup.out_dir, "series_" + std::to_string(i) + ".svg", trace);
        traces.push_back(std::move(trace));
        std::cout << "flow: " << specs[i].label() << " -> " << stem << ".csv ("
                  << traces.back().accepted_dt.size() << " steps)\n";
    }

    if (containment) {
        const bool ok = check_containment(traces[0], traces[1]);
        auto os = open_output(setup.out_dir, "containment.csv");
        os << "t,support_margin\n";
        for (std::size_t s = 0; s < traces[0].snapshots.size(); ++s) {
            const auto& inner = traces[0].snapshots[s].body.support();
            const auto& outer = traces[1].snapshots[s].body.support();
            double margin = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < inner.size(); ++j)
                margin = std::min(margin, outer[j] - inner[j]);
            os << fnum(traces[0].snapshots[s].time) << "," << fnum(margin) << "\n";
        }
        std::cout << "containment: " << (ok ? "maintained" : "VIOLATED") << "\n";
        if (!ok) return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify & sweep

namespace {

struct VerifyRow {
    BodySpec spec;
    StabilityReport report;
    double runtime_ms = 0.0;
    std::string error;
};

VerifyRow run_verify_one(const BodySpec& spec, const RunSetup& setup,
                         double p) {
    VerifyRow row;
    row.spec = spec;
    const auto start = std::chrono::steady_clock::now();
    try {
        ConvexBody body = spec.build(setup.grid);
        VerifyConfig cfg;
        cfg.controller = setup.controller;
        cfg.snapshots = setup.snapshots;
        row.report = (p == 1.0) ? reduce_p1(body, cfg) : verify(body, p, cfg);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return row;
}

void write_sweep_header(std::ostream& os) {
    os << "family,parameters,p,epsilon,delta,t_star,lambda,d_H,bound,pass,"
          "in_theorem_range,runtime_ms\n";
}

void write_sweep_row(std::ostream& os, const VerifyRow& row, bool stamp) {
    const auto& r = row.report;
    os << row.spec.family << "," << row.spec.params_field() << ","
       << fnum(r.p, "%g") << "," << fnum(r.epsilon) << "," << fnum(r.delta)
       << "," << fnum(r.t_star) << "," << fnum(r.lambda) << ","
       << fnum(r.d_H_measured) << "," << fnum(r.bound_value) << ","
       << (r.pass ? "true" : "false") << ","
       << (r.in_theorem_range ? "true" : "false") << ","
       << (stamp ? fnum(row.runtime_ms, "%.3f") : std::string("0")) << "\n";
}

std::vector<VerifyRow> run_verify_pool(const std::vector<BodySpec>& specs,
                                       const RunSetup& setup, double p,
                                       int jobs) {
    std::vector<VerifyRow> rows(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) break;
            rows[i] = run_verify_one(specs[i], setup, p);
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, specs.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return rows;
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
};

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& logpts,
                   int bootstrap, unsigned long seed) {
    auto least_squares = [](const std::vector<std::pair<double, double>>& pts) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(pts.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        return std::pair{slope, (sy - slope * sx) / n};
    };
    SlopeFit fit;
    const auto [slope, intercept] = least_squares(logpts);
    fit.slope = slope;
    fit.intercept = intercept;
    if (bootstrap > 0 && logpts.size() > 2) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, logpts.size() - 1);
        std::vector<double> slopes(bootstrap);
        std::vector<std::pair<double, double>> sample(logpts.size());
        for (int b = 0; b < bootstrap; ++b) {
            for (auto& s : sample) s = logpts[pick(rng)];
            slopes[b] = least_squares(sample).first;
        }
        std::sort(slopes.begin(), slopes.end());
        fit.ci_lo = slopes[static_cast<std::size_t>(0.025 * (bootstrap - 1))];
        fit.ci_hi = slopes[static_cast<std::size_t>(0.975 * (bootstrap - 1))];
    }
    return fit;
}

} // namespace

int cmd_verify(const GlobalOptions& opts) {
    RunSetup setup = load_setup(opts);
    const auto specs = expand_bodies(setup.cfg);
    const auto rows = run_verify_pool(specs, setup, setup.p, opts.jobs);

    auto table = open_output(setup.out_dir, "sweep.csv");
    write_sweep_header(table);
    bool failed = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].error.empty()) {
            std::cerr << "verify failed for " << rows[i].spec.label() << ": "
                      << rows[i].error << "\n";
            failed = true;
            continue;
        }
        auto report = open_output(setup.out_dir,
                                  "report_" + std::to_string(i) + ".txt");
        report << "body=" << rows[i].spec.label() << "\n";
        write_report(report, rows[i].report);
        write_sweep_row(table, rows[i], opts.stamp);
        std::cout << "verify: " << rows[i].spec.label()
                  << (rows[i].report.in_theorem_range ? "" : " [out of range]")
                  << (rows[i].report.pass ? " pass" : " FAIL") << "\n";
    }
    return failed ? 1 : 0;
}

int cmd_sweep(const GlobalOptions& opts) {
    RunSetup setup = load_setup(opts);
    const auto specs = expand_bodies(setup.cfg);
    const auto rows = run_verify_pool(specs, setup, setup.p, opts.jobs);

    for (const auto& row : rows)
        if (!row.error.empty())
            throw Error("sweep: body " + row.spec.label() + ": " + row.error);

    double eps_min = std::numeric_limits<double>::infinity(), eps_max = 0.0;
    for (const auto& row : rows) {
        if (row.report.epsilon <= 0.0) continue;
        eps_min = std::min(eps_min, row.report.epsilon);
        eps_max = std::max(eps_max, row.report.epsilon);
    }
    if (!(eps_max >= 5.0 * eps_min))
        throw InsufficientRange(
            "sweep: deficits span a factor of " +
            std::to_string(eps_max / eps_min) +
            "; need at least 5 (widen the parameter range)");

    auto table = open_output(setup.out_dir, "sweep.csv");
    write_sweep_header(table);
    for (const auto& row : rows) write_sweep_row(table, row, opts.stamp);

    // log-log fit of measured distance against the deficit
    std::vector<std::pair<double, double>> logpts, pts, envelope;
    for (const auto& row : rows)
        if (row.report.epsilon > 0.0 && row.report.d_H_measured > 0.0) {
            logpts.emplace_back(std::log10(row.report.epsilon),
                                std::log10(row.report.d_H_measured));
            pts.emplace_back(row.report.epsilon, row.report.d_H_measured);
        }
    const int bootstrap =
        setup.cfg.find("sweep")
            ? setup.cfg.find("sweep")->get_int_or("bootstrap", 200)
            : 200;
    const SlopeFit fit = fit_slope(logpts, bootstrap, opts.seed);

    const double c_p = rows.front().report.constants.C_p;
    double dh_min = std::numeric_limits<double>::infinity(), dh_max = 0.0;
    for (const auto& [e, d] : pts) {
        dh_min = std::min(dh_min, d);
        dh_max = std::max(dh_max, d);
    }
    for (int i = 0; i <= 64; ++i) {
        const double e = eps_min * std::pow(eps_max / eps_min, i / 64.0);
        envelope.emplace_back(e, c_p * std::pow(e, 0.3));
    }
    SvgPlot plot(520, 400, "Hausdorff distance against the deficit");
    char cap[160];
    std::snprintf(cap, sizeof(cap),
                  "slope %.3f (95%% bootstrap [%.3f, %.3f]); envelope C_p eps^0.3",
                  fit.slope, fit.ci_lo, fit.ci_hi);
    plot.caption(cap);
    plot.set_axes(eps_min * 0.8, eps_max * 1.25, dh_min * 0.8,
                  std::max(dh_max, c_p * std::pow(eps_max, 0.3)) * 1.25, true,
                  true, "deficit eps", "d_H(TK, E)");
    plot.polyline(envelope, "#d62728", 1.5);
    plot.markers(pts, "#1f77b4");
    auto svg = open_output(setup.out_dir, "loglog.svg");
    plot.write(svg);

    int in_range = 0, passed = 0;
    bool envelope_ok = true;
    for (const auto& row : rows) {
        if (row.report.in_theorem_range) {
            ++in_range;
            if (row.report.pass) ++passed;
        }
        if (row.report.epsilon > 0.0 &&
            row.report.d_H_measured >= c_p * std::pow(row.report.epsilon, 0.3))
            envelope_ok = false;
    }
    std::cout << "sweep: " << rows.size() << " bodies, " << in_range
              << " in theorem range, " << passed << " passed; slope "
              << fnum(fit.slope, "%.4f") << " [" << fnum(fit.ci_lo, "%.4f")
              << ", " << fnum(fit.ci_hi, "%.4f") << "]"
              << (envelope_ok ? "" : "; ENVELOPE VIOLATED") << "\n";
    if (in_range != passed || !envelope_ok) return 1;
    return 0;
}

} // namespace affinelab::cli
