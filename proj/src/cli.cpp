#include "ppsolve/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "ppsolve/bounds.hpp"
#include "ppsolve/cone_operator.hpp"
#include "ppsolve/demo_systems.hpp"
#include "ppsolve/shooting.hpp"

namespace ppsolve {

namespace {

constexpr int kMaxPicardIterations = 2000;

std::string fmt16(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16g", v);
    return buf;
}

std::string system_name(const RunConfig& config) {
    if (!config.demo_id.empty()) return config.demo_id;
    return std::filesystem::path(config.spec_path).stem().string();
}

CoefficientSet load_system(const RunConfig& config) {
    const bool has_spec = !config.spec_path.empty();
    const bool has_demo = !config.demo_id.empty();
    if (has_spec == has_demo)
        throw std::invalid_argument("select a system with exactly one of --spec or a demo id");
    return has_demo ? demo_system(config.demo_id) : load_system_spec(config.spec_path);
}

void print_report(const HypothesisReport& report, std::ostream& out) {
    for (const auto& [name, check] : report.coefficients) {
        out << "  " << name << ": nonnegative=" << (check.nonnegative ? "yes" : "NO")
            << " not_identically_zero=" << (check.not_identically_zero ? "yes" : "NO")
            << " (grid min " << fmt16(check.min_value) << " at t=" << fmt16(check.min_t)
            << ", period integral " << fmt16(check.mean) << ")\n";
    }
    out << "  product " << report.product_name << ": grid min " << fmt16(report.product_min)
        << " at t=" << fmt16(report.product_min_t) << " -> "
        << (report.product_positive ? "strictly positive" : "NOT strictly positive") << "\n";
    out << "  sigma*eta: period integral " << fmt16(report.sigma_eta_mean) << " -> "
        << (report.sigma_eta_not_zero ? "not identically zero" : "identically zero") << "\n";
    out << "hypotheses: " << (report.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& failure : report.failures) out << "  failed: " << failure << "\n";
}

/// Gate every solving command on the existence-theorem hypotheses.
std::optional<int> hypothesis_gate(const CoefficientSet& coeffs, std::ostream& out) {
    HypothesisReport report = verify_hypotheses(coeffs);
    if (!report.pass) {
        out << "hypotheses: FAIL\n";
        for (const auto& failure : report.failures) out << "  failed: " << failure << "\n";
        return 1;
    }
    return std::nullopt;
}

struct OperatorSolution {
    GridFunction fixed_point;
    IterationTrace trace;
    GridFunction x;
    GridFunction y;
    double ode_res;
};

OperatorSolution solve_operator_route(const CoefficientSet& coeffs, const RunConfig& config) {
    ConeDomain dom = choose_radii(coeffs, config.grid);
    OperatorContext ctx(coeffs, std::move(dom), config.grid);
    auto [fixed_point, trace] =
        damped_picard(ctx, default_seed(ctx), config.damping, config.op_tol, kMaxPicardIterations);
    if (!trace.converged)
        throw std::runtime_error("damped Picard did not reach tolerance " +
                                 std::to_string(config.op_tol) + " in " +
                                 std::to_string(kMaxPicardIterations) + " iterations (residual " +
                                 std::to_string(trace.residuals.back()) + ")");
    auto [x, y] = reconstruct_xy(ctx, fixed_point);
    const double ode_res = ode_residual(ctx, x, y);
    return OperatorSolution{std::move(fixed_point), std::move(trace), std::move(x), std::move(y),
                            ode_res};
}

OrbitResult solve_shooting_route(const CoefficientSet& coeffs, const RunConfig& config) {
    if (coeffs.delays())
        throw std::runtime_error("shooting does not support delayed systems; "
                                 "use solve-operator");
    State seed = averaged_seed(coeffs);
    return find_periodic(coeffs, seed, config.rtol, config.atol);
}

void write_export(const CoefficientSet& coeffs, const OrbitResult& orbit,
                  const RunConfig& config, std::ostream& out) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const std::string name = system_name(config);
    const fs::path csv_path = fs::path(config.out_dir) / (name + "_orbit.csv");
    const fs::path plot_path = fs::path(config.out_dir) / (name + "_plot.py");

    const double horizon = 5.0 * coeffs.omega();  // matches [0, 10*pi] for omega = 2*pi
    rk::Trajectory traj =
        integrate(coeffs, orbit.initial, 0.0, horizon, config.rtol, config.atol);

    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    csv << "t,x,y\n";
    constexpr int kSamples = 2048;
    for (int i = 0; i < kSamples; ++i) {
        const double t = horizon * i / (kSamples - 1);
        const rk::Vec2 v = traj(t);
        csv << fmt16(t) << ',' << fmt16(v[0]) << ',' << fmt16(v[1]) << '\n';
    }
    csv.close();

    std::ofstream plot(plot_path);
    plot << "#!/usr/bin/env python3\n"
            "\"\"\"Plot the exported orbit trajectory.\"\"\"\n"
            "import csv\n"
            "import matplotlib\n"
            "matplotlib.use(\"Agg\")\n"
            "import matplotlib.pyplot as plt\n"
            "\n"
            "t, x, y = [], [], []\n"
            "with open(\"" << csv_path.filename().string() << "\") as f:\n"
            "    for row in csv.DictReader(f):\n"
            "        t.append(float(row[\"t\"]))\n"
            "        x.append(float(row[\"x\"]))\n"
            "        y.append(float(row[\"y\"]))\n"
            "\n"
            "fig, ax = plt.subplots(figsize=(16, 4))\n"
            "ax.plot(t, x, label=\"x (prey)\")\n"
            "ax.plot(t, y, label=\"y (predator)\")\n"
            "ax.set_xlabel(\"t\")\n"
            "ax.legend()\n"
            "fig.tight_layout()\n"
            "fig.savefig(\"" << name << "_orbit.png\", dpi=150)\n"
            "print(\"wrote " << name << "_orbit.png\")\n";
    plot.close();

    out << "wrote " << csv_path.string() << "\n";
    out << "wrote " << plot_path.string() << "\n";
}

void print_orbit(const OrbitResult& orbit, std::ostream& out) {
    out << "x(0) = " << fmt16(orbit.initial.x) << "\n";
    out << "y(0) = " << fmt16(orbit.initial.y) << "\n";
    out << "periodicity defect = " << fmt16(orbit.defect) << " (rtol "
        << fmt16(orbit.integrator_tolerance) << ")\n";
    out << "newton steps = " << orbit.newton_steps << "\n";
}

int run_command(const RunConfig& config, std::ostream& out) {
    const CoefficientSet coeffs = load_system(config);

    if (config.command == "check") {
        HypothesisReport report = verify_hypotheses(coeffs);
        print_report(report, out);
        return report.pass ? 0 : 1;
    }

    if (auto gate = hypothesis_gate(coeffs, out)) return *gate;

    if (config.command == "bounds") {
        CumulativeIntegral ca_rho(coeffs.rho());
        const double gamma = gamma_of(ca_rho);
        ConeDomain dom = choose_radii(coeffs, config.grid);
        out << "gamma = " << fmt16(gamma) << "\n";
        out << "r = " << fmt16(dom.r) << "\n";
        out << "R = " << fmt16(dom.R) << "\n";
        out << "max baseline = " << fmt16(dom.baseline.max()) << "\n";
        out << "denominator min = " << fmt16(denominator_min(coeffs, config.grid)) << "\n";
        if (config.proof_steps > 0) {
            ProofStepReport report =
                check_proof_steps(coeffs, dom, config.proof_steps, config.seed);
            out << "proof-step trials = " << report.trials << " (seed " << config.seed << ")\n";
            out << "  inner shell failures = " << report.inner_shell_failures
                << " (worst margin " << fmt16(report.worst_inner_margin) << ")\n";
            out << "  outer shell failures = " << report.outer_shell_failures
                << " (worst margin " << fmt16(report.worst_outer_margin) << ")\n";
            out << "  positivity failures = " << report.positivity_failures
                << " (min operator norm " << fmt16(report.min_operator_norm) << ")\n";
            out << "  cone failures = " << report.cone_failures << "\n";
            out << "proof steps: " << (report.pass ? "PASS" : "FAIL") << "\n";
            if (!report.pass) return 2;
        }
        return 0;
    }

    if (config.command == "solve-shooting") {
        OrbitResult orbit = solve_shooting_route(coeffs, config);
        print_orbit(orbit, out);
        return 0;
    }

    if (config.command == "solve-operator") {
        OperatorSolution sol = solve_operator_route(coeffs, config);
        out << "fixed-point residual = " << fmt16(sol.trace.residuals.back()) << " after "
            << sol.trace.steps << " iterations (damping " << fmt16(sol.trace.lambda) << ")\n";
        out << "x(0) = " << fmt16(sol.x[0]) << "\n";
        out << "y(0) = " << fmt16(sol.y[0]) << "\n";
        return 0;
    }

    if (config.command == "verify") {
        OrbitResult orbit = solve_shooting_route(coeffs, config);
        OperatorSolution sol = solve_operator_route(coeffs, config);
        double dist = 0.0;
        const int n = sol.x.size();
        for (int j = 0; j < n; ++j) {
            const rk::Vec2 v = orbit.trajectory(coeffs.omega() * j / n);
            dist = std::max(dist, std::abs(sol.x[j] - v[0]));
            dist = std::max(dist, std::abs(sol.y[j] - v[1]));
        }
        print_orbit(orbit, out);
        out << "operator residual = " << fmt16(sol.trace.residuals.back()) << " after "
            << sol.trace.steps << " iterations\n";
        out << "cross-path sup distance = " << fmt16(dist) << "\n";
        out << "ode residual of reconstructed (x, y) = " << fmt16(sol.ode_res) << "\n";
        return 0;
    }

    if (config.command == "export") {
        OrbitResult orbit = solve_shooting_route(coeffs, config);
        write_export(coeffs, orbit, config, out);
        return 0;
    }

    if (config.command == "demo") {
        OrbitResult orbit = solve_shooting_route(coeffs, config);
        print_orbit(orbit, out);
        write_export(coeffs, orbit, config, out);
        return 0;
    }

    throw std::invalid_argument("unknown command '" + config.command + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        return run_command(config, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ppsolve
