#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppsolve/cli.hpp"

using ppsolve::RunConfig;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ppsolve_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_spec(const TempDir& dir, const std::string& name, const std::string& body) {
    fs::path p = dir.path / name;
    std::ofstream(p) << body;
    return p;
}

const char* kGoodSpec =
    "variant = S2\n"
    "omega = 2*pi\n"
    "rho = 1+sin(5*t)\n"
    "kappa = 2+sin(t)\n"
    "mu = 1+cos(3*t)\n"
    "alpha = 2-cos(3*t)\n"
    "sigma = 1-cos(7*t)\n"
    "eta = 1-sin(t)\n";

}  // namespace

TEST_CASE("check passes a good spec file and prints the report") {
    TempDir dir;
    RunConfig config;
    config.command = "check";
    config.spec_path = write_spec(dir, "good.spec", kGoodSpec).string();
    std::ostringstream out, err;
    CHECK(ppsolve::run(config, out, err) == 0);
    CHECK(out.str().find("hypotheses: PASS") != std::string::npos);
}

TEST_CASE("check rejects a failing spec with exit 1 and a named diagnosis") {
    TempDir dir;
    RunConfig config;
    config.command = "check";
    config.spec_path =
        write_spec(dir, "bad.spec",
                   "variant = S2\nomega = 2*pi\nrho = 1+sin(5*t)\nkappa = 2+sin(t)\n"
                   "mu = 1+cos(3*t)\nalpha = 2-cos(3*t)\nsigma = 0\neta = 1-sin(t)\n")
            .string();
    std::ostringstream out, err;
    CHECK(ppsolve::run(config, out, err) == 1);
    CHECK(out.str().find("sigma") != std::string::npos);
    CHECK(out.str().find("FAIL") != std::string::npos);
}

TEST_CASE("solving commands are gated on the hypotheses") {
    TempDir dir;
    RunConfig config;
    config.command = "solve-shooting";
    config.spec_path =
        write_spec(dir, "bad2.spec",
                   "variant = S1\nomega = 2*pi\nrho = 1+sin(2*t)\nkappa = 1-cos(t)\n"
                   "mu = 1+cos(3*t)\nsigma = 1-cos(t)\neta = 1-sin(t)\n")
            .string();
    std::ostringstream out, err;
    CHECK(ppsolve::run(config, out, err) == 1);
    CHECK(out.str().find("product kappa") != std::string::npos);
}

TEST_CASE("unreadable specs and unknown keys exit with status 2") {
    RunConfig config;
    config.command = "check";
    config.spec_path = "/nonexistent/nowhere.spec";
    std::ostringstream out, err;
    CHECK(ppsolve::run(config, out, err) == 2);
    CHECK(err.str().find("error:") != std::string::npos);

    TempDir dir;
    config.spec_path = write_spec(dir, "junk.spec", "variant = S1\nwat = 1\n").string();
    std::ostringstream out2, err2;
    CHECK(ppsolve::run(config, out2, err2) == 2);
    CHECK(err2.str().find("unknown key") != std::string::npos);
}

TEST_CASE("exactly one system selector is required") {
    RunConfig config;
    config.command = "check";
    std::ostringstream out, err;
    CHECK(ppsolve::run(config, out, err) == 2);
    config.demo_id = "example1";
    config.spec_path = "also.spec";
    std::ostringstream out2, err2;
    CHECK(ppsolve::run(config, out2, err2) == 2);
    config.spec_path.clear();
    config.demo_id = "example9";
    std::ostringstream out3, err3;
    CHECK(ppsolve::run(config, out3, err3) == 2);
}

TEST_CASE("bounds output is deterministic across runs") {
    RunConfig config;
    config.command = "bounds";
    config.demo_id = "example1";
    config.proof_steps = 5;
    std::ostringstream out1, out2, err;
    CHECK(ppsolve::run(config, out1, err) == 0);
    CHECK(ppsolve::run(config, out2, err) == 0);
    CHECK(out1.str() == out2.str());
    CHECK(out1.str().find("gamma") != std::string::npos);
    CHECK(out1.str().find("proof steps: PASS") != std::string::npos);
}

TEST_CASE("export writes a well-formed CSV and a plot script") {
    TempDir dir;
    RunConfig config;
    config.command = "export";
    config.demo_id = "example1";
    config.out_dir = dir.path.string();
    std::ostringstream out, err;
    REQUIRE(ppsolve::run(config, out, err) == 0);

    std::ifstream csv(dir.path / "example1_orbit.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,x,y");
    int rows = 0;
    double prev_t = -1.0;
    std::string line;
    while (std::getline(csv, line)) {
        double t, x, y;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &y) == 3);
        CHECK(t > prev_t);
        CHECK(x > 0.0);
        CHECK(y > 0.0);
        CHECK(std::isfinite(x));
        CHECK(std::isfinite(y));
        prev_t = t;
        ++rows;
    }
    CHECK(rows == 2048);
    CHECK(prev_t == doctest::Approx(10.0 * M_PI).epsilon(1e-12));

    std::ifstream plot(dir.path / "example1_plot.py");
    REQUIRE(plot.good());
    std::stringstream plot_text;
    plot_text << plot.rdbuf();
    CHECK(plot_text.str().find("example1_orbit.csv") != std::string::npos);
}

TEST_CASE("demo solves and exports in one invocation") {
    TempDir dir;
    RunConfig config;
    config.command = "demo";
    config.demo_id = "example3";
    config.out_dir = dir.path.string();
    std::ostringstream out, err;
    REQUIRE(ppsolve::run(config, out, err) == 0);
    CHECK(out.str().find("x(0) = 0.650402249") != std::string::npos);
    CHECK(out.str().find("periodicity defect") != std::string::npos);
    CHECK(fs::exists(dir.path / "example3_orbit.csv"));
    CHECK(fs::exists(dir.path / "example3_plot.py"));
}

TEST_CASE("verify reports dual-path agreement") {
    RunConfig config;
    config.command = "verify";
    config.demo_id = "example1";
    std::ostringstream out, err;
    REQUIRE(ppsolve::run(config, out, err) == 0);
    const std::string text = out.str();
    const auto pos = text.find("cross-path sup distance = ");
    REQUIRE(pos != std::string::npos);
    const double dist = std::strtod(text.c_str() + pos + 26, nullptr);
    CHECK(dist < 1e-6);
    CHECK(text.find("ode residual") != std::string::npos);
}

TEST_CASE("solve-shooting refuses delayed systems, solve-operator accepts them") {
    TempDir dir;
    const char* delayed =
        "variant = S2\nomega = 2*pi\nrho = 1+sin(5*t)\nkappa = 2+sin(t)\n"
        "mu = 1+cos(3*t)\nalpha = 2-cos(3*t)\nsigma = 1-cos(7*t)\neta = 1-sin(t)\n"
        "tau_x = 0.5\ntau_y = 0.5\n";
    RunConfig config;
    config.spec_path = write_spec(dir, "delayed.spec", delayed).string();
    config.command = "solve-shooting";
    std::ostringstream out, err;
    CHECK(ppsolve::run(config, out, err) == 2);
    CHECK(err.str().find("delayed") != std::string::npos);

    config.command = "solve-operator";
    config.op_tol = 1e-6;
    std::ostringstream out2, err2;
    CHECK(ppsolve::run(config, out2, err2) == 0);
    CHECK(out2.str().find("fixed-point residual") != std::string::npos);
}
