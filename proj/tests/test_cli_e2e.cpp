#include "commands.hpp"

#include "affinelab/generators.hpp"
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace affinelab;
using namespace affinelab::cli;

namespace {

namespace fs = std::filesystem;

fs::path make_workdir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "affinelab_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(AFFINELAB_CLI_PATH) + " " + args +
                            " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("exit code contract of the binary") {
    const auto dir = make_workdir("exit_codes");
    SUBCASE("missing config file -> 2") {
        CHECK(run_cli("--config " + (dir / "nope.cfg").string() + " functionals") == 2);
    }
    SUBCASE("unknown family -> 2") {
        write_file(dir / "bad.cfg", "[body]\nfamily = pentagon\n");
        CHECK(run_cli("--config " + (dir / "bad.cfg").string() + " --out " +
                      (dir / "out").string() + " functionals") == 2);
    }
    SUBCASE("valid run -> 0, diagnostic out-of-range rows included") {
        write_file(dir / "ok.cfg",
                   "[experiment]\ngrid = 256\np = 2\n"
                   "[body]\nfamily = cosine_perturbed\na = 0.05\nk = 2\n");
        CHECK(run_cli("--config " + (dir / "ok.cfg").string() + " --out " +
                      (dir / "outv").string() + " verify") == 0);
        const std::string report = slurp(dir / "outv" / "report_0.txt");
        CHECK(report.find("in_theorem_range=false") != std::string::npos);
    }
    SUBCASE("selftest fault injection -> 1") {
        CHECK(run_cli("selftest --fault quadrature") == 1);
    }
}

TEST_CASE("body files round through the file family") {
    const auto dir = make_workdir("file_family");
    {
        std::ofstream os(dir / "body.txt");
        write_body(os, bodies::ellipse_body(1.5, 1.0 / 1.5, 0.4, AngularGrid(256)));
    }
    write_file(dir / "exp.cfg",
               "[experiment]\ngrid = 256\np_list = 1, 2\n"
               "[body]\nfamily = file\npath = " + (dir / "body.txt").string() +
                   "\n");
    GlobalOptions opts;
    opts.config_path = (dir / "exp.cfg").string();
    opts.out_dir = (dir / "out").string();
    CHECK(cmd_functionals(opts) == 0);
    const std::string table = slurp(dir / "out" / "functionals.csv");
    // an area-pi ellipse read back from disk still sits at the equality case
    CHECK(table.find("file") != std::string::npos);
    CHECK(table.find("deficit") != std::string::npos);
}

TEST_CASE("p = 1 requests route through the reduction") {
    const auto dir = make_workdir("p1_route");
    write_file(dir / "exp.cfg",
               "[experiment]\ngrid = 256\np = 1\n"
               "[body]\nfamily = cosine_perturbed\na = 0.02\nk = 2\n");
    GlobalOptions opts;
    opts.config_path = (dir / "exp.cfg").string();
    opts.out_dir = (dir / "out").string();
    CHECK(cmd_verify(opts) == 0);
    const std::string report = slurp(dir / "out" / "report_0.txt");
    CHECK(report.find("reduced_from_p1=true") != std::string::npos);
    CHECK(report.find("note=C_1 equals C_2") != std::string::npos);
    CHECK(report.find("p=1.0") != std::string::npos);
}

TEST_CASE("sweep tables are byte-identical across thread counts") {
    const auto dir = make_workdir("determinism");
    write_file(dir / "exp.cfg",
               "[experiment]\ngrid = 256\np = 2\n"
               "[body]\nfamily = cosine_perturbed\na = geom:2e-3:2e-2:6\nk = 2\n");
    GlobalOptions opts;
    opts.config_path = (dir / "exp.cfg").string();
    opts.out_dir = (dir / "one").string();
    opts.jobs = 1;
    REQUIRE(cmd_sweep(opts) == 0);
    opts.out_dir = (dir / "four").string();
    opts.jobs = 4;
    REQUIRE(cmd_sweep(opts) == 0);
    CHECK(slurp(dir / "one" / "sweep.csv") == slurp(dir / "four" / "sweep.csv"));
    CHECK(slurp(dir / "one" / "loglog.svg") == slurp(dir / "four" / "loglog.svg"));
    CHECK(slurp(dir / "one" / "sweep.csv")
              .starts_with("family,parameters,p,epsilon,delta,t_star,lambda,"
                           "d_H,bound,pass,in_theorem_range,runtime_ms"));
}

TEST_CASE("containment pair mode emits the margin table") {
    const auto dir = make_workdir("containment");
    write_file(dir / "exp.cfg",
               "[experiment]\ngrid = 128\n"
               "[body]\nfamily = disk\nR = 0.8\n"
               "[body]\nfamily = disk\nR = 1.0\n"
               "[flow]\nt_end = 0.1\nsnapshots = 9\ncontainment = true\n");
    GlobalOptions opts;
    opts.config_path = (dir / "exp.cfg").string();
    opts.out_dir = (dir / "out").string();
    CHECK(cmd_flow(opts) == 0);
    const std::string gaps = slurp(dir / "out" / "containment.csv");
    CHECK(gaps.starts_with("t,support_margin"));
    // every margin nonnegative
    std::stringstream ss(gaps);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const double margin = std::stod(line.substr(line.find(',') + 1));
        CHECK(margin >= -1e-12);
    }
}
