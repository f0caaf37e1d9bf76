#pragma once

#include "config.hpp"

#include "affinelab/body.hpp"

#include <map>
#include <string>
#include <vector>

namespace affinelab::cli {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = "out";
    int jobs = 1;
    int grid_override = 0;  // 0: take [experiment] grid or the default 512
    unsigned long seed = 0;
    bool stamp = false;     // allow wall-clock data in outputs
};

// One concrete body instance (after range expansion).
struct BodySpec {
    std::string family;
    std::vector<std::pair<std::string, double>> params;  // declaration order
    std::string path;  // family = file

    std::string label() const;       // cosine_perturbed(a=0.01;k=2)
    std::string params_field() const;  // a=0.01;k=2
    ConvexBody build(const AngularGrid& grid) const;
};

std::vector<BodySpec> expand_bodies(const Config& cfg);

int cmd_functionals(const GlobalOptions& opts);
int cmd_flow(const GlobalOptions& opts);
int cmd_verify(const GlobalOptions& opts);
int cmd_sweep(const GlobalOptions& opts);
int cmd_selftest(const GlobalOptions& opts, const std::string& fault);

} // namespace affinelab::cli
