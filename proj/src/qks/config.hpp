#pragma once

#include <map>
#include <string>
#include <vector>

#include "qks/params.hpp"

namespace qks {

/// Run configuration: params block, task block, io block.  Parsed from
/// structured text (JSON); unknown keys are rejected; round-trips exactly.
struct RunConfig {
    // params
    int n = 2;
    std::vector<cplx> a;
    cplx hbar{0.5, 0.0};
    cplx q{0.9, 0.0};
    int precision_bits = 53;
    double genericity_tol = 1e-6;

    // task
    std::vector<std::string> checks{"all"};
    std::map<std::string, double> tolerances;
    int series_order = 6;
    int d_max = 14;
    std::vector<cplx> z_list{{0.2, 0.0}};
    std::string sabotage;

    // io
    std::string cache_path;
    std::string report_path;
    std::string format = "json";

    ModelParams to_params() const;
    std::string serialize() const;
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);
};

}  // namespace qks
