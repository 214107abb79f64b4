#pragma once

#include <cstdint>
#include <string>

#include "platelab/abstractlab.hpp"
#include "platelab/config.hpp"
#include "platelab/discretize.hpp"

namespace platelab::cli {

// Exit status contract shared by every command:
//   0 = all checks pass, 2 = a mathematical check failed, 1 = usage/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitMathFail = 2;

void write_spectrum_csv(const discretize::Spectrum& sp, const std::string& path);
discretize::Spectrum load_spectrum_csv(const std::string& path);

int cmd_solve(const config::ExperimentConfig& cfg, const std::string& out_dir);
int cmd_verify(const config::ExperimentConfig& cfg, const std::string& out_dir);
int cmd_bound(const config::ExperimentConfig& cfg, const std::string& out_dir);

struct FamilyCheckArgs {
    std::string family = "gap_pow_delta"; // or custom:PATH via couple descriptor
    double param = 2.0;
    double lambda = 1000.0;
    int grid_n = 200;
    std::string couple_file; // non-empty: tabulated couple
};
int cmd_family_check(const FamilyCheckArgs& args, const std::string& out_dir);

struct AbstractTestArgs {
    int trials = 1000;
    int dim_max = 12;
    int n_ops_max = 3;
    std::uint64_t seed = 1;
    bool negative_control = false; // run the skew-sign control instead
    std::string replay_path;       // non-empty: re-evaluate a dumped instance
};
int cmd_abstract_test(const AbstractTestArgs& args, const std::string& out_dir);

int cmd_convergence(const config::ExperimentConfig& cfg, int k, const std::string& out_dir);
int cmd_identities(const config::ExperimentConfig& cfg, int k, const std::string& out_dir);

} // namespace platelab::cli
