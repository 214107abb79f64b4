// platelab: clamped-plate spectra on constant-curvature domains and the
// universal eigenvalue inequalities they satisfy.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "platelab/cli.hpp"
#include "platelab/config.hpp"
#include "platelab/errors.hpp"

using namespace platelab;

int main(int argc, char** argv) {
    CLI::App app{"clamped-plate spectral laboratory"};
    app.require_subcommand(1);
    app.fallthrough(true); // global --config/--out/--seed may follow the subcommand

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;
    app.add_option("--config", config_path, "experiment config file")->envname("PLATELAB_CONFIG");
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed", seed, "seed override for randomized commands")
        ->each([&](const std::string&) { have_seed = true; });

    auto* solve = app.add_subcommand("solve", "solve a clamped spectrum, write CSV + JSON");
    auto* verify = app.add_subcommand("verify", "evaluate the inequality suite on a spectrum");
    auto* bound = app.add_subcommand("bound", "extract upper bounds for the next eigenvalue");

    auto* family = app.add_subcommand("family-check", "test an (f,g) couple for membership");
    cli::FamilyCheckArgs fargs;
    family->add_option("--family", fargs.family, "catalog family name");
    family->add_option("--param", fargs.param, "family parameter");
    family->add_option("--lambda", fargs.lambda, "interval endpoint lambda");
    family->add_option("--grid", fargs.grid_n, "membership grid points");
    family->add_option("--couple-file", fargs.couple_file, "two-column tabulated couple");

    auto* abstract = app.add_subcommand("abstract-test", "fuzz the abstract commutator inequality");
    cli::AbstractTestArgs aargs;
    abstract->add_option("--trials", aargs.trials, "number of random instances");
    abstract->add_option("--dim-max", aargs.dim_max, "maximum matrix order");
    abstract->add_option("--n-ops-max", aargs.n_ops_max, "maximum number of operator pairs");
    abstract->add_flag("--negative-control", aargs.negative_control,
                       "run the skew-sign control (passes when violations appear)");
    abstract->add_option("--replay", aargs.replay_path, "re-evaluate a dumped instance");

    auto* conv = app.add_subcommand("convergence", "Richardson refinement study");
    int conv_k = 3;
    conv->add_option("--k", conv_k, "number of eigenvalues to track");

    auto* ident = app.add_subcommand("identities", "verify the proof identities on a flat domain");
    int ident_k = 5;
    ident->add_option("--k", ident_k, "number of eigenfunctions to check");

    CLI11_PARSE(app, argc, argv);

    try {
        config::ExperimentConfig cfg;
        if (!config_path.empty())
            cfg = config::ExperimentConfig::from_file(config_path);
        if (have_seed)
            cfg.seed = seed;
        const std::string out = !out_dir.empty() ? out_dir : cfg.out_dir;

        if (solve->parsed())
            return cli::cmd_solve(cfg, out);
        if (verify->parsed())
            return cli::cmd_verify(cfg, out);
        if (bound->parsed())
            return cli::cmd_bound(cfg, out);
        if (family->parsed())
            return cli::cmd_family_check(fargs, out);
        if (abstract->parsed()) {
            if (have_seed)
                aargs.seed = seed;
            return cli::cmd_abstract_test(aargs, out);
        }
        if (conv->parsed())
            return cli::cmd_convergence(cfg, conv_k, out);
        if (ident->parsed())
            return cli::cmd_identities(cfg, ident_k, out);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return cli::kExitUsage;
    } catch (const input_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return cli::kExitUsage;
    } catch (const platelab::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return cli::kExitUsage;
    } catch (const unsupported_error& e) {
        std::fprintf(stderr, "unsupported: %s\n", e.what());
        return cli::kExitUsage;
    } catch (const truncation_error& e) {
        std::fprintf(stderr, "truncation: %s\n", e.what());
        return cli::kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return cli::kExitUsage;
    }
    return cli::kExitUsage;
}
