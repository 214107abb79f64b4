#include "platelab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "platelab/bounds.hpp"
#include "platelab/errors.hpp"

namespace platelab::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// The one intentionally non-deterministic field in every report.
std::string generated_stamp(double runtime_seconds) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    std::ostringstream s;
    s << buf << " (runtime " << fmt6(runtime_seconds) << "s)";
    return s.str();
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw input_error("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw input_error("cannot write " + path);
    return out;
}

ordered_json domain_json(const discretize::DomainSpec& d) {
    ordered_json j;
    switch (d.kind) {
    case discretize::DomainKind::beam:
        j["kind"] = "beam";
        j["length"] = d.length;
        break;
    case discretize::DomainKind::rectangle:
        j["kind"] = "rectangle";
        j["a"] = d.a;
        j["b"] = d.b;
        break;
    case discretize::DomainKind::geodesic_disk:
        j["kind"] = "geodesic_disk";
        j["kappa"] = d.curvature;
        j["radius"] = d.radius;
        j["m_max"] = d.m_max;
        break;
    }
    j["grid_n"] = d.grid_n;
    return j;
}

ordered_json context_json(const bounds::BoundContext& ctx) {
    ordered_json j;
    j["n"] = ctx.n;
    j["geometry"] = bounds::to_string(ctx.geometry);
    if (ctx.delta)
        j["delta"] = *ctx.delta;
    if (ctx.delta_prime)
        j["delta_prime"] = *ctx.delta_prime;
    if (ctx.lambda_map)
        j["lambda_map"] = *ctx.lambda_map;
    j["q_inf"] = ctx.q_inf;
    return j;
}

discretize::Spectrum obtain_spectrum(const config::ExperimentConfig& cfg, int needed) {
    if (!cfg.spectrum_csv.empty())
        return load_spectrum_csv(cfg.spectrum_csv);
    if (!cfg.has_domain)
        throw config_error("no [domain] section and no verify.spectrum_csv to load");
    return discretize::solve_spectrum(cfg.domain, needed);
}

std::string couple_file_tag(std::string s) {
    for (char& c : s)
        if (c == ':' || c == '/' || c == ' ' || c == '(' || c == ')' || c == ',' || c == '=')
            c = '_';
    return s;
}

} // namespace

void write_spectrum_csv(const discretize::Spectrum& sp, const std::string& path) {
    auto out = open_out(path);
    out << "index,value,mode_label,multiplicity,h\n";
    int idx = 1;
    for (const auto& e : sp.entries) {
        out << idx++ << ',' << fmt17(e.value) << ',' << e.mode_label << ',' << e.multiplicity
            << ',' << fmt17(sp.h) << '\n';
    }
}

discretize::Spectrum load_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("spectrum csv not readable: " + path);
    discretize::Spectrum sp;
    std::string line;
    if (!std::getline(in, line))
        throw input_error(path + ": empty spectrum csv");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string tok;
        discretize::SpectrumEntry e;
        try {
            std::getline(ss, tok, ','); // index (ignored)
            std::getline(ss, tok, ',');
            e.value = std::stod(tok);
            std::getline(ss, e.mode_label, ',');
            std::getline(ss, tok, ',');
            e.multiplicity = std::stoi(tok);
            std::getline(ss, tok, ',');
            sp.h = std::stod(tok);
        } catch (...) {
            throw input_error(path + ":" + std::to_string(lineno) + ": malformed spectrum row");
        }
        if (!sp.entries.empty() && e.value < sp.entries.back().value)
            throw input_error(path + ":" + std::to_string(lineno) +
                              ": spectrum values must be nondecreasing");
        sp.entries.push_back(std::move(e));
    }
    if (sp.entries.empty())
        throw input_error(path + ": no spectrum rows");
    return sp;
}

int cmd_solve(const config::ExperimentConfig& cfg, const std::string& out_dir) {
    if (!cfg.has_domain)
        throw config_error("solve needs a [domain] section");
    Stopwatch watch;
    ensure_dir(out_dir);
    auto sp = discretize::solve_spectrum(cfg.domain, cfg.k_max);
    write_spectrum_csv(sp, out_dir + "/spectrum.csv");

    ordered_json meta;
    meta["generated"] = generated_stamp(watch.seconds());
    meta["domain"] = domain_json(cfg.domain);
    meta["dimension"] = sp.dimension;
    meta["h"] = sp.h;
    meta["k_max"] = cfg.k_max;
    auto vals = sp.values_expanded();
    ordered_json degen = ordered_json::array();
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
        if (vals[i + 1] - vals[i] <= 1e-6 * std::max(vals[i], 1.0))
            degen.push_back({i + 1, i + 2});
    meta["near_degenerate_pairs"] = degen;
    open_out(out_dir + "/spectrum_meta.json") << meta.dump(2) << '\n';

    std::ostringstream sum;
    sum << "solve: " << cfg.domain.describe() << "\n";
    for (std::size_t i = 0; i < vals.size(); ++i)
        sum << "  lambda_" << i + 1 << " = " << fmt6(vals[i]) << "\n";
    open_out(out_dir + "/solve_summary.txt") << sum.str();
    return kExitOk;
}

int cmd_verify(const config::ExperimentConfig& cfg, const std::string& out_dir) {
    Stopwatch watch;
    ensure_dir(out_dir);
    auto sp = obtain_spectrum(cfg, cfg.verify_k_max + 1);

    std::vector<bounds::InequalityId> ids = cfg.verify_ids;
    if (ids.empty())
        ids = bounds::applicable_ids(cfg.context);
    auto rep = bounds::check_all(sp, cfg.context, ids, cfg.couples, cfg.verify_k_min,
                                 cfg.verify_k_max, cfg.tol_rel);

    auto csv = open_out(out_dir + "/bounds.csv");
    csv << "id,couple,k,lhs,rhs,slack,holds\n";
    for (const auto& e : rep.entries)
        csv << bounds::to_string(e.id) << ',' << e.couple << ',' << e.k << ',' << fmt17(e.lhs)
            << ',' << fmt17(e.rhs) << ',' << fmt17(e.slack) << ',' << (e.holds ? 1 : 0) << '\n';

    ordered_json j;
    j["generated"] = generated_stamp(watch.seconds());
    j["context"] = context_json(cfg.context);
    if (cfg.has_domain)
        j["domain"] = domain_json(cfg.domain);
    if (!cfg.spectrum_csv.empty())
        j["spectrum_csv"] = cfg.spectrum_csv;
    j["tol_rel"] = cfg.tol_rel;
    j["k_range"] = {cfg.verify_k_min, cfg.verify_k_max};
    ordered_json entries = ordered_json::array();
    for (const auto& e : rep.entries) {
        ordered_json je;
        je["id"] = bounds::to_string(e.id);
        if (!e.couple.empty())
            je["couple"] = e.couple;
        je["k"] = e.k;
        je["lambda_used"] = e.lambda_used;
        je["lhs"] = e.lhs;
        je["rhs"] = e.rhs;
        je["slack"] = e.slack;
        je["holds"] = e.holds;
        if (!e.flags.empty())
            je["flags"] = e.flags;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["skipped"] = rep.skipped;
    j["all_hold"] = rep.all_hold();
    open_out(out_dir + "/bounds.json") << j.dump(2) << '\n';

    // plot-ready slack files, one per (id, couple)
    std::map<std::string, std::ostringstream> dat;
    for (const auto& e : rep.entries) {
        std::string key = bounds::to_string(e.id);
        if (!e.couple.empty())
            key += "_" + couple_file_tag(e.couple);
        dat[key] << e.k << ' ' << fmt17(e.slack) << '\n';
    }
    for (auto& [key, ss] : dat)
        open_out(out_dir + "/slack_" + key + ".dat") << ss.str();

    return rep.all_hold() ? kExitOk : kExitMathFail;
}

int cmd_bound(const config::ExperimentConfig& cfg, const std::string& out_dir) {
    Stopwatch watch;
    ensure_dir(out_dir);
    auto sp = obtain_spectrum(cfg, cfg.bound_k_max + 1);
    const auto vals = sp.values_expanded();
    if (static_cast<int>(vals.size()) < cfg.bound_k_max + 1)
        throw config_error("bound: spectrum too short for bound.k_max");

    auto csv = open_out(out_dir + "/bound.csv");
    csv << "id,couple,k,lambda_next,lambda_upper,ratio\n";
    std::ostringstream ratio_dat;
    bool all_bounded = true;
    ordered_json entries = ordered_json::array();
    for (auto id : cfg.bound_ids) {
        const bool quadratic = id == bounds::InequalityId::cim_flat_l2 ||
                               id == bounds::InequalityId::cim_sphere ||
                               id == bounds::InequalityId::cim_submanifold;
        for (int k = cfg.bound_k_min; k <= cfg.bound_k_max; ++k) {
            const double next = vals[k];
            if (next - vals[k - 1] <= 1e-8 * std::max(next, 1.0))
                continue; // no spectral gap, theorems silent
            std::span<const double> lam(vals.data(), static_cast<std::size_t>(k));
            if (quadratic) {
                const double up = bounds::next_bound_quadratic(lam, cfg.context, id);
                const double ratio = next / up;
                all_bounded = all_bounded && ratio <= 1.0 + 1e-12;
                csv << bounds::to_string(id) << ",," << k << ',' << fmt17(next) << ','
                    << fmt17(up) << ',' << fmt17(ratio) << '\n';
                ratio_dat << k << ' ' << fmt17(ratio) << '\n';
                ordered_json je;
                je["id"] = bounds::to_string(id);
                je["k"] = k;
                je["lambda_next"] = next;
                je["lambda_upper"] = up;
                je["ratio"] = ratio;
                entries.push_back(std::move(je));
            } else {
                for (const auto& couple : cfg.couples) {
                    auto res = bounds::next_bound_bisection(lam, cfg.context, id, couple);
                    ordered_json je;
                    je["id"] = bounds::to_string(id);
                    je["k"] = k;
                    je["lambda_next"] = next;
                    je["couple"] = couple.describe();
                    if (res.conclusive) {
                        const double ratio = next / res.lambda_upper;
                        all_bounded = all_bounded && ratio <= 1.0 + 1e-12;
                        csv << bounds::to_string(id) << ',' << couple.describe() << ',' << k
                            << ',' << fmt17(next) << ',' << fmt17(res.lambda_upper) << ','
                            << fmt17(ratio) << '\n';
                        je["lambda_upper"] = res.lambda_upper;
                        je["ratio"] = ratio;
                        je["certificate"] = res.note;
                    } else {
                        csv << bounds::to_string(id) << ',' << couple.describe() << ',' << k
                            << ',' << fmt17(next) << ",inconclusive,\n";
                        je["inconclusive"] = res.note;
                    }
                    entries.push_back(std::move(je));
                }
            }
        }
    }
    open_out(out_dir + "/bound_ratio.dat") << ratio_dat.str();

    ordered_json j;
    j["generated"] = generated_stamp(watch.seconds());
    j["context"] = context_json(cfg.context);
    j["entries"] = std::move(entries);
    j["all_bounded"] = all_bounded;
    open_out(out_dir + "/bound.json") << j.dump(2) << '\n';
    return all_bounded ? kExitOk : kExitMathFail;
}

int cmd_family_check(const FamilyCheckArgs& args, const std::string& out_dir) {
    Stopwatch watch;
    ensure_dir(out_dir);
    families::FGCouple couple =
        !args.couple_file.empty()
            ? families::FGCouple::custom_from_file(args.couple_file)
            : config::couple_from_descriptor(args.family + ":" + std::to_string(args.param));
    const double lambda =
        !args.couple_file.empty() && args.lambda <= 0.0 ? couple.table_lambda() : args.lambda;

    auto rep = families::check_membership(couple, lambda, args.grid_n);
    const bool diff_ok = families::check_necessary_diff(couple, lambda, args.grid_n);

    std::ostringstream sum;
    sum << "family-check: " << couple.describe() << " on (0, " << fmt6(lambda) << ")\n"
        << "  pairs checked:        " << rep.pairs_checked << "\n"
        << "  max condition value:  " << fmt6(rep.max_condition_value) << "\n"
        << "  tolerance:            " << fmt6(rep.tolerance) << "\n"
        << "  worst pair:           (" << fmt6(rep.worst_x) << ", " << fmt6(rep.worst_y) << ")\n"
        << "  overflow warnings:    " << rep.overflow_warnings << "\n"
        << "  necessary condition:  " << (diff_ok ? "holds" : "fails") << "\n"
        << "  verdict:              "
        << (rep.no_violation ? "PASS (no violation found)" : "FAIL (violation found)") << "\n";
    open_out(out_dir + "/family_check.txt") << sum.str();
    std::fputs(sum.str().c_str(), stdout);

    ordered_json j;
    j["generated"] = generated_stamp(watch.seconds());
    j["couple"] = couple.describe();
    j["lambda"] = lambda;
    j["grid_n"] = args.grid_n;
    j["pairs_checked"] = rep.pairs_checked;
    j["max_condition_value"] = rep.max_condition_value;
    j["tolerance"] = rep.tolerance;
    j["worst_pair"] = {rep.worst_x, rep.worst_y};
    j["overflow_warnings"] = rep.overflow_warnings;
    j["necessary_condition_holds"] = diff_ok;
    j["member"] = rep.no_violation;
    open_out(out_dir + "/family_check.json") << j.dump(2) << '\n';
    return rep.no_violation ? kExitOk : kExitMathFail;
}

int cmd_abstract_test(const AbstractTestArgs& args, const std::string& out_dir) {
    Stopwatch watch;
    ensure_dir(out_dir);
    std::vector<families::FGCouple> couples{families::FGCouple::gap_pow_delta(2.0),
                                            families::FGCouple::one_gap_alpha(1.0),
                                            families::FGCouple::gap_gap_beta(0.5)};

    if (!args.replay_path.empty()) {
        auto inst = abstractlab::load_replay_file(args.replay_path);
        std::ostringstream sum;
        sum << "abstract-test replay: " << args.replay_path << " (dim " << inst.dim << ", n_ops "
            << inst.n_ops << ", k " << inst.k << ")\n";
        bool ok = true;
        for (const auto& c : couples) {
            auto s = abstractlab::theorem_sides(inst, c);
            const bool holds = s.slack() >= -1e-9 * s.scale();
            ok = ok && holds;
            sum << "  " << c.describe() << ": lhs " << fmt6(s.lhs) << " rhs " << fmt6(s.rhs)
                << " slack " << fmt6(s.slack()) << (holds ? "" : "  VIOLATION") << "\n";
        }
        open_out(out_dir + "/abstract_replay.txt") << sum.str();
        std::fputs(sum.str().c_str(), stdout);
        return ok ? kExitOk : kExitMathFail;
    }

    const auto mode = args.negative_control ? abstractlab::EvalMode::skew_sign_control
                                            : abstractlab::EvalMode::standard;
    auto rep = abstractlab::fuzz(args.trials, args.dim_max, args.n_ops_max, couples, args.seed,
                                 mode);
    if (rep.worst_instance)
        abstractlab::save_replay_file(*rep.worst_instance, out_dir + "/abstract_worst.replay");

    std::ostringstream sum;
    sum << "abstract-test: " << rep.trials << " instances, " << rep.evaluations
        << " evaluations, mode " << (args.negative_control ? "skew-sign-control" : "standard")
        << "\n"
        << "  min normalized slack: " << fmt6(rep.min_slack_normalized) << "\n"
        << "  violations:           " << rep.violations << "\n"
        << "  worst couple:         " << rep.worst_couple << "\n";
    open_out(out_dir + "/abstract_test.txt") << sum.str();
    std::fputs(sum.str().c_str(), stdout);

    ordered_json j;
    j["generated"] = generated_stamp(watch.seconds());
    j["trials"] = rep.trials;
    j["dim_max"] = args.dim_max;
    j["n_ops_max"] = args.n_ops_max;
    j["seed"] = args.seed;
    j["mode"] = args.negative_control ? "skew_sign_control" : "standard";
    j["evaluations"] = rep.evaluations;
    j["violations"] = rep.violations;
    j["probe_violations"] = rep.probe_violations;
    j["min_slack_normalized"] = rep.min_slack_normalized;
    j["worst_couple"] = rep.worst_couple;
    open_out(out_dir + "/abstract_test.json") << j.dump(2) << '\n';

    // In control mode finding violations is the expected outcome; the run
    // "passes" exactly when the control trips.
    if (args.negative_control)
        return rep.violations > 0 ? kExitOk : kExitMathFail;
    return rep.violations == 0 ? kExitOk : kExitMathFail;
}

int cmd_convergence(const config::ExperimentConfig& cfg, int k, const std::string& out_dir) {
    if (!cfg.has_domain)
        throw config_error("convergence needs a [domain] section");
    Stopwatch watch;
    ensure_dir(out_dir);
    auto res = discretize::richardson_order(cfg.domain, k);

    std::ostringstream sum;
    sum << "convergence: " << cfg.domain.describe() << " at grids " << res.grids[0] << "/"
        << res.grids[1] << "/" << res.grids[2] << "\n";
    for (int i = 0; i < k; ++i)
        sum << "  lambda_" << i + 1 << ": extrapolated " << fmt6(res.extrapolated[i])
            << ", observed order " << fmt6(res.observed_order[i]) << "\n";
    open_out(out_dir + "/convergence.txt") << sum.str();
    std::fputs(sum.str().c_str(), stdout);

    ordered_json j;
    j["generated"] = generated_stamp(watch.seconds());
    j["domain"] = domain_json(cfg.domain);
    j["grids"] = {res.grids[0], res.grids[1], res.grids[2]};
    j["extrapolated"] = res.extrapolated;
    j["observed_order"] = res.observed_order;
    open_out(out_dir + "/convergence.json") << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_identities(const config::ExperimentConfig& cfg, int k, const std::string& out_dir) {
    if (!cfg.has_domain)
        throw config_error("identities needs a [domain] section");
    Stopwatch watch;
    ensure_dir(out_dir);
    auto rep = discretize::verify_proof_identities(cfg.domain, k);

    bool cs_ok = true;
    std::ostringstream sum;
    sum << "identities: " << cfg.domain.describe() << " (n = " << rep.n << ", h = " << fmt6(rep.h)
        << ")\n";
    for (const auto& e : rep.entries) {
        cs_ok = cs_ok && e.cauchy_schwarz_holds;
        sum << "  i=" << e.index << " lambda=" << fmt6(e.lambda) << "  |comm-2n|="
            << fmt6(e.commutator_identity_residual)
            << "  |grad-4E|=" << fmt6(e.gradient_identity_residual) << "  CS "
            << fmt6(e.cauchy_schwarz_lhs) << " <= " << fmt6(e.cauchy_schwarz_rhs)
            << (e.cauchy_schwarz_holds ? "" : "  VIOLATION") << "\n";
    }
    open_out(out_dir + "/identities.txt") << sum.str();
    std::fputs(sum.str().c_str(), stdout);

    ordered_json j;
    j["generated"] = generated_stamp(watch.seconds());
    j["domain"] = domain_json(cfg.domain);
    j["n"] = rep.n;
    j["h"] = rep.h;
    ordered_json entries = ordered_json::array();
    for (const auto& e : rep.entries) {
        ordered_json je;
        je["index"] = e.index;
        je["lambda"] = e.lambda;
        je["commutator_identity_residual"] = e.commutator_identity_residual;
        je["gradient_identity_residual"] = e.gradient_identity_residual;
        je["cauchy_schwarz_lhs"] = e.cauchy_schwarz_lhs;
        je["cauchy_schwarz_rhs"] = e.cauchy_schwarz_rhs;
        je["cauchy_schwarz_holds"] = e.cauchy_schwarz_holds;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    open_out(out_dir + "/identities.json") << j.dump(2) << '\n';
    return cs_ok ? kExitOk : kExitMathFail;
}

} // namespace platelab::cli
