// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Expected values come from the independent oracles in
// oracles.cpp (characteristic-equation roots, Bessel cross products), never
// from the solver under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "platelab/abstractlab.hpp"
#include "platelab/bounds.hpp"
#include "platelab/discretize.hpp"
#include "platelab/families.hpp"
#include "platelab/geometry.hpp"

using namespace platelab;
using bounds::BoundContext;
using bounds::GeometryClass;
using bounds::InequalityId;
using discretize::DomainKind;
using discretize::DomainSpec;
using families::FGCouple;

namespace {

int g_failures = 0;

struct Check {
    std::ostringstream log;
    bool ok = true;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            log << (log.str().empty() ? "" : "; ") << what;
        }
    }
};

void report(int index, const std::string& title, const std::function<void(Check&)>& body,
            double runtime_cap_seconds = 0.0) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.log << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (runtime_cap_seconds > 0.0)
        c.require(secs < runtime_cap_seconds,
                  "runtime " + std::to_string(secs) + "s exceeded the " +
                      std::to_string(runtime_cap_seconds) + "s cap");
    std::printf("%s  criterion %2d  %-18s (%.1fs)%s%s\n", c.ok ? "PASS" : "FAIL", index,
                title.c_str(), secs, c.ok ? "" : "  -- ", c.ok ? "" : c.log.str().c_str());
    std::fflush(stdout);
    if (!c.ok)
        ++g_failures;
}

DomainSpec beam(int grid, double L = 1.0) {
    DomainSpec s;
    s.kind = DomainKind::beam;
    s.length = L;
    s.grid_n = grid;
    return s;
}

DomainSpec square(int grid) {
    DomainSpec s;
    s.kind = DomainKind::rectangle;
    s.a = s.b = 1.0;
    s.grid_n = grid;
    return s;
}

DomainSpec disk(int kappa, int grid, int m_max = -1) {
    DomainSpec s;
    s.kind = DomainKind::geodesic_disk;
    s.curvature = kappa;
    s.radius = 1.0;
    s.grid_n = grid;
    s.m_max = m_max;
    return s;
}

std::vector<FGCouple> catalog_couples() {
    return {FGCouple::gap_pow_delta(2.0), FGCouple::one_gap_alpha(1.0),
            FGCouple::gap_gap_beta(0.5)};
}

// 10x the Richardson-style discretization error estimate from a coarse and a
// fine solve at the same k; used as the slack tolerance of criterion 3/4.
double disc_tolerance(const DomainSpec& fine_spec, int k) {
    DomainSpec coarse = fine_spec;
    coarse.grid_n = fine_spec.grid_n / 2;
    auto fine = discretize::solve_spectrum(fine_spec, k).values_expanded(k);
    auto rough = discretize::solve_spectrum(coarse, k).values_expanded(k);
    double worst = 0.0;
    for (int i = 0; i < k; ++i)
        worst = std::max(worst, std::abs(fine[i] - rough[i]) / (3.0 * fine[i]));
    return 10.0 * worst;
}

bool gap_ok(const std::vector<double>& vals, int k) {
    return vals[k] - vals[k - 1] > 1e-8 * std::max(vals[k], 1.0);
}

void criterion_beam_oracle(Check& c) {
    auto sp = discretize::solve_spectrum(beam(400), 6);
    auto vals = sp.values_expanded();
    for (int i = 0; i < 6; ++i) {
        const double mu = oracles::beam_mu(i + 1);
        const double exact = mu * mu * mu * mu;
        const double rel = std::abs(vals[i] - exact) / exact;
        c.require(rel <= 5e-3, "lambda_" + std::to_string(i + 1) + " off by " +
                                   std::to_string(rel));
    }
    auto rich = discretize::richardson_order(beam(100), 3);
    for (double p : rich.observed_order)
        c.require(p >= 1.7 && p <= 2.3, "observed order " + std::to_string(p));
}

void criterion_disk_oracle(Check& c) {
    const double k1 = oracles::disk_k(0, 1);
    const double exact = k1 * k1 * k1 * k1;
    c.require(std::abs(k1 - 3.19622) <= 2e-5, "Bessel oracle root moved");
    auto sp = discretize::solve_spectrum(disk(0, 400, 2), 2);
    const double lam1 = sp.values_expanded()[0];
    const double rel = std::abs(lam1 - exact) / exact;
    c.require(rel <= 5e-3, "disk lambda_1 off by " + std::to_string(rel));
}

void criterion_flat_suite(Check& c) {
    struct Case {
        DomainSpec spec;
        int n;
    };
    const std::vector<Case> cases{{beam(200), 1}, {square(32), 2}, {disk(0, 160), 2}};
    const auto couples = catalog_couples();
    const std::vector<InequalityId> ids{
        InequalityId::ashbaugh,    InequalityId::hile_yeh_strong,
        InequalityId::cheng_yang,  InequalityId::cim_flat_l2,
        InequalityId::wx_minimal,  InequalityId::wx_minimal_simple,
        InequalityId::main_clamp1};

    for (const auto& cs : cases) {
        const double tol = disc_tolerance(cs.spec, 11);
        auto sp = discretize::solve_spectrum(cs.spec, 11);
        BoundContext ctx;
        ctx.n = cs.n;
        ctx.delta = 0.0;
        ctx.geometry = GeometryClass::flat;
        auto rep = bounds::check_all(sp, ctx, ids, couples, 1, 10, tol);
        int bad = 0;
        for (const auto& e : rep.entries)
            if (!e.holds)
                ++bad;
        c.require(bad == 0, cs.spec.describe() + ": " + std::to_string(bad) +
                                " inequality entries failed (tol " + std::to_string(tol) + ")");

        // main_clamp1 with delta = 0 and the quadratic couple must coincide
        // with wx_minimal
        auto vals = sp.values_expanded();
        auto quad = FGCouple::gap_pow_delta(2.0);
        for (int k = 1; k <= 10; ++k) {
            if (!gap_ok(vals, k))
                continue;
            std::span<const double> lam(vals.data(), static_cast<std::size_t>(k));
            auto a = bounds::evaluate(InequalityId::main_clamp1, lam, vals[k], ctx, &quad);
            auto b = bounds::evaluate(InequalityId::wx_minimal, lam, vals[k], ctx, nullptr);
            c.require(std::abs(a.rhs - b.rhs) <= 1e-12 * b.rhs &&
                          std::abs(a.lhs - b.lhs) <= 1e-12 * b.lhs,
                      cs.spec.describe() + ": clamp1/wx_minimal mismatch at k=" +
                          std::to_string(k));
        }
    }
}

void criterion_curved_suite(Check& c) {
    const auto couples = catalog_couples();

    // spherical cap, domain of S^2 itself: delta' = 1
    {
        auto spec = disk(1, 200);
        const double tol = disc_tolerance(spec, 11);
        auto sp = discretize::solve_spectrum(spec, 11);
        BoundContext ctx;
        ctx.n = 2;
        ctx.delta_prime = 1.0;
        ctx.geometry = GeometryClass::sphere;
        std::vector<InequalityId> ids{InequalityId::clamp2, InequalityId::wang_xia_sphere,
                                      InequalityId::cim_sphere};
        auto rep = bounds::check_all(sp, ctx, ids, couples, 1, 10, tol);
        int bad = 0;
        for (const auto& e : rep.entries)
            if (!e.holds)
                ++bad;
        c.require(bad == 0, "spherical cap: " + std::to_string(bad) + " entries failed");

        auto vals = sp.values_expanded();
        auto quad = FGCouple::gap_pow_delta(2.0);
        for (int k = 1; k <= 10; ++k) {
            if (!gap_ok(vals, k))
                continue;
            std::span<const double> lam(vals.data(), static_cast<std::size_t>(k));
            auto a = bounds::evaluate(InequalityId::clamp2, lam, vals[k], ctx, &quad);
            auto b = bounds::evaluate(InequalityId::wang_xia_sphere, lam, vals[k], ctx, nullptr);
            c.require(std::abs(a.rhs - b.rhs) <= 1e-12 * b.rhs,
                      "clamp2/wang_xia mismatch at k=" + std::to_string(k));
        }
    }

    // hyperbolic disk
    {
        auto spec = disk(-1, 200);
        const double tol = disc_tolerance(spec, 11);
        auto sp = discretize::solve_spectrum(spec, 11);
        BoundContext ctx;
        ctx.n = 2;
        ctx.geometry = GeometryClass::hyperbolic;
        std::vector<InequalityId> ids{InequalityId::hyperbolic};
        auto rep = bounds::check_all(sp, ctx, ids, couples, 1, 10, tol);
        int bad = 0;
        for (const auto& e : rep.entries)
            if (!e.holds)
                ++bad;
        c.require(bad == 0, "hyperbolic disk: " + std::to_string(bad) + " entries failed");
        c.require(!rep.entries.empty(), "hyperbolic report is empty");
    }
}

void criterion_eigenmap(Check& c) {
    auto map = geometry::flat_torus_eigenmap();
    auto rep = geometry::eigenmap_check(map, 1.0, 32, 32);
    c.require(rep.norm_residual <= 1e-8, "norm residual " + std::to_string(rep.norm_residual));
    c.require(rep.energy_residual <= 1e-8,
              "energy residual " + std::to_string(rep.energy_residual));
    c.require(rep.laplace_residual <= 1e-8,
              "Laplace residual " + std::to_string(rep.laplace_residual));

    // the unit square sits inside the 2pi-periodic flat torus, so its clamped
    // spectrum feeds the eigenmap inequality with lambda_map = 1
    auto sp = discretize::solve_spectrum(square(32), 11);
    BoundContext ctx;
    ctx.n = 2;
    ctx.lambda_map = 1.0;
    ctx.geometry = GeometryClass::flat;
    std::vector<InequalityId> ids{InequalityId::eigenmap};
    auto brep = bounds::check_all(sp, ctx, ids, catalog_couples(), 1, 10, 1e-10);
    int bad = 0;
    for (const auto& e : brep.entries)
        if (!e.holds)
            ++bad;
    c.require(bad == 0, "eigenmap inequality: " + std::to_string(bad) + " entries failed");
}

void criterion_bound_extraction(Check& c) {
    // closed form at k = 1, delta = 0
    {
        std::vector<double> lam{104.363};
        BoundContext ctx;
        ctx.n = 2;
        const double up = bounds::next_bound_quadratic(lam, ctx, InequalityId::cim_flat_l2);
        c.require(std::abs(up - 9.0 * lam[0]) <= 1e-13 * up, "9 lambda_1 closed form");
    }
    {
        std::vector<double> lam{500.564};
        BoundContext ctx;
        ctx.n = 1;
        const double up = bounds::next_bound_quadratic(lam, ctx, InequalityId::cim_flat_l2);
        c.require(std::abs(up - 25.0 * lam[0]) <= 1e-13 * up, "25 lambda_1 closed form");
    }

    struct Case {
        DomainSpec spec;
        int n;
    };
    for (const auto& cs :
         std::vector<Case>{{beam(200), 1}, {square(32), 2}, {disk(0, 160), 2}}) {
        auto vals = discretize::solve_spectrum(cs.spec, 11).values_expanded();
        BoundContext ctx;
        ctx.n = cs.n;
        for (int k = 1; k <= 10; ++k) {
            if (!gap_ok(vals, k))
                continue;
            std::span<const double> lam(vals.data(), static_cast<std::size_t>(k));
            const double up = bounds::next_bound_quadratic(lam, ctx, InequalityId::cim_flat_l2);
            c.require(vals[k] <= up, cs.spec.describe() + ": lambda_{k+1} above the bound at k=" +
                                         std::to_string(k));
        }
    }
}

void criterion_potential_shift(Check& c) {
    // coarse grid: ||B|| ~ 16/h^4 stays small enough that the exact operator
    // shift survives rounding to better than 1e-9 absolute
    DomainSpec plain = beam(12);
    DomainSpec with_q = plain;
    with_q.potential = [](double, double) { return 5.0; };

    auto v0 = discretize::solve_spectrum(plain, 6).values_expanded();
    auto vq = discretize::solve_spectrum(with_q, 6).values_expanded();
    for (int i = 0; i < 6; ++i)
        c.require(std::abs(vq[i] - (v0[i] + 5.0)) <= 1e-9,
                  "shift error " + std::to_string(std::abs(vq[i] - (v0[i] + 5.0))) + " at i=" +
                      std::to_string(i + 1));

    auto sp_q = discretize::solve_spectrum(with_q, 6);
    auto sp_shifted = discretize::solve_spectrum(plain, 6);
    for (auto& e : sp_shifted.entries)
        e.value += 5.0;

    BoundContext ctx;
    ctx.n = 1;
    ctx.delta = 0.0;
    ctx.geometry = GeometryClass::flat;
    ctx.q_inf = 5.0; // lambda-bar substitution under the square roots
    auto ids = bounds::applicable_ids(ctx);
    auto couples = catalog_couples();
    auto rep_q = bounds::check_all(sp_q, ctx, ids, couples, 1, 5, 1e-10);
    auto rep_s = bounds::check_all(sp_shifted, ctx, ids, couples, 1, 5, 1e-10);
    c.require(rep_q.entries.size() == rep_s.entries.size(), "report shapes differ");
    for (std::size_t i = 0; i < rep_q.entries.size() && i < rep_s.entries.size(); ++i) {
        const auto& a = rep_q.entries[i];
        const auto& b = rep_s.entries[i];
        const double scale = std::max({std::abs(a.lhs), std::abs(a.rhs), 1.0});
        c.require(std::abs(a.lhs - b.lhs) <= 1e-10 * scale &&
                      std::abs(a.rhs - b.rhs) <= 1e-10 * scale && a.holds == b.holds,
                  "report entry " + std::to_string(i) + " differs between routes");
    }
}

void criterion_membership(Check& c) {
    for (double lambda : {1.0, 1000.0}) {
        for (const auto& couple :
             {FGCouple::gap_pow_delta(2.0), FGCouple::gap_pow_delta(1.0),
              FGCouple::one_gap_alpha(0.0), FGCouple::one_gap_alpha(1.0),
              FGCouple::one_gap_alpha(3.5), FGCouple::gap_gap_beta(0.5),
              FGCouple::gap_gap_beta(2.0)}) {
            auto rep = families::check_membership(couple, lambda, 200);
            c.require(rep.no_violation, couple.describe() + " refused at lambda=" +
                                            std::to_string(lambda));
        }
    }

    // custom d = 3 couple: tabulated, refuted, worst pair reported
    const double lambda = 10.0;
    std::vector<double> xs, fs, gs;
    for (int j = 1; j <= 200; ++j) {
        const double x = lambda * j / 201.0;
        xs.push_back(x);
        fs.push_back(std::pow(lambda - x, 3.0));
        gs.push_back(std::pow(lambda - x, 3.0));
    }
    auto cubic = FGCouple::custom_table(xs, fs, gs, lambda);
    auto rep = families::check_membership(cubic, lambda, 200);
    c.require(!rep.no_violation, "cubic couple not refuted");
    c.require(rep.max_condition_value > rep.tolerance, "no violating pair reported");
    c.require(rep.worst_x != rep.worst_y, "degenerate worst pair");

    // positive scaling leaves verdicts unchanged
    auto plain = families::check_membership(FGCouple::gap_pow_delta(2.0), 50.0, 200);
    auto scaled = families::check_membership(FGCouple::gap_pow_delta(2.0, 3.7, 0.25), 50.0, 200);
    c.require(plain.no_violation == scaled.no_violation, "scaling changed a pass verdict");
    auto probe_plain = families::check_membership(FGCouple::power_probe(3.0), 50.0, 200);
    c.require(!probe_plain.no_violation, "probe unexpectedly passed");
}

void criterion_abstract_fuzz(Check& c) {
    auto couples = catalog_couples();
    auto rep = abstractlab::fuzz(1000, 12, 3, couples, 1u);
    c.require(rep.trials == 1000, "trial count");
    c.require(rep.violations == 0, std::to_string(rep.violations) + " violations");
    c.require(rep.min_slack_normalized >= -1e-9,
              "min normalized slack " + std::to_string(rep.min_slack_normalized));

    auto control = abstractlab::fuzz(50, 10, 2, couples, 2u,
                                     abstractlab::EvalMode::skew_sign_control);
    c.require(control.violations > 0, "skew-sign control produced no violation");
}

void criterion_proof_identities(Check& c) {
    struct Case {
        DomainSpec coarse, fine;
    };
    for (const auto& cs : std::vector<Case>{{beam(100), beam(200)}, {square(16), square(32)}}) {
        auto r1 = discretize::verify_proof_identities(cs.coarse, 5);
        auto r2 = discretize::verify_proof_identities(cs.fine, 5);
        double c1 = 0.0, c2 = 0.0;
        for (int i = 0; i < 5; ++i) {
            c1 = std::max(c1, r1.entries[i].commutator_identity_residual / r1.h);
            c2 = std::max(c2, r2.entries[i].commutator_identity_residual / r2.h);
            c.require(r1.entries[i].cauchy_schwarz_holds && r2.entries[i].cauchy_schwarz_holds,
                      "Cauchy-Schwarz bound failed");
        }
        // residual <= C h at both resolutions with a stable constant
        c.require(c2 <= 1.6 * std::max(c1, 1e-9),
                  cs.fine.describe() + ": constant grew from " + std::to_string(c1) + " to " +
                      std::to_string(c2));
        c.require(c1 < 100.0, "constant implausibly large: " + std::to_string(c1));
    }
}

} // namespace

int main() {
    std::printf("platelab acceptance suite\n");

    const auto t0 = std::chrono::steady_clock::now();
    report(1, "beam oracle", criterion_beam_oracle, 30.0);
    report(2, "disk oracle", criterion_disk_oracle, 120.0);
    report(3, "flat suite", criterion_flat_suite);
    report(4, "curved suite", criterion_curved_suite);
    report(5, "eigenmap", criterion_eigenmap);
    report(6, "bound extraction", criterion_bound_extraction);
    report(7, "potential shift", criterion_potential_shift);
    report(8, "family membership", criterion_membership);
    report(9, "abstract fuzz", criterion_abstract_fuzz, 60.0);
    report(10, "proof identities", criterion_proof_identities);
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::printf("%d of 10 criteria passed (%.1fs total)\n", 10 - g_failures, total);
    return g_failures == 0 ? 0 : 1;
}
