#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platelab/discretize.hpp"
#include "platelab/families.hpp"

namespace platelab::bounds {

enum class InequalityId {
    ashbaugh,          // gap bound implicit in the Payne-Polya-Weinberger argument
    hile_yeh_strong,   // Hile-Yeh / Hook / Chen-Qian form
    cheng_yang,        // Cheng-Yang sum bound
    cim_flat_l2,       // quadratic bound for flat domains (l = 2 case)
    wang_xia_sphere,   // Wang-Xia product form on spherical domains
    cim_sphere,        // Chebyshev-weakened spherical form
    wx_minimal,        // Wang-Xia product form for minimal Euclidean submanifolds
    wx_minimal_simple, // its quadratic consequence
    cim_submanifold,   // quadratic form with the mean-curvature constant delta
    main_clamp1,       // parametric (f,g) inequality for Euclidean submanifolds
    clamp2,            // parametric inequality for rank-one symmetric ambients
    eigenmap,          // parametric inequality for domains admitting an eigenmap
    hyperbolic,        // parametric inequality on hyperbolic domains
};

const char* to_string(InequalityId id);
InequalityId id_from_string(const std::string& name); // throws input_error
bool couple_required(InequalityId id);

enum class GeometryClass { flat, sphere, hyperbolic };

GeometryClass geometry_from_string(const std::string& name);
const char* to_string(GeometryClass g);

struct BoundContext {
    int n = 2;                         // intrinsic dimension in the formulas
    std::optional<double> delta;       // sup |H|^2 for Euclidean submanifolds
    std::optional<double> delta_prime; // rank-one ambient constant
    std::optional<double> lambda_map;  // eigenmap eigenvalue
    double q_inf = 0.0;                // inf of the potential over the domain
    GeometryClass geometry = GeometryClass::flat;
};

struct BoundEntry {
    InequalityId id{};
    std::string couple; // empty for the fixed-form inequalities
    int k = 0;
    double lambda_used = 0.0; // the Lambda substituted for lambda_{k+1}
    double lhs = 0.0, rhs = 0.0, slack = 0.0;
    bool holds = false;
    std::vector<std::string> flags; // e.g. negative bracketed sums
};

struct BoundReport {
    BoundContext ctx;
    std::vector<BoundEntry> entries;
    std::vector<std::string> skipped; // k values dropped for tiny gaps
    bool all_hold() const;
};

// lambda_i - q_inf for each value; domain error if any shifted value is
// nonpositive (they sit under square roots).
std::vector<double> shifted_values(std::span<const double> values, double q_inf);

// Which inequalities check_all runs for a context.
std::vector<InequalityId> applicable_ids(const BoundContext& ctx);

// One inequality evaluated literally at Lambda (in place of lambda_{k+1})
// over lambda_1..lambda_k. The potential shift replaces lambda_i by
// lambda_i - q_inf under the square roots only. `couple` is consulted for the
// parametric forms and must pass membership at Lambda.
BoundEntry evaluate(InequalityId id, std::span<const double> lambdas, double Lambda,
                    const BoundContext& ctx, const families::FGCouple* couple,
                    double tol_rel = 1e-10);

// Every applicable (id, couple, k) combination against a computed spectrum,
// with Lambda := lambda_{k+1}. k values with a relative gap below 1e-8 are
// skipped and logged.
BoundReport check_all(const discretize::Spectrum& spectrum, const BoundContext& ctx,
                      std::span<const InequalityId> ids,
                      std::span<const families::FGCouple> couples, int k_min, int k_max,
                      double tol_rel = 1e-10);

// Largest root of the quadratic-in-Lambda inequalities; a rigorous upper
// bound for lambda_{k+1}. Valid ids: cim_flat_l2, cim_sphere,
// cim_submanifold.
double next_bound_quadratic(std::span<const double> lambdas, const BoundContext& ctx,
                            InequalityId id);

struct BisectionResult {
    bool conclusive = false;
    double lambda_upper = 0.0;
    int samples = 0;
    std::string note;
};

// Best-effort bound for general couples: locates the threshold above which
// the inequality fails for every sampled Lambda, certifying the sign pattern
// on a geometric sample; non-monotone sign patterns come back inconclusive.
BisectionResult next_bound_bisection(std::span<const double> lambdas, const BoundContext& ctx,
                                     InequalityId id, const families::FGCouple& couple,
                                     double lambda_cap = 0.0 /* 0: automatic */);

} // namespace platelab::bounds
