#include "platelab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "platelab/errors.hpp"

namespace platelab::bounds {

namespace {

struct IdName {
    InequalityId id;
    const char* name;
};

constexpr IdName kIdNames[] = {
    {InequalityId::ashbaugh, "ashbaugh"},
    {InequalityId::hile_yeh_strong, "hile_yeh_strong"},
    {InequalityId::cheng_yang, "cheng_yang"},
    {InequalityId::cim_flat_l2, "cim_flat_l2"},
    {InequalityId::wang_xia_sphere, "wang_xia_sphere"},
    {InequalityId::cim_sphere, "cim_sphere"},
    {InequalityId::wx_minimal, "wx_minimal"},
    {InequalityId::wx_minimal_simple, "wx_minimal_simple"},
    {InequalityId::cim_submanifold, "cim_submanifold"},
    {InequalityId::main_clamp1, "main_clamp1"},
    {InequalityId::clamp2, "clamp2"},
    {InequalityId::eigenmap, "eigenmap"},
    {InequalityId::hyperbolic, "hyperbolic"},
};

double cn(int n) { return 8.0 * (n + 2.0) / (static_cast<double>(n) * n); }

} // namespace

const char* to_string(InequalityId id) {
    for (const auto& e : kIdNames)
        if (e.id == id)
            return e.name;
    return "?";
}

InequalityId id_from_string(const std::string& name) {
    for (const auto& e : kIdNames)
        if (name == e.name)
            return e.id;
    throw input_error("unknown inequality id: " + name);
}

bool couple_required(InequalityId id) {
    return id == InequalityId::main_clamp1 || id == InequalityId::clamp2 ||
           id == InequalityId::eigenmap || id == InequalityId::hyperbolic;
}

GeometryClass geometry_from_string(const std::string& name) {
    if (name == "flat")
        return GeometryClass::flat;
    if (name == "sphere")
        return GeometryClass::sphere;
    if (name == "hyperbolic")
        return GeometryClass::hyperbolic;
    throw input_error("unknown geometry class: " + name);
}

const char* to_string(GeometryClass g) {
    switch (g) {
    case GeometryClass::flat:
        return "flat";
    case GeometryClass::sphere:
        return "sphere";
    case GeometryClass::hyperbolic:
        return "hyperbolic";
    }
    return "?";
}

bool BoundReport::all_hold() const {
    for (const auto& e : entries)
        if (!e.holds)
            return false;
    return true;
}

std::vector<double> shifted_values(std::span<const double> values, double q_inf) {
    std::vector<double> out(values.begin(), values.end());
    if (q_inf == 0.0)
        return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] -= q_inf;
        if (!(out[i] > 0.0))
            throw platelab::domain_error("shifted_values: lambda_" + std::to_string(i + 1) +
                                         " - q_inf is nonpositive");
    }
    return out;
}

std::vector<InequalityId> applicable_ids(const BoundContext& ctx) {
    std::vector<InequalityId> ids;
    switch (ctx.geometry) {
    case GeometryClass::flat:
        ids = {InequalityId::ashbaugh, InequalityId::hile_yeh_strong, InequalityId::cheng_yang,
               InequalityId::cim_flat_l2, InequalityId::wx_minimal,
               InequalityId::wx_minimal_simple};
        if (ctx.delta) {
            ids.push_back(InequalityId::cim_submanifold);
            ids.push_back(InequalityId::main_clamp1);
        }
        if (ctx.lambda_map)
            ids.push_back(InequalityId::eigenmap);
        break;
    case GeometryClass::sphere:
        ids = {InequalityId::wang_xia_sphere, InequalityId::cim_sphere};
        if (ctx.delta_prime)
            ids.push_back(InequalityId::clamp2);
        if (ctx.lambda_map)
            ids.push_back(InequalityId::eigenmap);
        break;
    case GeometryClass::hyperbolic:
        ids = {InequalityId::hyperbolic};
        break;
    }
    return ids;
}

namespace {

double require(const std::optional<double>& v, const char* what, InequalityId id) {
    if (!v)
        throw config_error(std::string("inequality ") + to_string(id) +
                           " needs the context constant " + what);
    return *v;
}

// product-of-brackets right-hand side shared by the parametric forms:
//   pref * sqrt( sum g(l_i) * A_i ) * sqrt( sum f(l_i)^2/(g(l_i)(L-l_i)) * B_i )
struct ParametricTerms {
    double lhs;          // sum f(lambda_i)
    double first_sum;    // sum g * A
    double second_sum;   // sum (f^2/(g gap)) * B
};

template <typename FA, typename FB>
ParametricTerms parametric_sums(std::span<const double> lam, std::span<const double> shifted,
                                double Lambda, const families::FGCouple& c, FA bracketA,
                                FB bracketB) {
    ParametricTerms t{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const auto [f, g] = c.eval(Lambda, lam[i]);
        const double s = std::sqrt(shifted[i]);
        const double gap = Lambda - lam[i];
        t.lhs += f;
        t.first_sum += g * bracketA(s);
        t.second_sum += (f * f / (g * gap)) * bracketB(s);
    }
    return t;
}

} // namespace

BoundEntry evaluate(InequalityId id, std::span<const double> lambdas, double Lambda,
                    const BoundContext& ctx, const families::FGCouple* couple, double tol_rel) {
    const int k = static_cast<int>(lambdas.size());
    if (k < 1)
        throw input_error("evaluate: need at least one eigenvalue");
    for (int i = 1; i < k; ++i)
        if (lambdas[i] < lambdas[i - 1])
            throw input_error("evaluate: eigenvalues must be nondecreasing");
    const double lam_k = lambdas[k - 1];
    if (!(Lambda - lam_k > 1e-8 * std::max(std::abs(Lambda), 1.0)))
        throw gap_error("evaluate: Lambda does not exceed lambda_k by the required gap");
    if (!(lambdas[0] > 0.0))
        throw input_error("evaluate: eigenvalues must be positive");

    const int n = ctx.n;
    if (n < 1)
        throw input_error("evaluate: context dimension n must be >= 1");

    if (couple_required(id)) {
        if (couple == nullptr)
            throw config_error(std::string("inequality ") + to_string(id) +
                               " requires an (f,g) couple");
        auto mem = families::check_membership(*couple, Lambda, 64);
        if (!mem.no_violation)
            throw input_error(std::string("couple ") + couple->describe() +
                              " fails membership at Lambda=" + std::to_string(Lambda));
    }

    const std::vector<double> shifted = shifted_values(lambdas, ctx.q_inf);
    std::vector<double> s(k), gap(k);
    for (int i = 0; i < k; ++i) {
        s[i] = std::sqrt(shifted[i]);
        gap[i] = Lambda - lambdas[i];
    }

    BoundEntry e;
    e.id = id;
    e.k = k;
    e.lambda_used = Lambda;
    if (couple)
        e.couple = couple->describe();

    double gap2 = 0.0;
    for (int i = 0; i < k; ++i)
        gap2 += gap[i] * gap[i];

    switch (id) {
    case InequalityId::ashbaugh: {
        double sum_s = 0.0;
        for (int i = 0; i < k; ++i)
            sum_s += s[i];
        e.lhs = Lambda - lam_k;
        e.rhs = cn(n) / (static_cast<double>(k) * k) * sum_s * sum_s;
        break;
    }
    case InequalityId::hile_yeh_strong: {
        double sum_ratio = 0.0, sum_s = 0.0;
        for (int i = 0; i < k; ++i) {
            sum_ratio += s[i] / gap[i];
            sum_s += s[i];
        }
        e.lhs = static_cast<double>(k) * k / cn(n);
        e.rhs = sum_ratio * sum_s;
        break;
    }
    case InequalityId::cheng_yang: {
        double sum_gap = 0.0, sum_mix = 0.0;
        for (int i = 0; i < k; ++i) {
            sum_gap += gap[i];
            sum_mix += s[i] * std::sqrt(gap[i]);
        }
        e.lhs = sum_gap;
        e.rhs = std::sqrt(cn(n)) * sum_mix;
        break;
    }
    case InequalityId::cim_flat_l2:
    case InequalityId::wx_minimal_simple: {
        // these displays carry lambda_i linearly, not under a square root,
        // so the potential shift leaves them untouched
        double sum = 0.0;
        for (int i = 0; i < k; ++i)
            sum += gap[i] * lambdas[i];
        e.lhs = gap2;
        e.rhs = cn(n) * sum;
        break;
    }
    case InequalityId::wang_xia_sphere: {
        double a = 0.0, b = 0.0;
        for (int i = 0; i < k; ++i) {
            a += gap[i] * gap[i] * (n * n + (2.0 * n + 4.0) * s[i]);
            b += gap[i] * (n * n + 4.0 * s[i]);
        }
        e.lhs = gap2;
        e.rhs = std::sqrt(a) * std::sqrt(b) / n;
        break;
    }
    case InequalityId::cim_sphere: {
        double sum = 0.0;
        for (int i = 0; i < k; ++i)
            sum += gap[i] * (2.0 * (n + 2.0) * s[i] + n * n) * (4.0 * s[i] + n * n);
        e.lhs = gap2;
        e.rhs = sum / (static_cast<double>(n) * n);
        break;
    }
    case InequalityId::wx_minimal: {
        double a = 0.0, b = 0.0;
        for (int i = 0; i < k; ++i) {
            a += gap[i] * gap[i] * s[i];
            b += gap[i] * s[i];
        }
        e.lhs = gap2;
        e.rhs = std::sqrt(cn(n)) * std::sqrt(a) * std::sqrt(b);
        break;
    }
    case InequalityId::cim_submanifold: {
        const double delta = require(ctx.delta, "delta", id);
        double sum = 0.0;
        for (int i = 0; i < k; ++i)
            sum += gap[i] * (n * n * delta + 2.0 * (n + 2.0) * s[i]) *
                   (n * n * delta + 4.0 * s[i]);
        e.lhs = gap2;
        e.rhs = sum / (static_cast<double>(n) * n);
        break;
    }
    case InequalityId::main_clamp1: {
        const double delta = require(ctx.delta, "delta", id);
        auto t = parametric_sums(
            lambdas, shifted, Lambda, *couple,
            [&](double si) { return 2.0 * (n + 2.0) * si + n * n * delta; },
            [&](double si) { return si + 0.25 * n * n * delta; });
        e.lhs = t.lhs;
        e.rhs = (2.0 / n) * std::sqrt(t.first_sum) * std::sqrt(t.second_sum);
        break;
    }
    case InequalityId::clamp2: {
        const double dp = require(ctx.delta_prime, "delta_prime", id);
        auto t = parametric_sums(
            lambdas, shifted, Lambda, *couple,
            [&](double si) { return 2.0 * (n + 2.0) * si + n * n * dp; },
            [&](double si) { return si + 0.25 * n * n * dp; });
        e.lhs = t.lhs;
        e.rhs = (2.0 / n) * std::sqrt(t.first_sum) * std::sqrt(t.second_sum);
        break;
    }
    case InequalityId::eigenmap: {
        const double lm = require(ctx.lambda_map, "lambda_map", id);
        auto t = parametric_sums(
            lambdas, shifted, Lambda, *couple, [&](double si) { return lm + 6.0 * si; },
            [&](double si) { return lm + 4.0 * si; });
        e.lhs = t.lhs;
        e.rhs = std::sqrt(t.first_sum) * std::sqrt(t.second_sum);
        break;
    }
    case InequalityId::hyperbolic: {
        const double c = (n - 1.0) * (n - 1.0);
        auto t = parametric_sums(
            lambdas, shifted, Lambda, *couple, [&](double si) { return 6.0 * si - c; },
            [&](double si) { return 4.0 * si - c; });
        e.lhs = t.lhs;
        e.rhs = std::sqrt(t.first_sum) * std::sqrt(t.second_sum);
        // the displays are computed literally; negative bracketed sums are
        // only flagged
        if (t.first_sum < 0.0)
            e.flags.push_back("negative first bracketed sum");
        if (t.second_sum < 0.0)
            e.flags.push_back("negative second bracketed sum");
        break;
    }
    }

    e.slack = e.rhs - e.lhs;
    const double scale = std::max(std::abs(e.lhs), std::abs(e.rhs));
    e.holds = std::isfinite(e.slack) && e.slack >= -tol_rel * scale;
    if (!std::isfinite(e.rhs))
        e.flags.push_back("non-finite right-hand side");
    return e;
}

BoundReport check_all(const discretize::Spectrum& spectrum, const BoundContext& ctx,
                      std::span<const InequalityId> ids,
                      std::span<const families::FGCouple> couples, int k_min, int k_max,
                      double tol_rel) {
    if (k_min < 1 || k_max < k_min)
        throw input_error("check_all: bad k range");
    const std::vector<double> vals = spectrum.values_expanded();
    if (static_cast<int>(vals.size()) < k_max + 1)
        throw input_error("check_all: spectrum must contain at least k_max+1 values");

    const auto applicable = applicable_ids(ctx);
    BoundReport rep;
    rep.ctx = ctx;

    for (int k = k_min; k <= k_max; ++k) {
        const double Lambda = vals[k];
        const double gap = Lambda - vals[k - 1];
        if (!(gap > 1e-8 * std::max(Lambda, 1.0))) {
            rep.skipped.push_back("k=" + std::to_string(k) +
                                  ": relative gap below 1e-8, theorem hypothesis not met");
            continue;
        }
        std::span<const double> lam(vals.data(), static_cast<std::size_t>(k));
        for (InequalityId id : ids) {
            if (std::find(applicable.begin(), applicable.end(), id) == applicable.end())
                continue;
            if (couple_required(id)) {
                for (const auto& c : couples)
                    rep.entries.push_back(evaluate(id, lam, Lambda, ctx, &c, tol_rel));
            } else {
                rep.entries.push_back(evaluate(id, lam, Lambda, ctx, nullptr, tol_rel));
            }
        }
    }
    return rep;
}

namespace {

// weight w_i of the quadratic inequalities sum gap_i^2 <= sum gap_i w_i;
// plain_lambda feeds the linear display, shifted_lambda the square roots
double quadratic_weight(InequalityId id, const BoundContext& ctx, double plain_lambda,
                        double shifted_lambda) {
    const int n = ctx.n;
    const double s = std::sqrt(shifted_lambda);
    switch (id) {
    case InequalityId::cim_flat_l2:
        return cn(n) * plain_lambda;
    case InequalityId::cim_sphere:
        return (2.0 * (n + 2.0) * s + n * n) * (4.0 * s + n * n) /
               (static_cast<double>(n) * n);
    case InequalityId::cim_submanifold: {
        const double delta = require(ctx.delta, "delta", id);
        return (n * n * delta + 2.0 * (n + 2.0) * s) * (n * n * delta + 4.0 * s) /
               (static_cast<double>(n) * n);
    }
    default:
        throw input_error("next_bound_quadratic: id is not one of the quadratic forms");
    }
}

} // namespace

double next_bound_quadratic(std::span<const double> lambdas, const BoundContext& ctx,
                            InequalityId id) {
    const int k = static_cast<int>(lambdas.size());
    if (k < 1)
        throw input_error("next_bound_quadratic: need at least one eigenvalue");
    const std::vector<double> shifted = shifted_values(lambdas, ctx.q_inf);

    // F(L) = sum (L - l_i)^2 - sum (L - l_i) w_i  =  k L^2 - (2 S1 + W) L + (S2 + P)
    double S1 = 0.0, S2 = 0.0, W = 0.0, P = 0.0;
    for (int i = 0; i < k; ++i) {
        const double w = quadratic_weight(id, ctx, lambdas[i], shifted[i]);
        S1 += lambdas[i];
        S2 += lambdas[i] * lambdas[i];
        W += w;
        P += lambdas[i] * w;
    }
    const double b = 2.0 * S1 + W;
    const double disc = b * b - 4.0 * k * (S2 + P);
    if (disc < 0.0)
        throw internal_error("next_bound_quadratic: negative discriminant on supposedly "
                             "valid spectral data");
    const double root = (b + std::sqrt(disc)) / (2.0 * k);
    if (root < lambdas[k - 1] * (1.0 - 1e-12))
        throw internal_error("next_bound_quadratic: root fell below lambda_k");
    return root;
}

BisectionResult next_bound_bisection(std::span<const double> lambdas, const BoundContext& ctx,
                                     InequalityId id, const families::FGCouple& couple,
                                     double lambda_cap) {
    const int k = static_cast<int>(lambdas.size());
    if (k < 1)
        throw input_error("next_bound_bisection: need at least one eigenvalue");
    const double lam_k = lambdas[k - 1];

    BisectionResult res;
    auto slack_at = [&](double L) {
        const families::FGCouple* c = couple_required(id) ? &couple : nullptr;
        ++res.samples;
        return evaluate(id, lambdas, L, ctx, c, 1e-10).slack;
    };

    if (lambda_cap <= lam_k) {
        lambda_cap = 4.0 * lam_k;
        // grow until the inequality fails somewhere (it must for large L,
        // where lhs outgrows rhs)
        int grow = 0;
        while (slack_at(lambda_cap) > 0.0) {
            lambda_cap *= 4.0;
            if (++grow > 24) {
                res.note = "cap exhausted without a sign change";
                return res;
            }
        }
    } else if (slack_at(lambda_cap) > 0.0) {
        res.note = "cap exhausted without a sign change";
        return res;
    }

    // geometric sign sweep: expect + ... + - ... -
    const int samples = 96;
    const double lo = lam_k * (1.0 + 1e-7);
    double last_pos = lo;
    double first_neg = lambda_cap;
    int sign_changes = 0;
    double prev = slack_at(lo);
    if (prev <= 0.0) {
        res.note = "slack nonpositive immediately above lambda_k";
        return res;
    }
    for (int i = 1; i <= samples; ++i) {
        const double L = lo * std::pow(lambda_cap / lo, static_cast<double>(i) / samples);
        const double sl = slack_at(L);
        if ((prev > 0.0) != (sl > 0.0))
            ++sign_changes;
        if (sl > 0.0)
            last_pos = L;
        else
            first_neg = std::min(first_neg, L);
        prev = sl;
    }
    if (sign_changes != 1 || last_pos > first_neg) {
        res.note = "non-monotone sign pattern; bound inconclusive";
        return res;
    }

    double a = last_pos, b = first_neg;
    while (b - a > 1e-12 * b) {
        const double mid = 0.5 * (a + b);
        if (slack_at(mid) > 0.0)
            a = mid;
        else
            b = mid;
    }
    res.conclusive = true;
    res.lambda_upper = b;
    std::ostringstream note;
    note << "sign certified on " << samples << " geometric samples in (" << lo << ", "
         << lambda_cap << "]";
    res.note = note.str();
    return res;
}

} // namespace platelab::bounds
