#include "platelab/families.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "platelab/errors.hpp"

namespace platelab::families {

FGCouple FGCouple::one_gap_alpha(double alpha, double cf, double cg) {
    if (alpha < 0.0)
        throw input_error("one_gap_alpha requires alpha >= 0");
    if (cf <= 0.0 || cg <= 0.0)
        throw input_error("scale factors must be positive");
    FGCouple c;
    c.kind_ = FamilyKind::one_gap_alpha;
    c.param_ = alpha;
    c.cf_ = cf;
    c.cg_ = cg;
    return c;
}

FGCouple FGCouple::gap_gap_beta(double beta, double cf, double cg) {
    if (beta < 0.5)
        throw input_error("gap_gap_beta requires beta >= 1/2");
    if (cf <= 0.0 || cg <= 0.0)
        throw input_error("scale factors must be positive");
    FGCouple c;
    c.kind_ = FamilyKind::gap_gap_beta;
    c.param_ = beta;
    c.cf_ = cf;
    c.cg_ = cg;
    return c;
}

FGCouple FGCouple::gap_pow_delta(double d, double cf, double cg) {
    if (!(d > 0.0) || d > 2.0)
        throw input_error("gap_pow_delta requires 0 < d <= 2");
    if (cf <= 0.0 || cg <= 0.0)
        throw input_error("scale factors must be positive");
    FGCouple c;
    c.kind_ = FamilyKind::gap_pow_delta;
    c.param_ = d;
    c.cf_ = cf;
    c.cg_ = cg;
    return c;
}

FGCouple FGCouple::power_probe(double d) {
    FGCouple c;
    c.kind_ = FamilyKind::custom_power;
    c.param_ = d;
    return c;
}

FGCouple FGCouple::custom_table(std::vector<double> xs, std::vector<double> fs,
                                std::vector<double> gs, double lambda) {
    if (xs.size() != fs.size() || xs.size() != gs.size() || xs.size() < 4)
        throw input_error("custom_table: need at least 4 consistent samples");
    if (!(lambda > 0.0))
        throw input_error("custom_table: lambda must be positive");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(xs[i] < lambda) || (i > 0 && xs[i] <= xs[i - 1]))
            throw input_error("custom_table: x samples must be increasing within (0, lambda)");
        if (!(fs[i] > 0.0) || !(gs[i] > 0.0))
            throw input_error("custom_table: f and g must be positive");
    }
    FGCouple c;
    c.kind_ = FamilyKind::custom_table;
    c.xs_ = std::move(xs);
    c.fs_ = std::move(fs);
    c.gs_ = std::move(gs);
    c.table_lambda_ = lambda;
    return c;
}

FGCouple FGCouple::custom_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("custom couple file not readable: " + path);
    std::string line;
    double lambda = 0.0;
    std::vector<double> fs, gs;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first))
            continue;
        if (first == "lambda") {
            std::string eq;
            if (!(ss >> eq >> lambda) || eq != "=" || !(lambda > 0.0))
                throw input_error(path + ":" + std::to_string(lineno) +
                                  ": expected 'lambda = <positive value>'");
            continue;
        }
        double f = std::stod(first), g = 0.0;
        if (!(ss >> g))
            throw input_error(path + ":" + std::to_string(lineno) + ": expected two columns");
        fs.push_back(f);
        gs.push_back(g);
    }
    if (lambda <= 0.0)
        throw input_error(path + ": missing 'lambda = <value>' header");
    const std::size_t n = fs.size();
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j)
        xs[j] = lambda * static_cast<double>(j + 1) / static_cast<double>(n + 1);
    return custom_table(std::move(xs), std::move(fs), std::move(gs), lambda);
}

bool FGCouple::catalog_member() const noexcept {
    switch (kind_) {
    case FamilyKind::one_gap_alpha:
        return param_ >= 0.0;
    case FamilyKind::gap_gap_beta:
        return param_ >= 0.5;
    case FamilyKind::gap_pow_delta:
        return param_ > 0.0 && param_ <= 2.0;
    default:
        return false;
    }
}

std::string FGCouple::describe() const {
    std::ostringstream s;
    switch (kind_) {
    case FamilyKind::one_gap_alpha:
        s << "one_gap_alpha:" << param_;
        break;
    case FamilyKind::gap_gap_beta:
        s << "gap_gap_beta:" << param_;
        break;
    case FamilyKind::gap_pow_delta:
        s << "gap_pow_delta:" << param_;
        break;
    case FamilyKind::custom_power:
        s << "custom_power:" << param_;
        break;
    case FamilyKind::custom_table:
        s << "custom_table(n=" << xs_.size() << ",lambda=" << table_lambda_ << ")";
        break;
    }
    if (cf_ != 1.0 || cg_ != 1.0)
        s << "[cf=" << cf_ << ",cg=" << cg_ << "]";
    return s.str();
}

std::pair<double, double> FGCouple::eval_table(double x) const {
    // linear interpolation; constant extension within the first/last cell
    const auto& xs = xs_;
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin())
        return {fs_.front(), gs_.front()};
    if (it == xs.end())
        return {fs_.back(), gs_.back()};
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return {fs_[lo] + t * (fs_[hi] - fs_[lo]), gs_[lo] + t * (gs_[hi] - gs_[lo])};
}

std::pair<double, double> FGCouple::eval(double lambda, double x) const {
    if (!(x > 0.0) || !(x < lambda))
        throw domain_error("FGCouple::eval: x must lie in (0, lambda)");
    const double gap = lambda - x;
    switch (kind_) {
    case FamilyKind::one_gap_alpha:
        return {cf_, cg_ * std::pow(gap, param_)};
    case FamilyKind::gap_gap_beta:
        return {cf_ * gap, cg_ * std::pow(gap, param_)};
    case FamilyKind::gap_pow_delta:
    case FamilyKind::custom_power: {
        const double v = std::pow(gap, param_);
        return {cf_ * v, cg_ * v};
    }
    case FamilyKind::custom_table:
        return eval_table(x);
    }
    return {0.0, 0.0}; // unreachable
}

double FGCouple::dlnf(double lambda, double x) const {
    const double gap = lambda - x;
    switch (kind_) {
    case FamilyKind::one_gap_alpha:
        return 0.0;
    case FamilyKind::gap_gap_beta:
        return -1.0 / gap;
    case FamilyKind::gap_pow_delta:
    case FamilyKind::custom_power:
        return -param_ / gap;
    case FamilyKind::custom_table: {
        const double h = lambda * 1e-6;
        const double f1 = eval_table(std::max(x - h, xs_.front())).first;
        const double f2 = eval_table(std::min(x + h, xs_.back())).first;
        return (std::log(f2) - std::log(f1)) / (2.0 * h);
    }
    }
    return 0.0;
}

double FGCouple::dlng(double lambda, double x) const {
    const double gap = lambda - x;
    switch (kind_) {
    case FamilyKind::one_gap_alpha:
    case FamilyKind::gap_gap_beta:
        return -param_ / gap;
    case FamilyKind::gap_pow_delta:
    case FamilyKind::custom_power:
        return -param_ / gap;
    case FamilyKind::custom_table: {
        const double h = lambda * 1e-6;
        const double g1 = eval_table(std::max(x - h, xs_.front())).second;
        const double g2 = eval_table(std::min(x + h, xs_.back())).second;
        return (std::log(g2) - std::log(g1)) / (2.0 * h);
    }
    }
    return 0.0;
}

namespace {

// Left-hand side of the defining condition for one pair (x, y):
//   ((f(x)-f(y))/(x-y))^2
//   + (f(x)^2/(g(x)(L-x)) + f(y)^2/(g(y)(L-y))) * (g(x)-g(y))/(x-y)
// Membership requires this to be <= 0 for all x != y in (0, L).
struct PairEval {
    double value = 0.0;
    double scale = 0.0;
    bool finite = true;
};

PairEval condition_lhs(const FGCouple& c, double lambda, double x, double y) {
    const auto [fx, gx] = c.eval(lambda, x);
    const auto [fy, gy] = c.eval(lambda, y);
    const double slope_f = (fx - fy) / (x - y);
    const double slope_g = (gx - gy) / (x - y);
    const double ax = fx * fx / (gx * (lambda - x));
    const double ay = fy * fy / (gy * (lambda - y));
    const double t1 = slope_f * slope_f;
    const double t2 = (ax + ay) * slope_g;
    PairEval out;
    out.value = t1 + t2;
    // The divided differences cancel catastrophically for couples on the
    // equality boundary (d = 2, beta = 1/2), so the roundoff scale carries
    // the 1/|x-y| amplification, not just |t1| + |t2|.
    const double guard = (std::abs(fx) + std::abs(fy)) * std::abs(slope_f) / std::abs(x - y) +
                         (std::abs(gx) + std::abs(gy)) * (ax + ay) / std::abs(x - y);
    out.scale = std::abs(t1) + std::abs(t2) + guard;
    out.finite = std::isfinite(out.value);
    return out;
}

} // namespace

MembershipReport check_membership(const FGCouple& couple, double lambda, int grid_n) {
    if (grid_n < 16)
        throw input_error("check_membership: grid_n must be >= 16");
    if (!(lambda > 0.0))
        throw input_error("check_membership: lambda must be positive");

    std::vector<double> xs(grid_n);
    for (int i = 0; i < grid_n; ++i)
        xs[i] = lambda * static_cast<double>(i + 1) / static_cast<double>(grid_n + 1);

    MembershipReport rep;
    rep.max_condition_value = -std::numeric_limits<double>::infinity();
    double scale = 1.0;

    auto consider = [&](double x, double y) {
        const PairEval pe = condition_lhs(couple, lambda, x, y);
        ++rep.pairs_checked;
        if (!pe.finite) {
            ++rep.overflow_warnings;
            return;
        }
        scale = std::max(scale, pe.scale);
        if (pe.value > rep.max_condition_value) {
            rep.max_condition_value = pe.value;
            rep.worst_x = x;
            rep.worst_y = y;
        }
    };

    for (int i = 0; i < grid_n; ++i)
        for (int j = i + 1; j < grid_n; ++j)
            consider(xs[i], xs[j]);

    // near-coincident pairs pick up the y -> x limit that governs the
    // catalog boundary cases (equality at d = 2, beta = 1/2)
    const double eps = lambda * 1e-5;
    for (int i = 0; i < grid_n; ++i) {
        const double x = xs[i];
        if (x + eps < lambda)
            consider(x, x + eps);
    }

    rep.tolerance = 1e-12 * scale;
    rep.no_violation = rep.max_condition_value <= rep.tolerance;
    return rep;
}

bool check_necessary_diff(const FGCouple& couple, double lambda, int grid_n) {
    if (grid_n < 2)
        throw input_error("check_necessary_diff: grid_n must be >= 2");
    for (int i = 0; i < grid_n; ++i) {
        const double x = lambda * static_cast<double>(i + 1) / static_cast<double>(grid_n + 1);
        const double lf = couple.dlnf(lambda, x);
        const double lhs = lf * lf;
        const double rhs = (-2.0 / (lambda - x)) * couple.dlng(lambda, x);
        const double tol = 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
        if (lhs > rhs + tol)
            return false;
    }
    return true;
}

} // namespace platelab::families
