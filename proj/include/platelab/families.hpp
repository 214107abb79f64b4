#pragma once

#include <string>
#include <utility>
#include <vector>

namespace platelab::families {

enum class FamilyKind {
    one_gap_alpha, // (1, (L-x)^alpha), alpha >= 0
    gap_gap_beta,  // ((L-x), (L-x)^beta), beta >= 1/2
    gap_pow_delta, // ((L-x)^d, (L-x)^d), 0 < d <= 2
    custom_power,  // (L-x)^d with d outside the catalog range; refutation probe
    custom_table,  // tabulated f, g on a fixed lambda
};

// A parametric couple (f, g) of positive functions on (0, lambda). Catalog
// families are evaluated in closed form for any lambda; tabulated couples are
// tied to the lambda recorded in their table.
class FGCouple {
  public:
    static FGCouple one_gap_alpha(double alpha, double cf = 1.0, double cg = 1.0);
    static FGCouple gap_gap_beta(double beta, double cf = 1.0, double cg = 1.0);
    static FGCouple gap_pow_delta(double d, double cf = 1.0, double cg = 1.0);
    // f = g = (lambda-x)^d without the 0 < d <= 2 restriction; used to probe
    // that membership checking refutes non-members.
    static FGCouple power_probe(double d);
    static FGCouple custom_table(std::vector<double> xs, std::vector<double> fs,
                                 std::vector<double> gs, double lambda);
    // Two-column file: header line "lambda = <value>", then one "f g" pair
    // per line on the implied uniform grid x_j = lambda * j / (count + 1).
    static FGCouple custom_from_file(const std::string& path);

    // (f(x), g(x)); throws domain_error unless 0 < x < lambda.
    std::pair<double, double> eval(double lambda, double x) const;

    // d/dx ln f and ln g (closed form for power-law kinds, finite
    // differences on the table for custom_table).
    double dlnf(double lambda, double x) const;
    double dlng(double lambda, double x) const;

    FamilyKind kind() const noexcept { return kind_; }
    double param() const noexcept { return param_; }
    double table_lambda() const noexcept { return table_lambda_; }
    bool closed_form() const noexcept { return kind_ != FamilyKind::custom_table; }
    // True for the three catalog families with parameters in range.
    bool catalog_member() const noexcept;
    std::string describe() const;

  private:
    FGCouple() = default;
    std::pair<double, double> eval_table(double x) const;

    FamilyKind kind_ = FamilyKind::gap_pow_delta;
    double param_ = 2.0;
    double cf_ = 1.0, cg_ = 1.0;
    std::vector<double> xs_, fs_, gs_;
    double table_lambda_ = 0.0;
};

struct MembershipReport {
    bool no_violation = false;      // condition held on the whole pair grid
    double max_condition_value = 0; // worst left-hand side of the two-point condition
    double tolerance = 0;
    double worst_x = 0, worst_y = 0;
    int pairs_checked = 0;
    int overflow_warnings = 0; // pairs skipped because a term was not finite
};

// Evaluates the defining two-point condition of the family over all unordered
// pairs of a grid_n-point grid on (0, lambda), plus forced near-coincident
// pairs (x, x + lambda*1e-5). A violation is definitive; a pass means "no
// violation found".
MembershipReport check_membership(const FGCouple& couple, double lambda, int grid_n);

// Differentiable necessary condition ((ln f)')^2 <= -2/(lambda-x) (ln g)'
// checked at grid points.
bool check_necessary_diff(const FGCouple& couple, double lambda, int grid_n);

} // namespace platelab::families
