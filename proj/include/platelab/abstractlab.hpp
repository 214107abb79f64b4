#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platelab/families.hpp"

namespace platelab::abstractlab {

// Finite-dimensional test instance: a symmetric A with simple positive
// spectrum, symmetric coupling operators B_p and skew-symmetric T_p, and a
// cutoff k with a guaranteed gap lambda_{k+1} > lambda_k. The optional
// imaginary part A_imag (skew) turns A into a complex Hermitian operator;
// B_p and T_p stay real in that mode.
struct OperatorInstance {
    int dim = 0;
    int n_ops = 0;
    int k = 1;
    std::uint64_t seed = 0;
    bool complex_field = false;
    std::vector<double> A;                // dim*dim row-major, symmetric
    std::vector<double> A_imag;           // dim*dim skew, empty unless complex_field
    std::vector<std::vector<double>> B;   // symmetric
    std::vector<std::vector<double>> T;   // skew-symmetric
};

OperatorInstance random_instance(int dim, int n_ops, std::uint64_t seed);
OperatorInstance random_instance_complex(int dim, int n_ops, std::uint64_t seed);

enum class EvalMode {
    standard,
    // Negative control: reduces ||T_p u||^2 through <T_p^2 u, u> as if T_p
    // were symmetric instead of skew, flipping the sign that skewness
    // contributes. The resulting "inequality" is false and the fuzzer must
    // catch it.
    skew_sign_control,
};

struct Sides {
    double lhs = 0.0;
    double rhs = 0.0;
    std::vector<double> eigenvalues;
    double slack() const { return rhs - lhs; }
    double scale() const;
};

// Both sides of the abstract commutator inequality for the instance, with
// f and g evaluated at the computed eigenvalues and Lambda = lambda_{k+1}.
// Membership of the couple at that Lambda is the caller's precondition (the
// refutation probes exercise non-members on purpose).
Sides theorem_sides(const OperatorInstance& inst, const families::FGCouple& couple,
                    EvalMode mode = EvalMode::standard);

struct FuzzReport {
    int trials = 0;
    int evaluations = 0;
    int violations = 0;       // member couples violating: a genuine failure
    int probe_violations = 0; // non-member couples violating: expected evidence
    double min_slack_normalized = 0.0;
    std::optional<OperatorInstance> worst_instance;
    std::string worst_couple;
    bool passed() const { return violations == 0; }
};

FuzzReport fuzz(int trial_count, int dim_max, int n_ops_max,
                std::span<const families::FGCouple> couples, std::uint64_t seed,
                EvalMode mode = EvalMode::standard);

// Self-describing text dump, reloadable by the abstract-test CLI.
void save_replay(const OperatorInstance& inst, std::ostream& out);
void save_replay_file(const OperatorInstance& inst, const std::string& path);
OperatorInstance load_replay_file(const std::string& path);

} // namespace platelab::abstractlab
