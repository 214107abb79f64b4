#pragma once

#include <functional>
#include <string>
#include <vector>

namespace platelab::geometry {

using Vec = std::vector<double>;

// Two-parameter immersion into R^m, with optional analytic derivative
// callbacks; missing jets fall back to central finite differences with
// step eps^{1/3} scaled by the parameter range.
struct Immersion {
    std::string name;
    int dim_intrinsic = 2;
    int dim_ambient = 3;
    std::function<Vec(double, double)> map;
    std::function<Vec(double, double)> du, dv;          // first derivatives
    std::function<Vec(double, double)> duu, duv, dvv;   // second derivatives
    double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;      // parameter box
    bool flat_parameter_metric = false; // true when the pullback metric is the identity
};

// |H|^2 at one parameter point from the first and second fundamental forms,
// valid in any codimension (normal projection of the trace).
double mean_curvature_sq(const Immersion& imm, double u, double v);

struct DeltaEstimate {
    double value = 0.0;   // max over samples (a lower estimate of the sup)
    int samples = 0;      // total samples examined
    double arg_u = 0.0, arg_v = 0.0;
};

// sup |H|^2 over a dense parameter grid with local refinement rounds around
// the running maximum.
DeltaEstimate delta_sup(const Immersion& imm, int nu, int nv, int refine_rounds = 2);

enum class AmbientTag { euclidean, sphere, real_projective, complex_projective, quaternionic_projective };

struct AmbientKind {
    AmbientTag tag = AmbientTag::sphere;
    bool odd_dimensional = false; // meaningful for complex_projective only
    bool totally_real = false;    // meaningful for complex_projective only
};

// delta' of the rank-one ambient: sup(|H|^2 + 1) for the sphere, and
// sup(|H|^2 + d(n)) with d(n) from the standard embeddings otherwise. For
// complex projective ambients the sharper constants replace d(n) when the
// flags admit them.
double delta_prime(const AmbientKind& ambient, int n, double delta_h);

struct EigenmapReport {
    double norm_residual = 0.0;    // max |sum X_p^2 - 1|
    double energy_residual = 0.0;  // max |sum |grad X_p|^2 - lambda|
    double laplace_residual = 0.0; // max_p |Delta X_p + lambda X_p|
    int samples = 0;
    bool passed(double tol) const {
        return norm_residual <= tol && energy_residual <= tol && laplace_residual <= tol;
    }
};

// Verifies the eigenmap identities for a map with a flat parameter metric:
// sum X_p^2 = 1, sum |grad X_p|^2 = lambda, Delta X_p = -lambda X_p.
EigenmapReport eigenmap_check(const Immersion& map, double lambda, int nu, int nv);

// Built-in catalog (selectable by name in configs).
Immersion plane();
Immersion sphere();
Immersion torus_of_revolution(double R, double r);
Immersion product_of_circles(double r1, double r2);
Immersion flat_torus_eigenmap();
Immersion by_name(const std::string& name); // throws input_error on unknown names

} // namespace platelab::geometry
