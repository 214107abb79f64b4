#pragma once

// Independent numerical oracles used by the test suites. These deliberately
// avoid the library's own linear algebra and discretization paths: roots come
// from bisection on series-evaluated special functions, eigenvalues from
// LDL^T inertia counts, eigenvectors from a plain cyclic Jacobi sweep.

#include <cstdint>
#include <vector>

#include "platelab/numlin.hpp"

namespace oracles {

// i-th positive root of cos(mu) cosh(mu) = 1 (clamped beam frequencies),
// i >= 1. Bisection; mu_1 ~ 4.730041.
double beam_mu(int i);

// Bessel J_m and modified I_m by power series (adequate for x < ~20).
double bessel_j(int m, double x);
double bessel_i(int m, double x);

// s-th positive root of J_m(k) I_m'(k) - J_m'(k) I_m(k) = 0 (clamped unit
// disk frequencies); lambda = k^4. k_{0,1} ~ 3.19622.
double disk_k(int m, int s);

// All eigenvalues of a dense symmetric matrix by Sylvester inertia counts
// (LDL^T factorizations of A - sigma I) and per-index bisection. Relative
// tolerance tol on each eigenvalue.
std::vector<double> inertia_bisection_eigenvalues(const platelab::numlin::SymMatrix& A,
                                                  double tol);

// Cyclic Jacobi eigensolver on a full row-major symmetric matrix; returns
// eigenvalues ascending and fills the eigenvector matrix (columns).
std::vector<double> jacobi_eigen(std::vector<double> a, int n, std::vector<double>& vectors);

// Random orthogonal matrix composed from seeded plane rotations (row-major).
std::vector<double> random_orthogonal(int n, std::uint64_t seed);

// Deterministic uniform doubles in [lo, hi] from a seeded generator.
std::vector<double> random_uniform(std::size_t count, double lo, double hi, std::uint64_t seed);

} // namespace oracles
