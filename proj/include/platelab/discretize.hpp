#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platelab/numlin.hpp"

namespace platelab::discretize {

enum class DomainKind { beam, rectangle, geodesic_disk };

// Scalar field sampled on the solver grid. Beam: called with (x, 0);
// rectangle: (x, y); geodesic disk: (r, 0) — radially symmetric by
// construction of the per-mode solver.
using GridFunction = std::function<double(double, double)>;

struct DomainSpec {
    DomainKind kind = DomainKind::beam;
    double length = 1.0;     // beam
    double a = 1.0, b = 1.0; // rectangle sides
    int curvature = 0;       // geodesic disk: -1, 0, +1
    double radius = 1.0;     // geodesic disk
    int m_max = -1;          // disk Fourier modes; -1 selects the default with escalation
    int grid_n = 64;         // cells per axis
    GridFunction potential;  // optional q
    GridFunction weight;     // optional rho > 0

    int dimension() const noexcept { return kind == DomainKind::beam ? 1 : 2; }
    void validate() const; // throws domain_error / input_error
    std::string describe() const;
};

struct SpectrumEntry {
    double value = 0.0;
    std::string mode_label;
    int multiplicity = 1;
};

struct Spectrum {
    std::vector<SpectrumEntry> entries; // nondecreasing values
    double h = 0.0;
    int dimension = 2;
    DomainSpec domain;

    // Values with multiplicities expanded, optionally truncated to k values.
    std::vector<double> values_expanded(int k = -1) const;
};

// One sparse row of a difference operator over the degree-of-freedom vector.
struct SparseRow {
    std::vector<std::pair<int, double>> terms;
};

// Radial operator for one Fourier mode m on a geodesic disk of curvature
// kappa: Delta_m = d_rr + (s'/s) d_r - m^2/s^2 with s in {r, sin r, sinh r}.
// Cell-centered grid r_j = (j+1/2)h, h = R/grid_n. The clamped pair
// u(R) = u'(R) = 0 enters through the outer boundary rows: the outermost
// cell value is eliminated by the third-order extrapolation of u(R) = 0 and
// the exterior ghost mirrors across r = R (zero normal flux). There are
// grid_n rows over grid_n - 1 unknowns; no row ever evaluates at r = 0.
struct RadialOperator {
    int grid_n = 0;
    int dofs = 0;
    double h = 0.0;
    std::vector<SparseRow> rows;     // grid_n rows, Laplacian values at cell centers
    std::vector<double> row_mass;    // s(r_j) h, all cells
    std::vector<double> dof_mass;    // s(r_j) h, kept cells
    std::vector<double> dof_centers; // r_j of kept cells
};

RadialOperator assemble_radial_laplacian(int kappa, double R, int m, int grid_n);

struct DiscreteForm {
    numlin::SymMatrix K;
    std::vector<double> mass; // diagonal M
};

// K = D^T diag(row_mass) D + diag(dof_mass * q), M = diag(dof_mass * rho).
// Pass empty spans for q == 0 and rho == 1.
DiscreteForm assemble_clamped_biharmonic(std::span<const SparseRow> rows,
                                         std::span<const double> row_mass,
                                         std::span<const double> dof_mass,
                                         std::span<const double> q,
                                         std::span<const double> rho);

Spectrum solve_spectrum(const DomainSpec& spec, int k_max);

// Spectrum plus M-orthonormal eigenvectors and the grid quadrature, for the
// flat domains where discrete eigenfunctions are inspected directly.
struct SolveDetail {
    Spectrum spectrum;
    std::vector<std::vector<double>> vectors;
    std::vector<double> dof_mass;
    // interior Dirichlet Laplacian (for applying Delta to eigenvectors) and
    // the coordinate samples per axis
    std::vector<SparseRow> laplacian;
    std::vector<std::vector<double>> coordinates;
};

SolveDetail solve_with_vectors(const DomainSpec& spec, int k_max);

struct RichardsonResult {
    std::vector<double> extrapolated;
    std::vector<double> observed_order;
    int grids[3] = {0, 0, 0};
};

// Solves at grid_n, 2 grid_n, 4 grid_n and fits the observed convergence
// order per eigenvalue; throws convergence_error on non-monotone refinement.
RichardsonResult richardson_order(const DomainSpec& spec, int k);

struct IdentityEntry {
    int index = 0;
    double lambda = 0.0;
    double commutator_identity_residual = 0.0; // | sum <[[L,X_p],X_p]u,u> - 2n |
    double gradient_identity_residual = 0.0;   // | sum ||[L,X_p]u||^2 - 4 int |grad u|^2 |
    double cauchy_schwarz_lhs = 0.0;           // 4 int (-Delta u) u
    double cauchy_schwarz_rhs = 0.0;           // 4 lambda^{1/2}
    bool cauchy_schwarz_holds = false;
};

struct IdentityReport {
    std::vector<IdentityEntry> entries;
    double h = 0.0;
    int n = 0; // spatial dimension
};

// Verifies the commutator identities satisfied by coordinate functions on
// flat domains (beam, rectangle) against discrete eigenfunctions.
IdentityReport verify_proof_identities(const DomainSpec& spec, int k);

} // namespace platelab::discretize
