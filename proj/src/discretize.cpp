#include "platelab/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "platelab/errors.hpp"

namespace platelab::discretize {

namespace {

constexpr double kPi = 3.14159265358979323846;

double metric_s(int kappa, double r) {
    if (kappa == 0)
        return r;
    if (kappa == 1)
        return std::sin(r);
    return std::sinh(r);
}

} // namespace

void DomainSpec::validate() const {
    if (grid_n < 8)
        throw input_error("DomainSpec: grid_n must be >= 8");
    switch (kind) {
    case DomainKind::beam:
        if (!(length > 0.0))
            throw platelab::domain_error("beam length must be positive");
        break;
    case DomainKind::rectangle:
        if (!(a > 0.0) || !(b > 0.0))
            throw platelab::domain_error("rectangle sides must be positive");
        break;
    case DomainKind::geodesic_disk:
        if (curvature != -1 && curvature != 0 && curvature != 1)
            throw input_error("geodesic disk curvature must be -1, 0 or +1");
        if (!(radius > 0.0))
            throw platelab::domain_error("disk radius must be positive");
        if (curvature == 1 && radius >= kPi)
            throw platelab::domain_error("spherical cap radius must satisfy R < pi");
        break;
    }
}

std::string DomainSpec::describe() const {
    std::ostringstream s;
    switch (kind) {
    case DomainKind::beam:
        s << "beam(L=" << length << ")";
        break;
    case DomainKind::rectangle:
        s << "rectangle(" << a << "x" << b << ")";
        break;
    case DomainKind::geodesic_disk:
        s << "geodesic_disk(kappa=" << curvature << ",R=" << radius << ")";
        break;
    }
    s << " grid_n=" << grid_n;
    return s.str();
}

std::vector<double> Spectrum::values_expanded(int k) const {
    std::vector<double> out;
    for (const auto& e : entries) {
        for (int c = 0; c < e.multiplicity; ++c) {
            out.push_back(e.value);
            if (k >= 0 && static_cast<int>(out.size()) == k)
                return out;
        }
    }
    return out;
}

RadialOperator assemble_radial_laplacian(int kappa, double R, int m, int grid_n) {
    if (m < 0)
        throw input_error("assemble_radial_laplacian: Fourier mode must be >= 0");
    if (grid_n < 8)
        throw input_error("assemble_radial_laplacian: grid_n must be >= 8");
    if (kappa == 1 && R >= kPi)
        throw platelab::domain_error("assemble_radial_laplacian: spherical cap needs R < pi");
    if (!(R > 0.0))
        throw platelab::domain_error("assemble_radial_laplacian: R must be positive");

    const int N = grid_n;
    const int ndof = N - 1;
    const double h = R / N;

    RadialOperator op;
    op.grid_n = N;
    op.dofs = ndof;
    op.h = h;
    op.rows.resize(N);
    op.row_mass.resize(N);
    op.dof_mass.resize(ndof);
    op.dof_centers.resize(ndof);

    // u(R) = 0 extrapolated through the three outermost cell centers
    // eliminates the last cell: u_{N-1} = (10 u_{N-2} - 3 u_{N-3}) / 15.
    // The exterior ghost mirrors across r = R (u'(R) = 0), which zeroes the
    // outermost flux.
    auto add_cell = [&](std::map<int, double>& acc, int cell, double coeff) {
        if (cell <= N - 2) {
            acc[cell] += coeff;
        } else { // cell N-1 (or its mirror ghost): substitute the elimination
            acc[N - 2] += coeff * (10.0 / 15.0);
            acc[N - 3] += coeff * (-3.0 / 15.0);
        }
    };

    for (int j = 0; j < N; ++j) {
        const double rj = (j + 0.5) * h;
        const double sj = metric_s(kappa, rj);
        op.row_mass[j] = sj * h;
        if (j < ndof) {
            op.dof_mass[j] = sj * h;
            op.dof_centers[j] = rj;
        }

        std::map<int, double> acc;
        const double c = 1.0 / (sj * h * h);
        if (j < N - 1) {
            const double sp = metric_s(kappa, (j + 1) * h);
            add_cell(acc, j + 1, c * sp);
            add_cell(acc, j, -c * sp);
        }
        // j == N-1: outer face flux is exactly zero by the mirror ghost
        if (j > 0) {
            const double sm = metric_s(kappa, j * h);
            add_cell(acc, j, -c * sm);
            add_cell(acc, j - 1, c * sm);
        }
        // j == 0: s(0) = 0 exactly, no inner flux and no pole evaluation
        if (m > 0)
            add_cell(acc, j, -static_cast<double>(m) * m / (sj * sj));

        SparseRow row;
        row.terms.assign(acc.begin(), acc.end());
        op.rows[j] = std::move(row);
    }
    return op;
}

DiscreteForm assemble_clamped_biharmonic(std::span<const SparseRow> rows,
                                         std::span<const double> row_mass,
                                         std::span<const double> dof_mass,
                                         std::span<const double> q,
                                         std::span<const double> rho) {
    if (rows.size() != row_mass.size())
        throw input_error("assemble_clamped_biharmonic: row/mass size mismatch");
    const int ndof = static_cast<int>(dof_mass.size());
    if (!q.empty() && static_cast<int>(q.size()) != ndof)
        throw input_error("assemble_clamped_biharmonic: potential sample size mismatch");
    if (!rho.empty() && static_cast<int>(rho.size()) != ndof)
        throw input_error("assemble_clamped_biharmonic: weight sample size mismatch");

    DiscreteForm form{numlin::SymMatrix(ndof), {}};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double w = row_mass[r];
        const auto& terms = rows[r].terms;
        for (std::size_t p = 0; p < terms.size(); ++p)
            for (std::size_t s = 0; s <= p; ++s) {
                const auto [ip, vp] = terms[p];
                const auto [is, vs] = terms[s];
                form.K.add(ip, is, w * vp * vs);
            }
    }
    if (!q.empty())
        for (int j = 0; j < ndof; ++j)
            form.K.add(j, j, dof_mass[j] * q[j]);

    form.mass.assign(dof_mass.begin(), dof_mass.end());
    if (!rho.empty())
        for (int j = 0; j < ndof; ++j) {
            if (!(rho[j] > 0.0))
                throw input_error("assemble_clamped_biharmonic: weight sample must be positive at index " +
                                  std::to_string(j));
            form.mass[j] *= rho[j];
        }
    return form;
}

namespace {

struct GridAssembly {
    std::vector<SparseRow> rows;
    std::vector<double> row_mass;
    std::vector<double> dof_mass;
    std::vector<SparseRow> laplacian;              // interior Dirichlet Laplacian
    std::vector<std::vector<double>> coordinates;  // per axis, per dof
    double h = 0.0;
    std::vector<double> qs, rhos;
};

std::vector<double> sample(const GridFunction& f, const std::vector<double>& xs,
                           const std::vector<double>& ys) {
    std::vector<double> out;
    if (!f)
        return out;
    out.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] = f(xs[i], ys.empty() ? 0.0 : ys[i]);
    return out;
}

// Node-centered clamped beam: interior nodes are unknowns (u = 0 at the end
// nodes), mirror ghosts encode u' = 0, and the Laplacian is also evaluated
// at the end nodes with trapezoid weights. Reproduces the classic 5-point
// clamped stencil through D^T M D.
GridAssembly assemble_beam(const DomainSpec& spec) {
    const int N = spec.grid_n;
    const double h = spec.length / N;
    const int ndof = N - 1;

    GridAssembly ga;
    ga.h = h;
    ga.rows.resize(N + 1);
    ga.row_mass.assign(N + 1, h);
    ga.row_mass.front() = h / 2.0;
    ga.row_mass.back() = h / 2.0;
    ga.dof_mass.assign(ndof, h);

    const double c = 1.0 / (h * h);
    for (int node = 0; node <= N; ++node) {
        std::map<int, double> acc;
        auto add = [&](int nb, double v) {
            int j = nb;
            if (j == -1)
                j = 1; // mirror across x = 0
            if (j == N + 1)
                j = N - 1; // mirror across x = L
            if (j >= 1 && j <= N - 1)
                acc[j - 1] += v;
        };
        add(node - 1, c);
        add(node, -2.0 * c);
        add(node + 1, c);
        ga.rows[node].terms.assign(acc.begin(), acc.end());
    }

    ga.laplacian.resize(ndof);
    std::vector<double> xs(ndof);
    for (int i = 0; i < ndof; ++i) {
        xs[i] = (i + 1) * h;
        std::map<int, double> acc;
        acc[i] = -2.0 * c;
        if (i > 0)
            acc[i - 1] += c;
        if (i < ndof - 1)
            acc[i + 1] += c;
        ga.laplacian[i].terms.assign(acc.begin(), acc.end());
    }
    ga.coordinates.push_back(xs);
    ga.qs = sample(spec.potential, xs, {});
    ga.rhos = sample(spec.weight, xs, {});
    return ga;
}

// Tensor-grid clamped rectangle: D is the 5-point Laplacian evaluated at all
// nodes (mirror ghosts across each side, zero values on the boundary), so
// D^T M D is a 13-point biharmonic stencil in the interior.
GridAssembly assemble_rectangle(const DomainSpec& spec) {
    const int N = spec.grid_n;
    const double hx = spec.a / N;
    const double hy = spec.b / N;
    const int side = N - 1;
    const int ndof = side * side;

    GridAssembly ga;
    ga.h = std::max(hx, hy);
    ga.dof_mass.assign(ndof, hx * hy);

    auto dof = [&](int i, int j) -> int {
        if (i >= 1 && i <= N - 1 && j >= 1 && j <= N - 1)
            return (i - 1) * side + (j - 1);
        return -1;
    };
    const double cx = 1.0 / (hx * hx);
    const double cy = 1.0 / (hy * hy);

    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            std::map<int, double> acc;
            auto add = [&](int ii, int jj, double v) {
                if (ii == -1)
                    ii = 1;
                if (ii == N + 1)
                    ii = N - 1;
                if (jj == -1)
                    jj = 1;
                if (jj == N + 1)
                    jj = N - 1;
                const int d = dof(ii, jj);
                if (d >= 0)
                    acc[d] += v;
            };
            add(i - 1, j, cx);
            add(i + 1, j, cx);
            add(i, j, -2.0 * cx);
            add(i, j - 1, cy);
            add(i, j + 1, cy);
            add(i, j, -2.0 * cy);
            if (acc.empty())
                continue; // corner rows vanish
            const double wx = (i == 0 || i == N) ? hx / 2.0 : hx;
            const double wy = (j == 0 || j == N) ? hy / 2.0 : hy;
            SparseRow row;
            row.terms.assign(acc.begin(), acc.end());
            ga.rows.push_back(std::move(row));
            ga.row_mass.push_back(wx * wy);
        }
    }

    ga.laplacian.resize(ndof);
    std::vector<double> xs(ndof), ys(ndof);
    for (int i = 1; i <= N - 1; ++i)
        for (int j = 1; j <= N - 1; ++j) {
            const int d = dof(i, j);
            xs[d] = i * hx;
            ys[d] = j * hy;
            std::map<int, double> acc;
            acc[d] = -2.0 * cx - 2.0 * cy;
            if (dof(i - 1, j) >= 0)
                acc[dof(i - 1, j)] += cx;
            if (dof(i + 1, j) >= 0)
                acc[dof(i + 1, j)] += cx;
            if (dof(i, j - 1) >= 0)
                acc[dof(i, j - 1)] += cy;
            if (dof(i, j + 1) >= 0)
                acc[dof(i, j + 1)] += cy;
            ga.laplacian[d].terms.assign(acc.begin(), acc.end());
        }
    ga.coordinates.push_back(xs);
    ga.coordinates.push_back(ys);
    ga.qs = sample(spec.potential, xs, ys);
    ga.rhos = sample(spec.weight, xs, ys);
    return ga;
}

struct ModeValue {
    double value;
    int m;
    int j; // index within the mode, 1-based
};

std::vector<double> solve_radial_mode(const DomainSpec& spec, int m, int count) {
    RadialOperator op = assemble_radial_laplacian(spec.curvature, spec.radius, m, spec.grid_n);
    std::vector<double> q, rho;
    if (spec.potential) {
        q.resize(op.dofs);
        for (int j = 0; j < op.dofs; ++j)
            q[j] = spec.potential(op.dof_centers[j], 0.0);
    }
    if (spec.weight) {
        rho.resize(op.dofs);
        for (int j = 0; j < op.dofs; ++j)
            rho[j] = spec.weight(op.dof_centers[j], 0.0);
    }
    DiscreteForm form = assemble_clamped_biharmonic(op.rows, op.row_mass, op.dof_mass, q, rho);
    const int c = std::min(count, op.dofs);
    auto pairs = numlin::eigen_generalized_diag_mass(form.K, form.mass, c);
    std::vector<double> vals(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        vals[i] = pairs[i].value;
    return vals;
}

Spectrum solve_disk(const DomainSpec& spec, int k_max) {
    const int default_m = 2 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k_max)))) + 8;
    int m_used = spec.m_max >= 0 ? spec.m_max : default_m;
    const bool user_fixed = spec.m_max >= 0;

    for (int attempt = 0;; ++attempt) {
        std::vector<ModeValue> all;
        for (int m = 0; m <= m_used; ++m) {
            auto vals = solve_radial_mode(spec, m, k_max + 1);
            for (std::size_t j = 0; j < vals.size(); ++j)
                all.push_back({vals[j], m, static_cast<int>(j) + 1});
        }
        std::sort(all.begin(), all.end(), [](const ModeValue& a, const ModeValue& b) {
            if (a.value != b.value)
                return a.value < b.value;
            if (a.m != b.m)
                return a.m < b.m;
            return a.j < b.j;
        });

        Spectrum sp;
        sp.h = spec.radius / spec.grid_n;
        sp.dimension = 2;
        sp.domain = spec;
        int expanded = 0;
        double reported_top = 0.0;
        for (const ModeValue& mv : all) {
            if (expanded >= k_max)
                break;
            SpectrumEntry e;
            e.value = mv.value;
            e.multiplicity = mv.m == 0 ? 1 : 2;
            std::ostringstream lbl;
            lbl << "m" << mv.m << ":j" << mv.j;
            e.mode_label = lbl.str();
            expanded += e.multiplicity;
            reported_top = mv.value;
            sp.entries.push_back(std::move(e));
        }
        if (expanded < k_max)
            throw truncation_error("solve_spectrum: grid too small for k_max");

        // Discarded-mode guarantee: the first eigenvalue of the next mode
        // must exceed everything we report (mode minima increase with m).
        const double next_min = solve_radial_mode(spec, m_used + 1, 1).front();
        if (next_min > reported_top)
            return sp;
        if (user_fixed)
            throw truncation_error(
                "solve_spectrum: m_max=" + std::to_string(m_used) +
                " is insufficient: mode " + std::to_string(m_used + 1) +
                " reaches lambda_1=" + std::to_string(next_min) +
                " below the reported lambda_k=" + std::to_string(reported_top) +
                "; raise m_max");
        if (attempt > 32)
            throw truncation_error("solve_spectrum: mode escalation did not terminate");
        m_used += 4;
    }
}

SolveDetail solve_flat(const DomainSpec& spec, int k_max, bool want_vectors) {
    GridAssembly ga = spec.kind == DomainKind::beam ? assemble_beam(spec)
                                                    : assemble_rectangle(spec);
    DiscreteForm form =
        assemble_clamped_biharmonic(ga.rows, ga.row_mass, ga.dof_mass, ga.qs, ga.rhos);
    const int ndof = static_cast<int>(ga.dof_mass.size());
    if (k_max > ndof)
        throw input_error("solve_spectrum: k_max exceeds the number of unknowns");
    auto pairs = numlin::eigen_generalized_diag_mass(form.K, form.mass, k_max);

    SolveDetail out;
    out.spectrum.h = ga.h;
    out.spectrum.dimension = spec.dimension();
    out.spectrum.domain = spec;
    const char* prefix = spec.kind == DomainKind::beam ? "b:" : "r:";
    for (int i = 0; i < k_max; ++i) {
        SpectrumEntry e;
        e.value = pairs[i].value;
        e.multiplicity = 1;
        e.mode_label = prefix + std::to_string(i + 1);
        out.spectrum.entries.push_back(std::move(e));
    }
    if (want_vectors) {
        out.vectors.reserve(k_max);
        for (int i = 0; i < k_max; ++i)
            out.vectors.push_back(std::move(pairs[i].vector));
        out.dof_mass = std::move(ga.dof_mass);
        out.laplacian = std::move(ga.laplacian);
        out.coordinates = std::move(ga.coordinates);
    }
    return out;
}

void check_positive(const Spectrum& sp, const DomainSpec& spec) {
    bool q_nonneg = true;
    if (spec.potential) {
        // sampled sign probe inside the domain's coordinate box
        for (int i = 1; i <= 32 && q_nonneg; ++i) {
            const double t = i / 33.0;
            double x = 0.0, y = 0.0;
            switch (spec.kind) {
            case DomainKind::beam:
                x = t * spec.length;
                break;
            case DomainKind::rectangle:
                x = t * spec.a;
                y = t * spec.b;
                break;
            case DomainKind::geodesic_disk:
                x = t * spec.radius;
                break;
            }
            if (spec.potential(x, y) < 0.0)
                q_nonneg = false;
        }
    }
    if (q_nonneg)
        for (const auto& e : sp.entries)
            if (!(e.value > 0.0))
                throw internal_error("solve_spectrum: nonpositive eigenvalue with q >= 0");
}

} // namespace

Spectrum solve_spectrum(const DomainSpec& spec, int k_max) {
    spec.validate();
    if (k_max < 2)
        throw input_error("solve_spectrum: k_max must be >= 2");
    Spectrum sp;
    if (spec.kind == DomainKind::geodesic_disk)
        sp = solve_disk(spec, k_max);
    else
        sp = solve_flat(spec, k_max, false).spectrum;
    check_positive(sp, spec);
    return sp;
}

SolveDetail solve_with_vectors(const DomainSpec& spec, int k_max) {
    spec.validate();
    if (spec.kind == DomainKind::geodesic_disk)
        throw unsupported_error("solve_with_vectors: eigenvector access is provided for the "
                                "flat tensor-grid domains only");
    if (k_max < 1)
        throw input_error("solve_with_vectors: k_max must be >= 1");
    return solve_flat(spec, k_max, true);
}

RichardsonResult richardson_order(const DomainSpec& spec, int k) {
    spec.validate();
    if (k < 1)
        throw input_error("richardson_order: k must be >= 1");

    DomainSpec s1 = spec, s2 = spec, s3 = spec;
    s2.grid_n = 2 * spec.grid_n;
    s3.grid_n = 4 * spec.grid_n;
    const int solve_k = std::max(k, 2);
    auto v1 = solve_spectrum(s1, solve_k).values_expanded(k);
    auto v2 = solve_spectrum(s2, solve_k).values_expanded(k);
    auto v3 = solve_spectrum(s3, solve_k).values_expanded(k);

    RichardsonResult res;
    res.grids[0] = s1.grid_n;
    res.grids[1] = s2.grid_n;
    res.grids[2] = s3.grid_n;
    for (int i = 0; i < k; ++i) {
        const double d1 = v1[i] - v2[i];
        const double d2 = v2[i] - v3[i];
        if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) != (d2 > 0.0))
            throw convergence_error("richardson_order: non-monotone refinement at eigenvalue " +
                                    std::to_string(i + 1));
        const double p = std::log2(d1 / d2);
        const double extrap = v3[i] - d2 / (std::pow(2.0, p) - 1.0);
        res.extrapolated.push_back(extrap);
        res.observed_order.push_back(std::log2((v1[i] - extrap) / (v2[i] - extrap)));
    }
    return res;
}

namespace {

std::vector<double> apply_rows(const std::vector<SparseRow>& rows, std::span<const double> u) {
    std::vector<double> out(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [j, v] : rows[i].terms)
            out[i] += v * u[j];
    return out;
}

double dot_m(std::span<const double> a, std::span<const double> b, std::span<const double> m) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i] * m[i];
    return s;
}

} // namespace

IdentityReport verify_proof_identities(const DomainSpec& spec, int k) {
    spec.validate();
    if (spec.kind == DomainKind::geodesic_disk)
        throw unsupported_error("verify_proof_identities: supported on beam and rectangle "
                                "domains, where coordinate functions live on the grid");

    SolveDetail det = solve_with_vectors(spec, k);
    const int n = spec.dimension();
    const auto& mass = det.dof_mass;

    IdentityReport rep;
    rep.h = det.spectrum.h;
    rep.n = n;

    for (int i = 0; i < k; ++i) {
        const auto& u = det.vectors[i];
        const double lambda = det.spectrum.entries[i].value;
        const std::size_t nd = u.size();

        std::vector<double> lu = apply_rows(det.laplacian, u);
        const double energy = -dot_m(lu, u, mass); // int |grad u|^2 via parts

        double comm_sum = 0.0;
        double grad_sum = 0.0;
        for (const auto& xs : det.coordinates) {
            std::vector<double> xu(nd), x2u(nd);
            for (std::size_t d = 0; d < nd; ++d) {
                xu[d] = xs[d] * u[d];
                x2u[d] = xs[d] * xs[d] * u[d];
            }
            std::vector<double> l_xu = apply_rows(det.laplacian, xu);
            std::vector<double> l_x2u = apply_rows(det.laplacian, x2u);

            // [[L,X],X]u = L(x^2 u) - 2 x L(x u) + x^2 L u
            std::vector<double> dd(nd);
            for (std::size_t d = 0; d < nd; ++d)
                dd[d] = l_x2u[d] - 2.0 * xs[d] * l_xu[d] + xs[d] * xs[d] * lu[d];
            comm_sum += dot_m(dd, u, mass);

            // [L,X]u = L(x u) - x L u
            std::vector<double> cm(nd);
            for (std::size_t d = 0; d < nd; ++d)
                cm[d] = l_xu[d] - xs[d] * lu[d];
            grad_sum += dot_m(cm, cm, mass);
        }

        IdentityEntry e;
        e.index = i + 1;
        e.lambda = lambda;
        e.commutator_identity_residual = std::abs(comm_sum - 2.0 * n);
        e.gradient_identity_residual = std::abs(grad_sum - 4.0 * energy);
        e.cauchy_schwarz_lhs = 4.0 * energy;
        e.cauchy_schwarz_rhs = 4.0 * std::sqrt(lambda);
        e.cauchy_schwarz_holds = e.cauchy_schwarz_lhs <= e.cauchy_schwarz_rhs * (1.0 + 1e-8);
        rep.entries.push_back(e);
    }
    return rep;
}

} // namespace platelab::discretize
