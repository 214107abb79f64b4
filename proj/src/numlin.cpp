#include "platelab/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "platelab/errors.hpp"

namespace platelab::numlin {

SymMatrix::SymMatrix(int order) : order_(order) {
    if (order <= 0)
        throw input_error("SymMatrix order must be positive, got " + std::to_string(order));
    a_.assign(tri(order), 0.0);
}

double SymMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : a_)
        m = std::max(m, std::abs(v));
    return m;
}

bool SymMatrix::all_finite() const noexcept {
    for (double v : a_)
        if (!std::isfinite(v))
            return false;
    return true;
}

void SymMatrix::apply(std::span<const double> x, std::span<double> y) const {
    const int n = order_;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += (*this)(i, j) * x[j];
        y[i] = s;
    }
}

namespace {

// Householder reduction of a full symmetric matrix (row-major z) to
// tridiagonal form, accumulating the transformation in z. EISPACK tred2
// lineage.
void tred2(std::vector<double>& z, int n, std::vector<double>& d, std::vector<double>& e) {
    auto Z = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(i) * n + j]; };

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k)
                scale += std::abs(Z(i, k));
            if (scale == 0.0) {
                e[i] = Z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    Z(i, k) /= scale;
                    h += Z(i, k) * Z(i, k);
                }
                double f = Z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                Z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    Z(j, i) = Z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k)
                        g += Z(j, k) * Z(i, k);
                    for (int k = j + 1; k <= l; ++k)
                        g += Z(k, j) * Z(i, k);
                    e[j] = g / h;
                    f += e[j] * Z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = Z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        Z(j, k) -= f * e[k] + g * Z(i, k);
                }
            }
        } else {
            e[i] = Z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k)
                    g += Z(i, k) * Z(k, j);
                for (int k = 0; k <= l; ++k)
                    Z(k, j) -= g * Z(k, i);
            }
        }
        d[i] = Z(i, i);
        Z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) {
            Z(j, i) = 0.0;
            Z(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e), rotations applied to the
// accumulated vectors in z. Fixed bound of 50 sweeps per eigenvalue.
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
    auto Z = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(i) * n + j]; };

    for (int i = 1; i < n; ++i)
        e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw convergence_error(
                        "eigen_symmetric: QL iteration did not converge for eigenvalue index " +
                        std::to_string(l));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = Z(k, i + 1);
                        Z(k, i + 1) = s * Z(k, i) + c * f;
                        Z(k, i) = c * Z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l)
                    continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void fix_sign(std::vector<double>& v) {
    // Deterministic orientation: largest-magnitude component positive.
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (std::abs(v[j]) > best) {
            best = std::abs(v[j]);
            arg = j;
        }
    }
    if (v[arg] < 0.0)
        for (double& x : v)
            x = -x;
}

} // namespace

std::vector<EigenPair> eigen_symmetric(const SymMatrix& A, int count) {
    const int n = A.order();
    if (count < 0 || count > n)
        throw input_error("eigen_symmetric: count " + std::to_string(count) +
                          " out of range for order " + std::to_string(n));
    if (!A.all_finite())
        throw input_error("eigen_symmetric: matrix has non-finite entries");

    std::vector<double> z(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            z[static_cast<std::size_t>(i) * n + j] = A(i, j);

    std::vector<double> d(n, 0.0), e(n, 0.0);
    if (n == 1) {
        d[0] = z[0];
        z[0] = 1.0;
    } else {
        tred2(z, n, d, e);
        tql2(d, e, z, n);
    }

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return d[a] < d[b]; });

    std::vector<EigenPair> out;
    out.reserve(count);
    for (int c = 0; c < count; ++c) {
        EigenPair p;
        p.value = d[perm[c]];
        p.vector.resize(n);
        for (int k = 0; k < n; ++k)
            p.vector[k] = z[static_cast<std::size_t>(k) * n + perm[c]];
        fix_sign(p.vector);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<EigenPair> eigen_generalized_diag_mass(const SymMatrix& K,
                                                   std::span<const double> mass, int count) {
    const int n = K.order();
    if (static_cast<int>(mass.size()) != n)
        throw input_error("eigen_generalized_diag_mass: mass size mismatch");
    for (int j = 0; j < n; ++j)
        if (!(mass[j] > 0.0) || !std::isfinite(mass[j]))
            throw input_error("eigen_generalized_diag_mass: nonpositive mass weight at index " +
                              std::to_string(j));

    std::vector<double> rsq(n);
    for (int j = 0; j < n; ++j)
        rsq[j] = 1.0 / std::sqrt(mass[j]);

    SymMatrix B(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            B.set(i, j, K(i, j) * rsq[i] * rsq[j]);

    std::vector<EigenPair> pairs = eigen_symmetric(B, count);
    for (EigenPair& p : pairs) {
        for (int j = 0; j < n; ++j)
            p.vector[j] *= rsq[j]; // y = M^{1/2} v, so v = M^{-1/2} y is M-orthonormal
        fix_sign(p.vector);
    }
    return pairs;
}

} // namespace platelab::numlin
