#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oracles {

namespace {

double bisect(double a, double b, const auto& g) {
    double ga = g(a);
    if (ga == 0.0)
        return a;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if (gm == 0.0)
            return m;
        if ((ga < 0.0) != (gm < 0.0))
            b = m;
        else {
            a = m;
            ga = gm;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double beam_mu(int i) {
    const double pi = 3.14159265358979323846;
    auto g = [](double m) { return std::cos(m) * std::cosh(m) - 1.0; };
    const double c = (2 * i + 1) * pi / 2.0;
    return bisect(c - 0.5, c + 0.5, g);
}

double bessel_j(int m, double x) {
    double term = std::pow(x / 2.0, m);
    for (int j = 1; j <= m; ++j)
        term /= j;
    double sum = term;
    for (int j = 1; j < 80; ++j) {
        term *= -(x * x / 4.0) / (j * (j + m));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300))
            break;
    }
    return sum;
}

double bessel_i(int m, double x) {
    double term = std::pow(x / 2.0, m);
    for (int j = 1; j <= m; ++j)
        term /= j;
    double sum = term;
    for (int j = 1; j < 120; ++j) {
        term *= (x * x / 4.0) / (j * (j + m));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

double disk_k(int m, int s) {
    auto wronskian = [m](double x) {
        const double jp = (m > 0) ? 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
                                  : -bessel_j(1, x);
        const double ip = (m > 0) ? 0.5 * (bessel_i(m - 1, x) + bessel_i(m + 1, x))
                                  : bessel_i(1, x);
        return bessel_j(m, x) * ip - jp * bessel_i(m, x);
    };
    int found = 0;
    double prev = wronskian(0.5);
    for (double x = 0.5; x < 40.0; x += 0.01) {
        const double cur = wronskian(x + 0.01);
        if ((prev < 0.0) != (cur < 0.0)) {
            ++found;
            if (found == s)
                return bisect(x, x + 0.01, wronskian);
        }
        prev = cur;
    }
    throw std::runtime_error("disk_k: root not found");
}

namespace {

// Number of eigenvalues of A strictly below sigma, by the inertia of the
// LDL^T factorization of A - sigma I. A tiny pivot triggers a sigma nudge in
// the caller; here we just report it.
bool inertia_count(const platelab::numlin::SymMatrix& A, double sigma, int& below) {
    const int n = A.order();
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            w[static_cast<std::size_t>(i) * n + j] = A(i, j) - (i == j ? sigma : 0.0);

    below = 0;
    const double tiny = 1e-300;
    for (int k = 0; k < n; ++k) {
        const double piv = w[static_cast<std::size_t>(k) * n + k];
        if (std::abs(piv) < tiny)
            return false;
        if (piv < 0.0)
            ++below;
        for (int i = k + 1; i < n; ++i) {
            const double f = w[static_cast<std::size_t>(i) * n + k] / piv;
            for (int j = k; j < n; ++j)
                w[static_cast<std::size_t>(i) * n + j] -= f * w[static_cast<std::size_t>(k) * n + j];
        }
    }
    return true;
}

} // namespace

std::vector<double> inertia_bisection_eigenvalues(const platelab::numlin::SymMatrix& A,
                                                  double tol) {
    const int n = A.order();
    // Gershgorin bounds
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i)
                r += std::abs(A(i, j));
        lo = std::min(lo, A(i, i) - r);
        hi = std::max(hi, A(i, i) + r);
    }
    lo -= 1.0;
    hi += 1.0;
    const double scale = std::max(std::abs(lo), std::abs(hi));

    auto count_below = [&](double sigma) {
        int c = 0;
        double s = sigma;
        for (int attempt = 0; attempt < 8; ++attempt) {
            if (inertia_count(A, s, c))
                return c;
            s += scale * 1e-13 * (attempt + 1);
        }
        throw std::runtime_error("inertia oracle: persistent zero pivot");
    };

    std::vector<double> out(n);
    for (int idx = 0; idx < n; ++idx) {
        double a = lo, b = hi;
        while (b - a > tol * scale) {
            const double m = 0.5 * (a + b);
            if (count_below(m) >= idx + 1)
                b = m;
            else
                a = m;
        }
        out[idx] = 0.5 * (a + b);
    }
    return out;
}

std::vector<double> jacobi_eigen(std::vector<double> a, int n, std::vector<double>& vectors) {
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    auto V = [&](int i, int j) -> double& { return vectors[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i)
        V(i, i) = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += A(p, q) * A(p, q);
        if (off < 1e-26 * (1.0 + off))
            break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (A(p, q) == 0.0)
                    continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i)
        perm[i] = i;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i)
        vals[i] = A(i, i);
    std::sort(perm.begin(), perm.end(), [&](int x, int y) { return vals[x] < vals[y]; });

    std::vector<double> sorted_vals(n);
    std::vector<double> sorted_vecs(static_cast<std::size_t>(n) * n);
    for (int c = 0; c < n; ++c) {
        sorted_vals[c] = vals[perm[c]];
        for (int r = 0; r < n; ++r)
            sorted_vecs[static_cast<std::size_t>(r) * n + c] = V(r, perm[c]);
    }
    vectors = std::move(sorted_vecs);
    return sorted_vals;
}

std::vector<double> random_orthogonal(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        q[static_cast<std::size_t>(i) * n + i] = 1.0;
    // compose plane rotations over all index pairs
    for (int p = 0; p < n; ++p) {
        for (int r = p + 1; r < n; ++r) {
            const double t = ang(rng);
            const double c = std::cos(t), s = std::sin(t);
            for (int k = 0; k < n; ++k) {
                const double qp = q[static_cast<std::size_t>(k) * n + p];
                const double qr = q[static_cast<std::size_t>(k) * n + r];
                q[static_cast<std::size_t>(k) * n + p] = c * qp - s * qr;
                q[static_cast<std::size_t>(k) * n + r] = s * qp + c * qr;
            }
        }
    }
    return q;
}

std::vector<double> random_uniform(std::size_t count, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(count);
    for (double& x : out)
        x = dist(rng);
    return out;
}

} // namespace oracles
