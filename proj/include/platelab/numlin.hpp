#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace platelab::numlin {

// Dense real symmetric matrix, packed lower triangle (one stored copy per
// entry, so A(i,j) == A(j,i) holds exactly by construction).
class SymMatrix {
  public:
    explicit SymMatrix(int order);

    int order() const noexcept { return order_; }
    double operator()(int i, int j) const noexcept { return a_[idx(i, j)]; }
    void set(int i, int j, double v) noexcept { a_[idx(i, j)] = v; }
    void add(int i, int j, double v) noexcept { a_[idx(i, j)] += v; }

    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    // y = A x
    void apply(std::span<const double> x, std::span<double> y) const;

  private:
    static std::size_t tri(int i) noexcept {
        return static_cast<std::size_t>(i) * (i + 1) / 2;
    }
    std::size_t idx(int i, int j) const noexcept {
        return i >= j ? tri(i) + j : tri(j) + i;
    }

    int order_;
    std::vector<double> a_;
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector; // unit norm in the relevant inner product
};

// The `count` smallest eigenpairs of a dense symmetric matrix, nondecreasing.
// Householder tridiagonalization followed by implicit-shift QL, with a fixed
// iteration bound and a deterministic sign convention, so repeated runs are
// bit-identical on one platform.
std::vector<EigenPair> eigen_symmetric(const SymMatrix& A, int count);

// K x = lambda M x with M = diag(mass), mass > 0, via the symmetric
// reduction M^{-1/2} K M^{-1/2}. Returned vectors are M-orthonormal.
std::vector<EigenPair> eigen_generalized_diag_mass(const SymMatrix& K,
                                                   std::span<const double> mass,
                                                   int count);

} // namespace platelab::numlin
