#include "platelab/abstractlab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "platelab/errors.hpp"
#include "platelab/numlin.hpp"

namespace platelab::abstractlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Matrix = std::vector<double>;

Matrix random_symmetric(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = dist(rng);
            m[static_cast<std::size_t>(i) * n + j] = v;
            m[static_cast<std::size_t>(j) * n + i] = v;
        }
    return m;
}

Matrix random_skew(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double v = dist(rng);
            m[static_cast<std::size_t>(i) * n + j] = v;
            m[static_cast<std::size_t>(j) * n + i] = -v;
        }
    return m;
}

// A = Q^T diag(d) Q with strictly increasing positive d, Q composed from
// seeded plane rotations.
Matrix conjugated_diagonal(int n, std::mt19937_64& rng, std::vector<double>& d_out) {
    std::uniform_real_distribution<double> jitter(-0.15, 0.15);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i)
        d[i] = static_cast<double>(i + 1) + jitter(rng); // gaps at least 0.7

    Matrix q(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        q[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (int p = 0; p < n; ++p)
        for (int r = p + 1; r < n; ++r) {
            const double t = ang(rng);
            const double c = std::cos(t), s = std::sin(t);
            for (int row = 0; row < n; ++row) {
                double& qp = q[static_cast<std::size_t>(row) * n + p];
                double& qr = q[static_cast<std::size_t>(row) * n + r];
                const double a = qp, b = qr;
                qp = c * a - s * b;
                qr = s * a + c * b;
            }
        }

    Matrix a(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int t = 0; t < n; ++t)
                s += q[static_cast<std::size_t>(i) * n + t] * d[t] *
                     q[static_cast<std::size_t>(j) * n + t];
            a[static_cast<std::size_t>(i) * n + j] = s;
        }
    // symmetrize away the accumulation roundoff
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double v = 0.5 * (a[static_cast<std::size_t>(i) * n + j] +
                                    a[static_cast<std::size_t>(j) * n + i]);
            a[static_cast<std::size_t>(i) * n + j] = v;
            a[static_cast<std::size_t>(j) * n + i] = v;
        }
    d_out = std::move(d);
    return a;
}

OperatorInstance build_instance(int dim, int n_ops, std::uint64_t seed, bool complex_field) {
    if (dim < 3)
        throw input_error("random_instance: dim must be >= 3");
    if (n_ops < 1)
        throw input_error("random_instance: n_ops must be >= 1");
    std::mt19937_64 rng(splitmix64(seed));

    OperatorInstance inst;
    inst.dim = dim;
    inst.n_ops = n_ops;
    inst.seed = seed;
    inst.complex_field = complex_field;
    std::vector<double> d;
    inst.A = conjugated_diagonal(dim, rng, d);
    if (complex_field) {
        // small skew imaginary part keeps A Hermitian with the gap intact
        Matrix im = random_skew(dim, rng);
        for (double& v : im)
            v *= 0.05;
        inst.A_imag = std::move(im);
    }
    for (int p = 0; p < n_ops; ++p) {
        inst.B.push_back(random_symmetric(dim, rng));
        inst.T.push_back(random_skew(dim, rng));
    }
    std::uniform_int_distribution<int> kdist(1, dim - 1);
    inst.k = kdist(rng); // any k works: consecutive d gaps exceed 1e-6 * spread
    return inst;
}

void mat_vec(const Matrix& m, int n, const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = m.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j)
            s += row[j] * x[j];
        y[i] = s;
    }
}

using Cplx = std::complex<double>;

// Cyclic Jacobi for small complex Hermitian matrices; eigenvalues ascending,
// eigenvectors in columns of v.
void hermitian_jacobi(std::vector<Cplx>& a, int n, std::vector<Cplx>& v,
                      std::vector<double>& vals) {
    auto A = [&](int i, int j) -> Cplx& { return a[static_cast<std::size_t>(i) * n + j]; };
    v.assign(static_cast<std::size_t>(n) * n, Cplx(0.0));
    auto V = [&](int i, int j) -> Cplx& { return v[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i)
        V(i, i) = 1.0;

    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += std::norm(A(p, q));
        if (off < 1e-28)
            break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Cplx apq = A(p, q);
                const double r = std::abs(apq);
                if (r < 1e-300)
                    continue;
                const Cplx phase = apq / r;
                const double app = A(p, p).real();
                const double aqq = A(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * r, app - aqq);
                const double c = std::cos(theta);
                const Cplx s = std::sin(theta) * phase;
                // columns p, q of A and V: A <- J^H A J, V <- V J with
                // J = [[c, -s],[conj(s), c]] in the (p,q) plane
                for (int i = 0; i < n; ++i) {
                    const Cplx aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip + std::conj(s) * aiq;
                    A(i, q) = -s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const Cplx apj = A(p, j), aqj = A(q, j);
                    A(p, j) = c * apj + s * aqj;
                    A(q, j) = -std::conj(s) * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const Cplx vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip + std::conj(s) * viq;
                    V(i, q) = -s * vip + c * viq;
                }
            }
        }
    }
    vals.resize(n);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) {
        vals[i] = A(i, i).real();
        perm[i] = i;
    }
    std::sort(perm.begin(), perm.end(), [&](int x, int y) { return vals[x] < vals[y]; });
    std::vector<double> sv(n);
    std::vector<Cplx> svec(static_cast<std::size_t>(n) * n);
    for (int cidx = 0; cidx < n; ++cidx) {
        sv[cidx] = vals[perm[cidx]];
        for (int rdx = 0; rdx < n; ++rdx)
            svec[static_cast<std::size_t>(rdx) * n + cidx] = V(rdx, perm[cidx]);
    }
    vals = std::move(sv);
    v = std::move(svec);
}

Sides sides_real(const OperatorInstance& inst, const families::FGCouple& couple, EvalMode mode) {
    const int n = inst.dim;
    numlin::SymMatrix A(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            A.set(i, j, inst.A[static_cast<std::size_t>(i) * n + j]);
    auto pairs = numlin::eigen_symmetric(A, n);

    Sides out;
    out.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i)
        out.eigenvalues[i] = pairs[i].value;

    const int k = inst.k;
    const double Lambda = out.eigenvalues[k];
    const double spread = out.eigenvalues[n - 1] - out.eigenvalues[0];
    if (!(Lambda - out.eigenvalues[k - 1] > 1e-6 * spread))
        throw gap_error("theorem_sides: eigenvalue gap at k is below the instance invariant");

    double lhs_sum = 0.0, first = 0.0, second = 0.0;
    std::vector<double> bu(n), tbu(n), au(n), tu(n), t2u(n), tmp(n);
    for (int i = 0; i < k; ++i) {
        const double li = out.eigenvalues[i];
        const auto [f, g] = couple.eval(Lambda, li);
        const double* u = pairs[i].vector.data();
        for (int p = 0; p < inst.n_ops; ++p) {
            const Matrix& Bp = inst.B[p];
            const Matrix& Tp = inst.T[p];
            // <[T,B]u, u>
            mat_vec(Bp, n, u, bu.data());
            mat_vec(Tp, n, bu.data(), tbu.data()); // T B u
            mat_vec(Tp, n, u, tu.data());
            mat_vec(Bp, n, tu.data(), tmp.data()); // B T u
            double comm = 0.0;
            for (int r = 0; r < n; ++r)
                comm += (tbu[r] - tmp[r]) * u[r];
            lhs_sum += f * comm;

            // <[A,B]u, Bu> = <A Bu, Bu> - lambda_i ||Bu||^2
            mat_vec(inst.A, n, bu.data(), au.data());
            double abu = 0.0, bnorm = 0.0;
            for (int r = 0; r < n; ++r) {
                abu += au[r] * bu[r];
                bnorm += bu[r] * bu[r];
            }
            first += g * (abu - li * bnorm);

            double tfac = 0.0;
            if (mode == EvalMode::standard) {
                for (int r = 0; r < n; ++r)
                    tfac += tu[r] * tu[r];
            } else {
                // ||T u||^2 = -<T^2 u, u> for skew T; the control drops the
                // minus sign as if T were symmetric
                mat_vec(Tp, n, tu.data(), t2u.data());
                for (int r = 0; r < n; ++r)
                    tfac += t2u[r] * u[r];
            }
            second += (f * f / (g * (Lambda - li))) * tfac;
        }
    }
    out.lhs = lhs_sum * lhs_sum;
    out.rhs = 4.0 * first * second;
    return out;
}

Sides sides_complex(const OperatorInstance& inst, const families::FGCouple& couple,
                    EvalMode mode) {
    const int n = inst.dim;
    std::vector<Cplx> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] =
                Cplx(inst.A[static_cast<std::size_t>(i) * n + j],
                     inst.A_imag.empty() ? 0.0 : inst.A_imag[static_cast<std::size_t>(i) * n + j]);
    std::vector<Cplx> v;
    std::vector<double> vals;
    hermitian_jacobi(a, n, v, vals);

    Sides out;
    out.eigenvalues = vals;
    const int k = inst.k;
    const double Lambda = vals[k];
    const double spread = vals[n - 1] - vals[0];
    if (!(Lambda - vals[k - 1] > 1e-6 * spread))
        throw gap_error("theorem_sides: eigenvalue gap at k is below the instance invariant");

    auto col = [&](int c, std::vector<Cplx>& dst) {
        dst.resize(n);
        for (int r = 0; r < n; ++r)
            dst[r] = v[static_cast<std::size_t>(r) * n + c];
    };
    auto real_mat_vec = [&](const Matrix& m, const std::vector<Cplx>& x, std::vector<Cplx>& y) {
        y.assign(n, Cplx(0.0));
        for (int i = 0; i < n; ++i) {
            Cplx s(0.0);
            const double* row = m.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j)
                s += row[j] * x[j];
            y[i] = s;
        }
    };

    double lhs_sum = 0.0, first = 0.0, second = 0.0;
    std::vector<Cplx> u, bu, tu, tbu, btu, abu, t2u;
    for (int i = 0; i < k; ++i) {
        const double li = vals[i];
        const auto [f, g] = couple.eval(Lambda, li);
        col(i, u);
        for (int p = 0; p < inst.n_ops; ++p) {
            real_mat_vec(inst.B[p], u, bu);
            real_mat_vec(inst.T[p], u, tu);
            real_mat_vec(inst.T[p], bu, tbu);
            real_mat_vec(inst.B[p], tu, btu);
            Cplx comm(0.0);
            for (int r = 0; r < n; ++r)
                comm += (tbu[r] - btu[r]) * std::conj(u[r]);
            lhs_sum += f * comm.real(); // [T,B] symmetric real: the form is real

            // <A Bu, Bu> with complex Hermitian A
            abu.assign(n, Cplx(0.0));
            for (int r = 0; r < n; ++r) {
                Cplx s(0.0);
                for (int ccol = 0; ccol < n; ++ccol)
                    s += Cplx(inst.A[static_cast<std::size_t>(r) * n + ccol],
                              inst.A_imag.empty()
                                  ? 0.0
                                  : inst.A_imag[static_cast<std::size_t>(r) * n + ccol]) *
                         bu[ccol];
                abu[r] = s;
            }
            Cplx abu_bu(0.0);
            double bnorm = 0.0;
            for (int r = 0; r < n; ++r) {
                abu_bu += abu[r] * std::conj(bu[r]);
                bnorm += std::norm(bu[r]);
            }
            first += g * (abu_bu.real() - li * bnorm);

            double tfac = 0.0;
            if (mode == EvalMode::standard) {
                for (int r = 0; r < n; ++r)
                    tfac += std::norm(tu[r]);
            } else {
                real_mat_vec(inst.T[p], tu, t2u);
                Cplx s(0.0);
                for (int r = 0; r < n; ++r)
                    s += t2u[r] * std::conj(u[r]);
                tfac = s.real();
            }
            second += (f * f / (g * (Lambda - li))) * tfac;
        }
    }
    out.lhs = lhs_sum * lhs_sum;
    out.rhs = 4.0 * first * second;
    return out;
}

} // namespace

double Sides::scale() const { return std::max({std::abs(lhs), std::abs(rhs), 1.0}); }

OperatorInstance random_instance(int dim, int n_ops, std::uint64_t seed) {
    return build_instance(dim, n_ops, seed, false);
}

OperatorInstance random_instance_complex(int dim, int n_ops, std::uint64_t seed) {
    return build_instance(dim, n_ops, seed, true);
}

Sides theorem_sides(const OperatorInstance& inst, const families::FGCouple& couple,
                    EvalMode mode) {
    if (inst.dim < 3 || inst.n_ops < 1 || inst.k < 1 || inst.k >= inst.dim)
        throw input_error("theorem_sides: malformed instance");
    return inst.complex_field ? sides_complex(inst, couple, mode)
                              : sides_real(inst, couple, mode);
}

FuzzReport fuzz(int trial_count, int dim_max, int n_ops_max,
                std::span<const families::FGCouple> couples, std::uint64_t seed, EvalMode mode) {
    if (trial_count < 1 || dim_max < 3 || n_ops_max < 1)
        throw input_error("fuzz: bad parameters");
    if (couples.empty())
        throw input_error("fuzz: need at least one couple");

    FuzzReport rep;
    rep.min_slack_normalized = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trial_count; ++t) {
        const std::uint64_t ts = splitmix64(seed ^ (0x51ed2700dcafeULL + t));
        std::mt19937_64 rng(ts);
        std::uniform_int_distribution<int> dd(3, dim_max);
        std::uniform_int_distribution<int> dn(1, n_ops_max);
        OperatorInstance inst = random_instance(dd(rng), dn(rng), ts);
        ++rep.trials;
        for (const auto& couple : couples) {
            const Sides s = theorem_sides(inst, couple, mode);
            ++rep.evaluations;
            const double normalized = s.slack() / s.scale();
            if (normalized < rep.min_slack_normalized) {
                rep.min_slack_normalized = normalized;
                rep.worst_instance = inst;
                rep.worst_couple = couple.describe();
            }
            if (s.slack() < -1e-9 * s.scale()) {
                if (couple.catalog_member())
                    ++rep.violations;
                else
                    ++rep.probe_violations;
            }
        }
    }
    return rep;
}

void save_replay(const OperatorInstance& inst, std::ostream& out) {
    out.precision(17);
    out << "platelab-abstract-instance v1\n";
    out << "dim " << inst.dim << "\n";
    out << "n_ops " << inst.n_ops << "\n";
    out << "k " << inst.k << "\n";
    out << "seed " << inst.seed << "\n";
    out << "complex " << (inst.complex_field ? 1 : 0) << "\n";
    auto dump = [&](const char* tag, const Matrix& m) {
        out << tag << "\n";
        for (int i = 0; i < inst.dim; ++i) {
            for (int j = 0; j < inst.dim; ++j)
                out << m[static_cast<std::size_t>(i) * inst.dim + j]
                    << (j + 1 == inst.dim ? '\n' : ' ');
        }
    };
    dump("A", inst.A);
    if (inst.complex_field)
        dump("A_imag", inst.A_imag);
    for (int p = 0; p < inst.n_ops; ++p) {
        std::ostringstream tag;
        tag << "B " << p;
        dump(tag.str().c_str(), inst.B[p]);
    }
    for (int p = 0; p < inst.n_ops; ++p) {
        std::ostringstream tag;
        tag << "T " << p;
        dump(tag.str().c_str(), inst.T[p]);
    }
}

void save_replay_file(const OperatorInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw input_error("save_replay_file: cannot open " + path);
    save_replay(inst, out);
}

OperatorInstance load_replay_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("load_replay_file: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header != "platelab-abstract-instance v1")
        throw input_error("load_replay_file: unrecognized header in " + path);

    OperatorInstance inst;
    std::string tag;
    int complex_flag = 0;
    in >> tag >> inst.dim;
    if (tag != "dim")
        throw input_error("load_replay_file: expected 'dim'");
    in >> tag >> inst.n_ops;
    if (tag != "n_ops")
        throw input_error("load_replay_file: expected 'n_ops'");
    in >> tag >> inst.k;
    if (tag != "k")
        throw input_error("load_replay_file: expected 'k'");
    in >> tag >> inst.seed;
    if (tag != "seed")
        throw input_error("load_replay_file: expected 'seed'");
    in >> tag >> complex_flag;
    if (tag != "complex")
        throw input_error("load_replay_file: expected 'complex'");
    inst.complex_field = complex_flag != 0;
    if (inst.dim < 3 || inst.n_ops < 1)
        throw input_error("load_replay_file: malformed dimensions");

    auto read_matrix = [&](Matrix& m) {
        m.resize(static_cast<std::size_t>(inst.dim) * inst.dim);
        for (double& v : m)
            if (!(in >> v))
                throw input_error("load_replay_file: truncated matrix data");
    };
    in >> tag;
    if (tag != "A")
        throw input_error("load_replay_file: expected 'A'");
    read_matrix(inst.A);
    if (inst.complex_field) {
        in >> tag;
        if (tag != "A_imag")
            throw input_error("load_replay_file: expected 'A_imag'");
        read_matrix(inst.A_imag);
    }
    int idx = 0;
    for (int p = 0; p < inst.n_ops; ++p) {
        in >> tag >> idx;
        if (tag != "B" || idx != p)
            throw input_error("load_replay_file: expected 'B " + std::to_string(p) + "'");
        Matrix m;
        read_matrix(m);
        inst.B.push_back(std::move(m));
    }
    for (int p = 0; p < inst.n_ops; ++p) {
        in >> tag >> idx;
        if (tag != "T" || idx != p)
            throw input_error("load_replay_file: expected 'T " + std::to_string(p) + "'");
        Matrix m;
        read_matrix(m);
        inst.T.push_back(std::move(m));
    }
    return inst;
}

} // namespace platelab::abstractlab
