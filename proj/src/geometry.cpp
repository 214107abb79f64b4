#include "platelab/geometry.hpp"

#include <cmath>
#include <limits>

#include "platelab/errors.hpp"

namespace platelab::geometry {

namespace {

Vec fd1(const Immersion& imm, double u, double v, bool along_u) {
    const double range = along_u ? (imm.u1 - imm.u0) : (imm.v1 - imm.v0);
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(range, 1.0);
    const Vec a = along_u ? imm.map(u + h, v) : imm.map(u, v + h);
    const Vec b = along_u ? imm.map(u - h, v) : imm.map(u, v - h);
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = (a[i] - b[i]) / (2.0 * h);
    return out;
}

Vec fd2(const Immersion& imm, double u, double v, int which) { // 0: uu, 1: uv, 2: vv
    const double ru = std::max(imm.u1 - imm.u0, 1.0);
    const double rv = std::max(imm.v1 - imm.v0, 1.0);
    const double eps = std::numeric_limits<double>::epsilon();
    if (which == 0) {
        const double h = std::pow(eps, 0.25) * ru;
        const Vec a = imm.map(u + h, v), b = imm.map(u, v), c = imm.map(u - h, v);
        Vec out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            out[i] = (a[i] - 2.0 * b[i] + c[i]) / (h * h);
        return out;
    }
    if (which == 2) {
        const double h = std::pow(eps, 0.25) * rv;
        const Vec a = imm.map(u, v + h), b = imm.map(u, v), c = imm.map(u, v - h);
        Vec out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            out[i] = (a[i] - 2.0 * b[i] + c[i]) / (h * h);
        return out;
    }
    const double hu = std::pow(eps, 0.25) * ru;
    const double hv = std::pow(eps, 0.25) * rv;
    const Vec pp = imm.map(u + hu, v + hv), pm = imm.map(u + hu, v - hv);
    const Vec mp = imm.map(u - hu, v + hv), mm = imm.map(u - hu, v - hv);
    Vec out(pp.size());
    for (std::size_t i = 0; i < pp.size(); ++i)
        out[i] = (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * hu * hv);
    return out;
}

struct Jet {
    Vec xu, xv, xuu, xuv, xvv;
};

Jet jet_at(const Immersion& imm, double u, double v) {
    Jet j;
    j.xu = imm.du ? imm.du(u, v) : fd1(imm, u, v, true);
    j.xv = imm.dv ? imm.dv(u, v) : fd1(imm, u, v, false);
    j.xuu = imm.duu ? imm.duu(u, v) : fd2(imm, u, v, 0);
    j.xuv = imm.duv ? imm.duv(u, v) : fd2(imm, u, v, 1);
    j.xvv = imm.dvv ? imm.dvv(u, v) : fd2(imm, u, v, 2);
    return j;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace

double mean_curvature_sq(const Immersion& imm, double u, double v) {
    if (imm.dim_intrinsic != 2)
        throw unsupported_error("mean_curvature_sq: catalog immersions are two-parameter");
    const Jet j = jet_at(imm, u, v);

    const double E = dot(j.xu, j.xu);
    const double F = dot(j.xu, j.xv);
    const double G = dot(j.xv, j.xv);
    const double det = E * G - F * F;
    if (!(det > 1e-14 * std::max(1.0, E * G)))
        throw singularity_error("mean_curvature_sq: degenerate first fundamental form at (" +
                                std::to_string(u) + ", " + std::to_string(v) + ")");
    // inverse metric
    const double iE = G / det, iF = -F / det, iG = E / det;

    // trace of the second fundamental form: g^{ab} d2X_ab, then remove the
    // tangential projection (valid in arbitrary codimension)
    const std::size_t m = j.xu.size();
    Vec tr(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        tr[i] = iE * j.xuu[i] + 2.0 * iF * j.xuv[i] + iG * j.xvv[i];

    const double cu = dot(tr, j.xu), cv = dot(tr, j.xv);
    // tangential components of tr in the (xu, xv) frame
    const double au = iE * cu + iF * cv;
    const double av = iF * cu + iG * cv;
    double h2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double normal = tr[i] - au * j.xu[i] - av * j.xv[i];
        h2 += normal * normal;
    }
    const double n = static_cast<double>(imm.dim_intrinsic);
    return h2 / (n * n);
}

DeltaEstimate delta_sup(const Immersion& imm, int nu, int nv, int refine_rounds) {
    if (nu < 2 || nv < 2)
        throw input_error("delta_sup: need at least a 2x2 sample grid");
    DeltaEstimate est;
    est.value = -1.0;

    double lo_u = imm.u0, hi_u = imm.u1, lo_v = imm.v0, hi_v = imm.v1;
    int cu = nu, cv = nv;
    for (int round = 0; round <= refine_rounds; ++round) {
        double best = -1.0, bu = lo_u, bv = lo_v;
        for (int i = 0; i <= cu; ++i) {
            for (int j = 0; j <= cv; ++j) {
                const double u = lo_u + (hi_u - lo_u) * i / cu;
                const double v = lo_v + (hi_v - lo_v) * j / cv;
                const double h2 = mean_curvature_sq(imm, u, v);
                ++est.samples;
                if (h2 > best) {
                    best = h2;
                    bu = u;
                    bv = v;
                }
            }
        }
        if (best > est.value) {
            est.value = best;
            est.arg_u = bu;
            est.arg_v = bv;
        }
        // refine a shrunken box around the running max
        const double su = (hi_u - lo_u) / cu, sv = (hi_v - lo_v) / cv;
        lo_u = bu - 2.0 * su;
        hi_u = bu + 2.0 * su;
        lo_v = bv - 2.0 * sv;
        hi_v = bv + 2.0 * sv;
        cu = cv = 8;
    }
    return est;
}

double delta_prime(const AmbientKind& ambient, int n, double delta_h) {
    if (n < 1)
        throw input_error("delta_prime: n must be >= 1");
    if (delta_h < 0.0)
        throw input_error("delta_prime: delta_H must be nonnegative");
    const bool flags = ambient.odd_dimensional || ambient.totally_real;
    if (flags && ambient.tag != AmbientTag::complex_projective)
        throw input_error("delta_prime: odd_dimensional/totally_real apply to CP^m only");

    const double nn = static_cast<double>(n);
    switch (ambient.tag) {
    case AmbientTag::euclidean:
        throw input_error("delta_prime: Euclidean ambient has no delta' (use delta)");
    case AmbientTag::sphere:
        return delta_h + 1.0;
    case AmbientTag::real_projective:
        return delta_h + 2.0 * (nn + 1.0) / nn;
    case AmbientTag::complex_projective: {
        double d = 2.0 * (nn + 2.0) / nn;
        if (ambient.odd_dimensional)
            d = std::min(d, (2.0 / nn) * (nn + 2.0 - 1.0 / nn));
        if (ambient.totally_real)
            d = std::min(d, 2.0 * (nn + 1.0) / nn);
        return delta_h + d;
    }
    case AmbientTag::quaternionic_projective:
        return delta_h + 2.0 * (nn + 4.0) / nn;
    }
    throw internal_error("delta_prime: unreachable");
}

EigenmapReport eigenmap_check(const Immersion& map, double lambda, int nu, int nv) {
    if (!map.flat_parameter_metric)
        throw unsupported_error("eigenmap_check: needs a flat parameter metric so that "
                                "Delta = d_uu + d_vv on components");
    EigenmapReport rep;
    for (int i = 0; i <= nu; ++i) {
        for (int j = 0; j <= nv; ++j) {
            const double u = map.u0 + (map.u1 - map.u0) * i / nu;
            const double v = map.v0 + (map.v1 - map.v0) * j / nv;
            const Vec x = map.map(u, v);
            const Jet jt = jet_at(map, u, v);
            ++rep.samples;

            double norm = 0.0, energy = 0.0;
            for (std::size_t p = 0; p < x.size(); ++p) {
                norm += x[p] * x[p];
                energy += jt.xu[p] * jt.xu[p] + jt.xv[p] * jt.xv[p];
                const double lap = jt.xuu[p] + jt.xvv[p];
                rep.laplace_residual =
                    std::max(rep.laplace_residual, std::abs(lap + lambda * x[p]));
            }
            rep.norm_residual = std::max(rep.norm_residual, std::abs(norm - 1.0));
            rep.energy_residual = std::max(rep.energy_residual, std::abs(energy - lambda));
        }
    }
    return rep;
}

Immersion plane() {
    Immersion s;
    s.name = "plane";
    s.dim_ambient = 3;
    s.map = [](double u, double v) { return Vec{u, v, 0.0}; };
    s.du = [](double, double) { return Vec{1.0, 0.0, 0.0}; };
    s.dv = [](double, double) { return Vec{0.0, 1.0, 0.0}; };
    s.duu = [](double, double) { return Vec{0.0, 0.0, 0.0}; };
    s.duv = s.duu;
    s.dvv = s.duu;
    s.u0 = 0.0;
    s.u1 = 1.0;
    s.v0 = 0.0;
    s.v1 = 1.0;
    s.flat_parameter_metric = true;
    return s;
}

Immersion sphere() {
    Immersion s;
    s.name = "sphere";
    s.dim_ambient = 3;
    s.map = [](double u, double v) {
        return Vec{std::cos(u) * std::sin(v), std::sin(u) * std::sin(v), std::cos(v)};
    };
    s.u0 = 0.0;
    s.u1 = 6.283185307179586;
    s.v0 = 0.3; // away from the coordinate poles
    s.v1 = 2.8;
    return s;
}

Immersion torus_of_revolution(double R, double r) {
    if (!(R > r) || !(r > 0.0))
        throw input_error("torus_of_revolution: need R > r > 0");
    Immersion s;
    s.name = "torus_of_revolution";
    s.dim_ambient = 3;
    s.map = [R, r](double u, double v) {
        return Vec{(R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u),
                   r * std::sin(v)};
    };
    s.u0 = 0.0;
    s.u1 = 6.283185307179586;
    s.v0 = 0.0;
    s.v1 = 6.283185307179586;
    return s;
}

Immersion product_of_circles(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw input_error("product_of_circles: radii must be positive");
    Immersion s;
    s.name = "product_of_circles";
    s.dim_ambient = 4;
    s.map = [r1, r2](double u, double v) {
        return Vec{r1 * std::cos(u / r1), r1 * std::sin(u / r1), r2 * std::cos(v / r2),
                   r2 * std::sin(v / r2)};
    };
    // arclength parameters: the pullback metric is the identity
    s.flat_parameter_metric = true;
    s.u0 = 0.0;
    s.u1 = 6.283185307179586 * r1;
    s.v0 = 0.0;
    s.v1 = 6.283185307179586 * r2;
    return s;
}

Immersion flat_torus_eigenmap() {
    const double inv_sqrt2 = 0.7071067811865476;
    Immersion s;
    s.name = "flat_torus_eigenmap";
    s.dim_ambient = 4;
    s.map = [inv_sqrt2](double u, double v) {
        return Vec{inv_sqrt2 * std::cos(u), inv_sqrt2 * std::sin(u), inv_sqrt2 * std::cos(v),
                   inv_sqrt2 * std::sin(v)};
    };
    s.du = [inv_sqrt2](double u, double) {
        return Vec{-inv_sqrt2 * std::sin(u), inv_sqrt2 * std::cos(u), 0.0, 0.0};
    };
    s.dv = [inv_sqrt2](double, double v) {
        return Vec{0.0, 0.0, -inv_sqrt2 * std::sin(v), inv_sqrt2 * std::cos(v)};
    };
    s.duu = [inv_sqrt2](double u, double) {
        return Vec{-inv_sqrt2 * std::cos(u), -inv_sqrt2 * std::sin(u), 0.0, 0.0};
    };
    s.duv = [](double, double) { return Vec{0.0, 0.0, 0.0, 0.0}; };
    s.dvv = [inv_sqrt2](double, double v) {
        return Vec{0.0, 0.0, -inv_sqrt2 * std::cos(v), -inv_sqrt2 * std::sin(v)};
    };
    s.flat_parameter_metric = true;
    s.u0 = 0.0;
    s.u1 = 6.283185307179586;
    s.v0 = 0.0;
    s.v1 = 6.283185307179586;
    return s;
}

Immersion by_name(const std::string& name) {
    // optional parameter suffix: torus_of_revolution:2,1
    std::string base = name, args;
    if (const auto colon = name.find(':'); colon != std::string::npos) {
        base = name.substr(0, colon);
        args = name.substr(colon + 1);
    }
    auto two_params = [&](double d1, double d2) {
        if (args.empty())
            return std::pair{d1, d2};
        const auto comma = args.find(',');
        try {
            if (comma == std::string::npos)
                return std::pair{std::stod(args), d2};
            return std::pair{std::stod(args.substr(0, comma)),
                             std::stod(args.substr(comma + 1))};
        } catch (...) {
            throw input_error("immersion '" + name + "': bad parameter list");
        }
    };
    if (base == "plane")
        return plane();
    if (base == "sphere")
        return sphere();
    if (base == "torus_of_revolution") {
        auto [R, r] = two_params(2.0, 1.0);
        return torus_of_revolution(R, r);
    }
    if (base == "product_of_circles") {
        auto [r1, r2] = two_params(1.0, 1.0);
        return product_of_circles(r1, r2);
    }
    if (base == "flat_torus_eigenmap")
        return flat_torus_eigenmap();
    throw input_error("unknown immersion: " + name);
}

} // namespace platelab::geometry
