#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bhmap {

Mesh::Mesh(std::vector<double> periods, std::vector<Index> resolution)
    : L_(std::move(periods)), n_(std::move(resolution)) {
    if (L_.size() != n_.size())
        throw std::invalid_argument("mesh: periods and resolution length mismatch");
    if (L_.empty())
        throw std::invalid_argument("mesh: dimension must be >= 1");
    h_.resize(L_.size());
    w_ = 1.0;
    for (std::size_t a = 0; a < L_.size(); ++a) {
        if (L_[a] <= 0.0) throw std::invalid_argument("mesh: period must be positive");
        if (n_[a] < 4) throw std::invalid_argument("mesh: resolution must be >= 4");
        h_[a] = L_[a] / static_cast<double>(n_[a]);
        w_ *= h_[a];
    }
    stride_.assign(n_.size(), 1);
    for (int a = static_cast<int>(n_.size()) - 2; a >= 0; --a)
        stride_[a] = stride_[a + 1] * n_[a + 1];
    count_ = stride_[0] * n_[0];
}

double Mesh::min_spacing() const { return *std::min_element(h_.begin(), h_.end()); }
double Mesh::max_spacing() const { return *std::max_element(h_.begin(), h_.end()); }

double Mesh::volume() const {
    double v = 1.0;
    for (double l : L_) v *= l;
    return v;
}

double Mesh::diameter() const {
    double s = 0.0;
    for (double l : L_) s += 0.25 * l * l;
    return std::sqrt(s);
}

void Mesh::unflatten(Index id, Index* out) const {
    for (std::size_t a = 0; a < n_.size(); ++a) {
        out[a] = id / stride_[a];
        id -= out[a] * stride_[a];
    }
}

Index Mesh::flatten(const Index* mi) const {
    Index id = 0;
    for (std::size_t a = 0; a < n_.size(); ++a) {
        Index i = mi[a] % n_[a];
        if (i < 0) i += n_[a];
        id += i * stride_[a];
    }
    return id;
}

Index Mesh::shift(Index id, int a, Index delta) const {
    Index i = (id / stride_[a]) % n_[a];
    Index j = (i + delta) % n_[a];
    if (j < 0) j += n_[a];
    return id + (j - i) * stride_[a];
}

double Mesh::coord(Index id, int a) const {
    Index i = (id / stride_[a]) % n_[a];
    return static_cast<double>(i) * h_[a];
}

double Mesh::torus_distance(Index a, Index b) const {
    double s = 0.0;
    for (std::size_t ax = 0; ax < n_.size(); ++ax) {
        Index ia = (a / stride_[ax]) % n_[ax];
        Index ib = (b / stride_[ax]) % n_[ax];
        Index di = std::abs(ia - ib);
        di = std::min(di, n_[ax] - di);
        double d = static_cast<double>(di) * h_[ax];
        s += d * d;
    }
    return std::sqrt(s);
}

BallRegion ball(const Mesh& mesh, Index center, double r) {
    if (r <= 0.0) throw std::invalid_argument("ball: radius must be positive");
    BallRegion out;
    out.center = center;
    out.radius = r;
    // bounding-box scan around the center, wrapping per axis
    const int m = mesh.dim();
    std::vector<Index> ci(m), lo(m), hi(m), mi(m);
    mesh.unflatten(center, ci.data());
    for (int a = 0; a < m; ++a) {
        Index reach = static_cast<Index>(std::floor(r / mesh.spacing(a))) + 1;
        reach = std::min(reach, mesh.resolution(a) / 2);
        lo[a] = -reach;
        hi[a] = reach;
    }
    std::vector<Index> off(m, 0);
    for (int a = 0; a < m; ++a) off[a] = lo[a];
    while (true) {
        for (int a = 0; a < m; ++a) mi[a] = ci[a] + off[a];
        Index id = mesh.flatten(mi.data());
        if (mesh.torus_distance(id, center) < r) out.members.push_back(id);
        int a = m - 1;
        while (a >= 0) {
            if (++off[a] <= hi[a]) break;
            off[a] = lo[a];
            --a;
        }
        if (a < 0) break;
    }
    std::sort(out.members.begin(), out.members.end());
    out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
    return out;
}

CutoffField cutoff(const Mesh& mesh, Index center, double rho1, double rho2,
                   CutoffProfile profile) {
    if (!(0.0 < rho1 && rho1 < rho2))
        throw std::invalid_argument("cutoff: need 0 < rho1 < rho2");
    CutoffField out;
    out.center = center;
    out.rho1 = rho1;
    out.rho2 = rho2;
    out.profile = profile;
    out.values.resize(static_cast<std::size_t>(mesh.node_count()));
    for (Index id = 0; id < mesh.node_count(); ++id) {
        double d = mesh.torus_distance(id, center);
        double t = (rho2 - d) / (rho2 - rho1); // 1 at rho1, 0 at rho2
        t = std::clamp(t, 0.0, 1.0);
        out.values[static_cast<std::size_t>(id)] =
            profile == CutoffProfile::LinearRamp ? t : t * t * (3.0 - 2.0 * t);
    }
    return out;
}

double integrate(const Mesh& mesh, const ScalarField& f, const BallRegion* region) {
    double s = 0.0;
    if (region == nullptr) {
        for (double v : f) s += v;
    } else {
        for (Index id : region->members) s += f[static_cast<std::size_t>(id)];
    }
    return s * mesh.node_weight();
}

std::vector<ScalarField> scalar_gradient(const Mesh& mesh, const ScalarField& f) {
    const int m = mesh.dim();
    std::vector<ScalarField> g(m, ScalarField(f.size()));
    for (int a = 0; a < m; ++a) {
        const double inv = 1.0 / (2.0 * mesh.spacing(a));
        for (Index id = 0; id < mesh.node_count(); ++id) {
            g[a][static_cast<std::size_t>(id)] =
                (f[static_cast<std::size_t>(mesh.shift(id, a, 1))] -
                 f[static_cast<std::size_t>(mesh.shift(id, a, -1))]) * inv;
        }
    }
    return g;
}

std::vector<ScalarField> scalar_gradient_forward(const Mesh& mesh, const ScalarField& f) {
    const int m = mesh.dim();
    std::vector<ScalarField> g(m, ScalarField(f.size()));
    for (int a = 0; a < m; ++a) {
        const double inv = 1.0 / mesh.spacing(a);
        for (Index id = 0; id < mesh.node_count(); ++id) {
            g[a][static_cast<std::size_t>(id)] =
                (f[static_cast<std::size_t>(mesh.shift(id, a, 1))] -
                 f[static_cast<std::size_t>(id)]) * inv;
        }
    }
    return g;
}

double gradient_sq_norm_at(const std::vector<ScalarField>& grad, Index id) {
    double s = 0.0;
    for (const auto& g : grad) {
        double v = g[static_cast<std::size_t>(id)];
        s += v * v;
    }
    return s;
}

ScalarField scalar_laplacian(const Mesh& mesh, const ScalarField& f) {
    ScalarField out(f.size(), 0.0);
    for (int a = 0; a < mesh.dim(); ++a) {
        const double inv = 1.0 / (mesh.spacing(a) * mesh.spacing(a));
        for (Index id = 0; id < mesh.node_count(); ++id) {
            out[static_cast<std::size_t>(id)] +=
                (f[static_cast<std::size_t>(mesh.shift(id, a, 1))] -
                 2.0 * f[static_cast<std::size_t>(id)] +
                 f[static_cast<std::size_t>(mesh.shift(id, a, -1))]) * inv;
        }
    }
    return out;
}

ScalarField scalar_laplacian_wide(const Mesh& mesh, const ScalarField& f) {
    ScalarField out(f.size(), 0.0);
    for (int a = 0; a < mesh.dim(); ++a) {
        const double inv = 1.0 / (4.0 * mesh.spacing(a) * mesh.spacing(a));
        for (Index id = 0; id < mesh.node_count(); ++id) {
            out[static_cast<std::size_t>(id)] +=
                (f[static_cast<std::size_t>(mesh.shift(id, a, 2))] -
                 2.0 * f[static_cast<std::size_t>(id)] +
                 f[static_cast<std::size_t>(mesh.shift(id, a, -2))]) * inv;
        }
    }
    return out;
}

ScalarField random_bandlimited(const Mesh& mesh, Rng& rng, int kmax, int terms) {
    const int m = mesh.dim();
    ScalarField f(static_cast<std::size_t>(mesh.node_count()), 0.0);
    std::vector<Index> k(m);
    const double two_pi = 6.283185307179586477;
    for (int t = 0; t < terms; ++t) {
        bool nonzero = false;
        for (int a = 0; a < m; ++a) {
            k[a] = rng.uniform_int(-kmax, kmax);
            if (k[a] != 0) nonzero = true;
        }
        double amp = rng.gaussian();
        double phase = rng.uniform(0.0, two_pi);
        if (!nonzero) continue; // keep the stream aligned, skip the constant mode
        for (Index id = 0; id < mesh.node_count(); ++id) {
            double arg = phase;
            for (int a = 0; a < m; ++a)
                arg += two_pi * static_cast<double>(k[a]) * mesh.coord(id, a) / mesh.period(a);
            f[static_cast<std::size_t>(id)] += amp * std::cos(arg);
        }
    }
    return f;
}

namespace {

// projection onto the per-axis span {1, cos(2pi k x/L), sin(...) : k <= kmax}
struct AxisProjector {
    std::vector<std::vector<double>> P; // one n x n matrix per axis
    static AxisProjector build(const Mesh& mesh, int kmax) {
        AxisProjector out;
        for (int a = 0; a < mesh.dim(); ++a) {
            const Index n = mesh.resolution(a);
            std::vector<std::vector<double>> basis;
            basis.emplace_back(n, 1.0 / std::sqrt(static_cast<double>(n)));
            for (int k = 1; k <= kmax; ++k) {
                std::vector<double> c(n), s(n);
                double nc = 0.0, ns = 0.0;
                for (Index i = 0; i < n; ++i) {
                    double x = 6.283185307179586477 * static_cast<double>(k * i) / static_cast<double>(n);
                    c[i] = std::cos(x);
                    s[i] = std::sin(x);
                    nc += c[i] * c[i];
                    ns += s[i] * s[i];
                }
                nc = std::sqrt(nc);
                ns = std::sqrt(ns);
                for (Index i = 0; i < n; ++i) { c[i] /= nc; s[i] /= ns; }
                basis.push_back(std::move(c));
                basis.push_back(std::move(s));
            }
            std::vector<double> P(static_cast<std::size_t>(n * n), 0.0);
            for (const auto& b : basis)
                for (Index i = 0; i < n; ++i)
                    for (Index j = 0; j < n; ++j)
                        P[static_cast<std::size_t>(i * n + j)] += b[i] * b[j];
            out.P.push_back(std::move(P));
        }
        return out;
    }

    void apply(const Mesh& mesh, ScalarField& f) const {
        ScalarField tmp(f.size());
        for (int a = 0; a < mesh.dim(); ++a) {
            const Index n = mesh.resolution(a);
            const auto& M = P[static_cast<std::size_t>(a)];
            for (Index id = 0; id < mesh.node_count(); ++id) {
                Index i = (id / stride(mesh, a)) % n;
                double s = 0.0;
                Index base = id - i * stride(mesh, a);
                for (Index j = 0; j < n; ++j)
                    s += M[static_cast<std::size_t>(i * n + j)] *
                         f[static_cast<std::size_t>(base + j * stride(mesh, a))];
                tmp[static_cast<std::size_t>(id)] = s;
            }
            f.swap(tmp);
        }
    }

    static Index stride(const Mesh& mesh, int a) {
        Index s = 1;
        for (int b = mesh.dim() - 1; b > a; --b) s *= mesh.resolution(b);
        return s;
    }
};

// CG on (-scalar_laplacian_wide + I) x = rhs
ScalarField solve_wide_helmholtz(const Mesh& mesh, const ScalarField& rhs, int iters) {
    ScalarField x(rhs.size(), 0.0), r = rhs, p = rhs;
    double rs = 0.0;
    for (double v : r) rs += v * v;
    const double rs0 = rs;
    for (int it = 0; it < iters && rs > 1e-26 * rs0; ++it) {
        ScalarField Ap = scalar_laplacian_wide(mesh, p);
        double pAp = 0.0;
        for (std::size_t i = 0; i < Ap.size(); ++i) {
            Ap[i] = -Ap[i] + p[i];
            pAp += p[i] * Ap[i];
        }
        double alpha = rs / pAp;
        double rs2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rs2 += r[i] * r[i];
        }
        double beta = rs2 / rs;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
        rs = rs2;
    }
    return x;
}

double sobolev_quotient(const Mesh& mesh, const ScalarField& f, double gamma) {
    double num = 0.0, grad2 = 0.0, f2 = 0.0;
    auto g = scalar_gradient(mesh, f);
    for (Index id = 0; id < mesh.node_count(); ++id) {
        double v = f[static_cast<std::size_t>(id)];
        num += std::pow(std::abs(v), gamma);
        grad2 += gradient_sq_norm_at(g, id);
        f2 += v * v;
    }
    double A = std::pow(num * mesh.node_weight(), 2.0 / gamma);
    double B = (grad2 + f2) * mesh.node_weight();
    return B > 0.0 ? A / B : 0.0;
}

} // namespace

double sobolev_constant_estimate(const Mesh& mesh, int trials, std::uint64_t seed,
                                 int kmax, int polish_iters) {
    if (mesh.dim() < 3)
        throw std::invalid_argument("sobolev_constant_estimate: requires m >= 3");
    if (trials < 1)
        throw std::invalid_argument("sobolev_constant_estimate: trials must be >= 1");
    const double m = static_cast<double>(mesh.dim());
    const double gamma = 2.0 * m / (m - 2.0);
    Rng rng = Rng(seed).sub("sobolev-trials");
    auto proj = AxisProjector::build(mesh, kmax);
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
        ScalarField f = random_bandlimited(mesh, rng, kmax);
        // in-class fixed point: f <- bandproject((-lap_w + I)^{-1} |f|^{g-1} sgn f)
        for (int it = 0; it < polish_iters; ++it) {
            ScalarField rhs(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) {
                double v = f[i];
                rhs[i] = std::pow(std::abs(v), gamma - 1.0) * (v >= 0.0 ? 1.0 : -1.0);
            }
            f = solve_wide_helmholtz(mesh, rhs, 200);
            proj.apply(mesh, f);
            double n2 = 0.0;
            for (double v : f) n2 += v * v;
            n2 = std::sqrt(n2 * mesh.node_weight());
            if (n2 == 0.0) break;
            for (double& v : f) v /= n2;
        }
        best = std::max(best, sobolev_quotient(mesh, f, gamma));
    }
    return best;
}

} // namespace bhmap
