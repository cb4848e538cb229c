#include "map_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace bhmap {

namespace {

// central difference of a node-major ambient-vector array along axis a
void central_diff(const Mesh& mesh, int d, const std::vector<double>& v, int a,
                  std::vector<double>& out) {
    const double inv = 1.0 / (2.0 * mesh.spacing(a));
    for (Index id = 0; id < mesh.node_count(); ++id) {
        const double* p = v.data() + mesh.shift(id, a, 1) * d;
        const double* m = v.data() + mesh.shift(id, a, -1) * d;
        double* o = out.data() + id * d;
        for (int c = 0; c < d; ++c) o[c] = (p[c] - m[c]) * inv;
    }
}

} // namespace

Jet differential(const MapField& phi) {
    const Mesh& mesh = phi.mesh();
    const SpaceForm& tg = phi.target();
    const int d = tg.ambient_dim();
    Jet jet;
    jet.dphi.assign(static_cast<std::size_t>(mesh.dim()), std::vector<double>(phi.raw().size()));
    jet.dphi_sq.assign(static_cast<std::size_t>(mesh.node_count()), 0.0);
    std::vector<double> diff(phi.raw().size());
    for (int a = 0; a < mesh.dim(); ++a) {
        central_diff(mesh, d, phi.raw(), a, diff);
        auto& da = jet.dphi[static_cast<std::size_t>(a)];
        for (Index id = 0; id < mesh.node_count(); ++id) {
            tg.project_tangent(phi.at(id), diff.data() + id * d, da.data() + id * d);
            jet.dphi_sq[static_cast<std::size_t>(id)] +=
                tg.form(da.data() + id * d, da.data() + id * d);
        }
    }
    jet.density.resize(jet.dphi_sq.size());
    for (std::size_t i = 0; i < jet.density.size(); ++i) jet.density[i] = 0.5 * jet.dphi_sq[i];
    return jet;
}

Section second_fundamental_form(const MapField& phi, int a, int b) {
    const Mesh& mesh = phi.mesh();
    const SpaceForm& tg = phi.target();
    const int d = tg.ambient_dim();
    if (a < 0 || a >= mesh.dim() || b < 0 || b >= mesh.dim())
        throw std::invalid_argument("second_fundamental_form: axis out of range");
    Section out(phi);
    std::vector<double> second(static_cast<std::size_t>(d));
    for (Index id = 0; id < mesh.node_count(); ++id) {
        if (a == b) {
            const double inv = 1.0 / (mesh.spacing(a) * mesh.spacing(a));
            const double* p = phi.at(mesh.shift(id, a, 1));
            const double* q = phi.at(id);
            const double* m = phi.at(mesh.shift(id, a, -1));
            for (int c = 0; c < d; ++c) second[static_cast<std::size_t>(c)] = (p[c] - 2.0 * q[c] + m[c]) * inv;
        } else {
            const double inv = 1.0 / (4.0 * mesh.spacing(a) * mesh.spacing(b));
            const double* pp = phi.at(mesh.shift(mesh.shift(id, a, 1), b, 1));
            const double* pm = phi.at(mesh.shift(mesh.shift(id, a, 1), b, -1));
            const double* mp = phi.at(mesh.shift(mesh.shift(id, a, -1), b, 1));
            const double* mm = phi.at(mesh.shift(mesh.shift(id, a, -1), b, -1));
            for (int c = 0; c < d; ++c)
                second[static_cast<std::size_t>(c)] = (pp[c] - pm[c] - mp[c] + mm[c]) * inv;
        }
        phi.target().project_tangent(phi.at(id), second.data(), out.at(id));
    }
    return out;
}

Section tension(const MapField& phi) {
    const Mesh& mesh = phi.mesh();
    const int d = phi.target().ambient_dim();
    Section out(phi);
    std::vector<double> lap(static_cast<std::size_t>(d));
    for (Index id = 0; id < mesh.node_count(); ++id) {
        for (int c = 0; c < d; ++c) lap[static_cast<std::size_t>(c)] = 0.0;
        for (int a = 0; a < mesh.dim(); ++a) {
            const double inv = 1.0 / (mesh.spacing(a) * mesh.spacing(a));
            const double* p = phi.at(mesh.shift(id, a, 1));
            const double* q = phi.at(id);
            const double* m = phi.at(mesh.shift(id, a, -1));
            for (int c = 0; c < d; ++c)
                lap[static_cast<std::size_t>(c)] += (p[c] - 2.0 * q[c] + m[c]) * inv;
        }
        phi.target().project_tangent(phi.at(id), lap.data(), out.at(id));
    }
    return out;
}

Section pullback_derivative(const Section& V, int a) {
    const Mesh& mesh = V.mesh();
    const SpaceForm& tg = V.target();
    const int d = tg.ambient_dim();
    if (a < 0 || a >= mesh.dim())
        throw std::invalid_argument("pullback_derivative: axis out of range");
    Section out(V.base());
    std::vector<double> diff(V.raw().size());
    central_diff(mesh, d, V.raw(), a, diff);
    for (Index id = 0; id < mesh.node_count(); ++id)
        tg.project_tangent(V.base().at(id), diff.data() + id * d, out.at(id));
    return out;
}

Section rough_laplacian(const Section& V) {
    const Mesh& mesh = V.mesh();
    const int d = V.target().ambient_dim();
    Section out(V.base());
    for (int a = 0; a < mesh.dim(); ++a) {
        Section dd = pullback_derivative(pullback_derivative(V, a), a);
        for (Index id = 0; id < mesh.node_count(); ++id)
            for (int c = 0; c < d; ++c) out.at(id)[c] -= dd.at(id)[c];
    }
    return out;
}

Section curvature_term(const MapField& phi, const Section& V) {
    Jet jet = differential(phi);
    return curvature_term(phi, V, jet);
}

Section curvature_term(const MapField& phi, const Section& V, const Jet& jet) {
    const Mesh& mesh = phi.mesh();
    const SpaceForm& tg = phi.target();
    const int d = tg.ambient_dim();
    Section out(phi);
    if (tg.kappa() == 0) return out;
    const double k = static_cast<double>(tg.kappa());
    for (Index id = 0; id < mesh.node_count(); ++id) {
        const double* v = V.at(id);
        double* o = out.at(id);
        const double nd2 = jet.dphi_sq[static_cast<std::size_t>(id)];
        for (int c = 0; c < d; ++c) o[c] = k * nd2 * v[c];
        for (int a = 0; a < mesh.dim(); ++a) {
            const double* da = jet.dphi[static_cast<std::size_t>(a)].data() + id * d;
            const double vd = tg.form(v, da);
            for (int c = 0; c < d; ++c) o[c] -= k * vd * da[c];
        }
    }
    return out;
}

Section jacobi_apply(const MapField& phi, const Section& V) {
    Section out = rough_laplacian(V);
    Section rv = curvature_term(phi, V);
    const int d = phi.target().ambient_dim();
    for (Index id = 0; id < phi.mesh().node_count(); ++id)
        for (int c = 0; c < d; ++c) out.at(id)[c] -= rv.at(id)[c];
    return out;
}

Section bitension(const MapField& phi) {
    return jacobi_apply(phi, tension(phi));
}

MapField nyquist_filter(const MapField& phi) {
    const Mesh& mesh = phi.mesh();
    const int d = phi.target().ambient_dim();
    MapField out(phi.mesh_ptr(), phi.target_ptr());
    std::vector<double> cur = phi.raw();
    std::vector<double> next(cur.size());
    for (int a = 0; a < mesh.dim(); ++a) {
        for (Index id = 0; id < mesh.node_count(); ++id) {
            const double* p = cur.data() + mesh.shift(id, a, 1) * d;
            const double* q = cur.data() + id * d;
            const double* m = cur.data() + mesh.shift(id, a, -1) * d;
            double* o = next.data() + id * d;
            for (int c = 0; c < d; ++c) o[c] = 0.25 * (p[c] + 2.0 * q[c] + m[c]);
        }
        cur.swap(next);
    }
    for (Index id = 0; id < mesh.node_count(); ++id)
        phi.target().project_point(cur.data() + id * d, out.at(id));
    return out;
}

ScalarField pullback_gradient_sq(const Section& V) {
    const Mesh& mesh = V.mesh();
    ScalarField out(static_cast<std::size_t>(mesh.node_count()), 0.0);
    for (int a = 0; a < mesh.dim(); ++a) {
        Section da = pullback_derivative(V, a);
        for (Index id = 0; id < mesh.node_count(); ++id)
            out[static_cast<std::size_t>(id)] += V.target().form(da.at(id), da.at(id));
    }
    return out;
}

std::vector<ScalarField> regularized_norm_gradient(const Mesh& mesh, const ScalarField& norm) {
    constexpr double eps_reg = 1e-12;
    ScalarField reg(norm.size());
    for (std::size_t i = 0; i < norm.size(); ++i)
        reg[i] = std::sqrt(norm[i] * norm[i] + eps_reg * eps_reg);
    return scalar_gradient(mesh, reg);
}

} // namespace bhmap
