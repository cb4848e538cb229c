#include "fields.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "io.hpp"

namespace bhmap {

MapField::MapField(MeshPtr mesh, TargetPtr target)
    : mesh_(std::move(mesh)), target_(std::move(target)) {
    values_.assign(static_cast<std::size_t>(mesh_->node_count() * target_->ambient_dim()), 0.0);
}

double MapField::max_model_residual() const {
    double worst = 0.0;
    for (Index id = 0; id < mesh_->node_count(); ++id)
        worst = std::max(worst, target_->model_residual(at(id)));
    return worst;
}

void MapField::reproject() {
    const int d = target_->ambient_dim();
    std::vector<double> tmp(static_cast<std::size_t>(d));
    for (Index id = 0; id < mesh_->node_count(); ++id) {
        target_->project_point(at(id), tmp.data());
        for (int c = 0; c < d; ++c) at(id)[c] = tmp[static_cast<std::size_t>(c)];
    }
}

Section::Section(const MapField& base) : base_(&base) {
    values_.assign(base.raw().size(), 0.0);
}

double Section::max_tangency_residual() const {
    if (target().kappa() == 0) return 0.0;
    double worst = 0.0;
    for (Index id = 0; id < mesh().node_count(); ++id)
        worst = std::max(worst, std::abs(target().form(at(id), base_->at(id))));
    return worst;
}

double Section::sup_norm() const {
    double worst = 0.0;
    for (Index id = 0; id < mesh().node_count(); ++id) {
        double n2 = target().form(at(id), at(id));
        worst = std::max(worst, n2);
    }
    return std::sqrt(std::max(worst, 0.0));
}

ScalarField Section::norm_field() const {
    ScalarField out(static_cast<std::size_t>(mesh().node_count()));
    for (Index id = 0; id < mesh().node_count(); ++id)
        out[static_cast<std::size_t>(id)] =
            std::sqrt(std::max(target().form(at(id), at(id)), 0.0));
    return out;
}

ScalarField Section::sq_norm_field() const {
    ScalarField out(static_cast<std::size_t>(mesh().node_count()));
    for (Index id = 0; id < mesh().node_count(); ++id)
        out[static_cast<std::size_t>(id)] = target().form(at(id), at(id));
    return out;
}

MapField constant_map(MeshPtr mesh, TargetPtr target, const Vec& value) {
    if (static_cast<int>(value.size()) != target->ambient_dim())
        throw std::invalid_argument("constant_map: ambient dimension mismatch");
    if (target->model_residual(value.data()) > 1e-9)
        throw std::invalid_argument("constant_map: value off model");
    MapField phi(std::move(mesh), target);
    const int d = target->ambient_dim();
    for (Index id = 0; id < phi.mesh().node_count(); ++id)
        for (int c = 0; c < d; ++c) phi.at(id)[c] = value[static_cast<std::size_t>(c)];
    return phi;
}

MapField circle_map(MeshPtr mesh, TargetPtr target, double winding, double a) {
    if (target->kappa() != 1)
        throw std::invalid_argument("circle_map: target must be a sphere (kappa=+1)");
    MapField phi(std::move(mesh), target);
    const int d = target->ambient_dim();
    for (Index id = 0; id < phi.mesh().node_count(); ++id) {
        double x = phi.mesh().coord(id, 0);
        double f = winding * x + a * std::sin(x);
        double* q = phi.at(id);
        q[0] = std::cos(f);
        q[1] = std::sin(f);
        for (int c = 2; c < d; ++c) q[c] = 0.0;
    }
    return phi;
}

MapField sine_map(MeshPtr mesh, TargetPtr target, double c) {
    if (target->kappa() != 0)
        throw std::invalid_argument("sine_map: target must be flat (kappa=0)");
    MapField phi(std::move(mesh), target);
    const double two_pi = 6.283185307179586477;
    for (Index id = 0; id < phi.mesh().node_count(); ++id) {
        double x = phi.mesh().coord(id, 0);
        phi.at(id)[0] = c * std::sin(two_pi * x / phi.mesh().period(0));
    }
    return phi;
}

MapField random_map(MeshPtr mesh, TargetPtr target, Rng& rng, double amplitude, int kmax) {
    MapField phi(mesh, target);
    const int d = target->ambient_dim();
    Vec base = target->base_point();
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) comps.push_back(random_bandlimited(*mesh, rng, kmax, 24));
    double sup = 0.0;
    for (const auto& f : comps)
        for (double v : f) sup = std::max(sup, std::abs(v));
    if (sup == 0.0) sup = 1.0;
    std::vector<double> w(static_cast<std::size_t>(d)), t(static_cast<std::size_t>(d));
    for (Index id = 0; id < mesh->node_count(); ++id) {
        for (int c = 0; c < d; ++c)
            w[static_cast<std::size_t>(c)] = comps[static_cast<std::size_t>(c)][static_cast<std::size_t>(id)] / sup;
        target->project_tangent(base.data(), w.data(), t.data());
        for (int c = 0; c < d; ++c)
            t[static_cast<std::size_t>(c)] = base[static_cast<std::size_t>(c)] +
                                             amplitude * t[static_cast<std::size_t>(c)];
        target->project_point(t.data(), phi.at(id));
    }
    return phi;
}

MapField perturb(const MapField& phi, Rng& rng, double scale) {
    MapField out(phi.mesh_ptr(), phi.target_ptr());
    const int d = phi.target().ambient_dim();
    std::vector<double> w(static_cast<std::size_t>(d)), t(static_cast<std::size_t>(d)),
        p(static_cast<std::size_t>(d));
    for (Index id = 0; id < phi.mesh().node_count(); ++id) {
        for (int c = 0; c < d; ++c) w[static_cast<std::size_t>(c)] = scale * rng.gaussian();
        phi.target().project_tangent(phi.at(id), w.data(), t.data());
        for (int c = 0; c < d; ++c)
            p[static_cast<std::size_t>(c)] = phi.at(id)[c] + t[static_cast<std::size_t>(c)];
        phi.target().project_point(p.data(), out.at(id));
    }
    return out;
}

Section random_section(const MapField& phi, Rng& rng, double amplitude, int kmax) {
    Section V(phi);
    const int d = phi.target().ambient_dim();
    std::vector<ScalarField> comps;
    for (int c = 0; c < d; ++c) comps.push_back(random_bandlimited(phi.mesh(), rng, kmax, 24));
    double sup = 0.0;
    for (const auto& f : comps)
        for (double v : f) sup = std::max(sup, std::abs(v));
    if (sup == 0.0) sup = 1.0;
    std::vector<double> w(static_cast<std::size_t>(d));
    for (Index id = 0; id < phi.mesh().node_count(); ++id) {
        for (int c = 0; c < d; ++c)
            w[static_cast<std::size_t>(c)] =
                amplitude * comps[static_cast<std::size_t>(c)][static_cast<std::size_t>(id)] / sup;
        phi.target().project_tangent(phi.at(id), w.data(), V.at(id));
    }
    return V;
}

void write_scalar_csv(const std::string& path, const Mesh& mesh, const ScalarField& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const int m = mesh.dim();
    for (int a = 0; a < m; ++a) out << "index_" << a << ",";
    out << "value\n";
    std::vector<Index> mi(static_cast<std::size_t>(m));
    for (Index id = 0; id < mesh.node_count(); ++id) {
        mesh.unflatten(id, mi.data());
        for (int a = 0; a < m; ++a) out << mi[static_cast<std::size_t>(a)] << ",";
        out << fmt17(f[static_cast<std::size_t>(id)]) << "\n";
    }
}

void write_map_csv(const std::string& path, const MapField& phi) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const int m = phi.mesh().dim();
    const int d = phi.target().ambient_dim();
    for (int a = 0; a < m; ++a) out << "index_" << a << ",";
    for (int c = 0; c < d; ++c) out << "ambient_" << c << (c + 1 < d ? "," : "\n");
    std::vector<Index> mi(static_cast<std::size_t>(m));
    for (Index id = 0; id < phi.mesh().node_count(); ++id) {
        phi.mesh().unflatten(id, mi.data());
        for (int a = 0; a < m; ++a) out << mi[static_cast<std::size_t>(a)] << ",";
        for (int c = 0; c < d; ++c)
            out << fmt17(phi.at(id)[c]) << (c + 1 < d ? "," : "\n");
    }
}

ScalarField read_scalar_csv(const std::string& path, const Mesh& mesh) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line); // header
    ScalarField f(static_cast<std::size_t>(mesh.node_count()), 0.0);
    const int m = mesh.dim();
    std::vector<Index> mi(static_cast<std::size_t>(m));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        for (int a = 0; a < m; ++a) {
            std::getline(ss, tok, ',');
            mi[static_cast<std::size_t>(a)] = std::stoll(tok);
        }
        std::getline(ss, tok, ',');
        f[static_cast<std::size_t>(mesh.flatten(mi.data()))] = std::stod(tok);
    }
    return f;
}

std::string mesh_json(const Mesh& mesh) {
    std::string s = "{\"dim\": " + std::to_string(mesh.dim()) + ", \"periods\": [";
    for (int a = 0; a < mesh.dim(); ++a)
        s += fmt17(mesh.period(a)) + (a + 1 < mesh.dim() ? ", " : "");
    s += "], \"resolution\": [";
    for (int a = 0; a < mesh.dim(); ++a)
        s += std::to_string(mesh.resolution(a)) + (a + 1 < mesh.dim() ? ", " : "");
    s += "]}";
    return s;
}

std::string target_json(const SpaceForm& t) {
    return "{\"kappa\": " + std::to_string(t.kappa()) + ", \"n\": " + std::to_string(t.target_dim()) + "}";
}

} // namespace bhmap
