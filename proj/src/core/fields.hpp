#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mesh.hpp"
#include "rng.hpp"
#include "space_form.hpp"

namespace bhmap {

using MeshPtr = std::shared_ptr<const Mesh>;
using TargetPtr = std::shared_ptr<const SpaceForm>;

// Discrete map phi: mesh nodes -> target, stored node-major in ambient
// coordinates. Every node value sits on the model within 1e-9.
class MapField {
public:
    MapField(MeshPtr mesh, TargetPtr target);

    const Mesh& mesh() const { return *mesh_; }
    const SpaceForm& target() const { return *target_; }
    MeshPtr mesh_ptr() const { return mesh_; }
    TargetPtr target_ptr() const { return target_; }

    double* at(Index node) { return values_.data() + node * target_->ambient_dim(); }
    const double* at(Index node) const { return values_.data() + node * target_->ambient_dim(); }
    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    double max_model_residual() const;
    void reproject(); // snap all nodes back onto the model

private:
    MeshPtr mesh_;
    TargetPtr target_;
    std::vector<double> values_;
};

// Section of the pullback bundle: one ambient vector per node, tangent at the
// base map's value there.
class Section {
public:
    explicit Section(const MapField& base);

    const MapField& base() const { return *base_; }
    const Mesh& mesh() const { return base_->mesh(); }
    const SpaceForm& target() const { return base_->target(); }

    double* at(Index node) { return values_.data() + node * target().ambient_dim(); }
    const double* at(Index node) const { return values_.data() + node * target().ambient_dim(); }
    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    double max_tangency_residual() const;
    double sup_norm() const;              // max over nodes of model-form norm
    ScalarField norm_field() const;       // |V| per node (model form)
    ScalarField sq_norm_field() const;    // |V|^2 per node

private:
    const MapField* base_;
    std::vector<double> values_;
};

// Per-node first-order data of a map: dphi(e_a) per axis, energy density.
struct Jet {
    std::vector<std::vector<double>> dphi; // [axis][node*d + c], tangent
    ScalarField dphi_sq;                   // |dphi|^2 per node
    ScalarField density;                   // e(phi) = 0.5 |dphi|^2
};

// --- constructors -----------------------------------------------------------

MapField constant_map(MeshPtr mesh, TargetPtr target, const Vec& value);

// (cos f(x), sin f(x), 0, ...) into S^n (kappa=+1); f(x) = x * winding + a sin x
// on a 2*pi-period first axis. winding=1, a=0 gives the equator geodesic map.
MapField circle_map(MeshPtr mesh, TargetPtr target, double winding, double a);

// scalar profile c * sin(2 pi x / L) into the first ambient coordinate (flat targets)
MapField sine_map(MeshPtr mesh, TargetPtr target, double c);

// base point + amplitude * (tangent-projected band-limited field), reprojected
MapField random_map(MeshPtr mesh, TargetPtr target, Rng& rng, double amplitude, int kmax);

// nodewise i.i.d. tangent gaussian noise of the given scale, then reproject
MapField perturb(const MapField& phi, Rng& rng, double scale);

// tangent-projected band-limited random section along phi
Section random_section(const MapField& phi, Rng& rng, double amplitude, int kmax);

// --- serialization ----------------------------------------------------------

// CSV with header "index_0,...,index_{m-1},value", row-major node order
void write_scalar_csv(const std::string& path, const Mesh& mesh, const ScalarField& f);
// CSV with header "index_0,..,index_{m-1},ambient_0,..,ambient_{d-1}"
void write_map_csv(const std::string& path, const MapField& phi);
ScalarField read_scalar_csv(const std::string& path, const Mesh& mesh);

std::string mesh_json(const Mesh& mesh);
std::string target_json(const SpaceForm& t);

} // namespace bhmap
