#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rng.hpp"

namespace bhmap {

using Index = std::int64_t;
using ScalarField = std::vector<double>;

// Periodic flat m-torus grid. Index arithmetic wraps modulo n[a] on every
// axis; node ordering is row-major in the axis order given at construction.
class Mesh {
public:
    Mesh(std::vector<double> periods, std::vector<Index> resolution);

    int dim() const { return static_cast<int>(n_.size()); }
    Index node_count() const { return count_; }
    double period(int a) const { return L_[a]; }
    Index resolution(int a) const { return n_[a]; }
    double spacing(int a) const { return h_[a]; }
    double min_spacing() const;
    double max_spacing() const;
    double node_weight() const { return w_; }
    double volume() const;
    double diameter() const; // max torus distance between nodes

    const std::vector<double>& periods() const { return L_; }
    const std::vector<Index>& resolutions() const { return n_; }

    // index <-> multi-index
    void unflatten(Index id, Index* out) const;
    Index flatten(const Index* mi) const;
    // node shifted by `delta` cells along axis a (wraps)
    Index shift(Index id, int a, Index delta) const;
    // physical coordinate of node along axis a
    double coord(Index id, int a) const;

    double torus_distance(Index a, Index b) const;

    bool operator==(const Mesh& other) const { return L_ == other.L_ && n_ == other.n_; }

private:
    std::vector<double> L_;
    std::vector<Index> n_;
    std::vector<double> h_;
    std::vector<Index> stride_;
    Index count_ = 0;
    double w_ = 0.0;
};

struct BallRegion {
    Index center = 0;
    double radius = 0.0;
    std::vector<Index> members; // nodes with torus distance < radius, ascending
};

enum class CutoffProfile { LinearRamp, Smoothstep };

struct CutoffField {
    ScalarField values;
    Index center = 0;
    double rho1 = 0.0;
    double rho2 = 0.0;
    CutoffProfile profile = CutoffProfile::LinearRamp;
};

BallRegion ball(const Mesh& mesh, Index center, double r);

CutoffField cutoff(const Mesh& mesh, Index center, double rho1, double rho2,
                   CutoffProfile profile = CutoffProfile::LinearRamp);

// sum of f * node_weight over `region` (all nodes when region == nullptr)
double integrate(const Mesh& mesh, const ScalarField& f, const BallRegion* region = nullptr);

// central differences, one field per axis
std::vector<ScalarField> scalar_gradient(const Mesh& mesh, const ScalarField& f);
// forward differences; adjoint-exact partner of scalar_laplacian
std::vector<ScalarField> scalar_gradient_forward(const Mesh& mesh, const ScalarField& f);
double gradient_sq_norm_at(const std::vector<ScalarField>& grad, Index id);

// 3-point stencil per axis, geometer's sign (lap sin = -sin + O(h^2))
ScalarField scalar_laplacian(const Mesh& mesh, const ScalarField& f);
// nested central differences (width 2); the scalar counterpart of the rough Laplacian
ScalarField scalar_laplacian_wide(const Mesh& mesh, const ScalarField& f);

// zero-mean band-limited random field: sum of cosine modes with |k|_inf <= kmax,
// k != 0. Resolution independent: the same seed samples the same continuum field.
ScalarField random_bandlimited(const Mesh& mesh, Rng& rng, int kmax, int terms = 40);

// Empirical lower bound for C in (∫|f|^γ)^{2/γ} <= C (∫|∇f|² + ∫f²),
// γ = 2m/(m-2), maximised over band-limited zero-mean trial fields polished
// by an in-class fixed-point iteration. Requires m >= 3.
double sobolev_constant_estimate(const Mesh& mesh, int trials, std::uint64_t seed,
                                 int kmax = 1, int polish_iters = 30);

} // namespace bhmap
