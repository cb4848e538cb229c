#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bhmap {

using Vec = std::vector<double>; // ambient vector, length = ambient_dim

// Target (N,h): simply connected space form of curvature kappa in {-1,0,+1},
// embedded in R^d. kappa=+1: unit sphere; kappa=-1: hyperboloid sheet in
// Minkowski space (signature -,+,...,+); kappa=0: flat R^n.
class SpaceForm {
public:
    SpaceForm(int kappa, int n);

    int kappa() const { return kappa_; }
    int target_dim() const { return n_; }
    int ambient_dim() const { return d_; }

    // model bilinear form (Euclidean or Minkowski)
    double form(const double* u, const double* v) const;
    double form(const Vec& u, const Vec& v) const { return form(u.data(), v.data()); }

    // constraint residual: |<q,q> - (+-1)|; 0 for kappa=0
    double model_residual(const double* q) const;
    bool on_model(const double* q, double tol = 1e-9) const { return model_residual(q) <= tol; }

    // nearest model point; throws for non-projectable input
    void project_point(const double* p, double* out) const;
    Vec project_point(const Vec& p) const;

    // tangent projection at on-model q (silently re-projects q within 1e-9,
    // throws beyond)
    void project_tangent(const double* q, const double* w, double* out) const;
    Vec project_tangent(const Vec& q, const Vec& w) const;

    // R^N(X,Y)Z = kappa (<Y,Z> X - <X,Z> Y)
    void curvature_R(const double* q, const double* X, const double* Y,
                     const double* Z, double* out) const;
    Vec curvature_R(const Vec& q, const Vec& X, const Vec& Y, const Vec& Z) const;

    // h(R(V,W)W, V) = kappa (<W,W><V,V> - <V,W>^2)
    double sectional_sign_certificate(const double* q, const double* V, const double* W) const;

    // curvature upper bound of Lemma 6.1 realised as kappa^+ = max(kappa, 0)
    double curvature_upper_bound() const { return kappa_ > 0 ? 1.0 : 0.0; }

    // a reference base point on the model
    Vec base_point() const;

    bool operator==(const SpaceForm& o) const { return kappa_ == o.kappa_ && n_ == o.n_; }

private:
    int kappa_;
    int n_;
    int d_;
};

} // namespace bhmap
