#include "space_form.hpp"

#include <cmath>
#include <stdexcept>

namespace bhmap {

SpaceForm::SpaceForm(int kappa, int n) : kappa_(kappa), n_(n) {
    if (kappa != -1 && kappa != 0 && kappa != 1)
        throw std::invalid_argument("space form: kappa must be -1, 0 or +1");
    if (n < 1)
        throw std::invalid_argument("space form: target dimension must be >= 1");
    d_ = (kappa == 0) ? n : n + 1;
}

double SpaceForm::form(const double* u, const double* v) const {
    double s = 0.0;
    int i = 0;
    if (kappa_ == -1) {
        s -= u[0] * v[0];
        i = 1;
    }
    for (; i < d_; ++i) s += u[i] * v[i];
    return s;
}

double SpaceForm::model_residual(const double* q) const {
    if (kappa_ == 0) return 0.0;
    double target = kappa_ == 1 ? 1.0 : -1.0;
    return std::abs(form(q, q) - target);
}

void SpaceForm::project_point(const double* p, double* out) const {
    if (kappa_ == 0) {
        for (int i = 0; i < d_; ++i) out[i] = p[i];
        return;
    }
    double q2 = form(p, p);
    if (kappa_ == 1) {
        if (q2 <= 0.0) throw std::domain_error("project_point: zero vector has no sphere projection");
        double inv = 1.0 / std::sqrt(q2);
        for (int i = 0; i < d_; ++i) out[i] = p[i] * inv;
    } else {
        if (q2 >= 0.0) throw std::domain_error("project_point: non-timelike vector has no hyperboloid projection");
        double inv = 1.0 / std::sqrt(-q2);
        double sign = p[0] >= 0.0 ? 1.0 : -1.0; // keep the upper sheet
        for (int i = 0; i < d_; ++i) out[i] = p[i] * inv * sign;
    }
}

Vec SpaceForm::project_point(const Vec& p) const {
    Vec out(static_cast<std::size_t>(d_));
    project_point(p.data(), out.data());
    return out;
}

void SpaceForm::project_tangent(const double* q, const double* w, double* out) const {
    if (kappa_ == 0) {
        for (int i = 0; i < d_; ++i) out[i] = w[i];
        return;
    }
    double res = model_residual(q);
    if (res > 1e-9)
        throw std::domain_error("project_tangent: base point off model beyond tolerance");
    double f = form(w, q);
    if (kappa_ == 1) {
        for (int i = 0; i < d_; ++i) out[i] = w[i] - f * q[i];
    } else {
        for (int i = 0; i < d_; ++i) out[i] = w[i] + f * q[i];
    }
}

Vec SpaceForm::project_tangent(const Vec& q, const Vec& w) const {
    Vec out(static_cast<std::size_t>(d_));
    project_tangent(q.data(), w.data(), out.data());
    return out;
}

void SpaceForm::curvature_R(const double* q, const double* X, const double* Y,
                            const double* Z, double* out) const {
    if (kappa_ == 0) {
        for (int i = 0; i < d_; ++i) out[i] = 0.0;
        return;
    }
    double yz = form(Y, Z);
    double xz = form(X, Z);
    double k = static_cast<double>(kappa_);
    for (int i = 0; i < d_; ++i) out[i] = k * (yz * X[i] - xz * Y[i]);
    (void)q;
}

Vec SpaceForm::curvature_R(const Vec& q, const Vec& X, const Vec& Y, const Vec& Z) const {
    Vec out(static_cast<std::size_t>(d_));
    curvature_R(q.data(), X.data(), Y.data(), Z.data(), out.data());
    return out;
}

double SpaceForm::sectional_sign_certificate(const double* q, const double* V,
                                             const double* W) const {
    (void)q;
    if (kappa_ == 0) return 0.0;
    double vv = form(V, V);
    double ww = form(W, W);
    double vw = form(V, W);
    return static_cast<double>(kappa_) * (ww * vv - vw * vw);
}

Vec SpaceForm::base_point() const {
    Vec q(static_cast<std::size_t>(d_), 0.0);
    if (kappa_ != 0) q[0] = 1.0;
    return q;
}

} // namespace bhmap
