#include "moser.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bhmap {

namespace {

double pow_int(double base, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= base;
    return v;
}

struct TauData {
    Section tau;
    Section tau2;
    ScalarField sq;       // |tau|^2
    ScalarField norm;     // regularized |tau|
    ScalarField grad_sq;  // |nabla-bar tau|^2
    double tau_sup = 0.0;
    double grad_sup = 0.0;

    explicit TauData(const MapField& phi)
        : tau(tension(phi)), tau2(jacobi_apply(phi, tau)), sq(tau.sq_norm_field()),
          grad_sq(pullback_gradient_sq(tau)) {
        constexpr double eps_reg = 1e-12;
        norm.resize(sq.size());
        for (std::size_t i = 0; i < sq.size(); ++i) {
            norm[i] = std::sqrt(std::max(sq[i], 0.0) + eps_reg * eps_reg);
            tau_sup = std::max(tau_sup, sq[i]);
            grad_sup = std::max(grad_sup, grad_sq[i]);
        }
        tau_sup = std::sqrt(std::max(tau_sup, 0.0));
    }

    double scale() const { return tau_sup * tau_sup + grad_sup; }
};

double check_tol(const TauData& d, const CheckTolerance& t, double h, double residual_factor) {
    return t.atol + residual_factor * t.claimed_tau2_sup * d.tau_sup +
           t.h2_coefficient * h * h * d.scale();
}

InequalityReport fraction_report(const char* name, const ScalarField& margin,
                                 const std::vector<char>* mask, double tol, bool vacuous) {
    InequalityReport rep;
    rep.name = name;
    rep.tolerance = tol;
    rep.vacuous = vacuous;
    long long pop = 0, sat = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) {
        if (mask && !(*mask)[i]) continue;
        ++pop;
        worst = std::min(worst, margin[i]);
        if (margin[i] >= -tol) ++sat;
    }
    rep.population = pop;
    rep.fraction = pop > 0 ? static_cast<double>(sat) / static_cast<double>(pop) : 1.0;
    rep.worst_margin = worst;
    return rep;
}

} // namespace

MoserSchedule moser_schedule(int m, double r, int K) {
    if (m <= 2) throw std::invalid_argument("moser_schedule: requires m >= 3 (m=2 uses the sup-norm variant)");
    if (r <= 0.0) throw std::invalid_argument("moser_schedule: r must be positive");
    if (K < 1) throw std::invalid_argument("moser_schedule: K must be >= 1");
    MoserSchedule s;
    s.m = m;
    s.r = r;
    s.K = K;
    s.gamma_bar = static_cast<double>(m) / static_cast<double>(m - 2);
    s.gamma = 2.0 * s.gamma_bar;
    s.p.resize(static_cast<std::size_t>(K));
    s.radii.resize(static_cast<std::size_t>(K));
    s.step_constant_partial.resize(static_cast<std::size_t>(K));
    double pk = 2.0;
    double prod = 1.0;
    double rad_exp = 0.0;
    for (int k = 1; k <= K; ++k) {
        s.p[static_cast<std::size_t>(k - 1)] = pk;
        s.radii[static_cast<std::size_t>(k - 1)] = (1.0 + std::pow(2.0, 1.0 - k)) * r;
        const double gb_pow = pow_int(s.gamma_bar, k - 1); // = p_k / 2
        prod *= std::pow(2.0 * gb_pow / (2.0 * gb_pow - 1.0), 2.0 / pk) *
                std::pow(2.0, static_cast<double>(k) / gb_pow);
        s.step_constant_partial[static_cast<std::size_t>(k - 1)] = prod;
        rad_exp += 1.0 / gb_pow;
        pk *= s.gamma_bar;
    }
    s.truncated_constant = prod;
    s.radius_exponent_partial = rad_exp;
    return s;
}

std::vector<double> schedule_product_4_17(int m, int K) {
    const double gb = static_cast<double>(m) / static_cast<double>(m - 2);
    std::vector<double> out(static_cast<std::size_t>(K));
    double prod = 1.0, pk = 2.0;
    for (int k = 1; k <= K; ++k) {
        prod *= std::pow(2.0 * pow_int(gb, k - 1) - 1.0, -2.0 / pk);
        out[static_cast<std::size_t>(k - 1)] = prod;
        pk *= gb;
    }
    return out;
}

std::vector<double> schedule_product_4_18(int m, int K) {
    const double gb = static_cast<double>(m) / static_cast<double>(m - 2);
    std::vector<double> out(static_cast<std::size_t>(K));
    double prod = 1.0;
    for (int k = 1; k <= K; ++k) {
        prod *= std::pow(2.0, static_cast<double>(k) / pow_int(gb, k - 1));
        out[static_cast<std::size_t>(k - 1)] = prod;
    }
    return out;
}

std::vector<double> schedule_product_4_19(int m, int K) {
    const double gb = static_cast<double>(m) / static_cast<double>(m - 2);
    std::vector<double> out(static_cast<std::size_t>(K));
    double prod = 1.0, pk = 2.0;
    for (int k = 1; k <= K; ++k) {
        prod *= std::pow(2.0 * gb, 2.0 * static_cast<double>(k - 1) / pk);
        out[static_cast<std::size_t>(k - 1)] = prod;
        pk *= gb;
    }
    return out;
}

InequalityReport bochner_check(const MapField& phi, const CheckTolerance& tol) {
    if (phi.target().kappa() > 0)
        throw std::invalid_argument(
            "bochner_check: target curvature is positive; use bochner_bounded_check");
    TauData d(phi);
    ScalarField lap_sq = scalar_laplacian(phi.mesh(), d.sq);
    ScalarField margin(lap_sq.size());
    for (std::size_t i = 0; i < margin.size(); ++i)
        margin[i] = lap_sq[i] - 2.0 * d.grad_sq[i];
    const double t = check_tol(d, tol, phi.mesh().max_spacing(), 4.0);
    return fraction_report("bochner", margin, nullptr, t, d.tau_sup <= tol.atol);
}

InequalityReport subharmonicity_check(const MapField& phi, const CheckTolerance& tol) {
    if (phi.target().kappa() > 0)
        throw std::invalid_argument(
            "subharmonicity_check: target curvature is positive; use bochner_bounded_check");
    TauData d(phi);
    ScalarField lap_u = scalar_laplacian(phi.mesh(), d.norm);
    ScalarField margin(lap_u.size());
    for (std::size_t i = 0; i < margin.size(); ++i)
        margin[i] = d.norm[i] * lap_u[i];
    const double t = check_tol(d, tol, phi.mesh().max_spacing(), 2.0);
    return fraction_report("subharmonicity", margin, nullptr, t, d.tau_sup <= tol.atol);
}

InequalityReport kato_check(const MapField& phi, const CheckTolerance& tol) {
    TauData d(phi);
    auto grad_norm = regularized_norm_gradient(phi.mesh(), d.norm);
    ScalarField margin(d.sq.size());
    std::vector<char> mask(d.sq.size(), 0);
    const double h = phi.mesh().max_spacing();
    for (Index id = 0; id < phi.mesh().node_count(); ++id) {
        std::size_t i = static_cast<std::size_t>(id);
        margin[i] = d.grad_sq[i] - gradient_sq_norm_at(grad_norm, id);
        mask[i] = d.norm[i] > h ? 1 : 0;
    }
    CheckTolerance t2 = tol;
    t2.claimed_tau2_sup = 0.0; // Kato is purely pointwise, no biharmonicity needed
    const double t = check_tol(d, t2, h, 0.0);
    bool any = std::any_of(mask.begin(), mask.end(), [](char c) { return c != 0; });
    auto rep = fraction_report("kato", margin, &mask, t, !any);
    if (!any) rep.note = "no nodes with |tau| > h";
    return rep;
}

InequalityReport bochner_bounded_check(const MapField& phi, const CheckTolerance& tol) {
    TauData d(phi);
    const double C = phi.target().curvature_upper_bound();
    Jet jet = differential(phi);
    ScalarField lap_sq = scalar_laplacian(phi.mesh(), d.sq);
    ScalarField lap_u = scalar_laplacian(phi.mesh(), d.norm);
    // nodewise minimum of the two bounded-curvature margins (Eqs 6.1 / 6.3 shape)
    ScalarField margin(d.sq.size());
    for (std::size_t i = 0; i < margin.size(); ++i) {
        const double cd2 = C * jet.dphi_sq[i];
        const double m1 = 0.5 * lap_sq[i] + cd2 * d.sq[i] - d.grad_sq[i];
        const double m2 = d.norm[i] * lap_u[i] + cd2 * d.sq[i];
        margin[i] = std::min(m1, m2);
    }
    const double t = check_tol(d, tol, phi.mesh().max_spacing(), 2.0);
    return fraction_report("bochner_bounded", margin, nullptr, t, d.tau_sup <= tol.atol);
}

InequalityReport caccioppoli_check(const Mesh& mesh, const ScalarField& u, double p,
                                   const CutoffField& eta, double slack_rel) {
    if (p < 2.0) throw std::invalid_argument("caccioppoli_check: p must be >= 2");
    for (double v : u)
        if (v < 0.0) throw std::invalid_argument("caccioppoli_check: u must be nonnegative");
    ScalarField up2(u.size()), up(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        up2[i] = std::pow(u[i], 0.5 * p);
        up[i] = std::pow(u[i], p);
    }
    auto g_up2 = scalar_gradient(mesh, up2);
    auto g_eta = scalar_gradient(mesh, eta.values);
    double lhs = 0.0, rhs_raw = 0.0;
    for (Index id = 0; id < mesh.node_count(); ++id) {
        std::size_t i = static_cast<std::size_t>(id);
        lhs += eta.values[i] * eta.values[i] * gradient_sq_norm_at(g_up2, id);
        rhs_raw += up[i] * gradient_sq_norm_at(g_eta, id);
    }
    lhs *= mesh.node_weight();
    rhs_raw *= mesh.node_weight();
    const double bound = (p / (p - 1.0)) * (p / (p - 1.0));
    InequalityReport rep;
    rep.name = "caccioppoli";
    rep.population = 1;
    rep.tolerance = slack_rel;
    rep.empirical_constant = rhs_raw > 0.0 ? lhs / rhs_raw : 0.0;
    rep.vacuous = lhs == 0.0 && rhs_raw == 0.0;
    const bool ok = lhs <= bound * (1.0 + slack_rel) * rhs_raw + 1e-13;
    rep.fraction = ok ? 1.0 : 0.0;
    rep.worst_margin = bound * rhs_raw - lhs;
    return rep;
}

double lp_ball_norm(const Mesh& mesh, const ScalarField& u, const BallRegion& region, double p) {
    // (sum u^p w)^{1/p} in the log domain; p can be ~500
    double max_log = -1e300;
    std::vector<double> logs;
    logs.reserve(region.members.size());
    const double logw = std::log(mesh.node_weight());
    for (Index id : region.members) {
        double v = u[static_cast<std::size_t>(id)];
        if (v <= 0.0) continue;
        double lv = p * std::log(v) + logw;
        logs.push_back(lv);
        max_log = std::max(max_log, lv);
    }
    if (logs.empty()) return 0.0;
    double s = 0.0;
    for (double lv : logs) s += std::exp(lv - max_log);
    return std::exp((max_log + std::log(s)) / p);
}

MoserChainResult moser_chain_verify(const Mesh& mesh, const ScalarField& u, Index center,
                                    const MoserSchedule& schedule, double sobolev_constant) {
    MoserChainResult out;
    const int K = schedule.K;
    out.norms.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        BallRegion b = ball(mesh, center, schedule.radii[static_cast<std::size_t>(k)]);
        if (static_cast<long long>(b.members.size()) < 8)
            throw std::runtime_error("moser_chain_verify: ball too small for quadrature");
        out.norms[static_cast<std::size_t>(k)] =
            lp_ball_norm(mesh, u, b, schedule.p[static_cast<std::size_t>(k)]);
    }
    long long sat = 0;
    double worst = 0.0;
    bool all_zero = true;
    for (int k = 0; k + 1 < K; ++k) {
        double nk = out.norms[static_cast<std::size_t>(k)];
        double nk1 = out.norms[static_cast<std::size_t>(k + 1)];
        if (nk > 0.0) all_zero = false;
        const double pk = schedule.p[static_cast<std::size_t>(k)];
        const double Ak = std::pow(sobolev_constant *
                                       (16.0 * pk * pk / ((pk - 1.0) * (pk - 1.0)) *
                                            std::pow(4.0, k + 1) / (schedule.r * schedule.r) +
                                        1.0),
                                   1.0 / pk);
        out.ratios.push_back(nk > 0.0 ? nk1 / nk : 0.0);
        out.bounds.push_back(Ak);
        const double margin = Ak * nk - nk1;
        worst = std::min(worst, margin);
        if (nk1 <= Ak * nk + 1e-13) ++sat;
    }
    out.end_to_end_constant =
        out.norms[0] > 0.0
            ? out.norms[static_cast<std::size_t>(K - 1)] *
                  std::pow(schedule.r, 0.5 * static_cast<double>(schedule.m)) / out.norms[0]
            : 0.0;
    out.report.name = "moser_chain";
    out.report.population = K - 1;
    out.report.fraction = K > 1 ? static_cast<double>(sat) / static_cast<double>(K - 1) : 1.0;
    out.report.worst_margin = worst;
    out.report.empirical_constant = out.end_to_end_constant;
    out.report.vacuous = all_zero;
    return out;
}

MeanValueResult mean_value_check(const Mesh& mesh, const ScalarField& u,
                                 const std::vector<Index>& centers,
                                 const std::vector<double>& radii) {
    MeanValueResult out;
    const double m = static_cast<double>(mesh.dim());
    // disjointness of the B_2r balls when several centers are probed
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            for (double r : radii)
                if (mesh.torus_distance(centers[i], centers[j]) < 4.0 * r)
                    throw std::invalid_argument("mean_value_check: 2r balls not pairwise disjoint");
    bool all_zero = true;
    for (Index c : centers) {
        for (double r : radii) {
            BallRegion br = ball(mesh, c, r);
            BallRegion b2r = ball(mesh, c, 2.0 * r);
            if (static_cast<long long>(b2r.members.size()) < 8)
                throw std::runtime_error("mean_value_check: 2r ball too small for quadrature");
            double sup = 0.0;
            for (Index id : br.members) sup = std::max(sup, u[static_cast<std::size_t>(id)]);
            double l2 = lp_ball_norm(mesh, u, b2r, 2.0);
            if (sup == 0.0) continue; // both sides vanish
            if (l2 == 0.0)
                throw std::runtime_error("mean_value_check: sup > 0 with zero L2 mass — inconsistent data");
            all_zero = false;
            out.constants.push_back(sup * std::pow(r, 0.5 * m) / l2);
        }
    }
    out.report.name = "mean_value";
    out.report.population = static_cast<long long>(out.constants.size());
    out.report.fraction = 1.0;
    out.report.vacuous = all_zero;
    if (!out.constants.empty()) {
        out.report.empirical_constant = *std::max_element(out.constants.begin(), out.constants.end());
        out.report.worst_margin = *std::min_element(out.constants.begin(), out.constants.end());
    }
    return out;
}

EpsRegularityResult epsilon_regularity_check(const MapField& phi, Index center, double r,
                                             double eps0) {
    EpsRegularityResult out;
    const Mesh& mesh = phi.mesh();
    const double m = static_cast<double>(mesh.dim());
    Jet jet = differential(phi);
    ScalarField dens(jet.dphi_sq.size());
    for (std::size_t i = 0; i < dens.size(); ++i)
        dens[i] = std::pow(std::max(jet.dphi_sq[i], 0.0), 0.5 * m);
    BallRegion br = ball(mesh, center, r);
    BallRegion half = ball(mesh, center, 0.5 * r);
    out.ball_energy = integrate(mesh, dens, &br);
    out.report.name = "epsilon_regularity";
    out.report.population = 1;
    if (out.ball_energy > eps0) {
        out.report.hypothesis_met = false;
        out.report.note = "hypothesis not met: ball energy exceeds eps0";
        out.report.empirical_constant = 0.0;
        return out;
    }
    Section tau = tension(phi);
    ScalarField tau_sq = tau.sq_norm_field();
    double sup = 0.0;
    for (Index id : half.members) sup = std::max(sup, tau_sq[static_cast<std::size_t>(id)]);
    double integral = integrate(mesh, tau_sq, &br);
    if (sup == 0.0) {
        out.report.vacuous = true;
        return out;
    }
    if (integral <= 0.0)
        throw std::runtime_error("epsilon_regularity_check: sup > 0 with zero L2 mass — inconsistent data");
    out.constant = sup * std::pow(r, 0.5 * m) / integral;
    out.report.empirical_constant = out.constant;
    return out;
}

InequalityReport holder_sobolev_check(const MapField& phi, const ScalarField& u, double p,
                                      const CutoffField& eta, const BallRegion& ball_region,
                                      double sobolev_constant, double slack_rel) {
    const Mesh& mesh = phi.mesh();
    if (mesh.dim() < 3)
        throw std::invalid_argument("holder_sobolev_check: requires m >= 3");
    // cutoff must vanish outside the ball
    {
        std::vector<char> inside(static_cast<std::size_t>(mesh.node_count()), 0);
        for (Index id : ball_region.members) inside[static_cast<std::size_t>(id)] = 1;
        for (Index id = 0; id < mesh.node_count(); ++id)
            if (!inside[static_cast<std::size_t>(id)] &&
                eta.values[static_cast<std::size_t>(id)] != 0.0)
                throw std::invalid_argument("holder_sobolev_check: cutoff not supported in ball");
    }
    const double m = static_cast<double>(mesh.dim());
    Jet jet = differential(phi);
    ScalarField dens_m(jet.dphi_sq.size());
    ScalarField F(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        dens_m[i] = std::pow(std::max(jet.dphi_sq[i], 0.0), 0.5 * m);
        F[i] = std::pow(u[i], 0.5 * p) * eta.values[i];
    }
    auto gF = scalar_gradient(mesh, F);
    double lhs = 0.0, gF2 = 0.0, F2 = 0.0;
    for (Index id = 0; id < mesh.node_count(); ++id) {
        std::size_t i = static_cast<std::size_t>(id);
        lhs += jet.dphi_sq[i] * std::pow(u[i], p) * eta.values[i] * eta.values[i];
        gF2 += gradient_sq_norm_at(gF, id);
        F2 += F[i] * F[i];
    }
    lhs *= mesh.node_weight();
    gF2 *= mesh.node_weight();
    F2 *= mesh.node_weight();
    const double ball_energy = integrate(mesh, dens_m, &ball_region);
    const double rhs = sobolev_constant * std::pow(ball_energy, 2.0 / m) * (gF2 + F2);
    InequalityReport rep;
    rep.name = "holder_sobolev";
    rep.population = 1;
    rep.tolerance = slack_rel;
    rep.empirical_constant = rhs > 0.0 ? lhs / rhs : 0.0;
    rep.vacuous = lhs == 0.0;
    rep.fraction = lhs <= rhs * (1.0 + slack_rel) + 1e-13 ? 1.0 : 0.0;
    rep.worst_margin = rhs - lhs;
    return rep;
}

} // namespace bhmap
