#pragma once

#include <cstdint>
#include <vector>

#include "fields.hpp"
#include "map_ops.hpp"
#include "report.hpp"

namespace bhmap {

// Geometric ladder of exponents and radii driving the iteration:
// p_k = 2 gbar^{k-1}, r_k = (1 + 2^{1-k}) r, gbar = m/(m-2), gamma = 2 gbar.
struct MoserSchedule {
    int m = 0;
    double r = 0.0;
    int K = 0;
    double gamma_bar = 0.0;
    double gamma = 0.0;
    std::vector<double> p;            // p_1..p_{K+1}
    std::vector<double> radii;        // r_1..r_{K+1}
    std::vector<double> step_constant_partial; // partial products of the per-step constants
    double truncated_constant = 0.0;  // C''_K (radius factor excluded)
    double radius_exponent_partial = 0.0; // sum_{k<=K} gbar^{-(k-1)} -> m/2
};

MoserSchedule moser_schedule(int m, double r, int K);

// partial products / sums of the constant chains, index k = 1..K
std::vector<double> schedule_product_4_17(int m, int K); // prod (2 gbar^{k-1} - 1)^{-2/p_k} <= 1
std::vector<double> schedule_product_4_18(int m, int K); // prod 2^{k / gbar^{k-1}}
std::vector<double> schedule_product_4_19(int m, int K); // prod (2 gbar)^{2(k-1)/p_k}

struct CheckTolerance {
    double claimed_tau2_sup = 0.0; // biharmonicity threshold the data claims
    double h2_coefficient = 1.0;   // K in the K*h^2*(scale) policy
    double atol = 1e-13;
};

// Bochner: lap|tau|^2 - 2 |nabla-bar tau|^2 >= -tol nodewise (kappa <= 0)
InequalityReport bochner_check(const MapField& phi, const CheckTolerance& tol);
// |tau| lap|tau| >= -tol nodewise
InequalityReport subharmonicity_check(const MapField& phi, const CheckTolerance& tol);
// Kato companion: |nabla-bar tau|^2 - |grad|tau||^2 >= -tol on nodes with |tau| > h
InequalityReport kato_check(const MapField& phi, const CheckTolerance& tol);
// bounded-curvature variants, C = kappa^+ (any kappa):
// 1/2 lap|V|^2 + C|dphi|^2|V|^2 >= |nabla-bar V|^2 - tol, and
// |tau| lap|tau| + C|dphi|^2|tau|^2 >= -tol, for V = tau(phi)
InequalityReport bochner_bounded_check(const MapField& phi, const CheckTolerance& tol);

// ∫ eta^2 |grad(u^{p/2})|^2 <= ((p/(p-1))^2 + slack) ∫ u^p |grad eta|^2;
// empirical constant = LHS / ∫ u^p |grad eta|^2
InequalityReport caccioppoli_check(const Mesh& mesh, const ScalarField& u, double p,
                                   const CutoffField& eta, double slack_rel = 0.25);

struct MoserChainResult {
    InequalityReport report;
    std::vector<double> norms;      // N_k, k = 1..K+1
    std::vector<double> ratios;     // N_{k+1}/N_k
    std::vector<double> bounds;     // per-step A_k
    double end_to_end_constant = 0.0; // N_{K+1} r^{m/2} / N_1
};

// N_k = ||u||_{L^{p_k}(B_{r_k})} ladder with per-step bound
// A_k = [C_sob (16 p_k^2/(p_k-1)^2 4^k / r^2 + 1)]^{1/p_k}
MoserChainResult moser_chain_verify(const Mesh& mesh, const ScalarField& u, Index center,
                                    const MoserSchedule& schedule, double sobolev_constant);

struct MeanValueResult {
    InequalityReport report;
    std::vector<double> constants; // c-hat per (center, radius)
};

// c-hat = sup_{B_r} u * r^{m/2} / ||u||_{L^2(B_2r)} (Eq 4.21 norm form)
MeanValueResult mean_value_check(const Mesh& mesh, const ScalarField& u,
                                 const std::vector<Index>& centers,
                                 const std::vector<double>& radii);

struct EpsRegularityResult {
    InequalityReport report;
    double ball_energy = 0.0;  // ∫_{B_r} |dphi|^m
    double constant = 0.0;     // sup_{B_{r/2}} |tau|^2 * r^{m/2} / ∫_{B_r} |tau|^2
};

EpsRegularityResult epsilon_regularity_check(const MapField& phi, Index center, double r,
                                             double eps0);

// ∫ |dphi|^2 u^p eta^2 <= C_sob (∫_ball |dphi|^m)^{2/m} (∫|grad(u^{p/2} eta)|^2 + ∫ (u^{p/2} eta)^2)
InequalityReport holder_sobolev_check(const MapField& phi, const ScalarField& u, double p,
                                      const CutoffField& eta, const BallRegion& ball_region,
                                      double sobolev_constant, double slack_rel = 0.25);

// log-domain L^p ball norm (p can be several hundred)
double lp_ball_norm(const Mesh& mesh, const ScalarField& u, const BallRegion& region, double p);

} // namespace bhmap
