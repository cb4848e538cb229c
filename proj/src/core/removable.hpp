#pragma once

#include <string>
#include <vector>

#include "fields.hpp"

namespace bhmap {

struct DefectRun {
    double defect_radius = 0.0;
    long long defect_nodes = 0;
    double bienergy = 0.0;     // over the unconstrained nodes
    double sup_tau_near = 0.0; // sup |tau| on B_probe(defect) minus pinned nodes
    long long solver_iters = 0;
};

struct RemovableConfig {
    std::vector<Index> resolutions_per_axis; // one mesh per defect radius
    std::vector<double> defect_radii;        // matched, strictly decreasing
    double period = 6.283185307179586477;
    double defect_value = 1.5;   // pinned value at the defect ball
    double anchor_radius = 0.8;  // fixed far anchor pinned to 0 (keeps the limit nontrivial)
    double probe_radius = 1.0;   // sup window around the defect
};

struct RemovableResult {
    std::vector<DefectRun> runs;
    std::string table_csv() const; // "defect_radius,defect_nodes,E2,sup_tau_near,solver_iters"
};

// Manufactures maps biharmonic away from a shrinking pinned ball (flat scalar
// target): solves the pinned-bilaplacian optimality system of the constrained
// biharmonic flow by conjugate gradients (the flow's fixed point; explicit
// stepping is impractically stiff at fine resolution).
RemovableResult removable_singularity_experiment(const RemovableConfig& cfg);

// steady state for a single mesh, exposed so tests can compare against the
// actual pinned flow on a small mesh
MapField pinned_biharmonic_steady(MeshPtr mesh, TargetPtr target, Index defect_center,
                                  double defect_radius, double defect_value,
                                  Index anchor_center, double anchor_radius,
                                  long long* iters_out = nullptr);

struct InvZRun {
    long long resolution = 0;
    double window_inner = 0.0;
    double sup_dphi = 0.0;
    double sup_tau = 0.0;
};

struct InvZResult {
    std::vector<InvZRun> runs;
    std::string table_csv() const;
};

// Remark-4.3 negative control: phi(z) = 1/z sampled on punctured grids with a
// half-cell offset; the measurement window shrinks like h^{2/5} so the
// discretization error of tau stays bounded while sup|dphi| grows.
InvZResult inverse_z_control(const std::vector<Index>& resolutions, double period);

} // namespace bhmap
