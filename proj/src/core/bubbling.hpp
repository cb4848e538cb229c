#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fields.hpp"
#include "map_ops.hpp"
#include "report.hpp"

namespace bhmap {

// Radon measure at desk scale: a density against the node weights plus atoms.
struct DiscreteMeasure {
    ScalarField density; // interpreted against node weights
    struct Atom {
        Index node = 0;
        double weight = 0.0;
    };
    std::vector<Atom> atoms;

    double total_mass(const Mesh& mesh) const;
    std::string to_json(const std::string& density_csv_path) const;
};

struct BubbleSpec {
    Index center = 0;     // node index; bubble peak
    double r1 = 0.1;      // plateau radius of the fixed cutoff annulus
    double r2 = 0.18;     // support radius
};

// T^2 -> S^2 bubble: inverse stereographic projection of (x - center)/lambda,
// blended to the south pole across the fixed annulus [r1, r2].
MapField bubble_map(MeshPtr mesh, TargetPtr target, const BubbleSpec& spec, double lambda);

// several bubbles pasted into a south-pole background; supports must be disjoint
MapField multi_bubble_map(MeshPtr mesh, TargetPtr target, const std::vector<BubbleSpec>& specs,
                          double lambda);

// Concentrating family on one mesh with uniform energy and bienergy bounds
// checked at construction.
struct MapSequence {
    std::vector<MapField> members;
    std::vector<double> scales;
    std::vector<Index> centers;
    double energy_bound = 0.0;    // max_j ∫ |dphi_j|^m
    double bienergy_bound = 0.0;  // max_j ∫ |tau(phi_j)|^2
};

MapSequence bubble_sequence(MeshPtr mesh, TargetPtr target, const std::vector<BubbleSpec>& specs,
                            const std::vector<double>& scales, double uniform_bound = 1e6);

// density |dphi|^m, no atoms
DiscreteMeasure energy_measure(const MapField& phi);

// nodes where the tail-min over the last half of the sequence of
// ∫_{B_r(x)} |dphi_j|^m stays >= eps0 for every tested r, merged to local
// maxima within min(radii)
std::vector<Index> detect_concentration(const MapSequence& seq, double eps0,
                                        const std::vector<double>& radii);

// mu-hat = |dphi_inf|^m v_g + sum a_k delta_{x_k}; a_k from the last two
// members by Richardson extrapolation over the dyadic scales
DiscreteMeasure measure_decompose(const MapSequence& seq, const std::vector<Index>& atoms,
                                  const MapField& phi_inf, double rho = 0.0);

struct WeakConvergenceResult {
    InequalityReport report;
    std::vector<std::vector<double>> residuals; // [test_function][member]
};

WeakConvergenceResult weak_convergence_check(const MapSequence& seq, const DiscreteMeasure& mu,
                                             const MapField& phi_inf, int test_functions,
                                             std::uint64_t seed);

} // namespace bhmap
