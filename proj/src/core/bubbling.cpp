#include "bubbling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "io.hpp"

namespace bhmap {

namespace {

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

// wrapped displacement from node to a center node, per axis
void wrapped_delta(const Mesh& mesh, Index id, Index center, double* out) {
    for (int a = 0; a < mesh.dim(); ++a) {
        double d = mesh.coord(id, a) - mesh.coord(center, a);
        double L = mesh.period(a);
        d -= L * std::round(d / L);
        out[a] = d;
    }
}

ScalarField density_field(const MapField& phi) {
    Jet jet = differential(phi);
    const double m = static_cast<double>(phi.mesh().dim());
    ScalarField dens(jet.dphi_sq.size());
    for (std::size_t i = 0; i < dens.size(); ++i)
        dens[i] = std::pow(std::max(jet.dphi_sq[i], 0.0), 0.5 * m);
    return dens;
}

double ball_mass(const Mesh& mesh, const ScalarField& dens, Index center, double r) {
    BallRegion b = ball(mesh, center, r);
    return integrate(mesh, dens, &b);
}

} // namespace

double DiscreteMeasure::total_mass(const Mesh& mesh) const {
    double s = integrate(mesh, density);
    for (const auto& a : atoms) s += a.weight;
    return s;
}

std::string DiscreteMeasure::to_json(const std::string& density_csv_path) const {
    std::string s = "{\"density_csv\": \"" + density_csv_path + "\", \"atoms\": [";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        s += "{\"node\": " + std::to_string(atoms[i].node) +
             ", \"weight\": " + fmt17(atoms[i].weight) + "}";
        if (i + 1 < atoms.size()) s += ", ";
    }
    s += "]}";
    return s;
}

MapField bubble_map(MeshPtr mesh, TargetPtr target, const BubbleSpec& spec, double lambda) {
    return multi_bubble_map(std::move(mesh), std::move(target), {spec}, lambda);
}

MapField multi_bubble_map(MeshPtr mesh, TargetPtr target, const std::vector<BubbleSpec>& specs,
                          double lambda) {
    if (mesh->dim() != 2)
        throw std::invalid_argument("bubble_map: two-dimensional domain required");
    if (target->kappa() != 1 || target->target_dim() != 2)
        throw std::invalid_argument("bubble_map: target must be S^2");
    if (lambda <= 0.0) throw std::invalid_argument("bubble_map: scale must be positive");
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!(0.0 < specs[i].r1 && specs[i].r1 < specs[i].r2))
            throw std::invalid_argument("bubble_map: need 0 < r1 < r2");
        for (std::size_t j = i + 1; j < specs.size(); ++j)
            if (mesh->torus_distance(specs[i].center, specs[j].center) <
                specs[i].r2 + specs[j].r2)
                throw std::invalid_argument("bubble_map: bubble supports overlap");
    }
    MapField phi(std::move(mesh), target);
    const Mesh& M = phi.mesh();
    double dxy[2];
    for (Index id = 0; id < M.node_count(); ++id) {
        double* q = phi.at(id);
        q[0] = 0.0;
        q[1] = 0.0;
        q[2] = -1.0; // south-pole background
        for (const auto& spec : specs) {
            wrapped_delta(M, id, spec.center, dxy);
            const double r = std::hypot(dxy[0], dxy[1]);
            if (r >= spec.r2) continue;
            const double ux = dxy[0] / lambda, uy = dxy[1] / lambda;
            const double u2 = ux * ux + uy * uy;
            const double inv = 1.0 / (1.0 + u2);
            const double bx = 2.0 * ux * inv, by = 2.0 * uy * inv, bz = (1.0 - u2) * inv;
            const double chi = smoothstep((spec.r2 - r) / (spec.r2 - spec.r1));
            q[0] = chi * bx;
            q[1] = chi * by;
            q[2] = chi * bz + (1.0 - chi) * (-1.0);
            const double nrm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
            q[0] /= nrm;
            q[1] /= nrm;
            q[2] /= nrm;
            break; // supports are disjoint
        }
    }
    return phi;
}

MapSequence bubble_sequence(MeshPtr mesh, TargetPtr target, const std::vector<BubbleSpec>& specs,
                            const std::vector<double>& scales, double uniform_bound) {
    if (scales.empty()) throw std::invalid_argument("bubble_sequence: empty scale list");
    for (std::size_t j = 0; j < scales.size(); ++j) {
        if (scales[j] <= 0.0 || scales[j] > 1.0)
            throw std::invalid_argument("bubble_sequence: scales must lie in (0,1]");
        if (j > 0 && scales[j] >= scales[j - 1])
            throw std::invalid_argument("bubble_sequence: scales must be strictly decreasing");
    }
    MapSequence seq;
    seq.scales = scales;
    for (const auto& s : specs) seq.centers.push_back(s.center);
    for (double lam : scales) {
        MapField phi = multi_bubble_map(mesh, target, specs, lam);
        ScalarField dens = density_field(phi);
        double e = integrate(*mesh, dens);
        Section tau = tension(phi);
        double b2 = integrate(*mesh, tau.sq_norm_field());
        seq.energy_bound = std::max(seq.energy_bound, e);
        seq.bienergy_bound = std::max(seq.bienergy_bound, b2);
        seq.members.push_back(std::move(phi));
    }
    if (seq.energy_bound > uniform_bound || seq.bienergy_bound > uniform_bound)
        throw std::runtime_error("bubble_sequence: uniform family bound violated");
    return seq;
}

DiscreteMeasure energy_measure(const MapField& phi) {
    DiscreteMeasure mu;
    mu.density = density_field(phi);
    return mu;
}

namespace {

// ball-mass field via circular prefix sums per row (2-D fast path)
ScalarField ball_mass_field_2d(const Mesh& mesh, const ScalarField& dens, double r) {
    const Index nx = mesh.resolution(0), ny = mesh.resolution(1);
    const double hx = mesh.spacing(0), hy = mesh.spacing(1);
    // circular prefix sums along axis 1 for each row ix
    std::vector<double> pref(static_cast<std::size_t>(nx * (ny + 1)), 0.0);
    for (Index ix = 0; ix < nx; ++ix)
        for (Index iy = 0; iy < ny; ++iy)
            pref[static_cast<std::size_t>(ix * (ny + 1) + iy + 1)] =
                pref[static_cast<std::size_t>(ix * (ny + 1) + iy)] +
                dens[static_cast<std::size_t>(ix * ny + iy)];
    auto row_range_sum = [&](Index ix, Index lo, Index len) {
        // sum of len entries starting at wrapped lo in row ix (len <= ny)
        Index l = ((lo % ny) + ny) % ny;
        const double* P = pref.data() + ix * (ny + 1);
        if (l + len <= ny) return P[l + len] - P[l];
        return (P[ny] - P[l]) + P[l + len - ny];
    };
    // half-width along axis 1 for each row offset dx (strict < r)
    Index max_dx = std::min<Index>(static_cast<Index>(std::floor(r / hx)), nx / 2);
    std::vector<Index> halfw;
    for (Index dx = -max_dx; dx <= max_dx; ++dx) {
        double rem = r * r - (static_cast<double>(dx) * hx) * (static_cast<double>(dx) * hx);
        Index w = rem > 0.0 ? static_cast<Index>(std::ceil(std::sqrt(rem) / hy)) : -1;
        while (w >= 0 && (static_cast<double>(w) * hy) * (static_cast<double>(w) * hy) >= rem) --w;
        halfw.push_back(std::min(w, ny / 2));
    }
    ScalarField out(dens.size(), 0.0);
    for (Index ix = 0; ix < nx; ++ix) {
        for (Index iy = 0; iy < ny; ++iy) {
            double s = 0.0;
            for (Index dx = -max_dx; dx <= max_dx; ++dx) {
                Index w = halfw[static_cast<std::size_t>(dx + max_dx)];
                if (w < 0) continue;
                Index row = ((ix + dx) % nx + nx) % nx;
                Index len = std::min<Index>(2 * w + 1, ny);
                s += row_range_sum(row, iy - w, len);
            }
            out[static_cast<std::size_t>(ix * ny + iy)] = s * mesh.node_weight();
        }
    }
    return out;
}

ScalarField ball_mass_field_generic(const Mesh& mesh, const ScalarField& dens, double r) {
    BallRegion proto = ball(mesh, 0, r);
    const int m = mesh.dim();
    std::vector<Index> mi(static_cast<std::size_t>(m));
    std::vector<std::vector<Index>> offsets;
    for (Index id : proto.members) {
        mesh.unflatten(id, mi.data());
        offsets.push_back(mi);
    }
    ScalarField out(dens.size(), 0.0);
    for (Index x = 0; x < mesh.node_count(); ++x) {
        double s = 0.0;
        for (const auto& off : offsets) {
            Index shifted = x;
            for (int a = 0; a < m; ++a)
                if (off[static_cast<std::size_t>(a)] != 0)
                    shifted = mesh.shift(shifted, a, off[static_cast<std::size_t>(a)]);
            s += dens[static_cast<std::size_t>(shifted)];
        }
        out[static_cast<std::size_t>(x)] = s * mesh.node_weight();
    }
    return out;
}

} // namespace

std::vector<Index> detect_concentration(const MapSequence& seq, double eps0,
                                        const std::vector<double>& radii) {
    if (seq.members.empty()) throw std::invalid_argument("detect_concentration: empty sequence");
    if (eps0 <= 0.0) throw std::invalid_argument("detect_concentration: eps0 must be positive");
    const Mesh& mesh = seq.members.front().mesh();
    const std::size_t first_tail = seq.members.size() / 2;
    std::vector<ScalarField> tail_dens;
    for (std::size_t j = first_tail; j < seq.members.size(); ++j)
        tail_dens.push_back(density_field(seq.members[j]));

    // score(x) = min over tested radii and tail members of the ball mass
    ScalarField score(static_cast<std::size_t>(mesh.node_count()), 1e300);
    for (double r : radii) {
        for (const auto& dens : tail_dens) {
            ScalarField masses = mesh.dim() == 2 ? ball_mass_field_2d(mesh, dens, r)
                                                 : ball_mass_field_generic(mesh, dens, r);
            for (std::size_t i = 0; i < masses.size(); ++i)
                score[i] = std::min(score[i], masses[i]);
        }
    }
    std::vector<Index> candidates;
    for (Index x = 0; x < mesh.node_count(); ++x)
        if (score[static_cast<std::size_t>(x)] >= eps0) candidates.push_back(x);
    // merge to local maxima within the smallest tested radius
    const double merge_r = *std::min_element(radii.begin(), radii.end());
    std::vector<Index> kept;
    for (Index c : candidates) {
        bool dominated = false;
        for (Index other : candidates) {
            if (other == c) continue;
            if (mesh.torus_distance(c, other) < merge_r) {
                double sc = score[static_cast<std::size_t>(c)];
                double so = score[static_cast<std::size_t>(other)];
                if (so > sc || (so == sc && other < c)) {
                    dominated = true;
                    break;
                }
            }
        }
        if (!dominated) kept.push_back(c);
    }
    return kept;
}

DiscreteMeasure measure_decompose(const MapSequence& seq, const std::vector<Index>& atoms,
                                  const MapField& phi_inf, double rho) {
    const Mesh& mesh = seq.members.front().mesh();
    if (seq.members.size() < 2)
        throw std::invalid_argument("measure_decompose: need at least two members");
    if (rho <= 0.0) {
        // default: 8 * max scale of the last half, clamped by atom separation and torus size
        const std::size_t first_tail = seq.scales.size() / 2;
        double lam = 0.0;
        for (std::size_t j = first_tail; j < seq.scales.size(); ++j)
            lam = std::max(lam, seq.scales[j]);
        rho = 8.0 * lam;
        double min_period = 1e300;
        for (int a = 0; a < mesh.dim(); ++a) min_period = std::min(min_period, mesh.period(a));
        rho = std::min(rho, 0.45 * min_period);
        for (std::size_t i = 0; i < atoms.size(); ++i)
            for (std::size_t j = i + 1; j < atoms.size(); ++j)
                rho = std::min(rho, 0.45 * mesh.torus_distance(atoms[i], atoms[j]));
    }
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            if (mesh.torus_distance(atoms[i], atoms[j]) < 2.0 * rho)
                throw std::invalid_argument("measure_decompose: atoms closer than 2*rho");

    DiscreteMeasure mu;
    mu.density = density_field(phi_inf);
    ScalarField dens_J = density_field(seq.members.back());
    ScalarField dens_J1 = density_field(seq.members[seq.members.size() - 2]);
    for (Index x : atoms) {
        double mJ = ball_mass(mesh, dens_J, x, rho) - ball_mass(mesh, mu.density, x, rho);
        double mJ1 = ball_mass(mesh, dens_J1, x, rho) - ball_mass(mesh, mu.density, x, rho);
        // dyadic scales, lambda^2 deficit: two-point Richardson
        double a = mJ + (mJ - mJ1) / 3.0;
        if (a < -1e-9)
            throw std::runtime_error("measure_decompose: negative atom weight beyond tolerance");
        mu.atoms.push_back({x, std::max(a, 0.0)});
    }
    return mu;
}

WeakConvergenceResult weak_convergence_check(const MapSequence& seq, const DiscreteMeasure& mu,
                                             const MapField& phi_inf, int test_functions,
                                             std::uint64_t seed) {
    (void)phi_inf;
    const Mesh& mesh = seq.members.front().mesh();
    WeakConvergenceResult out;
    Rng rng = Rng(seed).sub("weak-convergence");
    std::vector<ScalarField> psis;
    for (int t = 0; t < test_functions; ++t) {
        ScalarField psi = random_bandlimited(mesh, rng, 2, 16);
        double sup = 0.0;
        for (double v : psi) sup = std::max(sup, std::abs(v));
        if (sup > 0.0)
            for (double& v : psi) v /= sup;
        for (double& v : psi) v += 1.0; // keep a mass component so totals matter
        psis.push_back(std::move(psi));
    }
    long long decreasing = 0;
    double worst_final = 0.0;
    for (const auto& psi : psis) {
        double mu_psi = 0.0;
        for (Index id = 0; id < mesh.node_count(); ++id)
            mu_psi += psi[static_cast<std::size_t>(id)] * mu.density[static_cast<std::size_t>(id)];
        mu_psi *= mesh.node_weight();
        for (const auto& atom : mu.atoms)
            mu_psi += atom.weight * psi[static_cast<std::size_t>(atom.node)];
        std::vector<double> trace;
        for (const auto& member : seq.members) {
            ScalarField dens = density_field(member);
            double v = 0.0;
            for (Index id = 0; id < mesh.node_count(); ++id)
                v += psi[static_cast<std::size_t>(id)] * dens[static_cast<std::size_t>(id)];
            v *= mesh.node_weight();
            trace.push_back(std::abs(v - mu_psi));
        }
        // decreasing over the last half
        bool dec = true;
        for (std::size_t j = seq.members.size() / 2; j + 1 < seq.members.size(); ++j)
            if (trace[j + 1] > trace[j]) dec = false;
        if (dec) ++decreasing;
        worst_final = std::max(worst_final, trace.back());
        out.residuals.push_back(std::move(trace));
    }
    out.report.name = "weak_convergence";
    out.report.population = test_functions;
    out.report.fraction =
        test_functions > 0 ? static_cast<double>(decreasing) / test_functions : 1.0;
    out.report.empirical_constant = worst_final;
    return out;
}

} // namespace bhmap
