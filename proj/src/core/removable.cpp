#include "removable.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "io.hpp"
#include "map_ops.hpp"
#include "variational.hpp"

namespace bhmap {

namespace {

Index center_node(const Mesh& mesh, double fx, double fy) {
    std::vector<Index> mi(static_cast<std::size_t>(mesh.dim()), 0);
    mi[0] = static_cast<Index>(std::llround(fx * static_cast<double>(mesh.resolution(0))));
    mi[1] = static_cast<Index>(std::llround(fy * static_cast<double>(mesh.resolution(1))));
    return mesh.flatten(mi.data());
}

} // namespace

MapField pinned_biharmonic_steady(MeshPtr mesh, TargetPtr target, Index defect_center,
                                  double defect_radius, double defect_value,
                                  Index anchor_center, double anchor_radius,
                                  long long* iters_out) {
    if (target->kappa() != 0 || target->target_dim() != 1)
        throw std::invalid_argument("pinned_biharmonic_steady: flat scalar target required");
    const Index N = mesh->node_count();
    std::vector<char> pin(static_cast<std::size_t>(N), 0);
    ScalarField fixed(static_cast<std::size_t>(N), 0.0);
    {
        BallRegion bd = ball(*mesh, defect_center, defect_radius);
        if (bd.members.empty()) bd.members.push_back(defect_center);
        for (Index id : bd.members) {
            pin[static_cast<std::size_t>(id)] = 1;
            fixed[static_cast<std::size_t>(id)] = defect_value;
        }
        BallRegion ba = ball(*mesh, anchor_center, anchor_radius);
        for (Index id : ba.members) {
            pin[static_cast<std::size_t>(id)] = 1;
            fixed[static_cast<std::size_t>(id)] = 0.0;
        }
    }
    auto apply_free = [&](const ScalarField& v) {
        ScalarField w = scalar_laplacian(*mesh, scalar_laplacian(*mesh, v));
        for (Index id = 0; id < N; ++id)
            if (pin[static_cast<std::size_t>(id)]) w[static_cast<std::size_t>(id)] = 0.0;
        return w;
    };
    // rhs such that the full field x + fixed is bilaplacian-free on free nodes
    ScalarField rhs = scalar_laplacian(*mesh, scalar_laplacian(*mesh, fixed));
    for (Index id = 0; id < N; ++id) {
        std::size_t i = static_cast<std::size_t>(id);
        rhs[i] = pin[i] ? 0.0 : -rhs[i];
    }
    ScalarField x(static_cast<std::size_t>(N), 0.0);
    ScalarField r = rhs, p = rhs;
    double rs = 0.0;
    for (double v : r) rs += v * v;
    const double rs0 = std::max(rs, 1.0);
    long long it = 0;
    for (; it < 200000 && rs > 1e-26 * rs0; ++it) {
        ScalarField Ap = apply_free(p);
        double pAp = 0.0;
        for (std::size_t i = 0; i < Ap.size(); ++i) pAp += p[i] * Ap[i];
        if (pAp <= 0.0) break;
        double alpha = rs / pAp;
        double rs2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rs2 += r[i] * r[i];
        }
        double beta = rs2 / rs;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
        rs = rs2;
    }
    if (iters_out) *iters_out = it;
    MapField phi(mesh, target);
    for (Index id = 0; id < N; ++id) {
        std::size_t i = static_cast<std::size_t>(id);
        phi.at(id)[0] = pin[i] ? fixed[i] : x[i];
    }
    return phi;
}

std::string RemovableResult::table_csv() const {
    std::ostringstream out;
    out << "defect_radius,defect_nodes,E2,sup_tau_near,solver_iters\n";
    for (const auto& r : runs)
        out << fmt17(r.defect_radius) << "," << r.defect_nodes << "," << fmt17(r.bienergy)
            << "," << fmt17(r.sup_tau_near) << "," << r.solver_iters << "\n";
    return out.str();
}

RemovableResult removable_singularity_experiment(const RemovableConfig& cfg) {
    if (cfg.resolutions_per_axis.size() != cfg.defect_radii.size())
        throw std::invalid_argument("removable experiment: mesh/radius lists must match");
    RemovableResult out;
    auto target = std::make_shared<SpaceForm>(0, 1);
    for (std::size_t i = 0; i < cfg.defect_radii.size(); ++i) {
        Index n = cfg.resolutions_per_axis[i];
        auto mesh = std::make_shared<Mesh>(std::vector<double>{cfg.period, cfg.period},
                                           std::vector<Index>{n, n});
        Index defect = center_node(*mesh, 0.5, 0.5);
        Index anchor = center_node(*mesh, 0.0, 0.0);
        DefectRun run;
        run.defect_radius = cfg.defect_radii[i];
        MapField phi = pinned_biharmonic_steady(mesh, target, defect, cfg.defect_radii[i],
                                                cfg.defect_value, anchor, cfg.anchor_radius,
                                                &run.solver_iters);
        BallRegion bd = ball(*mesh, defect, cfg.defect_radii[i]);
        if (bd.members.empty()) bd.members.push_back(defect);
        BallRegion ba = ball(*mesh, anchor, cfg.anchor_radius);
        std::vector<char> pin(static_cast<std::size_t>(mesh->node_count()), 0);
        for (Index id : bd.members) pin[static_cast<std::size_t>(id)] = 1;
        for (Index id : ba.members) pin[static_cast<std::size_t>(id)] = 1;
        run.defect_nodes = static_cast<long long>(bd.members.size());
        Section tau = tension(phi);
        ScalarField tau_n = tau.norm_field();
        double e2 = 0.0;
        for (Index id = 0; id < mesh->node_count(); ++id) {
            std::size_t k = static_cast<std::size_t>(id);
            if (!pin[k]) e2 += tau_n[k] * tau_n[k];
        }
        run.bienergy = 0.5 * mesh->node_weight() * e2;
        BallRegion probe = ball(*mesh, defect, cfg.probe_radius);
        double sup = 0.0;
        for (Index id : probe.members)
            if (!pin[static_cast<std::size_t>(id)])
                sup = std::max(sup, tau_n[static_cast<std::size_t>(id)]);
        run.sup_tau_near = sup;
        out.runs.push_back(run);
    }
    return out;
}

std::string InvZResult::table_csv() const {
    std::ostringstream out;
    out << "resolution,window_inner,sup_dphi,sup_tau\n";
    for (const auto& r : runs)
        out << r.resolution << "," << fmt17(r.window_inner) << "," << fmt17(r.sup_dphi)
            << "," << fmt17(r.sup_tau) << "\n";
    return out.str();
}

InvZResult inverse_z_control(const std::vector<Index>& resolutions, double period) {
    InvZResult out;
    auto target = std::make_shared<SpaceForm>(0, 2);
    const double h0 = period / 32.0;
    for (Index n : resolutions) {
        auto mesh = std::make_shared<Mesh>(std::vector<double>{period, period},
                                           std::vector<Index>{n, n});
        const double h = mesh->spacing(0);
        // puncture between nodes, near the domain center
        const double px = 0.5 * period + 0.5 * h;
        const double py = 0.5 * period + 0.5 * mesh->spacing(1);
        MapField phi(mesh, target);
        for (Index id = 0; id < mesh->node_count(); ++id) {
            double zx = mesh->coord(id, 0) - px;
            double zy = mesh->coord(id, 1) - py;
            double r2 = zx * zx + zy * zy;
            phi.at(id)[0] = zx / r2;
            phi.at(id)[1] = -zy / r2;
        }
        const double delta = 0.5 * std::pow(h / h0, 0.4);
        InvZRun run;
        run.resolution = n;
        run.window_inner = delta;
        Jet jet = differential(phi);
        Section tau = tension(phi);
        ScalarField tau_n = tau.norm_field();
        for (Index id = 0; id < mesh->node_count(); ++id) {
            double zx = mesh->coord(id, 0) - px;
            double zy = mesh->coord(id, 1) - py;
            double r = std::sqrt(zx * zx + zy * zy);
            if (r < delta || r > 1.0) continue;
            std::size_t i = static_cast<std::size_t>(id);
            run.sup_dphi = std::max(run.sup_dphi, std::sqrt(std::max(jet.dphi_sq[i], 0.0)));
            run.sup_tau = std::max(run.sup_tau, tau_n[i]);
        }
        out.runs.push_back(run);
    }
    return out;
}

} // namespace bhmap
