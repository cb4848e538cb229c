#include "variational.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "io.hpp"

namespace bhmap {

double energy(const MapField& phi) {
    const Mesh& mesh = phi.mesh();
    const SpaceForm& tg = phi.target();
    const int d = tg.ambient_dim();
    double total = 0.0;
    std::vector<double> diff(static_cast<std::size_t>(d));
    for (int a = 0; a < mesh.dim(); ++a) {
        const double inv = 1.0 / mesh.spacing(a);
        for (Index id = 0; id < mesh.node_count(); ++id) {
            const double* p = phi.at(mesh.shift(id, a, 1));
            const double* q = phi.at(id);
            for (int c = 0; c < d; ++c) diff[static_cast<std::size_t>(c)] = (p[c] - q[c]) * inv;
            total += tg.form(diff.data(), diff.data());
        }
    }
    return 0.5 * mesh.node_weight() * total;
}

double bienergy(const MapField& phi) {
    Section tau = tension(phi);
    const Mesh& mesh = phi.mesh();
    double total = 0.0;
    for (Index id = 0; id < mesh.node_count(); ++id)
        total += phi.target().form(tau.at(id), tau.at(id));
    return 0.5 * mesh.node_weight() * total;
}

namespace {

MapField displaced(const MapField& phi, const Section& V, double t) {
    MapField out(phi.mesh_ptr(), phi.target_ptr());
    const int d = phi.target().ambient_dim();
    std::vector<double> p(static_cast<std::size_t>(d));
    for (Index id = 0; id < phi.mesh().node_count(); ++id) {
        for (int c = 0; c < d; ++c)
            p[static_cast<std::size_t>(c)] = phi.at(id)[c] + t * V.at(id)[c];
        phi.target().project_point(p.data(), out.at(id));
    }
    return out;
}

double pair_integral(const Section& A, const Section& B) {
    const Mesh& mesh = A.mesh();
    double s = 0.0;
    for (Index id = 0; id < mesh.node_count(); ++id)
        s += A.target().form(A.at(id), B.at(id));
    return s * mesh.node_weight();
}

} // namespace

FirstVariationResult first_variation_check(const MapField& phi, const Section& V, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("first_variation_check: eps must be positive");
    MapField plus = displaced(phi, V, eps);
    MapField minus = displaced(phi, V, -eps);
    FirstVariationResult r;
    {
        double lhs = (energy(plus) - energy(minus)) / (2.0 * eps);
        double rhs = -pair_integral(tension(phi), V);
        r.energy_residual = std::abs(lhs - rhs);
    }
    {
        double lhs = (bienergy(plus) - bienergy(minus)) / (2.0 * eps);
        double rhs = -pair_integral(bitension(phi), V);
        r.bienergy_residual = std::abs(lhs - rhs);
    }
    return r;
}

std::string FlowTrace::to_csv() const {
    std::ostringstream out;
    out << "step,E,E2,tau_sup,tau2_sup,dt\n";
    for (const auto& s : steps)
        out << s.step << "," << fmt17(s.E) << "," << fmt17(s.E2) << "," << fmt17(s.tau_sup)
            << "," << fmt17(s.tau2_sup) << "," << fmt17(s.dt) << "\n";
    return out.str();
}

std::pair<MapField, FlowTrace> run_flow(const MapField& phi0, const FlowConfig& cfg) {
    if (cfg.dt <= 0.0) throw std::invalid_argument("run_flow: dt must be positive");
    if (cfg.tolerance <= 0.0) throw std::invalid_argument("run_flow: tolerance must be positive");
    const Mesh& mesh = phi0.mesh();
    const int d = phi0.target().ambient_dim();
    const bool biharmonic = cfg.kind == FlowKind::Biharmonic;
    const double dt_max = cfg.dt;
    const double dt_floor = cfg.dt * 1e-16;

    std::vector<char> pinned(static_cast<std::size_t>(mesh.node_count()), 0);
    for (Index id : cfg.pinned) pinned[static_cast<std::size_t>(id)] = 1;
    const bool has_pins = !cfg.pinned.empty();

    auto hold_pins = [&](MapField& cand, const MapField& ref) {
        if (!has_pins) return;
        for (Index id = 0; id < mesh.node_count(); ++id)
            if (pinned[static_cast<std::size_t>(id)])
                for (int c = 0; c < d; ++c) cand.at(id)[c] = ref.at(id)[c];
    };

    MapField phi = phi0;
    FlowTrace trace;
    double dt = cfg.dt;
    double last_dt = 0.0;
    int consecutive_accepts = 0;
    double obj = 0.0;

    for (long long step = 0; step <= cfg.max_steps; ++step) {
        Section tau = tension(phi);
        Section tau2 = jacobi_apply(phi, tau);
        const double E = energy(phi);
        const double E2 = 0.5 * pair_integral(tau, tau);
        trace.steps.push_back({step, E, E2, tau.sup_norm(), tau2.sup_norm(), last_dt});
        obj = biharmonic ? E2 : E;
        const double residual = biharmonic ? trace.steps.back().tau2_sup : trace.steps.back().tau_sup;
        if (residual <= cfg.tolerance) {
            trace.status = FlowStatus::Converged;
            return {phi, trace};
        }
        if (step == cfg.max_steps) break;

        const Section& D = biharmonic ? tau2 : tau; // descent: tau, respectively +tau2
        if (cfg.control == StepControl::Fixed) {
            MapField cand = displaced(phi, D, dt);
            hold_pins(cand, phi);
            phi = std::move(cand);
            ++trace.accepted;
            last_dt = dt;
            continue;
        }
        bool accepted = false;
        while (dt >= dt_floor) {
            MapField cand = displaced(phi, D, dt);
            hold_pins(cand, phi);
            const double cand_obj = biharmonic ? bienergy(cand) : energy(cand);
            if (cand_obj <= obj) {
                phi = std::move(cand);
                accepted = true;
                ++trace.accepted;
                last_dt = dt;
                if (++consecutive_accepts >= 5) {
                    dt = std::min(1.5 * dt, dt_max);
                    consecutive_accepts = 0;
                }
                break;
            }
            dt *= 0.5;
            consecutive_accepts = 0;
        }
        if (!accepted) {
            trace.status = FlowStatus::DtUnderflow;
            return {phi, trace};
        }
    }
    trace.status = FlowStatus::MaxSteps;
    return {phi, trace};
}

} // namespace bhmap
