#pragma once

#include "fields.hpp"

namespace bhmap {

// Discrete realizations of the first- and second-order operators on maps
// phi: mesh -> space form and sections of the pullback bundle. Domain frame
// terms vanish on the flat torus. Stencils: central differences for first
// derivatives, 3-point per-axis for the tension's second derivatives, nested
// central (width 2) for the pullback connection, so summation by parts holds
// exactly on the periodic grid.

Jet differential(const MapField& phi);

// B(phi)(e_a,e_b): tangent projection of the mixed second central difference
Section second_fundamental_form(const MapField& phi, int a, int b);

// tau(phi) = sum_a B(phi)(e_a,e_a) = proj(componentwise 3-point laplacian)
Section tension(const MapField& phi);

// pullback connection along axis a: proj(central difference of V)
Section pullback_derivative(const Section& V, int a);

// rough Laplacian: -sum_a D_a D_a V with D_a = pullback_derivative
Section rough_laplacian(const Section& V);

// R V = sum_a R^N(V, dphi(e_a)) dphi(e_a); needs the jet of the base map
Section curvature_term(const MapField& phi, const Section& V);
Section curvature_term(const MapField& phi, const Section& V, const Jet& jet);

// J(V) = rough_laplacian(V) - curvature_term(V)
Section jacobi_apply(const MapField& phi, const Section& V);

// tau_2(phi) = J(tau(phi)); identical code path to jacobi_apply
Section bitension(const MapField& phi);

// per-axis [1,2,1]/4 ambient smoothing + reprojection; annihilates
// axis-Nyquist modes (invisible to the width-2 connection stencils) at an
// O(h^2) perturbation of smooth maps
MapField nyquist_filter(const MapField& phi);

// |nabla-bar V|^2 per node
ScalarField pullback_gradient_sq(const Section& V);

// gradient of |V| regularized as grad sqrt(|V|^2 + eps_reg^2), eps_reg = 1e-12
std::vector<ScalarField> regularized_norm_gradient(const Mesh& mesh, const ScalarField& norm);

} // namespace bhmap
