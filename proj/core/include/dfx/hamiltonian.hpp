#pragma once

// The family H_Theta of first-order Hamiltonian operators, skew-adjointness,
// the Noether property, flatness of the associated metric, compatibility of
// pairs, Hamiltonian-form verification, Casimirs, the cosymmetry Lie bracket
// and Hamiltonian symmetries.

#include <vector>

#include "dfx/conservation.hpp"

namespace dfx {

struct HamiltonianOperator {
  MatrixDiffOperator op;  // restricted-chart entries h^{ij} Dx + f^{ij}
  Expr theta;             // parameter function of w0
};

// Theta given as a function of w0 (symbolic Theta() or a concrete expression)
HamiltonianOperator make_H(const Expr& theta);

bool is_skew_adjoint(const MatrixDiffOperator& M);

struct NoetherReport {
  bool pass = true;
  bool exact = true;
  std::vector<EvolutionaryField> images;
};

NoetherReport noether_check(const HamiltonianOperator& H, const std::vector<Cosymmetry>& samples,
                            uint64_t seed = 0);

struct Metric {
  // diagonal components over the dependent variables (r1, r2, r3); treated as
  // the covariant metric when differentiating
  std::array<Expr, 3> diag;
};

// diag( -e^{r2-r1}, e^{r2-r1}, Theta e^{2 r2 - 2 r1} ); Theta reparameterized
// to the dependent variable r3
Metric metric_of(const HamiltonianOperator& H);

// Christoffel symbols of the Levi-Civita connection, Gamma[i][j][k] = G^i_{jk}
std::array<std::array<std::array<Expr, 3>, 3>, 3> christoffel(const Metric& g);
// curvature component R^i_{j i j}
Expr curvature_component(const Metric& g, int i, int j);
bool is_flat(const Metric& g);

// Nijenhuis tensor of s = diag(1,1,Theta2/Theta1) plus the covariant
// compatibility conditions of the two metrics
CheckReport compatibility_check(const Expr& theta1, const Expr& theta2, uint64_t seed = 0);

// density (r1+r2)^2 e^{r1-r2} + c0 (r1+r2) + 2 (r1-r2+Xi(r3)) e^{2(r1-r2)}
Expr hamiltonian_density(const Rational& c0, const Expr& xi);

// (a) sqrt(Theta) Xi'' + Theta' Xi' / 2 = c0   (Theta > 0 branch)
// (b) H_Theta grad(H) = -(V1 r1_x, V2 r2_x, V3 r3_x)
CheckReport hamiltonian_form_check(const Expr& theta, const Rational& c0, const Expr& xi,
                                   uint64_t seed = 0);

// H_Theta annihilates the variational derivatives of e^{r1-r2} and of
// e^{r1-r2} ThetaBar(w0), ThetaBar' = 1/Theta
CheckReport casimir_check(const Expr& theta, const Expr& theta_bar, uint64_t seed = 0);

// [g1,g2]_H = l_{g2} H g1 + l†_{H g1} g2 + (l_{g1} - l†_{g1}) H g2
Cosymmetry cosym_bracket(const Cosymmetry& g1, const Cosymmetry& g2, const HamiltonianOperator& H);
// pass iff H [g1,g2]_H = [H g1, H g2]
CheckReport homomorphism_check(const Cosymmetry& g1, const Cosymmetry& g2,
                               const HamiltonianOperator& H, uint64_t seed = 0);

// W(OmegaBar) with OmegaBar = Ahat( Theta * sum_k (-Ahat)^k Omega_{w^k} )
EvolutionaryField make_hamiltonian_symmetry_W(const Expr& theta, const Expr& omega);

std::array<Expr, 3> apply_H(const HamiltonianOperator& H, const Cosymmetry& lambda);

}  // namespace dfx
