#pragma once

// Cosymmetries, conserved currents, the three families of each, reduced
// characteristics with the off-shell Euler-kernel identity, the symmetry
// action on currents, and the translation-invariance / order filters.

#include <vector>

#include "dfx/diffop.hpp"
#include "dfx/symmetry.hpp"

namespace dfx {

using Cosymmetry = std::array<Expr, 3>;

struct ConservedCurrent {
  Expr rho;
  Expr sigma;
};

// residuals of the adjoint determining system
//   Dt l1 + V1 Dx l1 - r2_x (l2 - l1) - r3_x l3
//   Dt l2 + V2 Dx l2 - r1_x (l1 - l2) - r3_x l3
//   Dt l3 + V3 Dx l3 + (r1_x + r2_x) l3
CheckReport is_cosymmetry(const Cosymmetry& lambda, uint64_t seed = 0);

// pass iff Dt rho + Dx sigma normalizes to zero
CheckReport is_conserved_current(const ConservedCurrent& c, uint64_t seed = 0);

// family 1: ( e^{r1-r2} Omega, (r1+r2) e^{r1-r2} Omega )
ConservedCurrent make_current_family1(const Expr& omega);
// family 2: e^{(r1-r2)/2} ( 2 Phi_{r1} + Phi,
//                           2 (r1+r2+1) Phi_{r1} + (r1+r2-1) Phi )
ConservedCurrent make_current_family2(const Expr& phi);
// family 3 from rho~ = -q~ Dz~ Q q~, sigma~ = (Dy~ q~) Q q~:
//   ( r2_x rho~ + r1_x sigma~, V2 r2_x rho~ + V1 r1_x sigma~ )
ConservedCurrent make_current_family3(const QSpec& q);

// the three cosymmetry families:
//   1: e^{r1-r2} ( Omega, -Omega, (Ahat Omega)/w1 )
//   2: e^{(r1-r2)/2} ( -2 Phi_{r1}, Phi, 0 )
//   3: e^{(r1-r2)/2} ( -Dy~ Q q~, Q q~, 0 )
Cosymmetry make_cosymmetry_family1(const Expr& omega);
Cosymmetry make_cosymmetry_family2(const Expr& phi);
Cosymmetry make_cosymmetry_family3(const QSpec& q);

Cosymmetry make_characteristic_family1(const Expr& omega);
Cosymmetry make_characteristic_family2(const Expr& phi);
Cosymmetry make_characteristic_family3(const QSpec& q);

// characteristic * this factor pairs with make_current_family3 in the
// off-shell identity (the families are stated up to this constant)
inline constexpr int kFamily3CharCurrentFactor = -2;

// pass iff the full Euler operator annihilates
//   full_dt rho + full_dx sigma - sum_i lambda^i E^i
CheckReport verify_characteristic_identity(const ConservedCurrent& c, const Cosymmetry& lambda,
                                           uint64_t seed = 0);

ConservedCurrent act_symmetry_on_current(const EvolutionaryField& eta, const ConservedCurrent& c);

bool is_tx_invariant(const Expr& e);
bool is_tx_invariant(const Cosymmetry& lambda);
bool is_tx_invariant(const ConservedCurrent& c);
int order_of(const Cosymmetry& lambda);
int order_of(const ConservedCurrent& c);

// the two generating currents: e^{r1-r2}(r3, (r1+r2) r3) and
// e^{r1-r2}(x - V3 t, V3 (x - V3 t) - t)
ConservedCurrent generating_current_r3();
ConservedCurrent generating_current_kg();

// physical balance laws (masses of both phases, mixture mass, momentum, energy)
ConservedCurrent physical_mass_phase1();
ConservedCurrent physical_mass_phase2();
ConservedCurrent physical_mass_mixture();
ConservedCurrent physical_momentum();
ConservedCurrent physical_energy();

// the four explicit (t,x)-translation-invariant currents of order <= 2 from
// the span of the third family
std::vector<ConservedCurrent> invariant_second_order_currents();

}  // namespace dfx
