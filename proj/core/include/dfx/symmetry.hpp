#pragma once

// Generalized symmetries: the determining-equation checker, constructors for
// the four families spanning the symmetry algebra, the evolutionary Lie
// bracket and ideal classification.

#include <array>
#include <string>

#include "dfx/model.hpp"

namespace dfx {

using EvolutionaryField = std::array<Expr, 3>;

struct CheckReport {
  bool pass = false;
  bool exact = true;
  std::array<Expr, 3> residuals{};
  std::string note;
};

// residuals of  Dt eta^i + V^i Dx eta^i + r^i_x (eta^1 + eta^2)
CheckReport is_symmetry(const EvolutionaryField& eta, uint64_t seed = 0);

struct GammaSpec {
  enum class Kind { JPower, DyThenJ, DzThenJ };
  Kind kind = Kind::JPower;
  int kappa = 0;
  int iota = 0;  // >= 1 for DyThenJ / DzThenJ

  static GammaSpec j_power(int kappa) { return {Kind::JPower, kappa, 0}; }
  static GammaSpec dy(int iota, int kappa) { return {Kind::DyThenJ, kappa, iota}; }
  static GammaSpec dz(int iota, int kappa) { return {Kind::DzThenJ, kappa, iota}; }
};

// Gamma in {J~^k q~, Dy~^i J~^k q~, Dz~^i J~^k q~}
Expr gamma_of(const GammaSpec& spec, int budget = 5);

EvolutionaryField make_W(const Expr& omega);
EvolutionaryField make_P(const Expr& phi);
EvolutionaryField make_D();
EvolutionaryField make_R(const GammaSpec& spec, int budget = 5);
// the R-family shape for an explicit Gamma
EvolutionaryField field_R_of_gamma(const Expr& gamma);

// evolutionary forms of the Lie point symmetries
EvolutionaryField make_G1();  // (t r1_x - 1, t r2_x, t r3_x)
EvolutionaryField make_G2();  // (1, -1, 0)
EvolutionaryField make_translation_x();  // (r1_x, r2_x, r3_x)
EvolutionaryField make_translation_t();  // (V1 r1_x, V2 r2_x, V3 r3_x)

EvolutionaryField zero_field();
EvolutionaryField add(const EvolutionaryField& a, const EvolutionaryField& b);
EvolutionaryField scale(const Rational& c, const EvolutionaryField& a);
bool field_is_zero(const EvolutionaryField& a);
EqualsResult fields_equal(const EvolutionaryField& a, const EvolutionaryField& b,
                          uint64_t seed = 0);

EvolutionaryField lie_bracket(const EvolutionaryField& a, const EvolutionaryField& b);

enum class SymmetryClass { InI1, InI2, InIntersection, Outside };
SymmetryClass classify(const EvolutionaryField& eta);
const char* to_string(SymmetryClass c);

}  // namespace dfx
