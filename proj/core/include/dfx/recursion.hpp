#pragma once

// Recursion operators: the canonical first-order operator with its action
// table, the three parametric local families R1/R2/R3, the decomposition
// identity, and the nonlocal operator R4 with its potential, verified
// numerically on solution grids.

#include "dfx/hamiltonian.hpp"
#include "dfx/solutions.hpp"

namespace dfx {

struct RecursionOperator {
  enum class Kind { Matrix, R1, R2, R3 };
  Kind kind = Kind::Matrix;
  MatrixDiffOperator mat;                    // Matrix
  GammaSpec word = GammaSpec::j_power(0);    // R1/R2: the tilde-operator word
  std::vector<std::pair<Expr, int>> p;       // R3: sum_k Omega^k A^k as (coeff, k)

  static RecursionOperator matrix(MatrixDiffOperator m);
};

RecursionOperator teshukov();
RecursionOperator make_R1(const GammaSpec& q);
RecursionOperator make_R2(const GammaSpec& q);
RecursionOperator make_R3(std::vector<std::pair<Expr, int>> p);

EvolutionaryField apply_recursion(const RecursionOperator& R, const EvolutionaryField& eta);

// R_T eta = (1/2 R1,1 - 1/2 R2,1 + R3,1) eta for each field in the sample
CheckReport teshukov_decomposition_check(const std::vector<EvolutionaryField>& sample,
                                         uint64_t seed = 0);

// --- nonlocal operator R4 -----------------------------------------------------

// convention resolved by the numeric oracle: with B = diag(2,-2,0) the
// potential column must be C = 2 (r1_x, r2_x, r3_x); the printed pairing
// C = (r1_x, r2_x, r3_x) leaves the residuals reported by
// r4_determining_residuals(1).
inline constexpr int kR4ResolvedCScale = 2;

struct R4DeterminingReport {
  bool a_ok = false;               // first and second displays with A = 0
  bool c_ok = false;               // C-column equation
  std::array<std::array<Expr, 3>, 3> b_residuals{};  // per (k,k')
  bool b_ok = false;
};

// substitutes A = 0, B = diag(2,-2,0), C = c_scale * (r1_x, r2_x, r3_x)
R4DeterminingReport r4_determining_residuals(int c_scale);

struct R4Report {
  bool pass = false;
  double y_consistency = 0.0;       // max |centered Dt Y + V1 eta1 + V2 eta2|
  std::array<double, 3> residual_max{};
  std::array<double, 3> residual_l2{};
  double threshold = 0.0;
  int c_scale = kR4ResolvedCScale;
};

// builds the potential Y by trapezoidal quadrature of Dx Y = eta1 + eta2
// (time-anchored along the left boundary), forms R4 eta = B eta + C Y and
// reports the grid residual of the linearized system
R4Report apply_R4(const EvolutionaryField& eta, const GridField& grid,
                  int c_scale = kR4ResolvedCScale, double threshold_scale = 50.0);

}  // namespace dfx
