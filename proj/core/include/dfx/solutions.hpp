#pragma once

// Exact solution families (regular / singular / ultra-singular), numeric
// sampling on (t,x) grids by damped Newton continuation, and finite-difference
// validation of PDE and conservation residuals.

#include <string>
#include <vector>

#include "dfx/conservation.hpp"

namespace dfx {

// univariate closed form with derivatives of all orders needed
struct ClosedForm {
  std::function<double(int k, double x)> dk;
  std::string repr;

  double operator()(double x) const { return dk(0, x); }

  static ClosedForm tanh_form();
  static ClosedForm exp_form();
  static ClosedForm poly(std::vector<double> coeffs);  // c0 + c1 x + ...
  static ClosedForm parse(const std::string& text);    // "tanh" | "exp" | "poly:c0,c1,.."
};

struct KGSolution {
  Expr psi;  // over r1, r2
  bool nondegenerate = false;

  // verifies Psi_{r1 r2} + Psi/4 = 0 exactly, flags membership in
  // span{ e^{(r2-r1)/2}, e^{(r1-r2)/2}, (r1+r2) e^{(r1-r2)/2} }
  static KGSolution make(const Expr& psi);
  // sum of c_i e^{a_i r1 + b_i r2} with a_i b_i = -1/4
  static KGSolution exponential(const std::vector<std::pair<Rational, Rational>>& coeff_a_pairs);
};

enum class SingularSide { R1, R2 };

struct ImplicitSolution {
  enum class Family { Regular, SingularR1, SingularR2, Ultra };
  Family family = Family::Ultra;

  // regular: t(r1,r2), x(r1,r2), W-argument(r1,r2)
  KGSolution psi;
  Expr t_map, x_map, warg_map;

  // singular
  double c = 0.0;
  ClosedForm theta;

  // ultra
  double c1 = 0.0, c2 = 0.0;

  ClosedForm w;
};

ImplicitSolution make_regular(const KGSolution& psi, ClosedForm w);
ImplicitSolution make_singular(SingularSide side, double c, ClosedForm theta, ClosedForm w);
ImplicitSolution make_ultra(double c1, double c2, ClosedForm w);

struct GridSpec {
  double t0 = 0.0, x0 = 0.0;
  double dt = 0.01, dx = 0.01;
  int nt = 51, nx = 51;
  // interior seed for the Newton continuation (regular family)
  double seed_r1 = 0.0, seed_r2 = 0.0;
};

struct GridField {
  GridSpec spec;
  std::vector<double> r1, r2, r3;  // nt*nx, row-major in t

  double t_at(int i) const { return spec.t0 + i * spec.dt; }
  double x_at(int j) const { return spec.x0 + j * spec.dx; }
  size_t at(int i, int j) const { return static_cast<size_t>(i) * spec.nx + j; }

  // diagnostics from sampling
  double max_newton_residual = 0.0;
  int max_newton_iters = 0;
  double min_jacobian_abs = 0.0;
  double max_neighbor_jump = 0.0;
  double min_r1x_r2x_abs = 0.0;  // nondegeneracy monitor (finite differences)
};

GridField sample_on_grid(const ImplicitSolution& sol, const GridSpec& spec);

struct ResidualNorms {
  double max_norm = 0.0;
  double l2_norm = 0.0;
};

std::array<ResidualNorms, 3> pde_residual(const GridField& f);
ResidualNorms conservation_residual(const GridField& f, const ConservedCurrent& c);

// numeric jets at a grid node by centered differences (orders <= 2)
EvalEnv node_env(const GridField& f, int i, int j);

// log2(coarse/fine); expects residuals from step halving
double observed_order(double coarse, double fine);

void write_csv(const GridField& f, const std::string& path);

}  // namespace dfx
