#pragma once

// Operator toolbox on jet space: restricted and full total derivatives, the
// commuting operators A = e^{r2-r1} Dx and B = Dt + (r1+r2) Dx, chart
// conversions between standard jets (r^i_k) and modified coordinates
// (r^1_k, r^2_k, w^k), Euler operators, order functions and the membership
// test for the image of Ahat = sum_k w^{k+1} d/dw^k.

#include <array>
#include <climits>

#include "dfx/expr.hpp"

namespace dfx {

enum class Chart { Standard, Modified, OffShell };

struct JetContext {
  Chart chart = Chart::Modified;
  int max_order = 16;
};

// characteristic velocities of the built-in system: V1 = r1+r2+1, V2 = r1+r2-1,
// V3 = r1+r2
Expr velocity(int i);

// restricted total derivatives (t-derivatives substituted on shell); accept
// both standard and modified atoms
Expr total_dx(const Expr& e);
Expr total_dt(const Expr& e);

// full (off-shell) total derivatives over mixed jets r^i_(a,b)
Expr full_dx(const Expr& e);
Expr full_dt(const Expr& e);

Expr op_A(const Expr& e);  // e^{r2-r1} Dx
Expr op_B(const Expr& e);  // Dt + (r1+r2) Dx
Expr op_Ahat(const Expr& e);  // sum_k w^{k+1} d/dw^k on pure omega functions

// chart conversions; mutually inverse on expressions within tracked order
Expr to_standard(const Expr& e);
Expr to_modified(const Expr& e);

// variational derivative of a density in restricted standard coordinates
std::array<Expr, 3> euler_operator(const Expr& density);
// full Euler operator over mixed jets of all three components
std::array<Expr, 3> euler_operator_full(const Expr& density);

// true iff E(Omega) = 0 where
// E = sum_{k>=1} sum_{k'<k} w^{k-k'} (-Ahat)^{k'} d/dw^k - 1
bool in_image_of_Ahat(const Expr& omega_expr);

enum class OrdFamily { R1, R2, R3, Omega };
inline constexpr int kOrdNone = INT_MIN;
int ord(const Expr& e, OrdFamily family);

// prolonged evolutionary derivation sum_{i,k} (Dx^k eta^i) d/dr^i_k applied to
// a standard-chart expression
Expr prolong_apply(const std::array<Expr, 3>& eta_std, const Expr& e);

// chart-aware equality: symbolic after conversion to the standard chart, with
// randomized instantiate-and-evaluate fallback when function symbols block
// cancellation
EqualsResult equals(const Expr& a, const Expr& b, uint64_t seed = 0);

}  // namespace dfx
