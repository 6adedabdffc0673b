#pragma once

// Matrix differential operators in total derivatives with expression
// coefficients, the universal linearization (Frechet derivative) and the
// formal adjoint.

#include <array>
#include <vector>

#include "dfx/jet.hpp"

namespace dfx {

struct OpMono {
  Expr coeff;
  int dt = 0;
  int dx = 0;
};

struct OpEntry {
  std::vector<OpMono> monos;  // canonical: sorted by (dt,dx), merged, nonzero

  static OpEntry zero() { return {}; }
  static OpEntry of(Expr coeff, int dt = 0, int dx = 0);
  bool is_zero() const { return monos.empty(); }
};

OpEntry operator+(const OpEntry& a, const OpEntry& b);
OpEntry operator-(const OpEntry& a);
OpEntry operator*(const Expr& c, const OpEntry& e);  // left multiplication
bool operator==(const OpEntry& a, const OpEntry& b);

class MatrixDiffOperator {
 public:
  MatrixDiffOperator() = default;
  explicit MatrixDiffOperator(bool offshell) : offshell_(offshell) {}

  OpEntry& at(int i, int j) { return entries_[idx(i, j)]; }
  const OpEntry& at(int i, int j) const { return entries_[idx(i, j)]; }
  bool offshell() const { return offshell_; }

  friend MatrixDiffOperator operator+(const MatrixDiffOperator& a, const MatrixDiffOperator& b);
  friend MatrixDiffOperator operator-(const MatrixDiffOperator& a);
  friend bool operator==(const MatrixDiffOperator& a, const MatrixDiffOperator& b);

 private:
  static size_t idx(int i, int j) { return static_cast<size_t>(3 * (i - 1) + (j - 1)); }
  std::array<OpEntry, 9> entries_{};
  bool offshell_ = false;
};

// apply one entry to a scalar (derivatives chosen by `offshell`)
Expr apply_entry(const OpEntry& e, const Expr& v, bool offshell);

std::array<Expr, 3> apply_op(const MatrixDiffOperator& M, const std::array<Expr, 3>& v);

// universal linearization of a component triple; omega coordinates are
// converted to the standard chart first
MatrixDiffOperator frechet(const std::array<Expr, 3>& F, bool offshell = false);

// linearization of a scalar differential function as a row (1x3)
std::array<OpEntry, 3> frechet_row(const Expr& f);
Expr apply_row(const std::array<OpEntry, 3>& row, const std::array<Expr, 3>& v,
               bool offshell = false);

MatrixDiffOperator formal_adjoint(const MatrixDiffOperator& M);
std::array<OpEntry, 3> formal_adjoint_of_row(const std::array<OpEntry, 3>& row, bool offshell);
// adjoint of a single scalar operator entry
OpEntry formal_adjoint_entry(const OpEntry& e, bool offshell);

// off-shell left-hand sides E^i = r^i_t + V^i r^i_x of the system
std::array<Expr, 3> system_lhs_offshell();

}  // namespace dfx
