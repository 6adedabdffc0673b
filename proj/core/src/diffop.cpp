#include "dfx/diffop.hpp"

#include <algorithm>

namespace dfx {

namespace {

void entry_add(std::vector<OpMono>& monos, Expr coeff, int dt, int dx) {
  if (coeff.is_zero()) return;
  auto it = std::lower_bound(monos.begin(), monos.end(), std::make_pair(dt, dx),
                             [](const OpMono& m, const std::pair<int, int>& key) {
                               return std::make_pair(m.dt, m.dx) < key;
                             });
  if (it != monos.end() && it->dt == dt && it->dx == dx) {
    it->coeff += coeff;
    if (it->coeff.is_zero()) monos.erase(it);
  } else {
    monos.insert(it, OpMono{std::move(coeff), dt, dx});
  }
}

}  // namespace

OpEntry OpEntry::of(Expr coeff, int dt, int dx) {
  OpEntry e;
  entry_add(e.monos, std::move(coeff), dt, dx);
  return e;
}

OpEntry operator+(const OpEntry& a, const OpEntry& b) {
  OpEntry out = a;
  for (const OpMono& m : b.monos) entry_add(out.monos, m.coeff, m.dt, m.dx);
  return out;
}

OpEntry operator-(const OpEntry& a) {
  OpEntry out = a;
  for (OpMono& m : out.monos) m.coeff = -m.coeff;
  return out;
}

OpEntry operator*(const Expr& c, const OpEntry& e) {
  OpEntry out;
  for (const OpMono& m : e.monos) entry_add(out.monos, c * m.coeff, m.dt, m.dx);
  return out;
}

bool operator==(const OpEntry& a, const OpEntry& b) {
  if (a.monos.size() != b.monos.size()) return false;
  for (size_t i = 0; i < a.monos.size(); ++i) {
    if (a.monos[i].dt != b.monos[i].dt || a.monos[i].dx != b.monos[i].dx) return false;
    if (a.monos[i].coeff != b.monos[i].coeff) return false;
  }
  return true;
}

MatrixDiffOperator operator+(const MatrixDiffOperator& a, const MatrixDiffOperator& b) {
  MatrixDiffOperator out(a.offshell());
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
  return out;
}

MatrixDiffOperator operator-(const MatrixDiffOperator& a) {
  MatrixDiffOperator out(a.offshell());
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out.at(i, j) = -a.at(i, j);
  return out;
}

bool operator==(const MatrixDiffOperator& a, const MatrixDiffOperator& b) {
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (!(a.at(i, j) == b.at(i, j))) return false;
  return true;
}

Expr apply_entry(const OpEntry& e, const Expr& v, bool offshell) {
  Expr out;
  for (const OpMono& m : e.monos) {
    Expr d = v;
    for (int j = 0; j < m.dt; ++j) d = offshell ? full_dt(d) : total_dt(d);
    for (int j = 0; j < m.dx; ++j) d = offshell ? full_dx(d) : total_dx(d);
    out += m.coeff * d;
  }
  return out;
}

std::array<Expr, 3> apply_op(const MatrixDiffOperator& M, const std::array<Expr, 3>& v) {
  std::array<Expr, 3> out;
  for (int i = 1; i <= 3; ++i) {
    Expr acc;
    for (int j = 1; j <= 3; ++j)
      acc += apply_entry(M.at(i, j), v[static_cast<size_t>(j - 1)], M.offshell());
    out[static_cast<size_t>(i - 1)] = acc;
  }
  return out;
}

namespace {

std::array<OpEntry, 3> linearize_scalar(const Expr& f) {
  std::array<OpEntry, 3> row;
  Expr g = to_standard(f);
  for (const Atom& a : atoms_of(g)) {
    if (a.kind != AtomKind::Jet) continue;
    Expr c = diff(g, a);
    if (c.is_zero()) continue;
    row[static_cast<size_t>(a.comp - 1)] =
        row[static_cast<size_t>(a.comp - 1)] + OpEntry::of(std::move(c), a.dt, a.dx);
  }
  return row;
}

}  // namespace

MatrixDiffOperator frechet(const std::array<Expr, 3>& F, bool offshell) {
  MatrixDiffOperator M(offshell);
  for (int i = 1; i <= 3; ++i) {
    auto row = linearize_scalar(F[static_cast<size_t>(i - 1)]);
    for (int j = 1; j <= 3; ++j) M.at(i, j) = row[static_cast<size_t>(j - 1)];
  }
  return M;
}

std::array<OpEntry, 3> frechet_row(const Expr& f) { return linearize_scalar(f); }

Expr apply_row(const std::array<OpEntry, 3>& row, const std::array<Expr, 3>& v, bool offshell) {
  Expr acc;
  for (int j = 0; j < 3; ++j) acc += apply_entry(row[static_cast<size_t>(j)],
                                                 v[static_cast<size_t>(j)], offshell);
  return acc;
}

OpEntry formal_adjoint_entry(const OpEntry& e, bool offshell) {
  // (c Dt^a Dx^b)^† = (-Dt)^a (-Dx)^b ∘ c, expanded by Leibniz
  OpEntry out;
  for (const OpMono& m : e.monos) {
    int sign = ((m.dt + m.dx) % 2 == 0) ? 1 : -1;
    // precompute derivatives of the coefficient
    std::vector<std::vector<Expr>> dc(static_cast<size_t>(m.dt) + 1);
    dc[0].resize(static_cast<size_t>(m.dx) + 1);
    dc[0][0] = m.coeff;
    for (int b = 1; b <= m.dx; ++b)
      dc[0][static_cast<size_t>(b)] =
          offshell ? full_dx(dc[0][static_cast<size_t>(b - 1)])
                   : total_dx(dc[0][static_cast<size_t>(b - 1)]);
    for (int a = 1; a <= m.dt; ++a) {
      dc[static_cast<size_t>(a)].resize(static_cast<size_t>(m.dx) + 1);
      for (int b = 0; b <= m.dx; ++b)
        dc[static_cast<size_t>(a)][static_cast<size_t>(b)] =
            offshell ? full_dt(dc[static_cast<size_t>(a - 1)][static_cast<size_t>(b)])
                     : total_dt(dc[static_cast<size_t>(a - 1)][static_cast<size_t>(b)]);
    }
    for (int a = 0; a <= m.dt; ++a) {
      for (int b = 0; b <= m.dx; ++b) {
        Expr c = Expr::num(binomial(m.dt, a) * binomial(m.dx, b) * rat(sign)) *
                 dc[static_cast<size_t>(a)][static_cast<size_t>(b)];
        entry_add(out.monos, std::move(c), m.dt - a, m.dx - b);
      }
    }
  }
  return out;
}

MatrixDiffOperator formal_adjoint(const MatrixDiffOperator& M) {
  MatrixDiffOperator out(M.offshell());
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out.at(i, j) = formal_adjoint_entry(M.at(j, i), M.offshell());
  return out;
}

std::array<OpEntry, 3> formal_adjoint_of_row(const std::array<OpEntry, 3>& row, bool offshell) {
  std::array<OpEntry, 3> out;
  for (int j = 0; j < 3; ++j)
    out[static_cast<size_t>(j)] = formal_adjoint_entry(row[static_cast<size_t>(j)], offshell);
  return out;
}

std::array<Expr, 3> system_lhs_offshell() {
  std::array<Expr, 3> out;
  for (int i = 1; i <= 3; ++i)
    out[static_cast<size_t>(i - 1)] =
        Expr::atom(Atom::jet_mixed(i, 1, 0)) + velocity(i) * Expr::atom(Atom::jet_mixed(i, 0, 1));
  return out;
}

}  // namespace dfx
