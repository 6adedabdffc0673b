#pragma once

// Exact symbolic expressions over jet coordinates.
//
// Normal form: a sum of terms, each
//     rational * monomial(atoms^int) * exp(rational-linear form in atoms)
//              * product of derived function symbols,
// terms sorted under a fixed total order, no zero coefficients.
// Divisions appear only as negative integer powers of atoms or function
// symbols; a denominator of the shape (atom + const) is kept as a dedicated
// "shifted" atom so that rational parameter functions like w0/(w0+1) stay
// inside the class.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dfx/error.hpp"

namespace dfx {

using Rational = mpq_class;

Rational rat(long num, long den = 1);
Rational rat_of_string(const std::string& s);
double to_double(const Rational& q);
int cmp3(const Rational& a, const Rational& b);
Rational binomial(int n, int k);

class Expr;
struct FunctionSymbol;

enum class AtomKind : uint8_t { T = 0, X, Jet, Omega, Param, Shifted, SymDeriv };

struct Atom {
  AtomKind kind = AtomKind::T;
  int comp = 0;  // Jet: component 1..3; Omega: kappa; Param: id
  int dt = 0;    // Jet only: number of t-derivatives (0 in restricted charts)
  int dx = 0;    // Jet only: number of x-derivatives
  std::shared_ptr<const Atom> base;  // Shifted: the unshifted atom
  Rational shift = 0;                // Shifted: represents (base + shift)
  const FunctionSymbol* sym = nullptr;               // SymDeriv
  std::vector<int> didx;                             // SymDeriv: derivative multi-index
  std::shared_ptr<const std::vector<Expr>> args;     // SymDeriv: argument expressions

  static Atom t();
  static Atom x();
  static Atom jet(int comp, int xorder);
  static Atom jet_mixed(int comp, int dt, int dx);
  static Atom omega(int kappa);
  static Atom param(const std::string& name);
  static Atom shifted(const Atom& base, const Rational& shift);

  bool is_coordinate() const {
    return kind == AtomKind::T || kind == AtomKind::X || kind == AtomKind::Jet ||
           kind == AtomKind::Omega || kind == AtomKind::Param;
  }
};

int cmp3(const Atom& a, const Atom& b);
inline bool operator==(const Atom& a, const Atom& b) { return cmp3(a, b) == 0; }
inline bool operator!=(const Atom& a, const Atom& b) { return cmp3(a, b) != 0; }
inline bool operator<(const Atom& a, const Atom& b) { return cmp3(a, b) < 0; }

const std::string& param_name(int id);

// How `equals` instantiates a symbol when a numeric fallback is needed.
enum class InstantiationFamily { None, KleinGordon, Polynomial };

struct MixedDerivativeRule {
  int slot_a = 0;
  int slot_b = 1;
  Rational factor;  // d/da d/db F -> factor * F
};

struct FunctionSymbol {
  std::string name;
  std::vector<Atom> canonical_args;
  std::optional<MixedDerivativeRule> mixed_rule;
  InstantiationFamily family = InstantiationFamily::None;
  int id = 0;

  int arity() const { return static_cast<int>(canonical_args.size()); }
};

const FunctionSymbol* register_symbol(const std::string& name, std::vector<Atom> canonical_args,
                                      std::optional<MixedDerivativeRule> mixed_rule,
                                      InstantiationFamily family);
const FunctionSymbol* find_symbol(const std::string& name);

// Built-in constrained symbols.
namespace sym {
const FunctionSymbol* Phi();     // Phi(r1, r2), Phi_{r1 r2} = -Phi/4
const FunctionSymbol* Psi();     // same constraint, seeds solution families
const FunctionSymbol* Theta();   // Theta(w0)
const FunctionSymbol* Xi();      // Xi(w0)
const FunctionSymbol* OmegaFn(int arity);  // Omega(w0..w{arity-1})
const FunctionSymbol* W();       // W(slot)
const FunctionSymbol* Theta1();  // Theta1(r1)
const FunctionSymbol* Theta2();  // Theta2(r2)
}  // namespace sym

struct Term {
  Rational coeff;
  std::vector<std::pair<Atom, int>> mono;       // sorted, nonzero exponents
  std::vector<std::pair<Atom, Rational>> expo;  // sorted, nonzero coefficients
};

int cmp_key(const Term& a, const Term& b);  // ignores coeff

class Expr {
 public:
  Expr() = default;  // zero

  static Expr zero() { return Expr(); }
  static Expr one() { return num(1); }
  static Expr num(long n) { return num(rat(n)); }
  static Expr num(const Rational& q);
  static Expr atom(const Atom& a);
  static Expr symbol(const FunctionSymbol* s);
  static Expr symbol(const FunctionSymbol* s, std::vector<int> didx);
  static Expr symbol(const FunctionSymbol* s, std::vector<int> didx, std::vector<Expr> args);
  // exp(linear): `linear` must be a rational-linear combination of coordinate
  // atoms with no constant part.
  static Expr exp_of(const Expr& linear);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::optional<Rational> as_rational() const;
  const std::vector<Term>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  Expr pow(int k) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  Expr& operator+=(const Expr& b) { *this = *this + b; return *this; }
  Expr& operator-=(const Expr& b) { *this = *this - b; return *this; }
  Expr& operator*=(const Expr& b) { *this = *this * b; return *this; }

  // Raw term assembly; performs the shifted-denominator fixups and sorting.
  static Expr from_raw_terms(std::vector<Term> raw);

 private:
  std::vector<Term> terms_;
};

int cmp3(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return cmp3(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return cmp3(a, b) != 0; }

inline Expr operator*(const Rational& q, const Expr& e) { return Expr::num(q) * e; }
inline Expr operator*(long n, const Expr& e) { return Expr::num(n) * e; }
inline Expr operator+(const Expr& e, long n) { return e + Expr::num(n); }
inline Expr operator+(long n, const Expr& e) { return Expr::num(n) + e; }
inline Expr operator-(const Expr& e, long n) { return e - Expr::num(n); }
inline Expr operator-(long n, const Expr& e) { return Expr::num(n) - e; }

// Exact partial derivative with respect to a coordinate atom; function-symbol
// rewrite rules are applied eagerly.
Expr diff(const Expr& e, const Atom& v);

// Structural substitution of coordinate atoms. Atoms mapped to std::nullopt
// stay untouched. Recurses through shifted bases, symbol arguments and
// exponents (an exponent image must stay rational-linear).
Expr subst(const Expr& e, const std::function<std::optional<Expr>(const Atom&)>& map);

// Coordinate atoms appearing anywhere in e (incl. inside symbol arguments).
void collect_atoms(const Expr& e, std::set<Atom>& out);
std::set<Atom> atoms_of(const Expr& e);
bool depends_on(const Expr& e, const Atom& v);
bool has_symbols(const Expr& e);

// Full re-normalization (rebuild from scratch). Idempotent; the arithmetic
// already keeps expressions normalized, so this is primarily a checking aid.
Expr normalize(const Expr& e);

// --- numeric evaluation -----------------------------------------------------

struct NativeClosedForm {
  // k-th derivative at x
  std::function<double(int k, double x)> dk;
};

struct EvalEnv {
  std::map<Atom, double> values;
  std::map<const FunctionSymbol*, Expr> instantiations;        // over canonical args
  std::map<const FunctionSymbol*, NativeClosedForm> natives;   // univariate only
  double singular_eps = 1e-8;
};

double eval(const Expr& e, const EvalEnv& env);

// --- equality ----------------------------------------------------------------

struct EqualsResult {
  bool equal = false;
  bool exact = true;  // false when decided by randomized evaluation
};

// Symbolic check with randomized instantiate-and-evaluate fallback.
// `points` evaluations, residual tolerance 1e-9 for "equal".
EqualsResult equals_syntactic(const Expr& a, const Expr& b, uint64_t seed = 0, int points = 20);

// Draws a random concrete instantiation consistent with the symbol's family.
Expr draw_instantiation(const FunctionSymbol* s, std::mt19937_64& rng);

// Random admissible point in [-2,-0.5] u [0.5,2] per atom.
double draw_coordinate_value(std::mt19937_64& rng);

// --- serialization ------------------------------------------------------------

std::string to_string(const Atom& a);
std::string to_string(const Expr& e);         // parenthesized prefix syntax
std::string to_infix_string(const Expr& e);   // reader-friendly

}  // namespace dfx
