#include "dfx/parse.hpp"

#include <cctype>
#include <vector>

namespace dfx {

namespace {

struct Lexer {
  std::string src;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  char get() {
    skip_ws();
    if (pos >= src.size()) fail(ErrorKind::ConfigError, "unexpected end of expression");
    return src[pos++];
  }
  void expect(char c) {
    char g = get();
    if (g != c)
      fail(ErrorKind::ConfigError, std::string("expected '") + c + "' got '" + g + "'");
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
            src[pos] == '.' || src[pos] == '$'))
      ++pos;
    if (start == pos) fail(ErrorKind::ConfigError, "expected identifier at position " +
                                                        std::to_string(start));
    return src.substr(start, pos - start);
  }
  std::string number() {
    skip_ws();
    size_t start = pos;
    if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '/'))
      ++pos;
    return src.substr(start, pos - start);
  }
  long integer() {
    skip_ws();
    size_t start = pos;
    if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    std::string n = src.substr(start, pos - start);
    try {
      return std::stol(n);
    } catch (...) {
      fail(ErrorKind::ConfigError, "bad integer '" + n + "'");
    }
  }
};

// name -> atom, for tokens like t, x, r1, r2_3, w0, $name
std::optional<Atom> atom_of_token(const std::string& tok) {
  if (tok == "t") return Atom::t();
  if (tok == "x") return Atom::x();
  if (tok.size() >= 2 && tok[0] == 'r' && std::isdigit(static_cast<unsigned char>(tok[1]))) {
    int comp = tok[1] - '0';
    if (comp < 1 || comp > 3) return std::nullopt;
    if (tok.size() == 2) return Atom::jet(comp, 0);
    if (tok[2] == '_') {
      try {
        int k = std::stoi(tok.substr(3));
        return Atom::jet(comp, k);
      } catch (...) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
  if (tok.size() >= 2 && tok[0] == 'w' && std::isdigit(static_cast<unsigned char>(tok[1]))) {
    try {
      return Atom::omega(std::stoi(tok.substr(1)));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (tok.size() >= 6 && tok.rfind("omega", 0) == 0 &&
      std::isdigit(static_cast<unsigned char>(tok[5]))) {
    try {
      return Atom::omega(std::stoi(tok.substr(5)));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (tok[0] == '$') return Atom::param(tok.substr(1));
  return std::nullopt;
}

const FunctionSymbol* symbol_of_name(const std::string& name) {
  // make sure the builtins exist before lookup
  sym::Phi();
  sym::Psi();
  sym::Theta();
  sym::Xi();
  sym::OmegaFn(2);
  sym::W();
  sym::Theta1();
  sym::Theta2();
  if (name.rfind("Omega", 0) == 0 && name.size() > 5) {
    try {
      return sym::OmegaFn(std::stoi(name.substr(5)));
    } catch (...) {
    }
  }
  return find_symbol(name);
}

// ---- infix -------------------------------------------------------------------

class InfixParser {
 public:
  explicit InfixParser(const std::string& s) : lex_{s} {}

  Expr parse_all() {
    Expr e = expr();
    if (!lex_.eof())
      fail(ErrorKind::ConfigError,
           "trailing input at position " + std::to_string(lex_.pos));
    return e;
  }

 private:
  Lexer lex_;

  Expr expr() {
    Expr acc = term();
    while (true) {
      char c = lex_.peek();
      if (c == '+') {
        lex_.get();
        acc = acc + term();
      } else if (c == '-') {
        lex_.get();
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = factor();
    while (true) {
      char c = lex_.peek();
      if (c == '*') {
        lex_.get();
        acc = acc * factor();
      } else if (c == '/') {
        lex_.get();
        acc = acc * factor().pow(-1);
      } else {
        return acc;
      }
    }
  }

  Expr factor() {
    Expr base = unary();
    if (lex_.peek() == '^') {
      lex_.get();
      bool paren = lex_.accept('(');
      long k = lex_.integer();
      if (paren) lex_.expect(')');
      return base.pow(static_cast<int>(k));
    }
    return base;
  }

  Expr unary() {
    if (lex_.peek() == '-') {
      lex_.get();
      return -unary();
    }
    if (lex_.peek() == '+') lex_.get();
    return primary();
  }

  Expr primary() {
    char c = lex_.peek();
    if (c == '(') {
      lex_.get();
      Expr e = expr();
      lex_.expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Expr::num(rat_of_string(lex_.number()));
    }
    std::string tok = lex_.ident();
    if (tok == "exp") {
      lex_.expect('(');
      Expr arg = expr();
      lex_.expect(')');
      return Expr::exp_of(arg);
    }
    if (auto a = atom_of_token(tok)) return Expr::atom(*a);
    const FunctionSymbol* s = symbol_of_name(tok);
    if (!s) fail(ErrorKind::ConfigError, "unknown name '" + tok + "'");
    std::vector<int> didx(static_cast<size_t>(s->arity()), 0);
    if (lex_.peek() == '{') {
      lex_.get();
      for (size_t i = 0; i < didx.size(); ++i) {
        didx[i] = static_cast<int>(lex_.integer());
        if (i + 1 < didx.size()) lex_.expect(',');
      }
      lex_.expect('}');
    }
    if (lex_.peek() == '(') {
      lex_.get();
      std::vector<Expr> args;
      if (lex_.peek() != ')') {
        args.push_back(expr());
        while (lex_.accept(',')) args.push_back(expr());
      }
      lex_.expect(')');
      return Expr::symbol(s, std::move(didx), std::move(args));
    }
    return Expr::symbol(s, std::move(didx));
  }
};

// ---- prefix ------------------------------------------------------------------

class PrefixParser {
 public:
  explicit PrefixParser(const std::string& s) : lex_{s} {}

  Expr parse_all() {
    Expr e = form();
    if (!lex_.eof()) fail(ErrorKind::ConfigError, "trailing input in prefix expression");
    return e;
  }

 private:
  Lexer lex_;

  Expr form() {
    if (lex_.peek() == '(') {
      lex_.get();
      std::string head;
      char c = lex_.peek();
      if (c == '+' || c == '*' || c == '^') {
        head = std::string(1, lex_.get());
      } else {
        head = lex_.ident();
      }
      Expr result;
      if (head == "+") {
        result = Expr::zero();
        while (lex_.peek() != ')') result += form();
      } else if (head == "*") {
        result = Expr::one();
        while (lex_.peek() != ')') result *= form();
      } else if (head == "^") {
        Expr base = form();
        long k = lex_.integer();
        result = base.pow(static_cast<int>(k));
      } else if (head == "exp") {
        result = Expr::exp_of(form());
      } else if (head == "jet") {
        long comp = lex_.integer();
        long dt = lex_.integer();
        long dx = lex_.integer();
        result = Expr::atom(Atom::jet_mixed(static_cast<int>(comp), static_cast<int>(dt),
                                            static_cast<int>(dx)));
      } else if (head == "shift") {
        Expr base = form();
        Rational c = rat_of_string(lex_.number());
        result = (base + Expr::num(c));
      } else if (head == "sym") {
        std::string name = lex_.ident();
        const FunctionSymbol* s = symbol_of_name(name);
        if (!s) fail(ErrorKind::ConfigError, "unknown symbol '" + name + "'");
        lex_.expect('(');
        std::string d = lex_.ident();
        if (d != "d") fail(ErrorKind::ConfigError, "expected (d ...) derivative index");
        std::vector<int> didx;
        while (lex_.peek() != ')') didx.push_back(static_cast<int>(lex_.integer()));
        lex_.expect(')');
        std::vector<Expr> args;
        while (lex_.peek() != ')') args.push_back(form());
        if (args.empty())
          result = Expr::symbol(s, std::move(didx));
        else
          result = Expr::symbol(s, std::move(didx), std::move(args));
      } else {
        fail(ErrorKind::ConfigError, "unknown prefix head '" + head + "'");
      }
      lex_.expect(')');
      return result;
    }
    // token: number or atom
    char c = lex_.peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
      return Expr::num(rat_of_string(lex_.number()));
    }
    std::string tok = lex_.ident();
    if (auto a = atom_of_token(tok)) return Expr::atom(*a);
    fail(ErrorKind::ConfigError, "unknown token '" + tok + "'");
  }
};

bool looks_prefix(const std::string& s) {
  size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i >= s.size() || s[i] != '(') return false;
  ++i;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i >= s.size()) return false;
  char c = s[i];
  if (c == '+' || c == '*' || c == '^') return true;
  // word heads used by the prefix reader
  static const char* heads[] = {"exp", "jet", "shift", "sym"};
  for (const char* h : heads) {
    size_t n = std::string(h).size();
    if (s.compare(i, n, h) == 0 &&
        (i + n >= s.size() || !std::isalnum(static_cast<unsigned char>(s[i + n]))))
      return true;
  }
  return false;
}

}  // namespace

Expr parse(const std::string& text) {
  if (looks_prefix(text)) return PrefixParser(text).parse_all();
  return InfixParser(text).parse_all();
}

}  // namespace dfx
