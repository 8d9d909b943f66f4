#include "ndcut/syntax.hpp"

#include <cctype>
#include <sstream>

#include "ndcut/visit.hpp"

namespace ndcut {

syntax_error::syntax_error(int line_, int col_, const std::string& msg)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_) {}

namespace {

enum class Tk {
  Ident,  // also carries atom names
  KwMu, KwIn1, KwIn2, KwP1, KwP2, KwBot, KwCtx,
  LParen, RParen, LAngle, RAngle, LBrack, RBrack, LBrace, RBrace,
  Backslash, Dot, Comma, Colon, Semi, Bar, Eq, Tilde,
  Arrow, AndSym, OrSym,
  End,
};

struct Tok {
  Tk k;
  std::string text;
  int line, col;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tk k, std::string text, int c) { out.push_back({k, std::move(text), line, c}); };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (c == ' ' || c == '\t' || c == '\r') { ++col; ++i; continue; }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    int c0 = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string w = s.substr(i, j - i);
      col += static_cast<int>(j - i);
      i = j;
      Tk k = Tk::Ident;
      if (w == "mu") k = Tk::KwMu;
      else if (w == "in1") k = Tk::KwIn1;
      else if (w == "in2") k = Tk::KwIn2;
      else if (w == "p1") k = Tk::KwP1;
      else if (w == "p2") k = Tk::KwP2;
      else if (w == "Bot") k = Tk::KwBot;
      else if (w == "ctx") k = Tk::KwCtx;
      push(k, w, c0);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < s.size() && s[i + 1] == b; };
    if (two('-', '>')) { push(Tk::Arrow, "->", c0); i += 2; col += 2; continue; }
    if (two('/', '\\')) { push(Tk::AndSym, "/\\", c0); i += 2; col += 2; continue; }
    if (two('\\', '/')) { push(Tk::OrSym, "\\/", c0); i += 2; col += 2; continue; }
    Tk k;
    switch (c) {
      case '(': k = Tk::LParen; break;
      case ')': k = Tk::RParen; break;
      case '<': k = Tk::LAngle; break;
      case '>': k = Tk::RAngle; break;
      case '[': k = Tk::LBrack; break;
      case ']': k = Tk::RBrack; break;
      case '{': k = Tk::LBrace; break;
      case '}': k = Tk::RBrace; break;
      case '\\': k = Tk::Backslash; break;
      case '.': k = Tk::Dot; break;
      case ',': k = Tk::Comma; break;
      case ':': k = Tk::Colon; break;
      case ';': k = Tk::Semi; break;
      case '|': k = Tk::Bar; break;
      case '=': k = Tk::Eq; break;
      case '~': k = Tk::Tilde; break;
      default:
        throw syntax_error(line, c0, std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c), c0);
    ++i;
    ++col;
  }
  out.push_back({Tk::End, "", line, col});
  return out;
}

struct Parser {
  std::vector<Tok> toks;
  size_t i = 0;
  const ScopeMap* ambient = nullptr;
  std::vector<std::pair<std::string, VarSort>> locals;
  bool in_payload = false;

  explicit Parser(const std::string& text) : toks(lex(text)) {}

  const Tok& peek(int ahead = 0) const {
    size_t j = i + ahead;
    return j < toks.size() ? toks[j] : toks.back();
  }
  bool at(Tk k) const { return peek().k == k; }
  Tok eat() { return toks[i++]; }
  [[noreturn]] void fail(const Tok& t, const std::string& msg) const {
    throw syntax_error(t.line, t.col, msg);
  }
  Tok expect(Tk k, const std::string& what) {
    if (!at(k)) fail(peek(), "expected " + what);
    return eat();
  }

  std::optional<VarSort> lookup(const std::string& n) const {
    for (auto it = locals.rbegin(); it != locals.rend(); ++it)
      if (it->first == n) return it->second;
    if (ambient) {
      auto it = ambient->find(n);
      if (it != ambient->end()) return it->second;
    }
    return std::nullopt;
  }

  std::string var_ident() {
    Tok t = expect(Tk::Ident, "a variable name");
    if (!std::islower(static_cast<unsigned char>(t.text[0])))
      fail(t, "variable names start lowercase");
    return t.text;
  }

  // --- formulas -------------------------------------------------------------

  Formula formula() {
    Formula l = formula_or();
    if (at(Tk::Arrow)) {
      eat();
      return Formula::imp(l, formula());
    }
    return l;
  }
  Formula formula_or() {
    Formula l = formula_and();
    while (at(Tk::OrSym)) {
      eat();
      l = Formula::disj(l, formula_and());
    }
    return l;
  }
  Formula formula_and() {
    Formula l = formula_unary();
    while (at(Tk::AndSym)) {
      eat();
      l = Formula::conj(l, formula_unary());
    }
    return l;
  }
  Formula formula_unary() {
    if (at(Tk::Tilde)) {
      eat();
      return Formula::neg(formula_unary());
    }
    if (at(Tk::KwBot)) {
      eat();
      return Formula::bottom();
    }
    if (at(Tk::Ident)) {
      Tok t = eat();
      if (!std::isupper(static_cast<unsigned char>(t.text[0])))
        fail(t, "formula atoms are uppercase identifiers");
      return Formula::atom(t.text);
    }
    if (at(Tk::LParen)) {
      eat();
      Formula f = formula();
      expect(Tk::RParen, "')'");
      return f;
    }
    fail(peek(), "expected a formula");
  }

  // --- terms and eliminators ------------------------------------------------

  bool starts_term() const {
    switch (peek().k) {
      case Tk::Backslash: case Tk::KwMu: case Tk::KwIn1: case Tk::KwIn2:
      case Tk::LAngle: case Tk::LBrace: case Tk::LParen: case Tk::Ident:
        return true;
      default:
        return false;
    }
  }

  Term term() {
    const Tok& t = peek();
    switch (t.k) {
      case Tk::Backslash: {
        eat();
        std::string x = var_ident();
        expect(Tk::Colon, "':'");
        Formula a = formula();
        expect(Tk::Dot, "'.'");
        locals.emplace_back(x, VarSort::Intu);
        Term body = term();
        locals.pop_back();
        return lam(x, a, body);
      }
      case Tk::KwMu: {
        eat();
        std::string a = var_ident();
        expect(Tk::Colon, "':'");
        Formula f = formula();
        expect(Tk::Dot, "'.'");
        locals.emplace_back(a, VarSort::Cls);
        Term body = term();
        locals.pop_back();
        return mu(a, f, body);
      }
      case Tk::KwIn1:
      case Tk::KwIn2: {
        int side = t.k == Tk::KwIn1 ? 1 : 2;
        eat();
        expect(Tk::LBrack, "'['");
        Formula f = formula();
        expect(Tk::RBrack, "']'");
        return inj(side, f, term());
      }
      case Tk::LAngle: {
        eat();
        Term a = term();
        expect(Tk::Comma, "','");
        Term b = term();
        expect(Tk::RAngle, "'>'");
        return pair(a, b);
      }
      case Tk::LBrace: {
        if (in_payload) fail(t, "mark inside a mark/box payload");
        eat();
        in_payload = true;
        Term n = term();
        in_payload = false;
        expect(Tk::RBrace, "'}'");
        return mark(n);
      }
      case Tk::LParen: {
        eat();
        if (at(Tk::Ident)) {
          auto s = lookup(peek().text);
          if (s && *s == VarSort::Cls) {
            Tok a = eat();
            if (!starts_term())
              fail(peek(), "classical name '(" + a.text + " M)' takes exactly one term");
            Term arg = term();
            if (!at(Tk::RParen))
              fail(peek(), "classical name '(" + a.text + " M)' takes exactly one term");
            eat();
            return name(a.text, arg);
          }
        }
        Term head = term();
        std::vector<Elim> es;
        while (!at(Tk::RParen)) es.push_back(elim());
        eat();
        return spine(head, es);
      }
      case Tk::Ident: {
        Tok v = eat();
        if (!std::islower(static_cast<unsigned char>(v.text[0])))
          fail(v, "variable names start lowercase");
        auto s = lookup(v.text);
        if (!s) fail(v, "unbound variable '" + v.text + "'");
        if (*s == VarSort::Cls)
          fail(v, "classical variable '" + v.text + "' used in term position");
        return ivar(v.text);
      }
      default:
        fail(t, "expected a term");
    }
  }

  Elim elim() {
    const Tok& t = peek();
    if (t.k == Tk::KwP1 || t.k == Tk::KwP2) {
      eat();
      return proj(t.k == Tk::KwP1 ? 1 : 2);
    }
    if (t.k == Tk::LBrack) {
      if (peek(1).k == Tk::LBrack) {
        if (in_payload) fail(t, "box inside a mark/box payload");
        eat();
        eat();
        in_payload = true;
        Elim e = elim();
        in_payload = false;
        expect(Tk::RBrack, "']'");
        expect(Tk::RBrack, "']'");
        return box(e);
      }
      eat();
      std::string x1 = var_ident();
      expect(Tk::Dot, "'.'");
      locals.emplace_back(x1, VarSort::Intu);
      Term b1 = term();
      locals.pop_back();
      expect(Tk::Bar, "'|'");
      std::string x2 = var_ident();
      expect(Tk::Dot, "'.'");
      locals.emplace_back(x2, VarSort::Intu);
      Term b2 = term();
      locals.pop_back();
      expect(Tk::RBrack, "']'");
      return case_of(x1, b1, x2, b2);
    }
    if (starts_term()) return eterm(term());
    fail(t, "expected an eliminator");
  }

  // --- context blocks and top-level forms -----------------------------------

  std::vector<CtxDecl> decls() {
    std::vector<CtxDecl> out;
    expect(Tk::KwCtx, "'ctx'");
    if (at(Tk::Semi)) {  // empty block `ctx;`
      eat();
      return out;
    }
    for (;;) {
      Tok n = expect(Tk::Ident, "a variable name");
      if (!std::islower(static_cast<unsigned char>(n.text[0])))
        fail(n, "variable names start lowercase");
      for (const auto& d : out)
        if (d.name == n.text) fail(n, "duplicate declaration of '" + n.text + "'");
      expect(Tk::Colon, "':'");
      bool classical = false;
      Formula ty = Formula::bottom();
      if (at(Tk::Tilde)) {
        size_t save = i;
        eat();
        Formula u = formula_unary();
        if (at(Tk::Comma) || at(Tk::Semi)) {
          classical = true;
          ty = u;
        } else {
          i = save;  // the ~ was a subformula prefix; reparse in full
          ty = formula();
        }
      } else {
        ty = formula();
      }
      out.push_back({n.text, ty, classical});
      if (at(Tk::Comma)) {
        eat();
        continue;
      }
      expect(Tk::Semi, "';'");
      break;
    }
    return out;
  }

  void expect_end() {
    if (!at(Tk::End)) fail(peek(), "unexpected trailing input");
  }
};

std::string show_decl(const CtxDecl& d) {
  if (d.classical) return d.name + ":" + Formula::neg(d.type).show();
  if (d.type.is_neg()) {
    // Avoid the `~A` rendering: a whole-type leading ~ re-parses as classical.
    const Formula& l = d.type.left();
    std::string ls = l.show();
    if (l.is(Formula::Kind::Imp) && !l.is_neg()) ls = "(" + ls + ")";
    return d.name + ":" + ls + " -> Bot";
  }
  return d.name + ":" + d.type.show();
}

void print_term_rec(std::ostringstream& os, const Term& t);
void print_elim_rec(std::ostringstream& os, const Elim& e);

void print_term_rec(std::ostringstream& os, const Term& t) {
  std::visit(
      overloaded{
          [&](const IVarT& n) { os << n.name; },
          [&](const LamT& n) {
            os << "\\" << n.var << ":" << n.annot.show() << ". ";
            print_term_rec(os, n.body);
          },
          [&](const AppT&) {
            auto [head, es] = unspine(t);
            os << "(";
            print_term_rec(os, head);
            for (const Elim& e : es) {
              os << " ";
              print_elim_rec(os, e);
            }
            os << ")";
          },
          [&](const PairT& n) {
            os << "<";
            print_term_rec(os, n.first);
            os << ", ";
            print_term_rec(os, n.second);
            os << ">";
          },
          [&](const InjT& n) {
            os << "in" << n.side << "[" << n.annot.show() << "] ";
            print_term_rec(os, n.body);
          },
          [&](const MuT& n) {
            os << "mu " << n.var << ":" << n.annot.show() << ". ";
            print_term_rec(os, n.body);
          },
          [&](const NameT& n) {
            os << "(" << n.var << " ";
            print_term_rec(os, n.arg);
            os << ")";
          },
          [&](const MarkT& n) {
            os << "{";
            print_term_rec(os, n.payload);
            os << "}";
          },
      },
      t.node().v);
}

void print_elim_rec(std::ostringstream& os, const Elim& e) {
  std::visit(
      overloaded{
          [&](const ETermE& n) { print_term_rec(os, n.term); },
          [&](const ProjE& n) { os << "p" << n.side; },
          [&](const CaseE& n) {
            os << "[" << n.var1 << ".";
            print_term_rec(os, n.branch1);
            os << " | " << n.var2 << ".";
            print_term_rec(os, n.branch2);
            os << "]";
          },
          [&](const BoxE& n) {
            os << "[[";
            print_elim_rec(os, n.payload);
            os << "]]";
          },
      },
      e.node().v);
}

}  // namespace

Formula parse_formula(const std::string& text) {
  Parser p(text);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

Term parse_term(const std::string& text, const ScopeMap& scope) {
  Parser p(text);
  p.ambient = &scope;
  Term t = p.term();
  p.expect_end();
  return t;
}

Elim parse_elim(const std::string& text, const ScopeMap& scope) {
  Parser p(text);
  p.ambient = &scope;
  Elim e = p.elim();
  p.expect_end();
  return e;
}

SourceUnit parse_unit(const std::string& text) {
  Parser p(text);
  std::vector<CtxDecl> ds;
  if (p.at(Tk::KwCtx)) ds = p.decls();
  ScopeMap scope = scope_of(ds);
  p.ambient = &scope;
  Term t = p.term();
  std::optional<Formula> expected;
  if (p.at(Tk::Colon)) {
    p.eat();
    expected = p.formula();
  }
  p.expect_end();
  return SourceUnit{std::move(ds), t, expected};
}

AppScenario parse_scenario(const std::string& text) {
  Parser p(text);
  std::vector<CtxDecl> ds;
  if (p.at(Tk::KwCtx)) ds = p.decls();
  ScopeMap scope = scope_of(ds);
  p.ambient = &scope;
  std::optional<Term> M, N1, N2, N;
  std::optional<Elim> eps;
  std::vector<Term> V;
  bool sawV = false;
  for (;;) {
    Tok n = p.expect(Tk::Ident, "a binding name (M, N1, N2, N, eps, V)");
    p.expect(Tk::Eq, "'='");
    // the branch slots N1/N2 may use the conventional case binders x1/x2
    auto bind_term = [&](std::optional<Term>& slot, const char* binder = nullptr) {
      if (slot) p.fail(n, "duplicate binding '" + n.text + "'");
      if (binder) p.locals.emplace_back(binder, VarSort::Intu);
      slot = p.term();
      if (binder) p.locals.pop_back();
    };
    if (n.text == "M") bind_term(M);
    else if (n.text == "N1") bind_term(N1, "x1");
    else if (n.text == "N2") bind_term(N2, "x2");
    else if (n.text == "N") bind_term(N);
    else if (n.text == "eps") {
      if (eps) p.fail(n, "duplicate binding 'eps'");
      eps = p.elim();
    } else if (n.text == "V") {
      if (sawV) p.fail(n, "duplicate binding 'V'");
      sawV = true;
      p.expect(Tk::LBrack, "'['");
      if (!p.at(Tk::RBrack)) {
        V.push_back(p.term());
        while (p.at(Tk::Comma)) {
          p.eat();
          V.push_back(p.term());
        }
      }
      p.expect(Tk::RBrack, "']'");
    } else {
      p.fail(n, "unknown binding '" + n.text + "'");
    }
    if (p.at(Tk::Comma)) {
      p.eat();
      continue;
    }
    break;
  }
  p.expect_end();
  const Tok& end = p.peek();
  if (!M) throw syntax_error(end.line, end.col, "missing binding 'M'");
  if (!N1) throw syntax_error(end.line, end.col, "missing binding 'N1'");
  if (!N2) throw syntax_error(end.line, end.col, "missing binding 'N2'");
  if (!eps) throw syntax_error(end.line, end.col, "missing binding 'eps'");
  return AppScenario{std::move(ds), *M, *N1, *N2, *eps, std::move(V), N};
}

std::vector<Term> parse_trace(const std::string& text, const ScopeMap& scope) {
  Parser p(text);
  p.ambient = &scope;
  std::vector<Term> out;
  while (!p.at(Tk::End)) {
    out.push_back(p.term());
    if (p.at(Tk::Semi)) {
      p.eat();
      continue;
    }
    break;
  }
  p.expect_end();
  return out;
}

ScopeMap scope_of(const std::vector<CtxDecl>& decls) {
  ScopeMap m;
  for (const auto& d : decls) m[d.name] = d.classical ? VarSort::Cls : VarSort::Intu;
  return m;
}

std::string print_term(const Term& t) {
  std::ostringstream os;
  print_term_rec(os, t);
  return os.str();
}

std::string print_elim(const Elim& e) {
  std::ostringstream os;
  print_elim_rec(os, e);
  return os.str();
}

std::string print_decls(const std::vector<CtxDecl>& decls) {
  std::string out = "ctx ";
  for (size_t i = 0; i < decls.size(); ++i) {
    if (i) out += ", ";
    out += show_decl(decls[i]);
  }
  out += ";";
  return out;
}

std::string print_unit(const SourceUnit& u) {
  std::string out;
  if (!u.decls.empty()) out += print_decls(u.decls) + "\n";
  out += print_term(u.term);
  if (u.expected) out += " : " + u.expected->show();
  out += "\n";
  return out;
}

std::string print_scenario(const AppScenario& s) {
  std::string out;
  if (!s.decls.empty()) out += print_decls(s.decls) + "\n";
  out += "M = " + print_term(s.M) + ",\n";
  if (s.N) out += "N = " + print_term(*s.N) + ",\n";
  out += "N1 = " + print_term(s.N1) + ",\n";
  out += "N2 = " + print_term(s.N2) + ",\n";
  out += "eps = " + print_elim(s.eps) + ",\n";
  out += "V = [";
  for (size_t i = 0; i < s.V.size(); ++i) {
    if (i) out += ", ";
    out += print_term(s.V[i]);
  }
  out += "]\n";
  return out;
}

std::string print_trace(const std::vector<Term>& ts) {
  std::string out;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ";\n";
    out += print_term(ts[i]);
  }
  if (!ts.empty()) out += "\n";
  return out;
}

}  // namespace ndcut
