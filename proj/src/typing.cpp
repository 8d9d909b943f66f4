#include "ndcut/typing.hpp"

#include "ndcut/visit.hpp"

namespace ndcut {

type_error::type_error(Path p, const std::string& msg)
    : std::runtime_error(path_str(p) + ": " + msg), path(std::move(p)) {}

TypingContext TypingContext::from_decls(const std::vector<CtxDecl>& decls) {
  TypingContext ctx;
  for (const auto& d : decls) {
    if (d.classical)
      ctx.cls_.insert_or_assign(d.name, d.type);
    else
      ctx.intu_.insert_or_assign(d.name, d.type);
  }
  return ctx;
}

const Formula* TypingContext::find_intu(const std::string& x) const {
  auto it = intu_.find(x);
  return it == intu_.end() ? nullptr : &it->second;
}

const Formula* TypingContext::find_cls(const std::string& a) const {
  auto it = cls_.find(a);
  return it == cls_.end() ? nullptr : &it->second;
}

TypingContext TypingContext::with_intu(const std::string& x, const Formula& a) const {
  TypingContext out = *this;
  out.intu_.insert_or_assign(x, a);
  out.cls_.erase(x);
  return out;
}

TypingContext TypingContext::with_cls(const std::string& a, const Formula& f) const {
  TypingContext out = *this;
  out.cls_.insert_or_assign(a, f);
  out.intu_.erase(a);
  return out;
}

std::vector<CtxDecl> TypingContext::to_decls() const {
  std::vector<CtxDecl> out;
  for (const auto& [n, f] : intu_) out.push_back({n, f, false});
  for (const auto& [n, f] : cls_) out.push_back({n, f, true});
  return out;
}

ScopeMap TypingContext::scope() const {
  ScopeMap m;
  for (const auto& [n, f] : intu_) m[n] = VarSort::Intu;
  for (const auto& [n, f] : cls_) m[n] = VarSort::Cls;
  return m;
}

namespace {

Formula check_rec(const TypingContext& ctx, const Term& t, Path& p);

Formula check_elim(const TypingContext& ctx, const Formula& fun_ty, const Elim& e, Path& p) {
  return std::visit(
      overloaded{
          [&](const ETermE& n) -> Formula {
            if (!fun_ty.is(Formula::Kind::Imp))
              throw type_error(p, "applied a non-function of type " + fun_ty.show());
            p.push_back(0);
            Formula arg = check_rec(ctx, n.term, p);
            p.pop_back();
            if (arg != fun_ty.left())
              throw type_error(p, "argument type " + arg.show() + " does not match " +
                                      fun_ty.left().show());
            return fun_ty.right();
          },
          [&](const ProjE& n) -> Formula {
            if (!fun_ty.is(Formula::Kind::And))
              throw type_error(p, "projected a non-conjunction of type " + fun_ty.show());
            return n.side == 1 ? fun_ty.left() : fun_ty.right();
          },
          [&](const CaseE& n) -> Formula {
            if (!fun_ty.is(Formula::Kind::Or))
              throw type_error(p, "case analysis on a non-disjunction of type " + fun_ty.show());
            p.push_back(0);
            Formula c1 = check_rec(ctx.with_intu(n.var1, fun_ty.left()), n.branch1, p);
            p.back() = 1;
            Formula c2 = check_rec(ctx.with_intu(n.var2, fun_ty.right()), n.branch2, p);
            p.pop_back();
            if (c1 != c2)
              throw type_error(p, "case branches disagree: " + c1.show() + " vs " + c2.show());
            return c1;
          },
          [&](const BoxE&) -> Formula {
            throw type_error(p, "boxed eliminator is not typable; erase marks first");
          },
      },
      e.node().v);
}

Formula check_rec(const TypingContext& ctx, const Term& t, Path& p) {
  return std::visit(
      overloaded{
          [&](const IVarT& n) -> Formula {
            if (const Formula* f = ctx.find_intu(n.name)) return *f;
            if (ctx.find_cls(n.name))
              throw type_error(p, "classical variable '" + n.name + "' used in term position");
            throw type_error(p, "unbound variable '" + n.name + "'");
          },
          [&](const LamT& n) -> Formula {
            p.push_back(0);
            Formula body = check_rec(ctx.with_intu(n.var, n.annot), n.body, p);
            p.pop_back();
            return Formula::imp(n.annot, body);
          },
          [&](const AppT& n) -> Formula {
            p.push_back(0);
            Formula fun_ty = check_rec(ctx, n.fun, p);
            p.back() = 1;
            Formula out = check_elim(ctx, fun_ty, n.elim, p);
            p.pop_back();
            return out;
          },
          [&](const PairT& n) -> Formula {
            p.push_back(0);
            Formula a = check_rec(ctx, n.first, p);
            p.back() = 1;
            Formula b = check_rec(ctx, n.second, p);
            p.pop_back();
            return Formula::conj(a, b);
          },
          [&](const InjT& n) -> Formula {
            if (!n.annot.is(Formula::Kind::Or))
              throw type_error(p, "injection annotation " + n.annot.show() +
                                      " is not a disjunction");
            p.push_back(0);
            Formula body = check_rec(ctx, n.body, p);
            p.pop_back();
            const Formula& want = n.side == 1 ? n.annot.left() : n.annot.right();
            if (body != want)
              throw type_error(p, "injection component " + body.show() + " does not match " +
                                      want.show());
            return n.annot;
          },
          [&](const MuT& n) -> Formula {
            p.push_back(0);
            Formula body = check_rec(ctx.with_cls(n.var, n.annot), n.body, p);
            p.pop_back();
            if (!body.is(Formula::Kind::Bottom))
              throw type_error(p, "mu body has type " + body.show() + ", expected Bot");
            return n.annot;
          },
          [&](const NameT& n) -> Formula {
            const Formula* f = ctx.find_cls(n.var);
            if (!f) {
              if (ctx.find_intu(n.var))
                throw type_error(p, "intuitionistic variable '" + n.var +
                                        "' used as a classical name");
              throw type_error(p, "unbound classical variable '" + n.var + "'");
            }
            p.push_back(0);
            Formula arg = check_rec(ctx, n.arg, p);
            p.pop_back();
            if (arg != *f)
              throw type_error(p, "named term has type " + arg.show() + ", declared " +
                                      f->show());
            return Formula::bottom();
          },
          [&](const MarkT&) -> Formula {
            throw type_error(p, "marked term is not typable; erase marks first");
          },
      },
      t.node().v);
}

}  // namespace

Formula check(const TypingContext& ctx, const Term& t) {
  Path p;
  return check_rec(ctx, t, p);
}

int lgt(const Formula& f) { return f.connectives(); }

}  // namespace ndcut
