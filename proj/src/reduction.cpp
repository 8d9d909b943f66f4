#include "ndcut/reduction.hpp"

#include <map>
#include <random>

#include "ndcut/subst.hpp"
#include "ndcut/visit.hpp"

namespace ndcut {

const char* kind_name(RedexKind k) {
  switch (k) {
    case RedexKind::Beta: return "Beta";
    case RedexKind::Proj: return "Proj";
    case RedexKind::CaseInj: return "CaseInj";
    case RedexKind::Perm: return "Perm";
    case RedexKind::Clas: return "Clas";
    case RedexKind::MarkBox: return "MarkBox";
  }
  return "?";
}

namespace {

std::optional<RedexKind> match(const Term& t) {
  const AppT* a = t.get<AppT>();
  if (!a) return std::nullopt;
  if (a->fun.is<LamT>() && a->elim.is<ETermE>()) return RedexKind::Beta;
  if (a->fun.is<PairT>() && a->elim.is<ProjE>()) return RedexKind::Proj;
  if (a->fun.is<InjT>() && a->elim.is<CaseE>()) return RedexKind::CaseInj;
  if (const AppT* f = a->fun.get<AppT>(); f && f->elim.is<CaseE>()) return RedexKind::Perm;
  if (a->fun.is<MuT>()) return RedexKind::Clas;
  if (a->fun.is<MarkT>() && a->elim.is<BoxE>()) return RedexKind::MarkBox;
  return std::nullopt;
}

void collect_term(const Term& t, Path& p, std::vector<Redex>& out);
void collect_elim(const Elim& e, Path& p, std::vector<Redex>& out);

void collect_term(const Term& t, Path& p, std::vector<Redex>& out) {
  if (auto k = match(t)) out.push_back({p, *k});
  std::visit(
      overloaded{
          [&](const IVarT&) {},
          [&](const LamT& n) {
            p.push_back(0);
            collect_term(n.body, p, out);
            p.pop_back();
          },
          [&](const AppT& n) {
            p.push_back(0);
            collect_term(n.fun, p, out);
            p.back() = 1;
            collect_elim(n.elim, p, out);
            p.pop_back();
          },
          [&](const PairT& n) {
            p.push_back(0);
            collect_term(n.first, p, out);
            p.back() = 1;
            collect_term(n.second, p, out);
            p.pop_back();
          },
          [&](const InjT& n) {
            p.push_back(0);
            collect_term(n.body, p, out);
            p.pop_back();
          },
          [&](const MuT& n) {
            p.push_back(0);
            collect_term(n.body, p, out);
            p.pop_back();
          },
          [&](const NameT& n) {
            p.push_back(0);
            collect_term(n.arg, p, out);
            p.pop_back();
          },
          [&](const MarkT& n) {
            p.push_back(0);
            collect_term(n.payload, p, out);
            p.pop_back();
          },
      },
      t.node().v);
}

void collect_elim(const Elim& e, Path& p, std::vector<Redex>& out) {
  std::visit(
      overloaded{
          [&](const ETermE& n) {
            p.push_back(0);
            collect_term(n.term, p, out);
            p.pop_back();
          },
          [&](const ProjE&) {},
          [&](const CaseE& n) {
            p.push_back(0);
            collect_term(n.branch1, p, out);
            p.back() = 1;
            collect_term(n.branch2, p, out);
            p.pop_back();
          },
          [&](const BoxE& n) {
            p.push_back(0);
            collect_elim(n.payload, p, out);
            p.pop_back();
          },
      },
      e.node().v);
}

// Typing context at a path: ambient declarations plus binders crossed on the
// way down.  Case binders need the scrutinee's type, recovered by checking
// the erased scrutinee; failure (raw term) yields nullopt.
std::optional<TypingContext> ctx_at(const Term& root, const Path& p, const TypingContext* ambient) {
  TypingContext ctx = ambient ? *ambient : TypingContext();
  const Term* t = &root;
  const Elim* e = nullptr;
  const Term* app_fun = nullptr;  // scrutinee of the eliminator being entered
  for (size_t d = 0; d < p.size(); ++d) {
    int i = p[d];
    if (t) {
      const auto& v = t->node().v;
      if (const LamT* n = std::get_if<LamT>(&v)) {
        ctx = ctx.with_intu(n->var, n->annot);
        t = &n->body;
      } else if (const MuT* n = std::get_if<MuT>(&v)) {
        ctx = ctx.with_cls(n->var, n->annot);
        t = &n->body;
      } else if (const AppT* n = std::get_if<AppT>(&v)) {
        if (i == 0) {
          t = &n->fun;
        } else {
          app_fun = &n->fun;
          e = &n->elim;
          t = nullptr;
        }
      } else if (const PairT* n = std::get_if<PairT>(&v)) {
        t = i == 0 ? &n->first : &n->second;
      } else if (const InjT* n = std::get_if<InjT>(&v)) {
        t = &n->body;
      } else if (const NameT* n = std::get_if<NameT>(&v)) {
        t = &n->arg;
      } else if (const MarkT* n = std::get_if<MarkT>(&v)) {
        t = &n->payload;
      } else {
        return std::nullopt;  // bad path
      }
    } else {
      const auto& v = e->node().v;
      if (const ETermE* n = std::get_if<ETermE>(&v)) {
        t = &n->term;
        e = nullptr;
      } else if (const CaseE* n = std::get_if<CaseE>(&v)) {
        if (!app_fun) return std::nullopt;
        Formula scrut = Formula::bottom();
        try {
          scrut = check(ctx, erase_marked(*app_fun));
        } catch (const type_error&) {
          return std::nullopt;
        }
        if (!scrut.is(Formula::Kind::Or)) return std::nullopt;
        if (i == 0) {
          ctx = ctx.with_intu(n->var1, scrut.left());
          t = &n->branch1;
        } else {
          ctx = ctx.with_intu(n->var2, scrut.right());
          t = &n->branch2;
        }
        e = nullptr;
      } else if (const BoxE* n = std::get_if<BoxE>(&v)) {
        e = &n->payload;  // (U [[case]]) cases still scrutinize U
      } else {
        return std::nullopt;
      }
    }
  }
  return ctx;
}

// Result annotation for (mu a:F M e): the type of the whole application.
// The eliminator under a Box retypes via its payload.
Formula clas_annot(const Formula& f, const Elim& e, const Term& root, const Path& p,
                   const TypingContext* ambient) {
  return std::visit(
      overloaded{
          [&](const ETermE&) {
            return f.is(Formula::Kind::Imp) ? f.right() : f;
          },
          [&](const ProjE& n) {
            if (!f.is(Formula::Kind::And)) return f;
            return n.side == 1 ? f.left() : f.right();
          },
          [&](const CaseE& n) {
            if (!f.is(Formula::Kind::Or)) return f;
            auto ctx = ctx_at(root, p, ambient);
            if (!ctx) return f;
            try {
              return check(ctx->with_intu(n.var1, f.left()), erase_marked(n.branch1));
            } catch (const type_error&) {
              return f;
            }
          },
          [&](const BoxE& n) { return clas_annot(f, n.payload, root, p, ambient); },
      },
      e.node().v);
}

Term contract(const Term& t, RedexKind k, const Term& root, const Path& p,
              const TypingContext* ambient) {
  const AppT& a = *t.get<AppT>();
  switch (k) {
    case RedexKind::Beta: {
      const LamT& l = *a.fun.get<LamT>();
      return subst_intu(l.body, {{l.var, a.elim.get<ETermE>()->term}});
    }
    case RedexKind::Proj: {
      const PairT& pr = *a.fun.get<PairT>();
      return a.elim.get<ProjE>()->side == 1 ? pr.first : pr.second;
    }
    case RedexKind::CaseInj: {
      const InjT& in = *a.fun.get<InjT>();
      const CaseE& c = *a.elim.get<CaseE>();
      if (in.side == 1) return subst_intu(c.branch1, {{c.var1, in.body}});
      return subst_intu(c.branch2, {{c.var2, in.body}});
    }
    case RedexKind::Perm: {
      const AppT& f = *a.fun.get<AppT>();
      const CaseE& c = *f.elim.get<CaseE>();
      const Elim& eps = a.elim;
      VarSet efv = free_vars(eps);
      std::string x1 = c.var1, x2 = c.var2;
      Term b1 = c.branch1, b2 = c.branch2;
      if (efv.contains_intu(x1)) {
        std::set<std::string> avoid;
        all_names(t, avoid);
        std::string fresh = fresh_name(x1, avoid);
        b1 = rename_intu(b1, x1, fresh);
        x1 = fresh;
      }
      if (efv.contains_intu(x2)) {
        std::set<std::string> avoid;
        all_names(t, avoid);
        std::string fresh = fresh_name(x2, avoid);
        b2 = rename_intu(b2, x2, fresh);
        x2 = fresh;
      }
      return app(f.fun, case_of(x1, app(b1, eps), x2, app(b2, eps)));
    }
    case RedexKind::Clas: {
      const MuT& m = *a.fun.get<MuT>();
      const Elim& eps = a.elim;
      std::string v = m.var;
      Term body = m.body;
      if (free_vars(eps).contains_cls(v)) {
        std::set<std::string> avoid;
        all_names(t, avoid);
        std::string fresh = fresh_name(v, avoid);
        body = rename_cls(body, v, fresh);
        v = fresh;
      }
      Formula annot = clas_annot(m.annot, eps, root, p, ambient);
      return mu(v, annot, subst_class(body, v, eps));
    }
    case RedexKind::MarkBox:
      return app(a.fun.get<MarkT>()->payload, a.elim.get<BoxE>()->payload);
  }
  throw not_a_redex("unknown redex kind");
}

}  // namespace

std::vector<Redex> redexes(const Term& t) {
  std::vector<Redex> out;
  Path p;
  collect_term(t, p, out);
  return out;
}

Term reduce_at(const Term& t, const Path& p, const TypingContext* ctx) {
  TermOrElim sub = subterm_at(t, p);
  const Term* target = std::get_if<Term>(&sub);
  if (!target) throw not_a_redex(path_str(p) + ": eliminator position");
  auto k = match(*target);
  if (!k) throw not_a_redex(path_str(p) + ": no rule matches");
  Term reduct = contract(*target, *k, t, p, ctx);
  return replace_at(t, p, TermOrElim{reduct});
}

std::vector<Term> step_all(const Term& t, const TypingContext* ctx) {
  std::vector<Term> out;
  std::multimap<std::uint64_t, size_t> seen;
  for (const Redex& r : redexes(t)) {
    Term n = reduce_at(t, r.path, ctx);
    std::uint64_t h = alpha_hash(n);
    bool dup = false;
    auto [lo, hi] = seen.equal_range(h);
    for (auto it = lo; it != hi; ++it)
      if (alpha_eq(out[it->second], n)) {
        dup = true;
        break;
      }
    if (!dup) {
      seen.emplace(h, out.size());
      out.push_back(std::move(n));
    }
  }
  return out;
}

NormalizeResult normalize(const Term& t, Strategy s, int max_steps, std::uint64_t seed,
                          const TypingContext* ctx) {
  NormalizeResult res{t, {}, false};
  std::mt19937_64 rng(seed);
  for (int step = 0;; ++step) {
    std::vector<Redex> rs = redexes(res.result);
    if (rs.empty()) return res;
    if (step >= max_steps) {
      res.exhausted = true;
      return res;
    }
    size_t pick = 0;
    if (s == Strategy::Random) {
      pick = std::uniform_int_distribution<size_t>(0, rs.size() - 1)(rng);
    } else if (s == Strategy::Head) {
      if (auto hp = head_redex_path(res.result)) {
        for (size_t i = 0; i < rs.size(); ++i)
          if (rs[i].path == *hp) {
            pick = i;
            break;
          }
      }
    }
    res.trace.push_back({rs[pick].path, rs[pick].kind});
    res.result = reduce_at(res.result, rs[pick].path, ctx);
  }
}

std::vector<SrViolation> subject_reduction_probe(const TypingContext& ctx, const Term& t) {
  Formula want = check(ctx, t);
  std::vector<SrViolation> out;
  for (const Redex& r : redexes(t)) {
    Term n = reduce_at(t, r.path, &ctx);
    try {
      Formula got = check(ctx, n);
      if (got != want)
        out.push_back({r.path, n, "type changed to " + got.show() + " from " + want.show()});
    } catch (const type_error& e) {
      out.push_back({r.path, n, std::string("reduct fails to typecheck: ") + e.what()});
    }
  }
  return out;
}

}  // namespace ndcut
