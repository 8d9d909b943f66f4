#include "ndcut/subst.hpp"

#include "ndcut/visit.hpp"

namespace ndcut {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string cand = base + "'";
  while (avoid.count(cand)) cand += "'";
  return cand;
}

namespace {

// Shared state for one subst_intu run.
struct IntuSubst {
  const SubstIntu& sub;
  std::set<std::string> image_fv_intu, image_fv_cls;  // free vars across all images
  std::set<std::string> avoid;                        // pool for fresh names
  std::set<std::string> shadow;                       // binders hiding sub entries

  explicit IntuSubst(const Term& root, const SubstIntu& s) : sub(s) { init(s, &root, nullptr); }
  explicit IntuSubst(const Elim& root, const SubstIntu& s) : sub(s) { init(s, nullptr, &root); }

  void init(const SubstIntu& s, const Term* t, const Elim* e) {
    if (t) all_names(*t, avoid);
    if (e) all_names(*e, avoid);
    for (const auto& [v, img] : s) {
      avoid.insert(v);
      all_names(img, avoid);
      VarSet fv = free_vars(img);
      image_fv_intu.insert(fv.intu.begin(), fv.intu.end());
      image_fv_cls.insert(fv.cls.begin(), fv.cls.end());
    }
  }

  Term term(const Term& t);
  Elim elim(const Elim& e);

  // Returns the possibly-freshened binder name and the body prepared for
  // recursion.  cls selects the binder sort.
  std::pair<std::string, Term> enter_binder(const std::string& var, const Term& body, bool cls) {
    const auto& clash = cls ? image_fv_cls : image_fv_intu;
    if (clash.count(var)) {
      std::string var2 = fresh_name(var, avoid);
      avoid.insert(var2);
      return {var2, cls ? rename_cls(body, var, var2) : rename_intu(body, var, var2)};
    }
    return {var, body};
  }
};

Term IntuSubst::term(const Term& t) {
  return std::visit(
      overloaded{
          [&](const IVarT& n) -> Term {
            if (shadow.count(n.name)) return t;
            auto it = sub.find(n.name);
            return it == sub.end() ? t : it->second;
          },
          [&](const LamT& n) -> Term {
            auto [v, b] = enter_binder(n.var, n.body, false);
            bool shadowed = shadow.insert(v).second;
            Term b2 = term(b);
            if (shadowed) shadow.erase(v);
            if (v == n.var && b2.same_node(n.body)) return t;
            return lam(v, n.annot, b2);
          },
          [&](const AppT& n) -> Term {
            Term f2 = term(n.fun);
            Elim e2 = elim(n.elim);
            if (f2.same_node(n.fun) && e2.same_node(n.elim)) return t;
            return app(f2, e2);
          },
          [&](const PairT& n) -> Term {
            Term a2 = term(n.first), b2 = term(n.second);
            if (a2.same_node(n.first) && b2.same_node(n.second)) return t;
            return pair(a2, b2);
          },
          [&](const InjT& n) -> Term {
            Term b2 = term(n.body);
            return b2.same_node(n.body) ? t : inj(n.side, n.annot, b2);
          },
          [&](const MuT& n) -> Term {
            auto [v, b] = enter_binder(n.var, n.body, true);
            Term b2 = term(b);
            if (v == n.var && b2.same_node(n.body)) return t;
            return mu(v, n.annot, b2);
          },
          [&](const NameT& n) -> Term {
            Term a2 = term(n.arg);
            return a2.same_node(n.arg) ? t : name(n.var, a2);
          },
          [&](const MarkT&) -> Term { return t; },
      },
      t.node().v);
}

Elim IntuSubst::elim(const Elim& e) {
  return std::visit(
      overloaded{
          [&](const ETermE& n) -> Elim {
            Term t2 = term(n.term);
            return t2.same_node(n.term) ? e : eterm(t2);
          },
          [&](const ProjE&) -> Elim { return e; },
          [&](const CaseE& n) -> Elim {
            auto [v1, b1] = enter_binder(n.var1, n.branch1, false);
            bool sh1 = shadow.insert(v1).second;
            Term r1 = term(b1);
            if (sh1) shadow.erase(v1);
            auto [v2, b2] = enter_binder(n.var2, n.branch2, false);
            bool sh2 = shadow.insert(v2).second;
            Term r2 = term(b2);
            if (sh2) shadow.erase(v2);
            if (v1 == n.var1 && v2 == n.var2 && r1.same_node(n.branch1) && r2.same_node(n.branch2))
              return e;
            return case_of(v1, r1, v2, r2);
          },
          [&](const BoxE&) -> Elim { return e; },
      },
      e.node().v);
}

// Renaming of free occurrences; from/to are names of one sort.
struct Renamer {
  std::string from, to;
  bool cls;

  Term term(const Term& t) {
    return std::visit(
        overloaded{
            [&](const IVarT& n) -> Term {
              if (!cls && n.name == from) return ivar(to);
              return t;
            },
            [&](const LamT& n) -> Term {
              if (!cls && n.var == from) return t;  // shadowed
              Term b2 = term(n.body);
              return b2.same_node(n.body) ? t : lam(n.var, n.annot, b2);
            },
            [&](const AppT& n) -> Term {
              Term f2 = term(n.fun);
              Elim e2 = elim(n.elim);
              if (f2.same_node(n.fun) && e2.same_node(n.elim)) return t;
              return app(f2, e2);
            },
            [&](const PairT& n) -> Term {
              Term a2 = term(n.first), b2 = term(n.second);
              if (a2.same_node(n.first) && b2.same_node(n.second)) return t;
              return pair(a2, b2);
            },
            [&](const InjT& n) -> Term {
              Term b2 = term(n.body);
              return b2.same_node(n.body) ? t : inj(n.side, n.annot, b2);
            },
            [&](const MuT& n) -> Term {
              if (cls && n.var == from) return t;  // shadowed
              Term b2 = term(n.body);
              return b2.same_node(n.body) ? t : mu(n.var, n.annot, b2);
            },
            [&](const NameT& n) -> Term {
              Term a2 = term(n.arg);
              std::string v = (cls && n.var == from) ? to : n.var;
              if (v == n.var && a2.same_node(n.arg)) return t;
              return name(v, a2);
            },
            [&](const MarkT&) -> Term { return t; },
        },
        t.node().v);
  }

  Elim elim(const Elim& e) {
    return std::visit(
        overloaded{
            [&](const ETermE& n) -> Elim {
              Term t2 = term(n.term);
              return t2.same_node(n.term) ? e : eterm(t2);
            },
            [&](const ProjE&) -> Elim { return e; },
            [&](const CaseE& n) -> Elim {
              Term r1 = (!cls && n.var1 == from) ? n.branch1 : term(n.branch1);
              Term r2 = (!cls && n.var2 == from) ? n.branch2 : term(n.branch2);
              if (r1.same_node(n.branch1) && r2.same_node(n.branch2)) return e;
              return case_of(n.var1, r1, n.var2, r2);
            },
            [&](const BoxE&) -> Elim { return e; },
        },
        e.node().v);
  }
};

// Shared state for one subst_class run.
struct ClassSubst {
  const std::string& a;
  const Elim& eps;
  VarSet eps_fv;
  std::set<std::string> avoid;

  ClassSubst(const std::string& a_, const Elim& eps_, const Term* t, const Elim* e)
      : a(a_), eps(eps_) {
    eps_fv = free_vars(eps_);
    if (t) all_names(*t, avoid);
    if (e) all_names(*e, avoid);
    all_names(eps_, avoid);
  }

  std::pair<std::string, Term> enter_binder(const std::string& var, const Term& body, bool cls) {
    const auto& clash = cls ? eps_fv.cls : eps_fv.intu;
    if (clash.count(var)) {
      std::string var2 = fresh_name(var, avoid);
      avoid.insert(var2);
      return {var2, cls ? rename_cls(body, var, var2) : rename_intu(body, var, var2)};
    }
    return {var, body};
  }

  Term term(const Term& t) {
    return std::visit(
        overloaded{
            [&](const IVarT&) -> Term { return t; },
            [&](const LamT& n) -> Term {
              auto [v, b] = enter_binder(n.var, n.body, false);
              Term b2 = term(b);
              if (v == n.var && b2.same_node(n.body)) return t;
              return lam(v, n.annot, b2);
            },
            [&](const AppT& n) -> Term {
              Term f2 = term(n.fun);
              Elim e2 = elim(n.elim);
              if (f2.same_node(n.fun) && e2.same_node(n.elim)) return t;
              return app(f2, e2);
            },
            [&](const PairT& n) -> Term {
              Term a2 = term(n.first), b2 = term(n.second);
              if (a2.same_node(n.first) && b2.same_node(n.second)) return t;
              return pair(a2, b2);
            },
            [&](const InjT& n) -> Term {
              Term b2 = term(n.body);
              return b2.same_node(n.body) ? t : inj(n.side, n.annot, b2);
            },
            [&](const MuT& n) -> Term {
              if (n.var == a) return t;  // shadowed
              auto [v, b] = enter_binder(n.var, n.body, true);
              Term b2 = term(b);
              if (v == n.var && b2.same_node(n.body)) return t;
              return mu(v, n.annot, b2);
            },
            [&](const NameT& n) -> Term {
              Term a2 = term(n.arg);
              if (n.var == a) return name(n.var, app(a2, eps));
              return a2.same_node(n.arg) ? t : name(n.var, a2);
            },
            [&](const MarkT&) -> Term { return t; },
        },
        t.node().v);
  }

  Elim elim(const Elim& e) {
    return std::visit(
        overloaded{
            [&](const ETermE& n) -> Elim {
              Term t2 = term(n.term);
              return t2.same_node(n.term) ? e : eterm(t2);
            },
            [&](const ProjE&) -> Elim { return e; },
            [&](const CaseE& n) -> Elim {
              auto [v1, b1] = enter_binder(n.var1, n.branch1, false);
              Term r1 = term(b1);
              auto [v2, b2] = enter_binder(n.var2, n.branch2, false);
              Term r2 = term(b2);
              if (v1 == n.var1 && v2 == n.var2 && r1.same_node(n.branch1) &&
                  r2.same_node(n.branch2))
                return e;
              return case_of(v1, r1, v2, r2);
            },
            [&](const BoxE&) -> Elim { return e; },
        },
        e.node().v);
  }
};

}  // namespace

Term subst_intu(const Term& t, const SubstIntu& s) {
  if (s.empty()) return t;
  IntuSubst run(t, s);
  return run.term(t);
}

Elim subst_intu(const Elim& e, const SubstIntu& s) {
  if (s.empty()) return e;
  IntuSubst run(e, s);
  return run.elim(e);
}

Term subst_class(const Term& t, const std::string& a, const Elim& eps) {
  ClassSubst run(a, eps, &t, nullptr);
  return run.term(t);
}

Elim subst_class(const Elim& e, const std::string& a, const Elim& eps) {
  ClassSubst run(a, eps, nullptr, &e);
  return run.elim(e);
}

Term rename_intu(const Term& t, const std::string& from, const std::string& to) {
  Renamer r{from, to, false};
  return r.term(t);
}

Term rename_cls(const Term& t, const std::string& from, const std::string& to) {
  Renamer r{from, to, true};
  return r.term(t);
}

}  // namespace ndcut
