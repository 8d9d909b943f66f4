#include "ndcut/head.hpp"

#include <utility>

#include "ndcut/reduction.hpp"
#include "ndcut/visit.hpp"

namespace ndcut {

namespace {

std::shared_ptr<const ContextC::Node> mknode(std::variant<HoleC, LamC, InjC, PairC, MuC> v) {
  auto n = std::make_shared<ContextC::Node>();
  n->v = std::move(v);
  return n;
}

}  // namespace

ContextC ContextC::hole(int index) { return ContextC(mknode(HoleC{index})); }
ContextC ContextC::lam(std::string var, Formula annot, ContextC body) {
  return ContextC(mknode(LamC{std::move(var), std::move(annot), std::move(body)}));
}
ContextC ContextC::inj(int side, Formula annot, ContextC body) {
  return ContextC(mknode(InjC{side, std::move(annot), std::move(body)}));
}
ContextC ContextC::pair(ContextC first, ContextC second) {
  return ContextC(mknode(PairC{std::move(first), std::move(second)}));
}
ContextC ContextC::mu(std::string var, Formula annot, ContextC body) {
  return ContextC(mknode(MuC{std::move(var), std::move(annot), std::move(body)}));
}

int ContextC::holes() const {
  return std::visit(
      overloaded{
          [](const HoleC&) { return 1; },
          [](const LamC& c) { return c.body.holes(); },
          [](const InjC& c) { return c.body.holes(); },
          [](const PairC& c) { return c.first.holes() + c.second.holes(); },
          [](const MuC& c) { return c.body.holes(); },
      },
      node_->v);
}

bool ctx_eq(const ContextC& a, const ContextC& b) {
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      overloaded{
          [&](const HoleC& x) { return x.index == b.get<HoleC>()->index; },
          [&](const LamC& x) {
            const LamC* y = b.get<LamC>();
            return x.var == y->var && x.annot == y->annot && ctx_eq(x.body, y->body);
          },
          [&](const InjC& x) {
            const InjC* y = b.get<InjC>();
            return x.side == y->side && x.annot == y->annot && ctx_eq(x.body, y->body);
          },
          [&](const PairC& x) {
            const PairC* y = b.get<PairC>();
            return ctx_eq(x.first, y->first) && ctx_eq(x.second, y->second);
          },
          [&](const MuC& x) {
            const MuC* y = b.get<MuC>();
            return x.var == y->var && x.annot == y->annot && ctx_eq(x.body, y->body);
          },
      },
      a.node().v);
}

bool is_simple(const Term& m) {
  return m.is<IVarT>() || m.is<AppT>() || m.is<NameT>();
}

namespace {

ContextC deco(const Term& t, std::vector<Term>& out) {
  if (is_simple(t)) {
    out.push_back(t);
    return ContextC::hole(static_cast<int>(out.size()));
  }
  return std::visit(
      overloaded{
          [&](const LamT& n) { return ContextC::lam(n.var, n.annot, deco(n.body, out)); },
          [&](const InjT& n) { return ContextC::inj(n.side, n.annot, deco(n.body, out)); },
          [&](const PairT& n) {
            ContextC a = deco(n.first, out);
            return ContextC::pair(std::move(a), deco(n.second, out));
          },
          [&](const MuT& n) { return ContextC::mu(n.var, n.annot, deco(n.body, out)); },
          [&](const auto&) -> ContextC {
            throw std::invalid_argument("decompose: marked term");
          },
      },
      t.node().v);
}

Term fill_rec(const ContextC& c, const std::vector<Term>& ms) {
  return std::visit(
      overloaded{
          [&](const HoleC& x) -> Term {
            if (x.index < 1 || x.index > static_cast<int>(ms.size()))
              throw std::invalid_argument("fill: hole index out of range");
            return ms[static_cast<size_t>(x.index) - 1];
          },
          [&](const LamC& x) { return lam(x.var, x.annot, fill_rec(x.body, ms)); },
          [&](const InjC& x) { return inj(x.side, x.annot, fill_rec(x.body, ms)); },
          [&](const PairC& x) {
            Term a = fill_rec(x.first, ms);
            return pair(std::move(a), fill_rec(x.second, ms));
          },
          [&](const MuC& x) { return mu(x.var, x.annot, fill_rec(x.body, ms)); },
      },
      c.node().v);
}

}  // namespace

std::pair<ContextC, std::vector<Term>> decompose(const Term& m) {
  std::vector<Term> ms;
  ContextC c = deco(m, ms);
  return {std::move(c), std::move(ms)};
}

Term fill(const ContextC& c, const std::vector<Term>& ms) {
  if (c.holes() != static_cast<int>(ms.size()))
    throw std::invalid_argument("fill: arity mismatch");
  return fill_rec(c, ms);
}

bool is_nice(const std::vector<Elim>& es) {
  for (size_t i = 0; i + 1 < es.size(); ++i)
    if (es[i].is<CaseE>()) return false;
  return true;
}

namespace {

// ETerm arguments are reported as bare terms, other eliminators as elims.
TermOrElim arg_of(const Elim& e) {
  if (const ETermE* t = e.get<ETermE>()) return TermOrElim{t->term};
  return TermOrElim{e};
}

}  // namespace

HeadRow classify(const Term& m, const TypingContext* ctx) {
  if (const IVarT* v = m.get<IVarT>())
    return HeadRow{0, v->name, {}, std::nullopt, {}};
  if (const NameT* n = m.get<NameT>())
    return HeadRow{0, n->var, {TermOrElim{n->arg}}, std::nullopt, {}};
  if (!m.is<AppT>()) throw not_simple("classify: term is not simple");

  auto [h, es] = unspine(m);
  const int n = static_cast<int>(es.size());

  // A case eliminator with a nonempty suffix is a permutative pivot; the
  // last one wins and forces row 5 regardless of the head form.
  int pivot = -1;
  for (int i = 0; i + 1 < n; ++i)
    if (es[static_cast<size_t>(i)].is<CaseE>()) pivot = i;
  if (pivot >= 0) {
    Path hp(static_cast<size_t>(n - 2 - pivot), 0);
    Term head = std::get<Term>(subterm_at(m, hp));
    Term red = reduce_at(m, hp, ctx);
    return HeadRow{5, std::move(head), {}, std::move(red), std::move(hp)};
  }

  // Nice spine: dispatch on the head form.  Inner applications and namings
  // were flattened away by unspine, so h is a value form here.
  Path inner(static_cast<size_t>(n - 1), 0);
  if (h.is<IVarT>()) {
    std::vector<TermOrElim> args;
    for (const Elim& e : es) args.push_back(arg_of(e));
    return HeadRow{0, h.get<IVarT>()->name, std::move(args), std::nullopt, {}};
  }
  if (const LamT* lt = h.get<LamT>()) {
    if (const ETermE* o = es[0].get<ETermE>()) {
      Term head = std::get<Term>(subterm_at(m, inner));
      Term red = reduce_at(m, inner, ctx);
      return HeadRow{1, std::move(head), {TermOrElim{o->term}}, std::move(red), std::move(inner)};
    }
    (void)lt;
    throw not_simple("classify: lambda head with a non-term eliminator");
  }
  if (const PairT* pt = h.get<PairT>()) {
    if (es[0].is<ProjE>()) {
      Term head = std::get<Term>(subterm_at(m, inner));
      Term red = reduce_at(m, inner, ctx);
      return HeadRow{2, std::move(head), {TermOrElim{pt->first}, TermOrElim{pt->second}},
                     std::move(red), std::move(inner)};
    }
    throw not_simple("classify: pair head with a non-projection eliminator");
  }
  if (const InjT* it = h.get<InjT>()) {
    // A case after an injection is only row 3 when nothing follows; with a
    // suffix the pivot rule above already took over.
    if (const CaseE* c = es[0].get<CaseE>(); c && n == 1) {
      Term red = reduce_at(m, {}, ctx);
      return HeadRow{3, m,
                     {TermOrElim{it->body}, TermOrElim{c->branch1}, TermOrElim{c->branch2}},
                     std::move(red), {}};
    }
    throw not_simple("classify: injection head without a direct case");
  }
  if (h.is<MuT>()) {
    Term head = std::get<Term>(subterm_at(m, inner));
    Term red = reduce_at(m, inner, ctx);
    return HeadRow{4, std::move(head), {arg_of(es[0])}, std::move(red), std::move(inner)};
  }
  throw not_simple("classify: unclassifiable head form");
}

namespace {

std::optional<Path> hrp(const Term& t);

std::optional<Path> hrp_elim(const Elim& e, Path at) {
  if (const ETermE* x = e.get<ETermE>()) {
    at.push_back(0);
    if (auto p = hrp(x->term)) {
      at.insert(at.end(), p->begin(), p->end());
      return at;
    }
    return std::nullopt;
  }
  if (const CaseE* c = e.get<CaseE>()) {
    for (int i = 0; i < 2; ++i) {
      Path b = at;
      b.push_back(i);
      if (auto p = hrp(i == 0 ? c->branch1 : c->branch2)) {
        b.insert(b.end(), p->begin(), p->end());
        return b;
      }
    }
    return std::nullopt;
  }
  if (const BoxE* b = e.get<BoxE>()) {
    at.push_back(0);
    return hrp_elim(b->payload, std::move(at));
  }
  return std::nullopt;  // projection
}

std::optional<Path> hrp(const Term& t) {
  if (t.is<IVarT>()) return std::nullopt;
  if (is_simple(t)) {
    if (const NameT* nm = t.get<NameT>()) {
      if (auto p = hrp(nm->arg)) {
        Path q{0};
        q.insert(q.end(), p->begin(), p->end());
        return q;
      }
      return std::nullopt;
    }
    try {
      HeadRow r = classify(t);
      if (r.row >= 1) return r.head_path;
    } catch (const not_simple&) {
      return std::nullopt;  // raw shape outside the table; caller falls back
    }
    // Row 0: search the spine arguments left to right.
    auto [h, es] = unspine(t);
    const int n = static_cast<int>(es.size());
    for (int i = 0; i < n; ++i) {
      Path at(static_cast<size_t>(n - 1 - i), 0);
      at.push_back(1);
      if (auto p = hrp_elim(es[static_cast<size_t>(i)], std::move(at))) return p;
    }
    return std::nullopt;
  }
  auto under = [](int step, std::optional<Path> p) -> std::optional<Path> {
    if (!p) return std::nullopt;
    Path q{step};
    q.insert(q.end(), p->begin(), p->end());
    return q;
  };
  return std::visit(
      overloaded{
          [&](const LamT& n) { return under(0, hrp(n.body)); },
          [&](const InjT& n) { return under(0, hrp(n.body)); },
          [&](const MuT& n) { return under(0, hrp(n.body)); },
          [&](const MarkT& n) { return under(0, hrp(n.payload)); },
          [&](const PairT& n) {
            auto p = under(0, hrp(n.first));
            return p ? p : under(1, hrp(n.second));
          },
          [&](const auto&) -> std::optional<Path> { return std::nullopt; },
      },
      t.node().v);
}

}  // namespace

std::optional<Path> head_redex_path(const Term& t) { return hrp(t); }

}  // namespace ndcut
