#include "ndcut/generator.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ndcut/graph.hpp"

namespace ndcut {

const std::map<std::string, double>& default_weights() {
  static const std::map<std::string, double> w = {
      {"var", 4.0},  {"lam", 2.5},  {"pair", 1.5}, {"inj", 1.5},  {"mu", 1.0},
      {"name", 1.5}, {"app", 1.6},  {"proj", 0.9}, {"case", 1.0}, {"perm", 0.7},
  };
  return w;
}

namespace {

constexpr int kAttempts = 32;
constexpr long kCallCap = 20000;  // search nodes per attempt

class Gen {
 public:
  explicit Gen(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg.size_budget < 1) throw std::invalid_argument("size_budget must be at least 1");
    if (cfg.atom_pool.empty()) throw std::invalid_argument("atom_pool must be nonempty");
    weights_ = default_weights();
    for (const auto& [rule, w] : cfg.weights) {
      if (!weights_.count(rule)) throw std::invalid_argument("unknown rule weight: " + rule);
      if (w < 0) throw std::invalid_argument("negative rule weight: " + rule);
      weights_[rule] = w;
    }
    double total = 0;
    for (const auto& [rule, w] : weights_) total += w;
    if (total <= 0) throw std::invalid_argument("rule weights must not all be zero");
  }

  GenResult run() {
    seed_decls();
    Formula goal = cfg_.goal ? *cfg_.goal : rand_formula(2);
    Term t = must(ctx_, goal, cfg_.size_budget, "term");
    Formula got = check(ctx_, t);
    if (got != goal) throw std::logic_error("generator typing mismatch");
    return GenResult{decls_, ctx_, t, goal};
  }

  AppScenario run_scenario(EpsMode mode) {
    seed_decls();
    int bud = cfg_.size_budget;
    int mb = std::max(5, bud / 3);
    int nb = std::max(3, bud / 4);
    int eb = std::max(3, bud / 5);
    int vb = std::max(2, bud / 6);

    // Result chain: eps leaves type r; each trailing term peels one ->.
    int vlen = mode == EpsMode::Case ? 0 : irand(3);
    std::vector<Formula> vtypes;
    for (int i = 0; i < vlen; ++i) vtypes.push_back(arg_type(ctx_));
    Formula r = coin(0.7) ? rand_atom() : rand_formula(1);
    for (int i = vlen - 1; i >= 0; --i) r = Formula::imp(vtypes[i], r);

    std::optional<Formula> d;
    std::optional<Elim> eps;
    switch (mode) {
      case EpsMode::Term: {
        Formula b = arg_type(ctx_);
        d = Formula::imp(b, r);
        eps = eterm(must(ctx_, b, eb, "eliminator argument"));
        break;
      }
      case EpsMode::Proj: {
        int side = 1 + irand(2);
        Formula other = rand_formula(1);
        d = side == 1 ? Formula::conj(r, other) : Formula::conj(other, r);
        eps = proj(side);
        break;
      }
      case EpsMode::Case: {
        Formula p = rand_formula(irand(2)), q = rand_formula(irand(2));
        d = Formula::disj(p, q);
        std::string u1 = fresh("u"), u2 = fresh("u");
        Term w1 = must(ctx_.with_intu(u1, p), r, eb, "eliminator branch");
        Term w2 = must(ctx_.with_intu(u2, q), r, eb, "eliminator branch");
        eps = case_of(u1, w1, u2, w2);
        break;
      }
    }

    Formula sp = rand_formula(irand(2)), sq = rand_formula(irand(2));
    Term m = must(ctx_, Formula::disj(sp, sq), mb, "scrutinee");
    Term n1 = must(ctx_, *d, nb, "branch");
    Term n2 = must(ctx_, *d, nb, "branch");
    std::vector<Term> v;
    for (int i = 0; i < vlen; ++i) v.push_back(must(ctx_, vtypes[i], vb, "trailing term"));

    AppScenario sc{decls_, m, n1, n2, *eps, v, std::nullopt};
    Formula t1 = check(ctx_, app_s1(sc));
    Formula t2f = check(ctx_, app_s2(sc));
    if (t1 != t2f) throw std::logic_error("generator scenario typing mismatch");
    return sc;
  }

 private:
  int irand(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  double drand() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  bool coin(double p) { return drand() < p; }
  std::string fresh(const char* base) { return std::string(base) + std::to_string(++fresh_); }
  int cut(int total) { return 1 + irand(total - 1); }  // 1..total-1, pre: total >= 2

  std::tuple<int, int, int> split3(int total) {  // three positive parts, pre: total >= 3
    int a = 1 + irand(total - 2);
    int b = cut(total - a);
    return {a, b, total - a - b};
  }

  std::tuple<int, int, int, int> split4(int total) {  // pre: total >= 4
    int a = 1 + irand(total - 3);
    auto [b, c, d] = split3(total - a);
    return {a, b, c, d};
  }

  Formula rand_atom() {
    return Formula::atom(cfg_.atom_pool[irand(static_cast<int>(cfg_.atom_pool.size()))]);
  }

  Formula rand_formula(int depth) {
    double r = drand();
    if (depth <= 0) return r < 0.12 ? Formula::bottom() : rand_atom();
    if (r < 0.35) return rand_atom();
    if (r < 0.40) return Formula::bottom();
    if (r < 0.65) return Formula::imp(rand_formula(depth - 1), rand_formula(depth - 1));
    if (r < 0.82) return Formula::conj(rand_formula(depth - 1), rand_formula(depth - 1));
    return Formula::disj(rand_formula(depth - 1), rand_formula(depth - 1));
  }

  // One variable per atom plus one classical name keep every formula over the
  // pool inhabitable; a few extra declarations add variety.
  void seed_decls() {
    int vn = 0, kn = 1;
    for (const auto& a : cfg_.atom_pool)
      decls_.push_back({"v" + std::to_string(++vn), Formula::atom(a), false});
    decls_.push_back({"k1", Formula::atom(cfg_.atom_pool[0]), true});
    int extra = irand(3);
    for (int i = 0; i < extra; ++i) {
      bool cls = coin(0.3);
      std::string nm = (cls ? "k" : "v") + std::to_string(cls ? ++kn : ++vn);
      decls_.push_back({nm, rand_formula(1 + irand(2)), cls});
    }
    ctx_ = TypingContext::from_decls(decls_);
  }

  // Argument types are biased toward types already declared, so that argument
  // positions can be closed off by variables.
  Formula arg_type(const TypingContext& ctx) {
    std::vector<Formula> pool;
    for (const auto& d : ctx.to_decls())
      if (!d.classical) pool.push_back(d.type);
    if (!pool.empty() && coin(0.55)) return pool[irand(static_cast<int>(pool.size()))];
    return rand_formula(1);
  }

  std::string key_of(const TypingContext& ctx, const Formula& goal, int budget) {
    std::string k = goal.show(false);
    k += '#';
    k += std::to_string(budget);
    k += '#';
    for (const auto& d : ctx.to_decls()) {
      k += d.classical ? 'c' : 'i';
      k += d.type.show(false);
      k += ';';
    }
    return k;
  }

  Term must(const TypingContext& ctx, const Formula& goal, int budget, const char* what) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      failed_.clear();
      calls_ = 0;
      if (auto t = gen(ctx, goal, budget)) return *t;
    }
    throw gen_error(std::string("budget infeasible: no ") + what + " of type " + goal.show() +
                    " within size " + std::to_string(budget));
  }

  std::optional<Term> gen(const TypingContext& ctx, const Formula& goal, int budget) {
    if (budget < 1 || ++calls_ > kCallCap) return std::nullopt;
    std::string key = key_of(ctx, goal, budget);
    if (failed_.count(key)) return std::nullopt;

    std::vector<std::string> vars;
    std::vector<std::pair<std::string, Formula>> cls;
    for (const auto& d : ctx.to_decls()) {
      if (d.classical) cls.emplace_back(d.name, d.type);
      else if (d.type == goal) vars.push_back(d.name);
    }

    using K = Formula::Kind;
    std::vector<std::pair<const char*, double>> cand;
    auto add = [&](const char* r) {
      double w = weights_.at(r);
      if (w > 0) cand.emplace_back(r, w);
    };
    if (!vars.empty()) add("var");
    if (goal.is(K::Imp) && budget >= 2) add("lam");
    if (goal.is(K::And) && budget >= 3) add("pair");
    if (goal.is(K::Or) && budget >= 2) add("inj");
    if (budget >= 3) add("mu");
    if (goal.is(K::Bottom) && !cls.empty() && budget >= 2) add("name");
    if (budget >= 3) add("app");
    if (budget >= 3) add("proj");
    if (budget >= 5) add("case");
    if (budget >= 7) add("perm");

    // Weighted sampling without replacement: rules are tried until one fits.
    while (!cand.empty()) {
      double total = 0;
      for (const auto& [r, w] : cand) total += w;
      double pick = drand() * total;
      std::size_t i = 0;
      for (; i + 1 < cand.size(); ++i) {
        if (pick < cand[i].second) break;
        pick -= cand[i].second;
      }
      const char* rule = cand[i].first;
      cand.erase(cand.begin() + i);
      if (auto t = apply(rule, ctx, goal, budget, vars, cls)) return t;
    }
    failed_.insert(std::move(key));
    return std::nullopt;
  }

  std::optional<Term> apply(const std::string& rule, const TypingContext& ctx,
                            const Formula& goal, int budget,
                            const std::vector<std::string>& vars,
                            const std::vector<std::pair<std::string, Formula>>& cls) {
    if (rule == "var") return ivar(vars[irand(static_cast<int>(vars.size()))]);
    if (rule == "lam") {
      std::string x = fresh("x");
      auto body = gen(ctx.with_intu(x, goal.left()), goal.right(), budget - 1);
      if (!body) return std::nullopt;
      return lam(x, goal.left(), *body);
    }
    if (rule == "pair") {
      int bl = cut(budget - 1);
      auto l = gen(ctx, goal.left(), bl);
      if (!l) return std::nullopt;
      auto r = gen(ctx, goal.right(), budget - 1 - bl);
      if (!r) return std::nullopt;
      return pair(*l, *r);
    }
    if (rule == "inj") {
      int side = 1 + irand(2);
      auto body = gen(ctx, side == 1 ? goal.left() : goal.right(), budget - 1);
      if (!body) return std::nullopt;
      return inj(side, goal, *body);
    }
    if (rule == "mu") {
      std::string a = fresh("a");
      auto body = gen(ctx.with_cls(a, goal), Formula::bottom(), budget - 1);
      if (!body) return std::nullopt;
      return mu(a, goal, *body);
    }
    if (rule == "name") {
      const auto& [a, ty] = cls[irand(static_cast<int>(cls.size()))];
      auto arg = gen(ctx, ty, budget - 1);
      if (!arg) return std::nullopt;
      return name(a, *arg);
    }
    if (rule == "app") {
      for (int t = 0; t < 2; ++t) {
        Formula b = arg_type(ctx);
        int fb = cut(budget - 1);
        auto f = gen(ctx, Formula::imp(b, goal), fb);
        if (!f) continue;
        auto x = gen(ctx, b, budget - 1 - fb);
        if (!x) continue;
        return app(*f, *x);
      }
      return std::nullopt;
    }
    if (rule == "proj") {
      for (int t = 0; t < 2; ++t) {
        int side = 1 + irand(2);
        Formula other = rand_formula(1);
        Formula pt = side == 1 ? Formula::conj(goal, other) : Formula::conj(other, goal);
        auto f = gen(ctx, pt, budget - 2);
        if (!f) continue;
        return app(*f, proj(side));
      }
      return std::nullopt;
    }
    if (rule == "case") {
      for (int t = 0; t < 2; ++t) {
        Formula p = rand_formula(irand(2)), q = rand_formula(irand(2));
        auto [bs, b1, b2] = split3(budget - 2);
        auto scrut = gen(ctx, Formula::disj(p, q), bs);
        if (!scrut) continue;
        std::string y = fresh("w"), z = fresh("w");
        auto m1 = gen(ctx.with_intu(y, p), goal, b1);
        if (!m1) continue;
        auto m2 = gen(ctx.with_intu(z, q), goal, b2);
        if (!m2) continue;
        return app(*scrut, case_of(y, *m1, z, *m2));
      }
      return std::nullopt;
    }
    if (rule == "perm") {
      // A case in non-final position: (S [w.N1 | w.N2] eps).
      for (int t = 0; t < 2; ++t) {
        Formula p = rand_formula(irand(2)), q = rand_formula(irand(2));
        bool term_last = coin(0.6);
        int side = 1 + irand(2);
        Formula b = term_last ? arg_type(ctx) : rand_formula(1);
        Formula d = term_last ? Formula::imp(b, goal)
                              : (side == 1 ? Formula::conj(goal, b) : Formula::conj(b, goal));
        int bs, b1, b2, ba = 0;
        if (term_last) {
          std::tie(bs, b1, b2, ba) = split4(budget - 3);
        } else {
          std::tie(bs, b1, b2) = split3(budget - 4);
        }
        auto scrut = gen(ctx, Formula::disj(p, q), bs);
        if (!scrut) continue;
        std::string y = fresh("w"), z = fresh("w");
        auto m1 = gen(ctx.with_intu(y, p), d, b1);
        if (!m1) continue;
        auto m2 = gen(ctx.with_intu(z, q), d, b2);
        if (!m2) continue;
        Term head = app(*scrut, case_of(y, *m1, z, *m2));
        if (term_last) {
          auto arg = gen(ctx, b, ba);
          if (!arg) continue;
          return app(head, eterm(*arg));
        }
        return app(head, proj(side));
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  const GenConfig& cfg_;
  std::mt19937_64 rng_;
  std::map<std::string, double> weights_;
  std::unordered_set<std::string> failed_;
  std::vector<CtxDecl> decls_;
  TypingContext ctx_;
  int fresh_ = 0;
  long calls_ = 0;
};

}  // namespace

GenResult gen_typed(const GenConfig& cfg) { return Gen(cfg).run(); }

AppScenario gen_app_scenario(const GenConfig& cfg, EpsMode mode) {
  return Gen(cfg).run_scenario(mode);
}

}  // namespace ndcut
