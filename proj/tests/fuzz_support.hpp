// Deterministic random generators shared by the property suites: raw terms
// (for serialization round-trips), builder programs, and surface ASTs (for
// differential testing against the reference interpreter). Every generated
// program is closed, type-sane (variables hold integers) and terminating by
// construction: loops only count a dedicated variable up to a small bound.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cpsc/frontend.hpp"
#include "cpsc/lang.hpp"

namespace fuzz {

struct Rng {
  std::mt19937 g;
  explicit Rng(unsigned seed) : g(seed) {}
  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
  bool chance(int pct) { return range(1, 100) <= pct; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }
};

// --------------------------------------------------------------------------
// Raw lambda terms, well-scoped under `binders` enclosing binders.

inline cpsc::Term genTerm(Rng& rng, int depth, int binders) {
  static const std::vector<std::string> freePool = {"x",  "y",  "f", "g'",   "_a", "k",
                                                    "r1", "42", "0", "-7", "true"};
  static const std::vector<std::string> hintPool = {"",     "x",    "k", "r",
                                                    "loop", "fix", "007"};
  if (depth <= 0 || rng.chance(35)) {
    if (binders > 0 && rng.chance(50)) return cpsc::Term::var(rng.range(0, binders - 1));
    if (rng.chance(15)) return cpsc::Term::freeRef(cpsc::Val::inter(rng.range(0, 20)));
    return cpsc::Term::freeRef(cpsc::Val::freeName(rng.pick(freePool)));
  }
  switch (rng.range(0, 3)) {
    case 0:
      return cpsc::Term::app(genTerm(rng, depth - 1, binders), genTerm(rng, depth - 1, binders));
    case 1:
      return cpsc::Term::abs(rng.pick(hintPool), genTerm(rng, depth - 1, binders + 1));
    case 2:
      return cpsc::Term::fix(rng.pick(hintPool), genTerm(rng, depth - 1, binders + 1));
    default:
      return cpsc::Term::app(genTerm(rng, depth - 1, binders), genTerm(rng, depth - 1, binders));
  }
}

// --------------------------------------------------------------------------
// Builder programs. `scope` holds names that are assignable where the
// expression is generated; every variable holds an integer.

struct BuilderGen {
  Rng rng;
  int nextName = 0;
  explicit BuilderGen(unsigned seed) : rng(seed) {}

  std::string fresh() { return "v" + std::to_string(nextName++); }

  cpsc::Expr intExpr(const std::vector<std::string>& scope, int depth) {
    using namespace cpsc;
    if (depth <= 0 || rng.chance(30)) {
      if (!scope.empty() && rng.chance(55)) return ref(rng.pick(scope));
      return lit(rng.range(0, 9));
    }
    switch (rng.range(0, 5)) {
      case 0:
        return add(intExpr(scope, depth - 1), intExpr(scope, depth - 1));
      case 1:
        return sub(intExpr(scope, depth - 1), intExpr(scope, depth - 1));
      case 2:
        return cond(boolExpr(scope, depth - 1), intExpr(scope, depth - 1),
                    intExpr(scope, depth - 1));
      case 3: {
        std::string x = fresh();
        std::vector<std::string> inner = scope;
        inner.push_back(x);
        return val(x, intExpr(scope, depth - 1), intExpr(inner, depth - 1));
      }
      case 4: {
        // call a one-argument function; the body may read only its parameter
        std::string p = fresh();
        return applyFn(defAbs(p, intExpr({p}, depth - 1)), intExpr(scope, depth - 1));
      }
      default: {
        std::string x = fresh();
        std::vector<std::string> inner = scope;
        inner.push_back(x);
        return val(x, lit(rng.range(0, 5)),
                   block({stmt(inner, depth - 1)}, intExpr(inner, depth - 1)));
      }
    }
  }

  cpsc::Expr boolExpr(const std::vector<std::string>& scope, int depth) {
    using namespace cpsc;
    if (depth <= 0 || rng.chance(30)) return litBool(rng.chance(50));
    switch (rng.range(0, 2)) {
      case 0:
        return eq(intExpr(scope, depth - 1), intExpr(scope, depth - 1));
      case 1:
        return gq(intExpr(scope, depth - 1), intExpr(scope, depth - 1));
      default:
        return not_(boolExpr(scope, depth - 1));
    }
  }

  cpsc::Stmt stmt(const std::vector<std::string>& scope, int depth) {
    using namespace cpsc;
    if (scope.empty()) return seq({});
    if (depth <= 0 || rng.chance(40)) return assign(rng.pick(scope), intExpr(scope, depth));
    switch (rng.range(0, 2)) {
      case 0:
        return cond_(boolExpr(scope, depth - 1), stmt(scope, depth - 1),
                     stmt(scope, depth - 1));
      case 1: {
        // bounded counting loop: while (K > x) { x = x + 1; other }
        std::string x = rng.pick(scope);
        std::vector<std::string> rest;
        for (const auto& n : scope)
          if (n != x) rest.push_back(n);
        std::vector<Stmt> body = {assign(x, add(ref(x), lit(1)))};
        if (!rest.empty() && rng.chance(50)) body.push_back(stmt(rest, depth - 1));
        return while_(gq(lit(rng.range(1, 6)), ref(x)), seq(body));
      }
      default:
        return seq({stmt(scope, depth - 1), stmt(scope, depth - 1)});
    }
  }

  cpsc::Expr program(int depth = 3) {
    using namespace cpsc;
    std::string x = fresh();
    std::vector<std::string> scope = {x};
    std::vector<Stmt> stmts;
    int n = rng.range(0, 2);
    for (int i = 0; i < n; ++i) stmts.push_back(stmt(scope, depth - 1));
    return val(x, lit(rng.range(0, 5)), block(stmts, intExpr(scope, depth)));
  }
};

// --------------------------------------------------------------------------
// Surface ASTs, for differential testing. Mirrors the builder generator but
// is an independent construction over the frontend's syntax tree.

struct AstGen {
  Rng rng;
  int nextName = 0;
  explicit AstGen(unsigned seed) : rng(seed) {}

  using P = cpsc::frontend::AstPtr;

  struct Scope {
    std::vector<std::string> ints;         // readable integer variables
    std::vector<std::string> assignables;  // subset assignable here
    std::vector<std::string> fns;          // one-argument int functions
  };

  std::string fresh() { return "n" + std::to_string(nextName++); }

  static P mk(cpsc::frontend::AstNode n) {
    return std::make_shared<cpsc::frontend::Ast>(
        cpsc::frontend::Ast{cpsc::frontend::SourcePos{1, 1}, std::move(n)});
  }

  P intExpr(const Scope& sc, int depth) {
    using namespace cpsc::frontend;
    if (depth <= 0 || rng.chance(30)) {
      if (!sc.ints.empty() && rng.chance(55)) return mk(VarRef{rng.pick(sc.ints)});
      return mk(IntLit{rng.range(0, 9)});
    }
    switch (rng.range(0, 4)) {
      case 0:
        return mk(BinOp{BinOpKind::Add, intExpr(sc, depth - 1), intExpr(sc, depth - 1)});
      case 1:
        return mk(BinOp{BinOpKind::Sub, intExpr(sc, depth - 1), intExpr(sc, depth - 1)});
      case 2:
        return mk(If{boolExpr(sc, depth - 1), intExpr(sc, depth - 1), intExpr(sc, depth - 1)});
      case 3:
        if (!sc.fns.empty())
          return mk(Call{mk(VarRef{rng.pick(sc.fns)}), intExpr(sc, depth - 1)});
        [[fallthrough]];
      default:
        return block(sc, depth - 1);
    }
  }

  P boolExpr(const Scope& sc, int depth) {
    using namespace cpsc::frontend;
    if (depth <= 0 || rng.chance(30)) return mk(BoolLit{rng.chance(50)});
    switch (rng.range(0, 2)) {
      case 0:
        return mk(BinOp{BinOpKind::Eq, intExpr(sc, depth - 1), intExpr(sc, depth - 1)});
      case 1:
        return mk(BinOp{BinOpKind::Gt, intExpr(sc, depth - 1), intExpr(sc, depth - 1)});
      default:
        return mk(NotOp{boolExpr(sc, depth - 1)});
    }
  }

  P stmt(const Scope& sc, int depth) {
    using namespace cpsc::frontend;
    if (sc.assignables.empty() || depth <= 0 || rng.chance(40)) {
      if (!sc.assignables.empty())
        return mk(Assign{rng.pick(sc.assignables), intExpr(sc, depth)});
      return mk(Assert{mk(BoolLit{true})});
    }
    switch (rng.range(0, 2)) {
      case 0: {
        P unit = mk(UnitLit{});
        return mk(IfStmt{boolExpr(sc, depth - 1),
                         mk(Seq{{stmt(sc, depth - 1)}, unit}),
                         mk(Seq{{stmt(sc, depth - 1)}, mk(UnitLit{})})});
      }
      case 1: {
        std::string x = rng.pick(sc.assignables);
        Scope rest = sc;
        rest.assignables.clear();
        for (const auto& n : sc.assignables)
          if (n != x) rest.assignables.push_back(n);
        std::vector<P> body = {
            mk(Assign{x, mk(BinOp{BinOpKind::Add, mk(VarRef{x}), mk(IntLit{1})})})};
        if (!rest.assignables.empty() && rng.chance(50))
          body.push_back(stmt(rest, depth - 1));
        P cond = mk(BinOp{BinOpKind::Gt, mk(IntLit{rng.range(1, 6)}), mk(VarRef{x})});
        return mk(While{cond, mk(Seq{body, mk(UnitLit{})})});
      }
      default:
        return mk(Assert{boolExpr(sc, depth - 1)});
    }
  }

  // A block expression: optional val/def bindings and statements, then an
  // integer result.
  P block(const Scope& sc, int depth) {
    using namespace cpsc::frontend;
    if (depth <= 0) return intExpr(sc, 0);
    int form = rng.range(0, 3);
    if (form == 0) {
      std::string x = fresh();
      Scope inner = sc;
      inner.ints.push_back(x);
      inner.assignables.push_back(x);
      return mk(ValDecl{x, intExpr(sc, depth - 1), block(inner, depth - 1)});
    }
    if (form == 1) {
      std::string f = fresh();
      std::string p = fresh();
      Scope bodySc;
      bodySc.ints = sc.ints;  // reads of outer names are legal (value capture)
      bodySc.ints.push_back(p);
      bodySc.assignables = {p};
      bodySc.fns = sc.fns;
      Scope inner = sc;
      inner.fns.push_back(f);
      return mk(DefDecl{f, p, intExpr(bodySc, depth - 1), block(inner, depth - 1)});
    }
    std::vector<P> stmts;
    int n = rng.range(1, 2);
    for (int i = 0; i < n; ++i) stmts.push_back(stmt(sc, depth - 1));
    return mk(Seq{stmts, intExpr(sc, depth - 1)});
  }

  P program(int depth = 3) {
    std::string x = fresh();
    Scope sc;
    sc.ints = {x};
    sc.assignables = {x};
    return mk(cpsc::frontend::ValDecl{x, mk(cpsc::frontend::IntLit{rng.range(0, 5)}),
                                      block(sc, depth)});
  }
};

}  // namespace fuzz
