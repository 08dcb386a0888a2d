#include "cpsc/normalize.hpp"

#include <utility>

#include "cpsc/lang.hpp"

namespace cpsc {

namespace {

// Does the variable bound `level` binders above occur in t?
bool occurs(const Term& t, int level) {
  switch (t.tag()) {
    case Term::Tag::Var:
      return t.asVar().depth == level;
    case Term::Tag::Free:
      return false;
    case Term::Tag::App:
      return occurs(t.asApp().fun, level) || occurs(t.asApp().arg, level);
    case Term::Tag::Abs:
      return occurs(t.asAbs().body, level + 1);
    case Term::Tag::Fix:
      return occurs(t.asFix().body, level + 1);
    case Term::Tag::Exit: {
      for (const auto& s : t.asExit().thrown)
        if (occurs(s, level)) return true;
      for (const auto& c : t.asExit().captures)
        if (c.depth == level) return true;
      return false;
    }
  }
  return false;
}

bool isBetaRedex(const Term& t) {
  return t.tag() == Term::Tag::App && t.asApp().fun.tag() == Term::Tag::Abs;
}

bool isEtaRedex(const Term& t) {
  if (t.tag() != Term::Tag::Abs) return false;
  const Term& b = t.asAbs().body;
  if (b.tag() != Term::Tag::App) return false;
  const auto& a = b.asApp();
  return a.arg.tag() == Term::Tag::Var && a.arg.asVar().depth == 0 && !occurs(a.fun, 0);
}

// One leftmost-outermost contraction; nullopt if t is in normal form.
std::optional<Term> contractOne(const Term& t) {
  if (isBetaRedex(t)) return instantiate(t.asApp().arg, t.asApp().fun.asAbs().body);
  if (isEtaRedex(t)) return shiftTerm(t.asAbs().body.asApp().fun, -1, 1);
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return std::nullopt;
    case Term::Tag::App: {
      const auto& a = t.asApp();
      if (auto f = contractOne(a.fun)) return Term::app(*f, a.arg);
      if (auto x = contractOne(a.arg)) return Term::app(a.fun, *x);
      return std::nullopt;
    }
    case Term::Tag::Abs: {
      if (auto b = contractOne(t.asAbs().body)) return Term::abs(t.asAbs().hint, *b);
      return std::nullopt;
    }
    case Term::Tag::Fix: {
      if (auto b = contractOne(t.asFix().body)) return Term::fix(t.asFix().hint, *b);
      return std::nullopt;
    }
    case Term::Tag::Exit:
      throw HoleInTermError();
  }
  return std::nullopt;
}

}  // namespace

NormalizeResult betaEtaNormalize(const Term& t, StepBudget budget) {
  if (budget.maxSteps == 0) throw std::invalid_argument("step budget must be positive");
  if (hasExitHoles(t)) throw HoleInTermError();
  Term cur = t;
  std::uint64_t used = 0;
  while (true) {
    auto next = contractOne(cur);
    if (!next) return NormalizeResult{cur, used};
    if (++used > budget.maxSteps) return NormalizeResult{std::nullopt, used};
    cur = *next;
  }
}

int countBetaRedexes(const Term& t) {
  int n = isBetaRedex(t) ? 1 : 0;
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return n;
    case Term::Tag::App:
      return n + countBetaRedexes(t.asApp().fun) + countBetaRedexes(t.asApp().arg);
    case Term::Tag::Abs:
      return n + countBetaRedexes(t.asAbs().body);
    case Term::Tag::Fix:
      return n + countBetaRedexes(t.asFix().body);
    case Term::Tag::Exit: {
      for (const auto& s : t.asExit().thrown) n += countBetaRedexes(s);
      return n;
    }
  }
  return n;
}

int countEtaRedexes(const Term& t) {
  int n = isEtaRedex(t) ? 1 : 0;
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return n;
    case Term::Tag::App:
      return n + countEtaRedexes(t.asApp().fun) + countEtaRedexes(t.asApp().arg);
    case Term::Tag::Abs:
      return n + countEtaRedexes(t.asAbs().body);
    case Term::Tag::Fix:
      return n + countEtaRedexes(t.asFix().body);
    case Term::Tag::Exit: {
      for (const auto& s : t.asExit().thrown) n += countEtaRedexes(s);
      return n;
    }
  }
  return n;
}

int countFixNodes(const Term& t) {
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return 0;
    case Term::Tag::App:
      return countFixNodes(t.asApp().fun) + countFixNodes(t.asApp().arg);
    case Term::Tag::Abs:
      return countFixNodes(t.asAbs().body);
    case Term::Tag::Fix:
      return 1 + countFixNodes(t.asFix().body);
    case Term::Tag::Exit: {
      int n = 0;
      for (const auto& s : t.asExit().thrown) n += countFixNodes(s);
      return n;
    }
  }
  return 0;
}

std::string stuckReasonName(StuckReason r) {
  switch (r) {
    case StuckReason::UnknownFree:
      return "UnknownFree";
    case StuckReason::ArityMismatch:
      return "ArityMismatch";
    case StuckReason::TypeMismatch:
      return "TypeMismatch";
    case StuckReason::AssertionFailed:
      return "AssertionFailed";
    case StuckReason::MalformedLiteral:
      return "MalformedLiteral";
  }
  return "?";
}

std::string showValue(const ValuePtr& v) {
  struct Show {
    std::string operator()(const IntV& i) const { return std::to_string(i.v); }
    std::string operator()(const BoolV& b) const { return b.v ? "true" : "false"; }
    std::string operator()(const UnitV&) const { return "()"; }
    std::string operator()(const ClosureV&) const { return "<fun>"; }
    std::string operator()(const PrimV& p) const { return "<builtin " + p.name + ">"; }
    std::string operator()(const NeutralV& n) const {
      std::string s = n.head;
      for (const auto& a : n.spine) s += " " + showValue(a);
      return n.spine.empty() ? s : "(" + s + ")";
    }
  };
  return std::visit(Show{}, v->repr());
}

namespace {

ValuePtr mk(Value::Repr r) { return std::make_shared<Value>(std::move(r)); }

Env envCons(ValuePtr v, Env next) {
  return std::make_shared<EnvNode>(EnvNode{std::move(v), std::move(next)});
}

const ValuePtr* envLookup(const Env& env, int depth) {
  const EnvNode* n = env.get();
  for (int i = 0; i < depth && n; ++i) n = n->next.get();
  return n ? &n->value : nullptr;
}

struct KArg {
  Term arg;
  Env env;
};
struct KCallFun {
  ValuePtr fun;
};
using Kont = std::variant<KArg, KCallFun>;

struct Machine {
  std::uint64_t stepsLeft;
  std::uint64_t used = 0;
  std::vector<Kont> konts;
  // Either a term to evaluate or a computed value.
  Term ctrl;
  Env env;
  ValuePtr done;  // non-null = value state
  std::optional<EvalResult> result;

  explicit Machine(Term t, std::uint64_t budget)
      : stepsLeft(budget), ctrl(std::move(t)), env(nullptr) {}

  void finish(EvalResult r) {
    r.stepsUsed = used;
    result = std::move(r);
  }
  void stuck(StuckReason why, std::string detail) {
    finish({EvalResult::Status::Stuck, nullptr, why, std::move(detail), 0});
  }
  bool charge() {
    if (stepsLeft == 0) {
      finish({EvalResult::Status::BudgetExceeded, nullptr, std::nullopt, "", 0});
      return false;
    }
    --stepsLeft;
    ++used;
    return true;
  }

  void evalFree(const Val& v) {
    if (v.isInter()) {
      stuck(StuckReason::UnknownFree, "unbound intermediate %" + std::to_string(v.index()));
      return;
    }
    const std::string& name = v.name();
    switch (classifyLiteralName(name)) {
      case LiteralKind::Int:
        done = mk(IntV{literalIntValue(name)});
        return;
      case LiteralKind::Bool:
        done = mk(BoolV{name == "true"});
        return;
      case LiteralKind::Unit:
        done = mk(UnitV{});
        return;
      case LiteralKind::Malformed:
        stuck(StuckReason::MalformedLiteral, name);
        return;
      case LiteralKind::None:
        break;
    }
    if (const BuiltinSig* sig = lookupBuiltin(name)) {
      done = mk(PrimV{sig->name, sig->valueArity, sig->special, {}});
      return;
    }
    done = mk(NeutralV{name, {}});
  }

  void fireDelta(const PrimV& p, std::vector<ValuePtr> args) {
    auto intArg = [&](size_t i) -> std::optional<std::int64_t> {
      if (const IntV* iv = std::get_if<IntV>(&args[i]->repr())) return iv->v;
      return std::nullopt;
    };
    auto boolArg = [&](size_t i) -> std::optional<bool> {
      if (const BoolV* bv = std::get_if<BoolV>(&args[i]->repr())) return bv->v;
      return std::nullopt;
    };
    if (!charge()) return;
    if (p.name == "if") {
      auto b = boolArg(0);
      if (!b) {
        stuck(StuckReason::TypeMismatch, "if: condition is not a boolean");
        return;
      }
      apply(*b ? args[1] : args[2], mk(UnitV{}));
      return;
    }
    if (p.name == "not") {
      auto b = boolArg(0);
      if (!b) {
        stuck(StuckReason::TypeMismatch, "not: argument is not a boolean");
        return;
      }
      apply(args[1], mk(BoolV{!*b}));
      return;
    }
    if (p.name == "assert") {
      auto b = boolArg(0);
      if (!b) {
        stuck(StuckReason::TypeMismatch, "assert: argument is not a boolean");
        return;
      }
      if (!*b) {
        stuck(StuckReason::AssertionFailed, "assertion failed");
        return;
      }
      apply(args[1], mk(UnitV{}));
      return;
    }
    auto x = intArg(0), y = intArg(1);
    if (!x || !y) {
      stuck(StuckReason::TypeMismatch, p.name + ": arguments are not integers");
      return;
    }
    ValuePtr r;
    if (p.name == "eq")
      r = mk(BoolV{*x == *y});
    else if (p.name == "gq")
      r = mk(BoolV{*x > *y});
    else if (p.name == "sub")
      r = mk(IntV{*x - *y});
    else if (p.name == "add")
      r = mk(IntV{*x + *y});
    else {
      stuck(StuckReason::ArityMismatch, "no delta rule for " + p.name);
      return;
    }
    apply(args[2], r);
  }

  void apply(const ValuePtr& fun, const ValuePtr& arg) {
    if (const ClosureV* c = std::get_if<ClosureV>(&fun->repr())) {
      if (!charge()) return;
      ctrl = c->body;
      env = envCons(arg, c->env);
      done = nullptr;
      return;
    }
    if (const PrimV* p = std::get_if<PrimV>(&fun->repr())) {
      std::vector<ValuePtr> args = p->args;
      args.push_back(arg);
      int saturation = p->special ? p->valueArity : p->valueArity + 1;
      if (static_cast<int>(args.size()) == saturation) {
        fireDelta(*p, std::move(args));
      } else {
        done = mk(PrimV{p->name, p->valueArity, p->special, std::move(args)});
      }
      return;
    }
    if (const NeutralV* n = std::get_if<NeutralV>(&fun->repr())) {
      std::vector<ValuePtr> spine = n->spine;
      spine.push_back(arg);
      done = mk(NeutralV{n->head, std::move(spine)});
      return;
    }
    stuck(StuckReason::TypeMismatch, "applied a non-function value");
  }

  EvalResult run() {
    while (!result) {
      if (!done) {
        switch (ctrl.tag()) {
          case Term::Tag::Var: {
            const ValuePtr* v = envLookup(env, ctrl.asVar().depth);
            if (!v) {
              stuck(StuckReason::UnknownFree,
                    "unbound variable index " + std::to_string(ctrl.asVar().depth));
              break;
            }
            done = *v;
            break;
          }
          case Term::Tag::Free:
            evalFree(ctrl.asFree().val);
            break;
          case Term::Tag::Abs:
            done = mk(ClosureV{ctrl.asAbs().body, env});
            break;
          case Term::Tag::Fix: {
            // Unfold by substituting the fix term for its own binder; this
            // also runs loops that rebind nothing, where the body is not a
            // lambda and the fix itself is the whole computation.
            if (!charge()) break;
            Term f = ctrl;
            ctrl = instantiate(f, f.asFix().body);
            break;
          }
          case Term::Tag::App: {
            konts.push_back(KArg{ctrl.asApp().arg, env});
            ctrl = ctrl.asApp().fun;
            break;
          }
          case Term::Tag::Exit:
            throw HoleInTermError();
        }
        continue;
      }
      if (konts.empty()) {
        finish({EvalResult::Status::Ok, done, std::nullopt, "", 0});
        break;
      }
      Kont k = std::move(konts.back());
      konts.pop_back();
      if (KArg* ka = std::get_if<KArg>(&k)) {
        konts.push_back(KCallFun{done});
        ctrl = ka->arg;
        env = ka->env;
        done = nullptr;
      } else {
        apply(std::get<KCallFun>(k).fun, done);
      }
    }
    return *result;
  }
};

}  // namespace

EvalResult evaluate(const Term& t, StepBudget budget) {
  if (budget.maxSteps == 0) throw std::invalid_argument("step budget must be positive");
  if (hasExitHoles(t)) throw HoleInTermError();
  Machine m(t, budget.maxSteps);
  return m.run();
}

EvalResult applyCps(const Term& fnTerm, const std::vector<std::int64_t>& args,
                    StepBudget budget) {
  Term k = Term::abs("r", Term::var(0));
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    Term inner =
        Term::app(Term::app(Term::var(0), Term::freeRef(Val::freeName(std::to_string(*it)))), k);
    k = Term::abs("f", inner);
  }
  return evaluate(Term::app(fnTerm, k), budget);
}

}  // namespace cpsc
