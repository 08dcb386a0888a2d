#include "cpsc/cps.hpp"

#include <algorithm>

namespace cpsc {

void ExitToken::operator()(BuildContext& c) const {
  c.end(Term::exitHole(index, {}));
}

void ValueExitToken::operator()(BuildContext& c, const Val& v) const {
  c.end(Term::exitHole(index, {Term::freeRef(v)}));
}

namespace {

// Resolve a Val about to be spliced at a hole against the hole's captures:
// the earliest recorded matching capture is the innermost binder for it.
Term resolveSplice(const Val& v, const std::vector<Term::Capture>& captures) {
  for (const auto& c : captures)
    if (c.val == v) return Term::var(c.depth);
  return Term::freeRef(v);
}

Term fillAt(const Term& t, int exitIndex, const Val& target,
            const std::vector<std::string>& assigned) {
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return t;
    case Term::Tag::App: {
      const auto& a = t.asApp();
      return Term::app(fillAt(a.fun, exitIndex, target, assigned),
                       fillAt(a.arg, exitIndex, target, assigned));
    }
    case Term::Tag::Abs: {
      const auto& a = t.asAbs();
      return Term::abs(a.hint, fillAt(a.body, exitIndex, target, assigned));
    }
    case Term::Tag::Fix: {
      const auto& f = t.asFix();
      return Term::fix(f.hint, fillAt(f.body, exitIndex, target, assigned));
    }
    case Term::Tag::Exit: {
      const auto& e = t.asExit();
      std::vector<Term> thrown;
      thrown.reserve(e.thrown.size());
      for (const auto& s : e.thrown) thrown.push_back(fillAt(s, exitIndex, target, assigned));
      if (e.index != exitIndex)
        return Term::exitHole(e.index, std::move(thrown), e.captures);
      Term out = resolveSplice(target, e.captures);
      for (const auto& x : assigned)
        out = Term::app(out, resolveSplice(Val::freeName(x), e.captures));
      for (auto& s : thrown) out = Term::app(out, std::move(s));
      return out;
    }
  }
  throw std::logic_error("fillAt: bad tag");
}

}  // namespace

Term fillExits(const Term& body, int exitIndex, const Val& target,
               const std::vector<std::string>& assigned) {
  return fillAt(body, exitIndex, target, assigned);
}

BuildContext::BuildContext(EvalOrder order, std::vector<std::string> initialScope)
    : session_(std::make_shared<Session>()), scope_(std::move(initialScope)) {
  session_->order = order;
}

BuildContext::BuildContext(std::shared_ptr<Session> session, std::vector<std::string> scope)
    : session_(std::move(session)), scope_(std::move(scope)) {}

EvalOrder BuildContext::evalOrder() const { return session_->order; }

void BuildContext::requireLive() const {
  if (terminated_) throw EmissionAfterEndError();
}

int BuildContext::nextIndex() {
  requireLive();
  return session_->nextInter++;
}

Val BuildContext::freeVal(const std::string& name) {
  if (name.empty()) throw EmptyNameError();
  return Val::freeName(name);
}

void BuildContext::nest(TermContext wrap) {
  requireLive();
  pending_.push_back(std::move(wrap));
}

void BuildContext::end(Term t) {
  requireLive();
  for (auto it = pending_.rbegin(); it != pending_.rend(); ++it) t = (*it)(t);
  pending_.clear();
  final_ = std::move(t);
  terminated_ = true;
}

Term BuildContext::finalTerm() const {
  if (!terminated_ || !final_) throw BuildError("no final term: context not ended");
  return *final_;
}

bool BuildContext::inScope(const std::string& name) const {
  return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
}

void BuildContext::recordAssignment(const std::string& x) {
  if (std::find(assignments_.begin(), assignments_.end(), x) == assignments_.end())
    assignments_.push_back(x);
}

int BuildContext::newExit() {
  int i = session_->nextExit++;
  session_->exitRegistry[i] = false;
  return i;
}

void BuildContext::markExitFilled(int index) { session_->exitRegistry[index] = true; }

BlockOutcome BuildContext::runBlockIn(const Block& block, std::vector<std::string> scope,
                                      bool propagate) {
  requireLive();
  BuildContext child(session_, std::move(scope));
  block(child);
  if (!child.terminated_) throw IncompleteBlockError();
  if (propagate) {
    for (const auto& n : child.assignments_)
      if (inScope(n)) recordAssignment(n);
  }
  return BlockOutcome{child.finalTerm(), child.assignments_};
}

BlockOutcome BuildContext::runBlock(const Block& block) {
  return runBlockIn(block, scope_, true);
}

void BuildContext::callCC_(const std::function<void(BuildContext&, const ExitToken&)>& block) {
  requireLive();
  int exitIdx = newExit();
  int kIdx = nextIndex();
  ExitToken token{exitIdx};
  BlockOutcome out = runBlock([&](BuildContext& c) { block(c, token); });
  Term phi = fillExits(out.body, exitIdx, Val::inter(kIdx), out.assigned);
  markExitFilled(exitIdx);
  std::vector<std::string> assigned = out.assigned;
  nest([phi, kIdx, assigned](Term inner) {
    Term cont = std::move(inner);
    for (auto it = assigned.rbegin(); it != assigned.rend(); ++it)
      cont = Term::abs(*it, abstract(Val::freeName(*it), cont));
    return Term::app(Term::abs("k", abstract(Val::inter(kIdx), phi)), cont);
  });
}

Val BuildContext::callCC(
    const std::function<void(BuildContext&, const ValueExitToken&)>& block) {
  requireLive();
  int exitIdx = newExit();
  int kIdx = nextIndex();
  ValueExitToken token{exitIdx};
  BlockOutcome out = runBlock([&](BuildContext& c) { block(c, token); });
  Term phi = fillExits(out.body, exitIdx, Val::inter(kIdx), out.assigned);
  markExitFilled(exitIdx);
  int rIdx = nextIndex();
  std::vector<std::string> assigned = out.assigned;
  nest([phi, kIdx, rIdx, assigned](Term inner) {
    Term cont = Term::abs("r", abstract(Val::inter(rIdx), std::move(inner)));
    for (auto it = assigned.rbegin(); it != assigned.rend(); ++it)
      cont = Term::abs(*it, abstract(Val::freeName(*it), cont));
    return Term::app(Term::abs("k", abstract(Val::inter(kIdx), phi)), cont);
  });
  return Val::inter(rIdx);
}

void BuildContext::loop(const std::function<void(BuildContext&, const ExitToken&)>& block) {
  requireLive();
  int exitIdx = newExit();
  int selfIdx = nextIndex();
  ExitToken token{exitIdx};
  BlockOutcome out = runBlock([&](BuildContext& c) { block(c, token); });
  Term body = fillExits(out.body, exitIdx, Val::inter(selfIdx), out.assigned);
  markExitFilled(exitIdx);
  for (auto it = out.assigned.rbegin(); it != out.assigned.rend(); ++it)
    body = Term::abs(*it, abstract(Val::freeName(*it), body));
  Term applied = Term::fix("loop", abstract(Val::inter(selfIdx), body));
  for (const auto& x : out.assigned)
    applied = Term::app(applied, Term::freeRef(Val::freeName(x)));
  end(std::move(applied));
}

Val BuildContext::val(const std::string& x, const Expr& rhs, const Expr& body) {
  requireLive();
  if (x.empty()) throw EmptyNameError();
  return callCC([&](BuildContext& c, const ValueExitToken& k) {
    Val rhsV = rhs(c);
    c.nest([x, rhsV](Term inner) {
      return Term::app(Term::abs(x, abstract(Val::freeName(x), std::move(inner))),
                       Term::freeRef(rhsV));
    });
    Val bv = c.withLocal(x, body);
    k(c, bv);
  });
}

Val BuildContext::withLocal(const std::string& x, const Expr& body) {
  if (x.empty()) throw EmptyNameError();
  bool pushed = !inScope(x);
  if (pushed) scope_.push_back(x);
  bool hadRecord =
      std::find(assignments_.begin(), assignments_.end(), x) != assignments_.end();
  Val bv = body(*this);
  if (pushed) scope_.erase(std::find(scope_.begin(), scope_.end(), x));
  if (!hadRecord) {
    auto it = std::find(assignments_.begin(), assignments_.end(), x);
    if (it != assignments_.end()) assignments_.erase(it);
  }
  return bv;
}

void BuildContext::assign(const std::string& x, const Expr& rhs) {
  requireLive();
  if (x.empty()) throw EmptyNameError();
  if (!inScope(x)) throw NotAssignableError(x);
  Val v = rhs(*this);
  nest([x, v](Term inner) {
    return Term::app(Term::abs(x, abstract(Val::freeName(x), std::move(inner))),
                     Term::freeRef(v));
  });
  recordAssignment(x);
}

Val BuildContext::defAbs(const std::string& param, const Expr& body) {
  requireLive();
  if (param.empty()) throw EmptyNameError();
  int fIdx = nextIndex();
  int kIdx = nextIndex();
  BlockOutcome out = runBlockIn(
      [&](BuildContext& c) {
        Val bv = body(c);
        c.end(Term::app(Term::freeRef(Val::inter(kIdx)), Term::freeRef(bv)));
      },
      {param}, false);
  Term fnTerm = Term::abs(
      param, abstract(Val::freeName(param),
                      Term::abs("k", abstract(Val::inter(kIdx), out.body))));
  nest([fIdx, fnTerm](Term inner) {
    return Term::app(Term::abs("f", abstract(Val::inter(fIdx), std::move(inner))), fnTerm);
  });
  return Val::inter(fIdx);
}

Val BuildContext::applyFn(const Expr& f, const Expr& a) {
  requireLive();
  Val fv = Val::inter(0), av = Val::inter(0);
  if (session_->order == EvalOrder::LeftToRight) {
    fv = f(*this);
    av = a(*this);
  } else {
    av = a(*this);
    fv = f(*this);
  }
  int rIdx = nextIndex();
  nest([fv, av, rIdx](Term inner) {
    return Term::app(Term::app(Term::freeRef(fv), Term::freeRef(av)),
                     Term::abs("r", abstract(Val::inter(rIdx), std::move(inner))));
  });
  return Val::inter(rIdx);
}

Term buildProgram(const Expr& program, EvalOrder order, std::vector<std::string> initialScope) {
  BuildContext root(order, std::move(initialScope));
  int k0 = root.nextIndex();
  Val v = program(root);
  root.end(Term::app(Term::freeRef(Val::inter(k0)), Term::freeRef(v)));
  Term t = Term::abs("k", abstract(Val::inter(k0), root.finalTerm()));
  if (hasExitHoles(t)) throw BuildError("program term has unfilled exit holes");
  if (auto bad = scopeCheck(t))
    throw BuildError("program term ill-scoped at " + bad->path + ": " + bad->detail);
  return t;
}

Expr ref(std::string name) {
  return [n = std::move(name)](BuildContext&) { return BuildContext::freeVal(n); };
}

Expr pure(Val v) {
  return [v](BuildContext&) { return v; };
}

Expr val(std::string x, Expr rhs, Expr body) {
  return [=](BuildContext& c) { return c.val(x, rhs, body); };
}

Stmt assign(std::string x, Expr rhs) {
  return [=](BuildContext& c) { c.assign(x, rhs); };
}

Expr defAbs(std::string param, Expr body) {
  return [=](BuildContext& c) { return c.defAbs(param, body); };
}

Expr applyFn(Expr f, Expr a) {
  return [=](BuildContext& c) { return c.applyFn(f, a); };
}

Expr callCC(std::function<void(BuildContext&, const ValueExitToken&)> block) {
  return [b = std::move(block)](BuildContext& c) { return c.callCC(b); };
}

Stmt callCC_(std::function<void(BuildContext&, const ExitToken&)> block) {
  return [b = std::move(block)](BuildContext& c) { c.callCC_(b); };
}

Stmt loop(std::function<void(BuildContext&, const ExitToken&)> block) {
  return [b = std::move(block)](BuildContext& c) { c.loop(b); };
}

}  // namespace cpsc
