#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpsc/term.hpp"

namespace cpsc {

struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmissionAfterEndError : BuildError {
  EmissionAfterEndError() : BuildError("emission after end") {}
};
struct EmptyNameError : BuildError {
  EmptyNameError() : BuildError("empty variable name") {}
};
struct NotAssignableError : BuildError {
  std::string name;
  explicit NotAssignableError(const std::string& n)
      : BuildError(n + " cannot be assigned here."), name(n) {}
};
struct IncompleteBlockError : BuildError {
  IncompleteBlockError() : BuildError("block finished without ending its term") {}
};

class BuildContext;

using Expr = std::function<Val(BuildContext&)>;
using Stmt = std::function<void(BuildContext&)>;
using Block = Stmt;
using TermContext = std::function<Term(Term)>;

// Invoking an exit token ends the current innermost block with a hole that
// the owning combinator later fills with its continuation target.
struct ExitToken {
  int index;
  void operator()(BuildContext& c) const;
};
struct ValueExitToken {
  int index;
  void operator()(BuildContext& c, const Val& v) const;
};

struct BlockOutcome {
  Term body;
  std::vector<std::string> assigned;  // first-assignment order, deduplicated
};

enum class EvalOrder { LeftToRight, RightToLeft };

// Replace every ExitHole(exitIndex, thrown) in body with
//   App*(target, assigned..., thrown...)
// resolving target and assigned names through the hole's recorded captures,
// so splices see the binders wrapped around the hole since it was created.
Term fillExits(const Term& body, int exitIndex, const Val& target,
               const std::vector<std::string>& assigned);

class BuildContext {
 public:
  explicit BuildContext(EvalOrder order = EvalOrder::LeftToRight,
                        std::vector<std::string> initialScope = {});
  BuildContext(const BuildContext&) = delete;
  BuildContext& operator=(const BuildContext&) = delete;

  EvalOrder evalOrder() const;

  // Low-level emission interface.
  int nextIndex();
  static Val freeVal(const std::string& name);
  void nest(TermContext wrap);
  void end(Term t);
  bool terminated() const { return terminated_; }
  Term finalTerm() const;
  BlockOutcome runBlock(const Block& block);

  // Structured combinators.
  void callCC_(const std::function<void(BuildContext&, const ExitToken&)>& block);
  Val callCC(const std::function<void(BuildContext&, const ValueExitToken&)>& block);
  void loop(const std::function<void(BuildContext&, const ExitToken&)>& block);
  Val val(const std::string& x, const Expr& rhs, const Expr& body);
  Val withLocal(const std::string& x, const Expr& body);
  void assign(const std::string& x, const Expr& rhs);
  Val defAbs(const std::string& param, const Expr& body);
  Val applyFn(const Expr& f, const Expr& a);

  bool inScope(const std::string& name) const;
  const std::vector<std::string>& assignments() const { return assignments_; }

 private:
  struct Session {
    int nextInter = 0;
    int nextExit = 0;
    std::map<int, bool> exitRegistry;  // index -> filled
    EvalOrder order = EvalOrder::LeftToRight;
  };

  BuildContext(std::shared_ptr<Session> session, std::vector<std::string> scope);
  void requireLive() const;
  void recordAssignment(const std::string& x);
  int newExit();
  void markExitFilled(int index);
  BlockOutcome runBlockIn(const Block& block, std::vector<std::string> scope, bool propagate);

  std::shared_ptr<Session> session_;
  std::vector<TermContext> pending_;  // applied outermost-first at end()
  std::vector<std::string> scope_;
  std::vector<std::string> assignments_;
  bool terminated_ = false;
  std::optional<Term> final_;
};

// Run a whole program expression: its value is delivered to an ambient
// continuation, yielding a closed term of the shape \k. ... k ... .
Term buildProgram(const Expr& program, EvalOrder order = EvalOrder::LeftToRight,
                  std::vector<std::string> initialScope = {});

// Expression/statement sugar mirroring the builder operations.
Expr ref(std::string name);
Expr pure(Val v);
Expr val(std::string x, Expr rhs, Expr body);
Stmt assign(std::string x, Expr rhs);
Expr defAbs(std::string param, Expr body);
Expr applyFn(Expr f, Expr a);
Expr callCC(std::function<void(BuildContext&, const ValueExitToken&)> block);
Stmt callCC_(std::function<void(BuildContext&, const ExitToken&)> block);
Stmt loop(std::function<void(BuildContext&, const ExitToken&)> block);

}  // namespace cpsc
