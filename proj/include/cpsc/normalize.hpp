#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpsc/term.hpp"

namespace cpsc {

struct HoleInTermError : std::logic_error {
  HoleInTermError() : std::logic_error("term contains unfilled exit holes") {}
};

struct StepBudget {
  std::uint64_t maxSteps = 1'000'000;
};

struct NormalizeResult {
  std::optional<Term> term;  // empty = budget exceeded
  std::uint64_t stepsUsed = 0;
  bool ok() const { return term.has_value(); }
};

// Leftmost-outermost beta reduction plus eta contraction, to fixpoint.
// Fix bodies are reduced but Fix itself is never unfolded.
NormalizeResult betaEtaNormalize(const Term& t, StepBudget budget = {});

int countBetaRedexes(const Term& t);
int countEtaRedexes(const Term& t);
int countFixNodes(const Term& t);

class Value;
using ValuePtr = std::shared_ptr<const Value>;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct IntV {
  std::int64_t v;
};
struct BoolV {
  bool v;
};
struct UnitV {};
struct ClosureV {
  Term body;
  Env env;
};
struct PrimV {
  std::string name;
  int valueArity;
  bool special;
  std::vector<ValuePtr> args;
};
struct NeutralV {
  std::string head;
  std::vector<ValuePtr> spine;
};

class Value {
 public:
  using Repr = std::variant<IntV, BoolV, UnitV, ClosureV, PrimV, NeutralV>;
  explicit Value(Repr r) : repr_(std::move(r)) {}
  const Repr& repr() const { return repr_; }

 private:
  Repr repr_;
};

struct EnvNode {
  ValuePtr value;
  Env next;
};

std::string showValue(const ValuePtr& v);

enum class StuckReason {
  UnknownFree,
  ArityMismatch,
  TypeMismatch,
  AssertionFailed,
  MalformedLiteral,
};
std::string stuckReasonName(StuckReason r);

struct EvalResult {
  enum class Status { Ok, BudgetExceeded, Stuck };
  Status status;
  ValuePtr value;  // set when Ok
  std::optional<StuckReason> stuck;
  std::string detail;
  std::uint64_t stepsUsed = 0;
  bool ok() const { return status == Status::Ok; }
};

// Call-by-value evaluation with delta rules for the builtins; a Fix term in
// control position unfolds one level by substitution. Counts beta, unfold,
// and delta steps.
EvalResult evaluate(const Term& t, StepBudget budget = {});

// Apply a compiled program term (\k. ... k ...) to integer arguments by
// feeding it a chain of continuations ending in the identity.
EvalResult applyCps(const Term& fnTerm, const std::vector<std::int64_t>& args,
                    StepBudget budget = {});

}  // namespace cpsc
