#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cpsc {

// Free-variable alphabet: numbered intermediates minted by the builder,
// and named frees (source variables, builtins, literals).
class Val {
 public:
  static Val inter(int index) { return Val(index); }
  static Val freeName(std::string name) { return Val(std::move(name)); }

  bool isInter() const { return repr_.index() == 0; }
  bool isFree() const { return repr_.index() == 1; }
  int index() const { return std::get<int>(repr_); }
  const std::string& name() const { return std::get<std::string>(repr_); }

  friend bool operator==(const Val&, const Val&) = default;
  friend auto operator<=>(const Val&, const Val&) = default;

  std::string show() const;

 private:
  explicit Val(int i) : repr_(i) {}
  explicit Val(std::string n) : repr_(std::move(n)) {}
  std::variant<int, std::string> repr_;
};

class Term;

struct VarNode {
  int depth;  // 0 = innermost enclosing binder
};
struct FreeNode {
  Val val;
};
struct AppNode;
struct AbsNode;
struct FixNode;
struct ExitNode;

using TermNode = std::variant<VarNode, FreeNode, AppNode, AbsNode, FixNode, ExitNode>;

class Term {
 public:
  enum class Tag { Var, Free, App, Abs, Fix, Exit };

  // A binder that will capture occurrences of `val` spliced into an exit hole
  // later, sitting `depth` binders above the hole. Behaves like a Var(depth)
  // occurrence at the hole for every scope-sensitive traversal.
  struct Capture {
    Val val;
    int depth;
    friend bool operator==(const Capture&, const Capture&) = default;
  };

  static Term var(int depth);
  static Term freeRef(Val v);
  static Term app(Term fun, Term arg);
  static Term abs(std::string hint, Term body);
  static Term fix(std::string hint, Term body);
  static Term exitHole(int exitIndex, std::vector<Term> thrown);
  static Term exitHole(int exitIndex, std::vector<Term> thrown,
                       std::vector<Capture> captures);

  Tag tag() const;
  const VarNode& asVar() const;
  const FreeNode& asFree() const;
  const AppNode& asApp() const;
  const AbsNode& asAbs() const;
  const FixNode& asFix() const;
  const ExitNode& asExit() const;

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

struct AppNode {
  Term fun;
  Term arg;
};
struct AbsNode {
  std::string hint;  // display only, no semantic content ("" = none)
  Term body;
};
struct FixNode {
  std::string hint;
  Term body;
};
struct ExitNode {
  int index;
  std::vector<Term> thrown;
  std::vector<Term::Capture> captures;
};

// Turn every free occurrence of `match` in `t` into the bound variable of a
// binder about to be wrapped around the result; dangling indices shift up.
// Exit holes record a capture entry so later splices resolve through it.
Term abstract(const Val& match, const Term& t);

// Substitute `replacement` for the outermost binder's variable in `body`
// (the body of an Abs/Fix being eliminated), shifting as needed.
Term instantiate(const Term& replacement, const Term& body);

// Shift dangling variable indices >= cutoff by `delta` (may be negative).
Term shiftTerm(const Term& t, int delta, int cutoff);

bool alphaEq(const Term& a, const Term& b);

struct ScopeViolation {
  std::string path;
  std::string detail;
};
// Empty result = well-scoped under `enclosingBinders` binders.
std::optional<ScopeViolation> scopeCheck(const Term& t, int enclosingBinders = 0);

// Distinct referenced free Vals, first occurrence first.
std::vector<Val> freeVals(const Term& t);

int countExitHoles(const Term& t);
int countExitHoles(const Term& t, int exitIndex);
bool hasExitHoles(const Term& t);
int nodeCount(const Term& t);

std::string renderText(const Term& t);

struct TermParseError : std::runtime_error {
  int position;  // 1-based character offset
  TermParseError(int pos, const std::string& msg)
      : std::runtime_error(msg), position(pos) {}
};
Term parseTermText(const std::string& text);

std::string renderJson(const Term& t);

}  // namespace cpsc
