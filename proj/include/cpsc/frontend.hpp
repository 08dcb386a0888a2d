#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpsc/cps.hpp"
#include "cpsc/normalize.hpp"
#include "cpsc/term.hpp"

namespace cpsc::frontend {

struct SourcePos {
  int line = 1;  // 1-based
  int col = 1;
};

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct IntLit {
  std::int64_t value;
};
struct BoolLit {
  bool value;
};
struct UnitLit {};
struct VarRef {
  std::string name;
};
struct Lambda {
  std::string param;
  AstPtr body;
};
struct CallUnit {
  AstPtr fun;
};
struct Call {
  AstPtr fun;
  AstPtr arg;
};
enum class BinOpKind { Eq, Gt, Sub, Add };
struct BinOp {
  BinOpKind op;
  AstPtr lhs;
  AstPtr rhs;
};
struct NotOp {
  AstPtr operand;
};
struct ValDecl {
  std::string name;
  AstPtr rhs;
  AstPtr rest;  // remainder of the enclosing block; the binding scopes over it
};
struct DefDecl {
  std::string name;
  std::optional<std::string> param;  // nullopt = unit parameter "()"
  AstPtr fnBody;
  AstPtr rest;
};
struct Assign {
  std::string name;
  AstPtr rhs;
};
struct If {
  AstPtr cond;
  AstPtr thenBranch;
  AstPtr elseBranch;
};
struct IfStmt {
  AstPtr cond;
  AstPtr thenBranch;
  AstPtr elseBranch;
};
struct While {
  AstPtr cond;
  AstPtr body;
};
struct Seq {
  std::vector<AstPtr> stmts;
  AstPtr result;
};
struct Assert {
  AstPtr cond;
};
// Parsed but rejected during elaboration, after scope checks have run.
struct ListLit {
  std::vector<AstPtr> elems;
};

using AstNode = std::variant<IntLit, BoolLit, UnitLit, VarRef, Lambda, CallUnit, Call, BinOp,
                             NotOp, ValDecl, DefDecl, Assign, If, IfStmt, While, Seq, Assert,
                             ListLit>;

struct Ast {
  SourcePos pos;
  AstNode node;
};

struct ParseError : std::runtime_error {
  SourcePos pos;
  ParseError(SourcePos p, const std::string& msg) : std::runtime_error(msg), pos(p) {}
};

enum class ScopeErrorKind { NotAssignable, Unbound, ReservedName, MutableCell };

struct ScopeError : std::runtime_error {
  ScopeErrorKind kind;
  std::string name;
  SourcePos pos;
  ScopeError(ScopeErrorKind k, std::string n, SourcePos p)
      : std::runtime_error(messageFor(k, n)), kind(k), name(std::move(n)), pos(p) {}
  static std::string messageFor(ScopeErrorKind k, const std::string& n);
};

struct UnsupportedError : std::runtime_error {
  SourcePos pos;
  UnsupportedError(SourcePos p, const std::string& msg) : std::runtime_error(msg), pos(p) {}
};

AstPtr parse(const std::string& source);

// Scope-checks assignments first, then drives the CPS builder.
Term elaborate(const AstPtr& program, EvalOrder order = EvalOrder::LeftToRight);

// Big-step interpreter over the surface AST, independent of the builder.
struct RefValue;
using RefVal = std::shared_ptr<const RefValue>;
struct RefClosure {
  std::optional<std::string> param;
  AstPtr body;
  std::map<std::string, RefVal> env;
};
struct RefValue {
  std::variant<std::int64_t, bool, std::monostate, RefClosure> v;
};

struct RefResult {
  enum class Status { Ok, FuelExhausted, AssertFailed, Error };
  Status status;
  RefVal value;  // set when Ok
  std::string detail;
  bool ok() const { return status == Status::Ok; }
};

RefResult referenceInterpret(const AstPtr& program, const std::vector<std::int64_t>& args,
                             std::uint64_t fuel = 1'000'000);

std::string showRefVal(const RefVal& v);

}  // namespace cpsc::frontend
