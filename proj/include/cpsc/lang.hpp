#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpsc/cps.hpp"

namespace cpsc {

struct UnknownBuiltinError : BuildError {
  explicit UnknownBuiltinError(const std::string& name)
      : BuildError("unknown builtin: " + name) {}
};
struct MalformedLiteralError : BuildError {
  explicit MalformedLiteralError(const std::string& name)
      : BuildError("malformed literal: " + name) {}
};

struct BuiltinSig {
  std::string name;
  int valueArity;  // argument values before the continuation
  bool special;    // takes branch thunks instead of a continuation
};

const std::vector<BuiltinSig>& builtins();
const BuiltinSig* lookupBuiltin(const std::string& name);
bool isReservedName(const std::string& name);

// Literal names: canonical integers (-?[0-9]+, no leading zeros, no -0),
// plus true/false/unit.
enum class LiteralKind { None, Int, Bool, Unit, Malformed };
LiteralKind classifyLiteralName(const std::string& name);
std::int64_t literalIntValue(const std::string& name);
bool literalBoolValue(const std::string& name);

// Emit a builtin application App*(name, args..., \r. rest) and return %r.
Val prim1(BuildContext& c, const std::string& name, const Expr& a);
Val prim2(BuildContext& c, const std::string& name, const Expr& a, const Expr& b);

// Value-producing conditional: branches throw to a join continuation.
Val cond(BuildContext& c, const Expr& b, const Expr& t, const Expr& e);
// Statement conditional: branches rejoin carrying only their assignments.
void cond_(BuildContext& c, const Expr& b, const Stmt& t, const Stmt& e);
// Diverging conditional: each branch must end its block itself (via an exit).
void condVoid(BuildContext& c, const Expr& b, const Block& t, const Block& e);

//   while b body = callCC_ (\break -> loop (\cont ->
//                    condVoid b (body; cont) break))
void while_(BuildContext& c, const Expr& b, const Stmt& body);

// Expression/statement sugar.
Expr lit(std::int64_t n);
Expr litBool(bool b);
Expr unitLit();
Expr eq(Expr a, Expr b);
Expr gq(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr add(Expr a, Expr b);
Expr not_(Expr a);
Expr assert_(Expr a);
Expr cond(Expr b, Expr t, Expr e);
Stmt cond_(Expr b, Stmt t, Stmt e);
Stmt while_(Expr b, Stmt body);
Stmt seq(std::vector<Stmt> stmts);
Expr block(std::vector<Stmt> stmts, Expr result);

}  // namespace cpsc
