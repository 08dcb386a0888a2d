#include "cpsc/lang.hpp"

#include <cctype>

namespace cpsc {

const std::vector<BuiltinSig>& builtins() {
  static const std::vector<BuiltinSig> table = {
      {"eq", 2, false},  {"gq", 2, false},  {"sub", 2, false}, {"add", 2, false},
      {"not", 1, false}, {"if", 3, true},   {"assert", 1, false},
  };
  return table;
}

const BuiltinSig* lookupBuiltin(const std::string& name) {
  for (const auto& b : builtins())
    if (b.name == name) return &b;
  return nullptr;
}

bool isReservedName(const std::string& name) {
  if (lookupBuiltin(name)) return true;
  return name == "true" || name == "false" || name == "unit";
}

LiteralKind classifyLiteralName(const std::string& name) {
  if (name == "true" || name == "false") return LiteralKind::Bool;
  if (name == "unit") return LiteralKind::Unit;
  if (name.empty()) return LiteralKind::None;
  size_t i = name[0] == '-' ? 1 : 0;
  if (i >= name.size()) return LiteralKind::None;
  for (size_t j = i; j < name.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(name[j]))) return LiteralKind::None;
  // digits from position i on; canonical: no leading zero unless exactly "0"
  if (name[i] == '0' && name.size() - i > 1) return LiteralKind::Malformed;
  if (name == "-0") return LiteralKind::Malformed;
  return LiteralKind::Int;
}

std::int64_t literalIntValue(const std::string& name) {
  if (classifyLiteralName(name) != LiteralKind::Int) throw MalformedLiteralError(name);
  return std::stoll(name);
}

bool literalBoolValue(const std::string& name) {
  if (name == "true") return true;
  if (name == "false") return false;
  throw MalformedLiteralError(name);
}

namespace {

Val primN(BuildContext& c, const std::string& name, const std::vector<Expr>& args) {
  const BuiltinSig* sig = lookupBuiltin(name);
  if (!sig || sig->special) throw UnknownBuiltinError(name);
  if (static_cast<int>(args.size()) != sig->valueArity)
    throw BuildError("builtin " + name + " expects " + std::to_string(sig->valueArity) +
                     " arguments");
  std::vector<Val> vals;
  vals.reserve(args.size());
  for (const auto& a : args) vals.push_back(a(c));
  int rIdx = c.nextIndex();
  c.nest([name, vals, rIdx](Term inner) {
    Term t = Term::freeRef(Val::freeName(name));
    for (const auto& v : vals) t = Term::app(t, Term::freeRef(v));
    return Term::app(t, Term::abs("r", abstract(Val::inter(rIdx), std::move(inner))));
  });
  return Val::inter(rIdx);
}

}  // namespace

Val prim1(BuildContext& c, const std::string& name, const Expr& a) {
  return primN(c, name, {a});
}

Val prim2(BuildContext& c, const std::string& name, const Expr& a, const Expr& b) {
  return primN(c, name, {a, b});
}

void condVoid(BuildContext& c, const Expr& b, const Block& t, const Block& e) {
  Val bv = b(c);
  BlockOutcome to = c.runBlock(t);
  BlockOutcome eo = c.runBlock(e);
  c.end(Term::app(
      Term::app(Term::app(Term::freeRef(Val::freeName("if")), Term::freeRef(bv)),
                Term::abs("u", to.body)),
      Term::abs("u", eo.body)));
}

Val cond(BuildContext& c, const Expr& b, const Expr& t, const Expr& e) {
  return c.callCC([&](BuildContext& c1, const ValueExitToken& k) {
    condVoid(
        c1, b,
        [&](BuildContext& c2) {
          Val tv = t(c2);
          k(c2, tv);
        },
        [&](BuildContext& c2) {
          Val ev = e(c2);
          k(c2, ev);
        });
  });
}

void cond_(BuildContext& c, const Expr& b, const Stmt& t, const Stmt& e) {
  c.callCC_([&](BuildContext& c1, const ExitToken& k) {
    condVoid(
        c1, b,
        [&](BuildContext& c2) {
          t(c2);
          k(c2);
        },
        [&](BuildContext& c2) {
          e(c2);
          k(c2);
        });
  });
}

void while_(BuildContext& c, const Expr& b, const Stmt& body) {
  c.callCC_([&](BuildContext& c1, const ExitToken& brk) {
    c1.loop([&](BuildContext& c2, const ExitToken& cont) {
      condVoid(
          c2, b,
          [&](BuildContext& c3) {
            body(c3);
            cont(c3);
          },
          [&](BuildContext& c3) { brk(c3); });
    });
  });
}

Expr lit(std::int64_t n) { return ref(std::to_string(n)); }
Expr litBool(bool b) { return ref(b ? "true" : "false"); }
Expr unitLit() { return ref("unit"); }

Expr eq(Expr a, Expr b) {
  return [=](BuildContext& c) { return prim2(c, "eq", a, b); };
}
Expr gq(Expr a, Expr b) {
  return [=](BuildContext& c) { return prim2(c, "gq", a, b); };
}
Expr sub(Expr a, Expr b) {
  return [=](BuildContext& c) { return prim2(c, "sub", a, b); };
}
Expr add(Expr a, Expr b) {
  return [=](BuildContext& c) { return prim2(c, "add", a, b); };
}
Expr not_(Expr a) {
  return [=](BuildContext& c) { return prim1(c, "not", a); };
}
Expr assert_(Expr a) {
  return [=](BuildContext& c) { return prim1(c, "assert", a); };
}

Expr cond(Expr b, Expr t, Expr e) {
  return [=](BuildContext& c) { return cond(c, b, t, e); };
}
Stmt cond_(Expr b, Stmt t, Stmt e) {
  return [=](BuildContext& c) { cond_(c, b, t, e); };
}
Stmt while_(Expr b, Stmt body) {
  return [=](BuildContext& c) { while_(c, b, body); };
}

Stmt seq(std::vector<Stmt> stmts) {
  return [s = std::move(stmts)](BuildContext& c) {
    for (const auto& st : s) st(c);
  };
}

Expr block(std::vector<Stmt> stmts, Expr result) {
  return [s = std::move(stmts), result](BuildContext& c) {
    for (const auto& st : s) st(c);
    return result(c);
  };
}

}  // namespace cpsc
