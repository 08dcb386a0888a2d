#include "cpsc/frontend.hpp"

#include <cctype>
#include <set>

#include "cpsc/lang.hpp"

namespace cpsc::frontend {

std::string ScopeError::messageFor(ScopeErrorKind k, const std::string& n) {
  switch (k) {
    case ScopeErrorKind::NotAssignable:
      return n + " cannot be assigned here.";
    case ScopeErrorKind::Unbound:
      return n + " is not bound here.";
    case ScopeErrorKind::ReservedName:
      return n + " is a reserved name.";
    case ScopeErrorKind::MutableCell:
      return n + " would require a mutable cell.";
  }
  return n;
}

namespace {

enum class Tok {
  Newline,
  Name,
  Int,
  KwVal,
  KwDef,
  KwWhile,
  KwDo,
  KwEnd,
  KwIf,
  KwThen,
  KwElse,
  KwAssert,
  KwTrue,
  KwFalse,
  Arrow,
  EqEq,
  NotEq,
  Gt,
  Minus,
  Plus,
  Assign,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t intValue = 0;
  SourcePos pos;
};

const char* tokName(Tok t) {
  switch (t) {
    case Tok::Newline: return "end of line";
    case Tok::Name: return "name";
    case Tok::Int: return "integer";
    case Tok::KwVal: return "'val'";
    case Tok::KwDef: return "'def'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwDo: return "'do'";
    case Tok::KwEnd: return "'end'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwAssert: return "'assert'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::Arrow: return "'=>'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Gt: return "'>'";
    case Tok::Minus: return "'-'";
    case Tok::Plus: return "'+'";
    case Tok::Assign: return "'='";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string text, SourcePos p, std::int64_t v = 0) {
    out.push_back(Token{k, std::move(text), v, p});
  };
  while (i < src.size()) {
    char c = src[i];
    SourcePos pos{line, col};
    if (c == '\n') {
      if (!out.empty() && out.back().kind != Tok::Newline) push(Tok::Newline, "\n", pos);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        ++i;
        ++col;
      }
      std::string word = src.substr(start, i - start);
      Tok k = Tok::Name;
      if (word == "val") k = Tok::KwVal;
      else if (word == "def") k = Tok::KwDef;
      else if (word == "while") k = Tok::KwWhile;
      else if (word == "do") k = Tok::KwDo;
      else if (word == "end") k = Tok::KwEnd;
      else if (word == "if") k = Tok::KwIf;
      else if (word == "then") k = Tok::KwThen;
      else if (word == "else") k = Tok::KwElse;
      else if (word == "assert") k = Tok::KwAssert;
      else if (word == "true") k = Tok::KwTrue;
      else if (word == "false") k = Tok::KwFalse;
      push(k, std::move(word), pos);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        ++i;
        ++col;
      }
      std::string digits = src.substr(start, i - start);
      if (digits.size() > 1 && digits[0] == '0')
        throw ParseError(pos, "integer literals may not have leading zeros");
      std::int64_t value = 0;
      try {
        value = std::stoll(digits);
      } catch (const std::out_of_range&) {
        throw ParseError(pos, "integer literal out of range");
      }
      push(Tok::Int, digits, pos, value);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('=', '>')) {
      push(Tok::Arrow, "=>", pos);
      i += 2;
      col += 2;
      continue;
    }
    if (two('=', '=')) {
      push(Tok::EqEq, "==", pos);
      i += 2;
      col += 2;
      continue;
    }
    if (two('!', '=')) {
      push(Tok::NotEq, "!=", pos);
      i += 2;
      col += 2;
      continue;
    }
    switch (c) {
      case '=': push(Tok::Assign, "=", pos); break;
      case '>': push(Tok::Gt, ">", pos); break;
      case '-': push(Tok::Minus, "-", pos); break;
      case '+': push(Tok::Plus, "+", pos); break;
      case '(': push(Tok::LParen, "(", pos); break;
      case ')': push(Tok::RParen, ")", pos); break;
      case '[': push(Tok::LBracket, "[", pos); break;
      case ']': push(Tok::RBracket, "]", pos); break;
      case ',': push(Tok::Comma, ",", pos); break;
      default:
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }
    ++i;
    ++col;
    continue;
  }
  SourcePos pos{line, col};
  if (!out.empty() && out.back().kind != Tok::Newline) push(Tok::Newline, "", pos);
  push(Tok::Eof, "", pos);
  return out;
}

AstPtr node(SourcePos pos, AstNode n) {
  return std::make_shared<Ast>(Ast{pos, std::move(n)});
}

struct Parser {
  std::vector<Token> toks;
  size_t i = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t j = i + ahead;
    return j < toks.size() ? toks[j] : toks.back();
  }
  const Token& advance() { return toks[i < toks.size() - 1 ? i++ : i]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(peek().pos, msg); }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what + ", found " + tokName(peek().kind));
    return advance();
  }

  void skipNewlines() {
    while (at(Tok::Newline)) advance();
  }

  bool atAny(const std::vector<Tok>& ks) const {
    for (Tok k : ks)
      if (at(k)) return true;
    return false;
  }

  struct BlockResult {
    AstPtr block;
    bool explicitResult;
  };

  struct IfParts {
    SourcePos pos;
    AstPtr cond;
    BlockResult thenB;
    BlockResult elseB;
  };

  // After a statement: newline(s), or a following terminator.
  void expectSeparator(const std::vector<Tok>& terminators) {
    if (at(Tok::Newline)) {
      skipNewlines();
      return;
    }
    if (atAny(terminators) || at(Tok::Eof)) return;
    fail(std::string("expected end of line after statement, found ") + tokName(peek().kind));
  }

  IfParts parseIf() {
    SourcePos pos = expect(Tok::KwIf, "'if'").pos;
    AstPtr cond = parseExpr();
    skipNewlines();
    expect(Tok::KwThen, "'then'");
    BlockResult thenB = parseBlock({Tok::KwElse, Tok::KwEnd});
    BlockResult elseB;
    if (at(Tok::KwElse)) {
      advance();
      elseB = parseBlock({Tok::KwEnd});
    } else {
      elseB = BlockResult{node(peek().pos, UnitLit{}), false};
    }
    expect(Tok::KwEnd, "'end'");
    return IfParts{pos, cond, thenB, elseB};
  }

  BlockResult parseBlock(const std::vector<Tok>& terminators) {
    skipNewlines();
    std::vector<AstPtr> stmts;
    auto finish = [&](AstPtr result, bool explicitResult) {
      if (stmts.empty()) return BlockResult{result, explicitResult};
      SourcePos pos = stmts.front()->pos;
      return BlockResult{node(pos, Seq{std::move(stmts), result}), explicitResult};
    };
    while (true) {
      skipNewlines();
      if (atAny(terminators) || at(Tok::Eof))
        return finish(node(peek().pos, UnitLit{}), false);
      switch (peek().kind) {
        case Tok::KwVal: {
          SourcePos pos = advance().pos;
          Token name = expect(Tok::Name, "name after 'val'");
          expect(Tok::Assign, "'=' in val binding");
          AstPtr rhs = parseExpr();
          expectSeparator(terminators);
          BlockResult rest = parseBlock(terminators);
          return finish(node(pos, ValDecl{name.text, rhs, rest.block}),
                        rest.explicitResult);
        }
        case Tok::KwDef: {
          SourcePos pos = advance().pos;
          Token name = expect(Tok::Name, "name after 'def'");
          expect(Tok::LParen, "'(' in def parameter list");
          std::optional<std::string> param;
          if (at(Tok::Name)) param = advance().text;
          expect(Tok::RParen, "')' closing def parameter list");
          expect(Tok::Assign, "'=' in def binding");
          AstPtr body = parseExpr();
          expectSeparator(terminators);
          BlockResult rest = parseBlock(terminators);
          return finish(node(pos, DefDecl{name.text, param, body, rest.block}),
                        rest.explicitResult);
        }
        case Tok::KwWhile: {
          SourcePos pos = advance().pos;
          AstPtr cond = parseExpr();
          skipNewlines();
          expect(Tok::KwDo, "'do' after while condition");
          BlockResult body = parseBlock({Tok::KwEnd});
          expect(Tok::KwEnd, "'end' closing while");
          stmts.push_back(node(pos, While{cond, body.block}));
          expectSeparator(terminators);
          continue;
        }
        case Tok::KwAssert: {
          SourcePos pos = advance().pos;
          expect(Tok::LParen, "'(' after assert");
          AstPtr cond = parseExpr();
          expect(Tok::RParen, "')' closing assert");
          stmts.push_back(node(pos, Assert{cond}));
          expectSeparator(terminators);
          continue;
        }
        case Tok::KwIf: {
          IfParts parts = parseIf();
          bool anyExplicit = parts.thenB.explicitResult || parts.elseB.explicitResult;
          size_t save = i;
          skipNewlines();
          bool ended = atAny(terminators) || at(Tok::Eof);
          if (ended && anyExplicit) {
            return finish(
                node(parts.pos, If{parts.cond, parts.thenB.block, parts.elseB.block}), true);
          }
          i = save;  // keep the separator for expectSeparator
          stmts.push_back(
              node(parts.pos, IfStmt{parts.cond, parts.thenB.block, parts.elseB.block}));
          expectSeparator(terminators);
          continue;
        }
        case Tok::Name: {
          if (peek(1).kind == Tok::Assign) {
            SourcePos pos = peek().pos;
            std::string name = advance().text;
            advance();  // '='
            AstPtr rhs = parseExpr();
            stmts.push_back(node(pos, Assign{name, rhs}));
            expectSeparator(terminators);
            continue;
          }
          break;  // expression result
        }
        default:
          break;
      }
      AstPtr result = parseExpr();
      skipNewlines();
      if (!atAny(terminators) && !at(Tok::Eof))
        fail(std::string("expected end of block after result expression, found ") +
             tokName(peek().kind));
      return finish(result, true);
    }
  }

  AstPtr parseExpr() {
    if (at(Tok::Name) && peek(1).kind == Tok::Arrow) {
      SourcePos pos = peek().pos;
      std::string param = advance().text;
      advance();  // '=>'
      BlockResult body = parseBlock({Tok::KwEnd});
      expect(Tok::KwEnd, "'end' closing lambda");
      return node(pos, Lambda{param, body.block});
    }
    if (at(Tok::KwIf)) {
      IfParts parts = parseIf();
      return node(parts.pos, If{parts.cond, parts.thenB.block, parts.elseB.block});
    }
    if (at(Tok::KwDo)) {
      advance();
      BlockResult body = parseBlock({Tok::KwEnd});
      expect(Tok::KwEnd, "'end' closing do block");
      return body.block;
    }
    return parseComparison();
  }

  AstPtr parseComparison() {
    AstPtr lhs = parseAdditive();
    while (atAny({Tok::EqEq, Tok::NotEq, Tok::Gt})) {
      Token op = advance();
      AstPtr rhs = parseAdditive();
      if (op.kind == Tok::EqEq)
        lhs = node(op.pos, BinOp{BinOpKind::Eq, lhs, rhs});
      else if (op.kind == Tok::Gt)
        lhs = node(op.pos, BinOp{BinOpKind::Gt, lhs, rhs});
      else
        lhs = node(op.pos, NotOp{node(op.pos, BinOp{BinOpKind::Eq, lhs, rhs})});
    }
    return lhs;
  }

  AstPtr parseAdditive() {
    AstPtr lhs = parseApplication();
    while (atAny({Tok::Minus, Tok::Plus})) {
      Token op = advance();
      AstPtr rhs = parseApplication();
      lhs = node(op.pos,
                 BinOp{op.kind == Tok::Minus ? BinOpKind::Sub : BinOpKind::Add, lhs, rhs});
    }
    return lhs;
  }

  AstPtr parseApplication() {
    AstPtr fun = parseAtom();
    while (true) {
      if (at(Tok::LParen)) {
        SourcePos pos = peek().pos;
        if (peek(1).kind == Tok::RParen) {
          advance();
          advance();
          fun = node(pos, CallUnit{fun});
          continue;
        }
        advance();
        AstPtr arg = parseExpr();
        expect(Tok::RParen, "')' closing argument");
        fun = node(pos, Call{fun, arg});
        continue;
      }
      if (atAny({Tok::Name, Tok::Int, Tok::KwTrue, Tok::KwFalse, Tok::LBracket})) {
        // a name followed by '=>' starts a lambda argument only in parens;
        // bare names/literals are application arguments
        SourcePos pos = peek().pos;
        AstPtr arg = parseAtom();
        fun = node(pos, Call{fun, arg});
        continue;
      }
      return fun;
    }
  }

  AstPtr parseAtom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Name: {
        advance();
        return node(t.pos, VarRef{t.text});
      }
      case Tok::Int: {
        advance();
        return node(t.pos, IntLit{t.intValue});
      }
      case Tok::KwTrue:
        advance();
        return node(t.pos, BoolLit{true});
      case Tok::KwFalse:
        advance();
        return node(t.pos, BoolLit{false});
      case Tok::LParen: {
        advance();
        AstPtr e = parseExpr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBracket: {
        SourcePos pos = advance().pos;
        std::vector<AstPtr> elems;
        if (!at(Tok::RBracket)) {
          elems.push_back(parseExpr());
          while (at(Tok::Comma)) {
            advance();
            elems.push_back(parseExpr());
          }
        }
        expect(Tok::RBracket, "']' closing list");
        return node(pos, ListLit{std::move(elems)});
      }
      default:
        fail(std::string("expected an expression, found ") + tokName(t.kind));
    }
  }
};

}  // namespace

AstPtr parse(const std::string& source) {
  Parser p{lex(source)};
  Parser::BlockResult b = p.parseBlock({Tok::Eof});
  p.skipNewlines();
  if (!p.at(Tok::Eof)) p.fail("unexpected input after program");
  return b.block;
}

// ---------------------------------------------------------------------------
// Elaboration.

namespace {

using Names = std::set<std::string>;

// First pass: rule 3. Assignment targets must be bound inside the nearest
// enclosing function body. Runs before anything else so these errors win.
void checkAssigns(const AstPtr& a, Names assignable) {
  struct Walk {
    Names& assignable;
    const AstPtr& self;
    void operator()(const IntLit&) {}
    void operator()(const BoolLit&) {}
    void operator()(const UnitLit&) {}
    void operator()(const VarRef&) {}
    void operator()(const Lambda& l) {
      checkAssigns(l.body, Names{l.param});
    }
    void operator()(const CallUnit& c) { checkAssigns(c.fun, assignable); }
    void operator()(const Call& c) {
      checkAssigns(c.fun, assignable);
      checkAssigns(c.arg, assignable);
    }
    void operator()(const BinOp& b) {
      checkAssigns(b.lhs, assignable);
      checkAssigns(b.rhs, assignable);
    }
    void operator()(const NotOp& n) { checkAssigns(n.operand, assignable); }
    void operator()(const ValDecl& v) {
      checkAssigns(v.rhs, assignable);
      Names inner = assignable;
      inner.insert(v.name);
      checkAssigns(v.rest, inner);
    }
    void operator()(const DefDecl& d) {
      Names body;
      if (d.param) body.insert(*d.param);
      checkAssigns(d.fnBody, body);
      Names inner = assignable;
      inner.insert(d.name);
      checkAssigns(d.rest, inner);
    }
    void operator()(const Assign& s) {
      if (!assignable.count(s.name))
        throw ScopeError(ScopeErrorKind::NotAssignable, s.name, self->pos);
      checkAssigns(s.rhs, assignable);
    }
    void operator()(const If& f) {
      checkAssigns(f.cond, assignable);
      checkAssigns(f.thenBranch, assignable);
      checkAssigns(f.elseBranch, assignable);
    }
    void operator()(const IfStmt& f) {
      checkAssigns(f.cond, assignable);
      checkAssigns(f.thenBranch, assignable);
      checkAssigns(f.elseBranch, assignable);
    }
    void operator()(const While& w) {
      checkAssigns(w.cond, assignable);
      checkAssigns(w.body, assignable);
    }
    void operator()(const Seq& s) {
      for (const auto& st : s.stmts) checkAssigns(st, assignable);
      checkAssigns(s.result, assignable);
    }
    void operator()(const Assert& s) { checkAssigns(s.cond, assignable); }
    void operator()(const ListLit& l) {
      for (const auto& e : l.elems) checkAssigns(e, assignable);
    }
  };
  std::visit(Walk{assignable, a}, a->node);
}

struct Elab {
  Expr asExpr(const AstPtr& a, Names bound) {
    return [this, a, bound = std::move(bound)](BuildContext& c) {
      return exprOf(c, a, bound);
    };
  }

  Stmt asStmt(const AstPtr& a, Names bound) {
    return [this, a, bound = std::move(bound)](BuildContext& c) { exprOf(c, a, bound); };
  }

  void checkBindable(const std::string& name, SourcePos pos) {
    if (isReservedName(name)) throw ScopeError(ScopeErrorKind::ReservedName, name, pos);
  }

  Val exprOf(BuildContext& c, const AstPtr& a, const Names& bound) {
    struct Visit {
      Elab& e;
      BuildContext& c;
      const AstPtr& self;
      const Names& bound;

      Val operator()(const IntLit& n) {
        return BuildContext::freeVal(std::to_string(n.value));
      }
      Val operator()(const BoolLit& b) {
        return BuildContext::freeVal(b.value ? "true" : "false");
      }
      Val operator()(const UnitLit&) { return BuildContext::freeVal("unit"); }
      Val operator()(const VarRef& v) {
        if (v.name == "unit" || bound.count(v.name)) return BuildContext::freeVal(v.name);
        throw ScopeError(ScopeErrorKind::Unbound, v.name, self->pos);
      }
      Val operator()(const Lambda& l) {
        e.checkBindable(l.param, self->pos);
        Names inner = bound;
        inner.insert(l.param);
        return c.defAbs(l.param, e.asExpr(l.body, inner));
      }
      Val operator()(const CallUnit& f) {
        return c.applyFn(e.asExpr(f.fun, bound), unitLit());
      }
      Val operator()(const Call& f) {
        return c.applyFn(e.asExpr(f.fun, bound), e.asExpr(f.arg, bound));
      }
      Val operator()(const BinOp& b) {
        const char* name = nullptr;
        switch (b.op) {
          case BinOpKind::Eq: name = "eq"; break;
          case BinOpKind::Gt: name = "gq"; break;
          case BinOpKind::Sub: name = "sub"; break;
          case BinOpKind::Add: name = "add"; break;
        }
        return prim2(c, name, e.asExpr(b.lhs, bound), e.asExpr(b.rhs, bound));
      }
      Val operator()(const NotOp& n) {
        return prim1(c, "not", e.asExpr(n.operand, bound));
      }
      Val operator()(const ValDecl& v) {
        e.checkBindable(v.name, self->pos);
        Names inner = bound;
        inner.insert(v.name);
        return c.val(v.name, e.asExpr(v.rhs, bound), e.asExpr(v.rest, inner));
      }
      Val operator()(const DefDecl& d) {
        e.checkBindable(d.name, self->pos);
        std::string param = d.param.value_or("_");
        if (d.param) e.checkBindable(*d.param, self->pos);
        Names fnBound = bound;
        if (d.param) fnBound.insert(*d.param);
        Names inner = bound;
        inner.insert(d.name);
        Expr fn = [this_ = &e, param, body = d.fnBody, fnBound](BuildContext& cc) {
          return cc.defAbs(param, this_->asExpr(body, fnBound));
        };
        return c.val(d.name, fn, e.asExpr(d.rest, inner));
      }
      Val operator()(const Assign& s) {
        try {
          c.assign(s.name, e.asExpr(s.rhs, bound));
        } catch (const NotAssignableError&) {
          throw ScopeError(ScopeErrorKind::NotAssignable, s.name, self->pos);
        }
        return BuildContext::freeVal("unit");
      }
      Val operator()(const If& f) {
        return cond(c, e.asExpr(f.cond, bound), e.asExpr(f.thenBranch, bound),
                    e.asExpr(f.elseBranch, bound));
      }
      Val operator()(const IfStmt& f) {
        cond_(c, e.asExpr(f.cond, bound), e.asStmt(f.thenBranch, bound),
              e.asStmt(f.elseBranch, bound));
        return BuildContext::freeVal("unit");
      }
      Val operator()(const While& w) {
        while_(c, e.asExpr(w.cond, bound), e.asStmt(w.body, bound));
        return BuildContext::freeVal("unit");
      }
      Val operator()(const Seq& s) {
        for (const auto& st : s.stmts) e.exprOf(c, st, bound);
        return e.exprOf(c, s.result, bound);
      }
      Val operator()(const Assert& s) {
        prim1(c, "assert", e.asExpr(s.cond, bound));
        return BuildContext::freeVal("unit");
      }
      Val operator()(const ListLit&) {
        throw UnsupportedError(self->pos, "list literals are not supported");
      }
    };
    return std::visit(Visit{*this, c, a, bound}, a->node);
  }
};

}  // namespace

Term elaborate(const AstPtr& program, EvalOrder order) {
  checkAssigns(program, {});
  Elab e;
  return buildProgram([&](BuildContext& c) { return e.exprOf(c, program, {}); }, order);
}

// ---------------------------------------------------------------------------
// Reference interpreter.

namespace {

RefVal mkRef(RefValue v) { return std::make_shared<RefValue>(std::move(v)); }

struct FuelOut {};
struct RefFail {
  RefResult::Status status;
  std::string detail;
};

struct Interp {
  std::uint64_t fuel;

  void charge() {
    if (fuel == 0) throw FuelOut{};
    --fuel;
  }

  using Env = std::map<std::string, RefVal>;

  std::int64_t asInt(const RefVal& v, const char* what) {
    if (const auto* i = std::get_if<std::int64_t>(&v->v)) return *i;
    throw RefFail{RefResult::Status::Error, std::string(what) + ": expected an integer"};
  }
  bool asBool(const RefVal& v, const char* what) {
    if (const auto* b = std::get_if<bool>(&v->v)) return *b;
    throw RefFail{RefResult::Status::Error, std::string(what) + ": expected a boolean"};
  }

  RefVal apply(const RefVal& f, const RefVal& arg) {
    const auto* clo = std::get_if<RefClosure>(&f->v);
    if (!clo) throw RefFail{RefResult::Status::Error, "called a non-function value"};
    charge();
    Env env = clo->env;
    Names assignable;
    if (clo->param) {
      env[*clo->param] = arg;
      assignable.insert(*clo->param);
    }
    return eval(clo->body, env, assignable);
  }

  RefVal eval(const AstPtr& a, Env& env, Names& assignable) {
    struct Visit {
      Interp& in;
      const AstPtr& self;
      Env& env;
      Names& assignable;

      RefVal operator()(const IntLit& n) { return mkRef({n.value}); }
      RefVal operator()(const BoolLit& b) { return mkRef({b.value}); }
      RefVal operator()(const UnitLit&) { return mkRef({std::monostate{}}); }
      RefVal operator()(const VarRef& v) {
        if (v.name == "unit") return mkRef({std::monostate{}});
        auto it = env.find(v.name);
        if (it == env.end())
          throw RefFail{RefResult::Status::Error, v.name + " is not bound here."};
        return it->second;
      }
      RefVal operator()(const Lambda& l) {
        return mkRef({RefClosure{l.param, l.body, env}});
      }
      RefVal operator()(const CallUnit& f) {
        RefVal fv = in.eval(f.fun, env, assignable);
        return in.apply(fv, mkRef({std::monostate{}}));
      }
      RefVal operator()(const Call& f) {
        RefVal fv = in.eval(f.fun, env, assignable);
        RefVal av = in.eval(f.arg, env, assignable);
        return in.apply(fv, av);
      }
      RefVal operator()(const BinOp& b) {
        RefVal l = in.eval(b.lhs, env, assignable);
        RefVal r = in.eval(b.rhs, env, assignable);
        in.charge();
        std::int64_t x = in.asInt(l, "binary operator");
        std::int64_t y = in.asInt(r, "binary operator");
        switch (b.op) {
          case BinOpKind::Eq: return mkRef({x == y});
          case BinOpKind::Gt: return mkRef({x > y});
          case BinOpKind::Sub: return mkRef({x - y});
          case BinOpKind::Add: return mkRef({x + y});
        }
        throw RefFail{RefResult::Status::Error, "bad operator"};
      }
      RefVal operator()(const NotOp& n) {
        RefVal v = in.eval(n.operand, env, assignable);
        return mkRef({!in.asBool(v, "not")});
      }
      RefVal operator()(const ValDecl& v) {
        RefVal rv = in.eval(v.rhs, env, assignable);
        return in.withBinding(v.name, rv, v.rest, env, assignable);
      }
      RefVal operator()(const DefDecl& d) {
        RefVal fn = mkRef({RefClosure{d.param, d.fnBody, env}});
        return in.withBinding(d.name, fn, d.rest, env, assignable);
      }
      RefVal operator()(const Assign& s) {
        if (!assignable.count(s.name))
          throw RefFail{RefResult::Status::Error, s.name + " cannot be assigned here."};
        env[s.name] = in.eval(s.rhs, env, assignable);
        return mkRef({std::monostate{}});
      }
      RefVal operator()(const If& f) {
        bool b = in.asBool(in.eval(f.cond, env, assignable), "if");
        return in.eval(b ? f.thenBranch : f.elseBranch, env, assignable);
      }
      RefVal operator()(const IfStmt& f) {
        bool b = in.asBool(in.eval(f.cond, env, assignable), "if");
        in.eval(b ? f.thenBranch : f.elseBranch, env, assignable);
        return mkRef({std::monostate{}});
      }
      RefVal operator()(const While& w) {
        while (true) {
          in.charge();
          if (!in.asBool(in.eval(w.cond, env, assignable), "while")) break;
          in.eval(w.body, env, assignable);
        }
        return mkRef({std::monostate{}});
      }
      RefVal operator()(const Seq& s) {
        for (const auto& st : s.stmts) in.eval(st, env, assignable);
        return in.eval(s.result, env, assignable);
      }
      RefVal operator()(const Assert& s) {
        if (!in.asBool(in.eval(s.cond, env, assignable), "assert"))
          throw RefFail{RefResult::Status::AssertFailed, "assertion failed"};
        return mkRef({std::monostate{}});
      }
      RefVal operator()(const ListLit&) {
        throw RefFail{RefResult::Status::Error, "list literals are not supported"};
      }
    };
    return std::visit(Visit{*this, a, env, assignable}, a->node);
  }

  RefVal withBinding(const std::string& name, const RefVal& value, const AstPtr& rest,
                     Env& env, Names& assignable) {
    std::optional<RefVal> savedVal;
    if (auto it = env.find(name); it != env.end()) savedVal = it->second;
    bool wasAssignable = assignable.count(name) > 0;
    env[name] = value;
    assignable.insert(name);
    RefVal out = eval(rest, env, assignable);
    if (savedVal)
      env[name] = *savedVal;
    else
      env.erase(name);
    if (!wasAssignable) assignable.erase(name);
    return out;
  }
};

}  // namespace

RefResult referenceInterpret(const AstPtr& program, const std::vector<std::int64_t>& args,
                             std::uint64_t fuel) {
  Interp in{fuel};
  try {
    Interp::Env env;
    Names assignable;
    RefVal v = in.eval(program, env, assignable);
    for (std::int64_t a : args) v = in.apply(v, mkRef({a}));
    return RefResult{RefResult::Status::Ok, v, ""};
  } catch (const FuelOut&) {
    return RefResult{RefResult::Status::FuelExhausted, nullptr, ""};
  } catch (const RefFail& f) {
    return RefResult{f.status, nullptr, f.detail};
  }
}

std::string showRefVal(const RefVal& v) {
  if (!v) return "<none>";
  struct Show {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::monostate) const { return "()"; }
    std::string operator()(const RefClosure&) const { return "<fun>"; }
  };
  return std::visit(Show{}, v->v);
}

}  // namespace cpsc::frontend
