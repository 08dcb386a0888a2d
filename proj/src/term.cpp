#include "cpsc/term.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"

namespace cpsc {

std::string Val::show() const {
  if (isInter()) return "%" + std::to_string(index());
  return name();
}

Term Term::var(int depth) {
  return Term(std::make_shared<const TermNode>(VarNode{depth}));
}
Term Term::freeRef(Val v) {
  return Term(std::make_shared<const TermNode>(FreeNode{std::move(v)}));
}
Term Term::app(Term fun, Term arg) {
  return Term(std::make_shared<const TermNode>(AppNode{std::move(fun), std::move(arg)}));
}
Term Term::abs(std::string hint, Term body) {
  return Term(std::make_shared<const TermNode>(AbsNode{std::move(hint), std::move(body)}));
}
Term Term::fix(std::string hint, Term body) {
  return Term(std::make_shared<const TermNode>(FixNode{std::move(hint), std::move(body)}));
}
Term Term::exitHole(int exitIndex, std::vector<Term> thrown) {
  return Term(std::make_shared<const TermNode>(ExitNode{exitIndex, std::move(thrown), {}}));
}
Term Term::exitHole(int exitIndex, std::vector<Term> thrown, std::vector<Capture> captures) {
  return Term(std::make_shared<const TermNode>(
      ExitNode{exitIndex, std::move(thrown), std::move(captures)}));
}

Term::Tag Term::tag() const { return static_cast<Tag>(node_->index()); }
const VarNode& Term::asVar() const { return std::get<VarNode>(*node_); }
const FreeNode& Term::asFree() const { return std::get<FreeNode>(*node_); }
const AppNode& Term::asApp() const { return std::get<AppNode>(*node_); }
const AbsNode& Term::asAbs() const { return std::get<AbsNode>(*node_); }
const FixNode& Term::asFix() const { return std::get<FixNode>(*node_); }
const ExitNode& Term::asExit() const { return std::get<ExitNode>(*node_); }

namespace {

Term abstractAt(const Val& match, const Term& t, int depth) {
  switch (t.tag()) {
    case Term::Tag::Var: {
      int k = t.asVar().depth;
      return k >= depth ? Term::var(k + 1) : t;
    }
    case Term::Tag::Free:
      return t.asFree().val == match ? Term::var(depth) : t;
    case Term::Tag::App: {
      const auto& a = t.asApp();
      return Term::app(abstractAt(match, a.fun, depth), abstractAt(match, a.arg, depth));
    }
    case Term::Tag::Abs: {
      const auto& a = t.asAbs();
      return Term::abs(a.hint, abstractAt(match, a.body, depth + 1));
    }
    case Term::Tag::Fix: {
      const auto& f = t.asFix();
      return Term::fix(f.hint, abstractAt(match, f.body, depth + 1));
    }
    case Term::Tag::Exit: {
      const auto& e = t.asExit();
      std::vector<Term> thrown;
      thrown.reserve(e.thrown.size());
      for (const auto& s : e.thrown) thrown.push_back(abstractAt(match, s, depth));
      std::vector<Term::Capture> caps;
      caps.reserve(e.captures.size() + 1);
      for (const auto& c : e.captures)
        caps.push_back({c.val, c.depth >= depth ? c.depth + 1 : c.depth});
      caps.push_back({match, depth});
      return Term::exitHole(e.index, std::move(thrown), std::move(caps));
    }
  }
  throw std::logic_error("abstractAt: bad tag");
}

Term shiftAt(const Term& t, int delta, int cutoff) {
  switch (t.tag()) {
    case Term::Tag::Var: {
      int k = t.asVar().depth;
      return k >= cutoff ? Term::var(k + delta) : t;
    }
    case Term::Tag::Free:
      return t;
    case Term::Tag::App: {
      const auto& a = t.asApp();
      return Term::app(shiftAt(a.fun, delta, cutoff), shiftAt(a.arg, delta, cutoff));
    }
    case Term::Tag::Abs: {
      const auto& a = t.asAbs();
      return Term::abs(a.hint, shiftAt(a.body, delta, cutoff + 1));
    }
    case Term::Tag::Fix: {
      const auto& f = t.asFix();
      return Term::fix(f.hint, shiftAt(f.body, delta, cutoff + 1));
    }
    case Term::Tag::Exit: {
      const auto& e = t.asExit();
      std::vector<Term> thrown;
      for (const auto& s : e.thrown) thrown.push_back(shiftAt(s, delta, cutoff));
      std::vector<Term::Capture> caps;
      for (const auto& c : e.captures)
        caps.push_back({c.val, c.depth >= cutoff ? c.depth + delta : c.depth});
      return Term::exitHole(e.index, std::move(thrown), std::move(caps));
    }
  }
  throw std::logic_error("shiftAt: bad tag");
}

Term instantiateAt(const Term& replacement, const Term& t, int depth) {
  switch (t.tag()) {
    case Term::Tag::Var: {
      int k = t.asVar().depth;
      if (k == depth) return shiftAt(replacement, depth, 0);
      return k > depth ? Term::var(k - 1) : t;
    }
    case Term::Tag::Free:
      return t;
    case Term::Tag::App: {
      const auto& a = t.asApp();
      return Term::app(instantiateAt(replacement, a.fun, depth),
                       instantiateAt(replacement, a.arg, depth));
    }
    case Term::Tag::Abs: {
      const auto& a = t.asAbs();
      return Term::abs(a.hint, instantiateAt(replacement, a.body, depth + 1));
    }
    case Term::Tag::Fix: {
      const auto& f = t.asFix();
      return Term::fix(f.hint, instantiateAt(replacement, f.body, depth + 1));
    }
    case Term::Tag::Exit: {
      const auto& e = t.asExit();
      std::vector<Term> thrown;
      for (const auto& s : e.thrown) thrown.push_back(instantiateAt(replacement, s, depth));
      std::vector<Term::Capture> caps;
      for (const auto& c : e.captures) {
        if (c.depth == depth)
          throw std::logic_error("instantiate would eliminate a binder pending in an exit hole");
        caps.push_back({c.val, c.depth > depth ? c.depth - 1 : c.depth});
      }
      return Term::exitHole(e.index, std::move(thrown), std::move(caps));
    }
  }
  throw std::logic_error("instantiateAt: bad tag");
}

}  // namespace

Term abstract(const Val& match, const Term& t) { return abstractAt(match, t, 0); }

Term instantiate(const Term& replacement, const Term& body) {
  return instantiateAt(replacement, body, 0);
}

Term shiftTerm(const Term& t, int delta, int cutoff) { return shiftAt(t, delta, cutoff); }

bool alphaEq(const Term& a, const Term& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Term::Tag::Var:
      return a.asVar().depth == b.asVar().depth;
    case Term::Tag::Free:
      return a.asFree().val == b.asFree().val;
    case Term::Tag::App:
      return alphaEq(a.asApp().fun, b.asApp().fun) && alphaEq(a.asApp().arg, b.asApp().arg);
    case Term::Tag::Abs:
      return alphaEq(a.asAbs().body, b.asAbs().body);
    case Term::Tag::Fix:
      return alphaEq(a.asFix().body, b.asFix().body);
    case Term::Tag::Exit: {
      const auto& x = a.asExit();
      const auto& y = b.asExit();
      if (x.index != y.index || x.thrown.size() != y.thrown.size() ||
          x.captures != y.captures)
        return false;
      for (size_t i = 0; i < x.thrown.size(); ++i)
        if (!alphaEq(x.thrown[i], y.thrown[i])) return false;
      return true;
    }
  }
  return false;
}

namespace {

std::optional<ScopeViolation> scopeCheckAt(const Term& t, int binders, const std::string& path) {
  switch (t.tag()) {
    case Term::Tag::Var: {
      int k = t.asVar().depth;
      if (k < 0 || k >= binders)
        return ScopeViolation{path, "Var(" + std::to_string(k) + ") under " +
                                        std::to_string(binders) + " binders"};
      return std::nullopt;
    }
    case Term::Tag::Free:
      return std::nullopt;
    case Term::Tag::App: {
      if (auto v = scopeCheckAt(t.asApp().fun, binders, path + "/App.fun")) return v;
      return scopeCheckAt(t.asApp().arg, binders, path + "/App.arg");
    }
    case Term::Tag::Abs:
      return scopeCheckAt(t.asAbs().body, binders + 1, path + "/Abs.body");
    case Term::Tag::Fix:
      return scopeCheckAt(t.asFix().body, binders + 1, path + "/Fix.body");
    case Term::Tag::Exit: {
      const auto& e = t.asExit();
      for (size_t i = 0; i < e.thrown.size(); ++i) {
        if (auto v = scopeCheckAt(e.thrown[i], binders,
                                  path + "/Exit.thrown[" + std::to_string(i) + "]"))
          return v;
      }
      for (const auto& c : e.captures) {
        if (c.depth < 0 || c.depth >= binders)
          return ScopeViolation{path + "/Exit.capture",
                                "capture depth " + std::to_string(c.depth) + " under " +
                                    std::to_string(binders) + " binders"};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ScopeViolation> scopeCheck(const Term& t, int enclosingBinders) {
  return scopeCheckAt(t, enclosingBinders, "");
}

namespace {
void collectFrees(const Term& t, std::vector<Val>& out, std::set<Val>& seen) {
  switch (t.tag()) {
    case Term::Tag::Var:
      return;
    case Term::Tag::Free:
      if (seen.insert(t.asFree().val).second) out.push_back(t.asFree().val);
      return;
    case Term::Tag::App:
      collectFrees(t.asApp().fun, out, seen);
      collectFrees(t.asApp().arg, out, seen);
      return;
    case Term::Tag::Abs:
      collectFrees(t.asAbs().body, out, seen);
      return;
    case Term::Tag::Fix:
      collectFrees(t.asFix().body, out, seen);
      return;
    case Term::Tag::Exit:
      for (const auto& s : t.asExit().thrown) collectFrees(s, out, seen);
      return;
  }
}
}  // namespace

std::vector<Val> freeVals(const Term& t) {
  std::vector<Val> out;
  std::set<Val> seen;
  collectFrees(t, out, seen);
  return out;
}

int countExitHoles(const Term& t) {
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return 0;
    case Term::Tag::App:
      return countExitHoles(t.asApp().fun) + countExitHoles(t.asApp().arg);
    case Term::Tag::Abs:
      return countExitHoles(t.asAbs().body);
    case Term::Tag::Fix:
      return countExitHoles(t.asFix().body);
    case Term::Tag::Exit: {
      int n = 1;
      for (const auto& s : t.asExit().thrown) n += countExitHoles(s);
      return n;
    }
  }
  return 0;
}

int countExitHoles(const Term& t, int exitIndex) {
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return 0;
    case Term::Tag::App:
      return countExitHoles(t.asApp().fun, exitIndex) + countExitHoles(t.asApp().arg, exitIndex);
    case Term::Tag::Abs:
      return countExitHoles(t.asAbs().body, exitIndex);
    case Term::Tag::Fix:
      return countExitHoles(t.asFix().body, exitIndex);
    case Term::Tag::Exit: {
      const auto& e = t.asExit();
      int n = e.index == exitIndex ? 1 : 0;
      for (const auto& s : e.thrown) n += countExitHoles(s, exitIndex);
      return n;
    }
  }
  return 0;
}

bool hasExitHoles(const Term& t) { return countExitHoles(t) > 0; }

int nodeCount(const Term& t) {
  switch (t.tag()) {
    case Term::Tag::Var:
    case Term::Tag::Free:
      return 1;
    case Term::Tag::App:
      return 1 + nodeCount(t.asApp().fun) + nodeCount(t.asApp().arg);
    case Term::Tag::Abs:
      return 1 + nodeCount(t.asAbs().body);
    case Term::Tag::Fix:
      return 1 + nodeCount(t.asFix().body);
    case Term::Tag::Exit: {
      int n = 1;
      for (const auto& s : t.asExit().thrown) n += nodeCount(s);
      return n;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Text rendering and parsing.
//
//   term := abs | fix | app
//   abs  := "\" NAME ". " term
//   fix  := "fix(" "\" NAME ". " term ")"
//   app  := atom { " " atom }           (left-assoc)
//   atom := NAME | "%"<nat> | "(" term ")"
//
// NAME is an identifier ([A-Za-z_][A-Za-z0-9_']*) or an integer literal name
// (-?[0-9]+). Binder names are chosen from hints, uniquified with primes so
// no binder shadows an enclosing one or collides with any free name.

namespace {

bool isIdentName(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  return true;
}

void collectFreeNames(const Term& t, std::set<std::string>& out) {
  switch (t.tag()) {
    case Term::Tag::Var:
      return;
    case Term::Tag::Free:
      if (t.asFree().val.isFree()) out.insert(t.asFree().val.name());
      return;
    case Term::Tag::App:
      collectFreeNames(t.asApp().fun, out);
      collectFreeNames(t.asApp().arg, out);
      return;
    case Term::Tag::Abs:
      collectFreeNames(t.asAbs().body, out);
      return;
    case Term::Tag::Fix:
      collectFreeNames(t.asFix().body, out);
      return;
    case Term::Tag::Exit:
      for (const auto& s : t.asExit().thrown) collectFreeNames(s, out);
      return;
  }
}

struct Renderer {
  const std::set<std::string>& freeNames;
  std::vector<std::string> binders;  // innermost last

  std::string pickName(const std::string& hint) {
    std::string base = isIdentName(hint) && hint != "fix" ? hint : "x";
    std::string cand = base;
    auto taken = [&](const std::string& n) {
      if (n == "fix" || freeNames.count(n)) return true;
      return std::find(binders.begin(), binders.end(), n) != binders.end();
    };
    while (taken(cand)) cand += '\'';
    return cand;
  }

  void atom(const Term& t, std::string& out) {
    if (t.tag() == Term::Tag::Var || t.tag() == Term::Tag::Free) {
      render(t, out);
    } else {
      out += '(';
      render(t, out);
      out += ')';
    }
  }

  void render(const Term& t, std::string& out) {
    switch (t.tag()) {
      case Term::Tag::Var: {
        int k = t.asVar().depth;
        if (k >= 0 && k < static_cast<int>(binders.size()))
          out += binders[binders.size() - 1 - k];
        else
          out += "!" + std::to_string(k);
        return;
      }
      case Term::Tag::Free:
        out += t.asFree().val.show();
        return;
      case Term::Tag::App: {
        const auto& a = t.asApp();
        // fix(...) is self-delimiting, so it can head an application bare
        if (a.fun.tag() == Term::Tag::App || a.fun.tag() == Term::Tag::Fix) {
          render(a.fun, out);
        } else {
          atom(a.fun, out);
        }
        out += ' ';
        atom(a.arg, out);
        return;
      }
      case Term::Tag::Abs: {
        std::string n = pickName(t.asAbs().hint);
        out += '\\';
        out += n;
        out += ". ";
        binders.push_back(n);
        render(t.asAbs().body, out);
        binders.pop_back();
        return;
      }
      case Term::Tag::Fix: {
        std::string n = pickName(t.asFix().hint);
        out += "fix(\\";
        out += n;
        out += ". ";
        binders.push_back(n);
        render(t.asFix().body, out);
        binders.pop_back();
        out += ')';
        return;
      }
      case Term::Tag::Exit: {
        const auto& e = t.asExit();
        out += "⟨exit:" + std::to_string(e.index);
        for (const auto& s : e.thrown) {
          out += ' ';
          atom(s, out);
        }
        out += "⟩";
        return;
      }
    }
  }
};

}  // namespace

std::string renderText(const Term& t) {
  std::set<std::string> frees;
  collectFreeNames(t, frees);
  Renderer r{frees, {}};
  std::string out;
  r.render(t, out);
  return out;
}

namespace {

struct TermParser {
  const std::string& src;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw TermParseError(static_cast<int>(pos) + 1, msg);
  }

  void skipSpace() {
    while (pos < src.size() &&
           (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' || src[pos] == '\r'))
      ++pos;
  }

  bool atEnd() {
    skipSpace();
    return pos >= src.size();
  }

  char peek() { return pos < src.size() ? src[pos] : '\0'; }

  // Returns a NAME token (identifier or integer name), or empty if none here.
  std::string tryName() {
    skipSpace();
    size_t start = pos;
    if (pos < src.size() &&
        (std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                  src[pos] == '_' || src[pos] == '\''))
        ++pos;
      return src.substr(start, pos - start);
    }
    if (pos < src.size() &&
        (std::isdigit(static_cast<unsigned char>(src[pos])) ||
         (src[pos] == '-' && pos + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[pos + 1]))))) {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      return src.substr(start, pos - start);
    }
    return "";
  }

  Term nameRef(const std::string& name, const std::vector<std::string>& binders) {
    for (int d = 0; d < static_cast<int>(binders.size()); ++d) {
      if (binders[binders.size() - 1 - d] == name) return Term::var(d);
    }
    return Term::freeRef(Val::freeName(name));
  }

  std::optional<Term> tryAtom(std::vector<std::string>& binders) {
    skipSpace();
    if (pos >= src.size()) return std::nullopt;
    char c = src[pos];
    if (c == '%') {
      ++pos;
      if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
        fail("expected index after '%'");
      size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      return Term::freeRef(Val::inter(std::stoi(src.substr(start, pos - start))));
    }
    if (c == '(') {
      ++pos;
      Term t = parseTerm(binders);
      skipSpace();
      if (peek() != ')') fail("expected ')'");
      ++pos;
      return t;
    }
    if (src.compare(pos, 3, "⟨") == 0) fail("exit holes cannot be parsed");
    size_t save = pos;
    std::string name = tryName();
    if (name.empty()) return std::nullopt;
    if (name == "fix" && peek() == '(') {
      pos = save;
      return std::nullopt;  // handled as a fix form by parseTerm
    }
    return nameRef(name, binders);
  }

  Term parseTerm(std::vector<std::string>& binders) {
    skipSpace();
    if (peek() == '\\') {
      ++pos;
      std::string name = tryName();
      if (name.empty()) fail("expected binder name after '\\'");
      skipSpace();
      if (peek() != '.') fail("expected '.' after binder name");
      ++pos;
      binders.push_back(name);
      Term body = parseTerm(binders);
      binders.pop_back();
      return Term::abs(name, body);
    }
    size_t save = pos;
    std::string name = tryName();
    std::optional<Term> head;
    if (name == "fix" && peek() == '(') {
      ++pos;  // consume '('
      skipSpace();
      if (peek() != '\\') fail("expected '\\' after 'fix('");
      ++pos;
      std::string binder = tryName();
      if (binder.empty()) fail("expected binder name in fix");
      skipSpace();
      if (peek() != '.') fail("expected '.' after fix binder");
      ++pos;
      binders.push_back(binder);
      Term body = parseTerm(binders);
      binders.pop_back();
      skipSpace();
      if (peek() != ')') fail("expected ')' closing fix");
      ++pos;
      head = Term::fix(binder, body);
    } else {
      pos = save;
      head = tryAtom(binders);
    }
    if (!head) fail("expected term");
    Term t = *head;
    while (true) {
      size_t mark = pos;
      std::optional<Term> next;
      {
        skipSpace();
        if (pos < src.size() && src[pos] == '\\') break;  // abs only at term level
        size_t m2 = pos;
        std::string n = tryName();
        if (n == "fix" && peek() == '(') {
          pos = m2;
          break;
        }
        pos = m2;
        next = tryAtom(binders);
      }
      if (!next) {
        pos = mark;
        break;
      }
      t = Term::app(t, *next);
    }
    return t;
  }
};

}  // namespace

Term parseTermText(const std::string& text) {
  TermParser p{text};
  std::vector<std::string> binders;
  Term t = p.parseTerm(binders);
  if (!p.atEnd()) p.fail("unexpected trailing input");
  return t;
}

namespace {
nlohmann::ordered_json toJson(const Term& t) {
  using J = nlohmann::ordered_json;
  switch (t.tag()) {
    case Term::Tag::Var:
      return J{{"tag", "Var"}, {"depth", t.asVar().depth}};
    case Term::Tag::Free: {
      const Val& v = t.asFree().val;
      if (v.isFree()) return J{{"tag", "Free"}, {"name", v.name()}};
      return J{{"tag", "Inter"}, {"index", v.index()}};
    }
    case Term::Tag::App:
      return J{{"tag", "App"}, {"fun", toJson(t.asApp().fun)}, {"arg", toJson(t.asApp().arg)}};
    case Term::Tag::Abs: {
      const auto& a = t.asAbs();
      if (a.hint.empty()) return J{{"tag", "Abs"}, {"body", toJson(a.body)}};
      return J{{"tag", "Abs"}, {"hint", a.hint}, {"body", toJson(a.body)}};
    }
    case Term::Tag::Fix: {
      const auto& f = t.asFix();
      if (f.hint.empty()) return J{{"tag", "Fix"}, {"body", toJson(f.body)}};
      return J{{"tag", "Fix"}, {"hint", f.hint}, {"body", toJson(f.body)}};
    }
    case Term::Tag::Exit: {
      const auto& e = t.asExit();
      J thrown = J::array();
      for (const auto& s : e.thrown) thrown.push_back(toJson(s));
      return J{{"tag", "Exit"}, {"index", e.index}, {"thrown", std::move(thrown)}};
    }
  }
  throw std::logic_error("toJson: bad tag");
}
}  // namespace

std::string renderJson(const Term& t) { return toJson(t).dump(); }

}  // namespace cpsc
