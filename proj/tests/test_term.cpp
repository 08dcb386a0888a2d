#include "cpsc/term.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "fuzz_support.hpp"

using namespace cpsc;

namespace {
Val fv(const std::string& n) { return Val::freeName(n); }
Term fr(const std::string& n) { return Term::freeRef(fv(n)); }
}  // namespace

TEST_CASE("Val basics") {
  CHECK(Val::inter(3).isInter());
  CHECK(Val::inter(3).index() == 3);
  CHECK(fv("x").isFree());
  CHECK(fv("x").name() == "x");
  CHECK(Val::inter(3).show() == "%3");
  CHECK(fv("ab'").show() == "ab'");
  CHECK(Val::inter(1) == Val::inter(1));
  CHECK(Val::inter(1) != fv("1"));
  CHECK(fv("a") != fv("b"));
}

TEST_CASE("abstract turns matching frees into the new bound variable") {
  Term t = Term::app(fr("x"), fr("y"));
  Term b = abstract(fv("x"), t);
  CHECK(alphaEq(b, Term::app(Term::var(0), fr("y"))));

  // under a binder the index deepens
  Term u = Term::abs("z", Term::app(Term::var(0), fr("x")));
  Term bu = abstract(fv("x"), u);
  CHECK(alphaEq(bu, Term::abs("z", Term::app(Term::var(0), Term::var(1)))));
}

TEST_CASE("abstract shifts dangling indices up") {
  CHECK(alphaEq(abstract(fv("x"), Term::var(0)), Term::var(1)));
}

TEST_CASE("instantiate substitutes for the outermost binder") {
  // body of \_. (0 (\z. 1)); replacing with free a
  Term body = Term::app(Term::var(0), Term::abs("z", Term::var(1)));
  Term r = instantiate(fr("a"), body);
  CHECK(alphaEq(r, Term::app(fr("a"), Term::abs("z", fr("a")))));
  CHECK(alphaEq(instantiate(fr("a"), Term::var(1)), Term::var(0)));
}

TEST_CASE("instantiate after abstract is the identity") {
  fuzz::Rng rng(101);
  for (int i = 0; i < 60; ++i) {
    Term t = fuzz::genTerm(rng, 4, 0);
    Term back = instantiate(fr("m"), abstract(fv("m"), t));
    CHECK(alphaEq(back, t));
  }
}

TEST_CASE("shiftTerm respects the cutoff") {
  Term t = Term::abs("x", Term::app(Term::var(0), Term::var(1)));
  Term s = shiftTerm(t, 2, 0);
  CHECK(alphaEq(s, Term::abs("x", Term::app(Term::var(0), Term::var(3)))));
  CHECK(alphaEq(shiftTerm(Term::var(0), 5, 1), Term::var(0)));
}

TEST_CASE("alphaEq ignores hints and compares structure") {
  Term a = Term::abs("x", Term::var(0));
  Term b = Term::abs("completely_different", Term::var(0));
  CHECK(alphaEq(a, b));
  CHECK_FALSE(alphaEq(a, Term::abs("x", fr("x"))));
  CHECK_FALSE(alphaEq(Term::fix("f", Term::var(0)), Term::abs("f", Term::var(0))));
}

TEST_CASE("scopeCheck finds dangling variables") {
  CHECK_FALSE(scopeCheck(Term::abs("x", Term::var(0))).has_value());
  auto v = scopeCheck(Term::var(0));
  REQUIRE(v.has_value());
  CHECK(v->detail.find("Var(0)") != std::string::npos);
  auto w = scopeCheck(Term::abs("x", Term::abs("y", Term::var(2))));
  REQUIRE(w.has_value());
  CHECK(w->path.find("Abs.body") != std::string::npos);
  // an extra ambient binder makes it legal
  CHECK_FALSE(scopeCheck(Term::var(0), 1).has_value());
}

TEST_CASE("scopeCheck validates exit hole captures") {
  Term hole = abstract(fv("a"), Term::exitHole(0, {}));  // capture at depth 0
  Term ok = Term::abs("a", hole);
  CHECK_FALSE(scopeCheck(ok).has_value());
  CHECK(scopeCheck(hole).has_value());  // capture points above the root
}

TEST_CASE("freeVals reports distinct frees in first-occurrence order") {
  Term t = Term::app(Term::app(fr("y"), fr("x")), Term::app(fr("y"), Term::freeRef(Val::inter(2))));
  auto vs = freeVals(t);
  REQUIRE(vs.size() == 3);
  CHECK(vs[0] == fv("y"));
  CHECK(vs[1] == fv("x"));
  CHECK(vs[2] == Val::inter(2));
}

TEST_CASE("node and hole counting") {
  Term t = Term::app(Term::abs("x", Term::var(0)), Term::exitHole(1, {fr("a")}));
  CHECK(nodeCount(t) == 5);
  CHECK(countExitHoles(t) == 1);
  CHECK(countExitHoles(t, 1) == 1);
  CHECK(countExitHoles(t, 0) == 0);
  CHECK(hasExitHoles(t));
  CHECK_FALSE(hasExitHoles(fr("a")));
}

TEST_CASE("renderText formats") {
  CHECK(renderText(Term::abs("k", Term::app(Term::var(0), fr("x")))) == "\\k. k x");
  CHECK(renderText(Term::app(Term::abs("x", Term::var(0)), fr("y"))) == "(\\x. x) y");
  CHECK(renderText(Term::app(Term::app(fr("f"), fr("x")), fr("y"))) == "f x y");
  CHECK(renderText(Term::app(fr("f"), Term::app(fr("x"), fr("y")))) == "f (x y)");
  Term loop = Term::app(Term::fix("loop", Term::abs("a", Term::app(Term::var(1), Term::var(0)))),
                        fr("i"));
  CHECK(renderText(loop) == "fix(\\loop. \\a. loop a) i");
  CHECK(renderText(Term::freeRef(Val::inter(7))) == "%7");
}

TEST_CASE("renderText uniquifies binder names") {
  CHECK(renderText(Term::abs("x", Term::abs("x", Term::app(Term::var(0), Term::var(1))))) ==
        "\\x. \\x'. x' x");
  CHECK(renderText(Term::abs("x", Term::app(Term::var(0), fr("x")))) == "\\x'. x' x");
  CHECK(renderText(Term::abs("", Term::var(0))) == "\\x. x");
  CHECK(renderText(Term::abs("fix", Term::var(0))) == "\\x. x");
  CHECK(renderText(Term::abs("007", Term::var(0))) == "\\x. x");
}

TEST_CASE("renderText shows exit holes but the parser rejects them") {
  Term t = Term::exitHole(2, {fr("a"), Term::app(fr("f"), fr("b"))});
  CHECK(renderText(t) == "⟨exit:2 a (f b)⟩");
  CHECK_THROWS_AS(parseTermText(renderText(t)), TermParseError);
}

TEST_CASE("parseTermText basics") {
  CHECK(alphaEq(parseTermText("\\k. k x"), Term::abs("k", Term::app(Term::var(0), fr("x")))));
  CHECK(alphaEq(parseTermText("(\\x. x) y"), Term::app(Term::abs("x", Term::var(0)), fr("y"))));
  CHECK(alphaEq(parseTermText("  \\k .  k   x "),
                Term::abs("k", Term::app(Term::var(0), fr("x")))));
  CHECK(alphaEq(parseTermText("fix(\\f. f) a"),
                Term::app(Term::fix("f", Term::var(0)), fr("a"))));
  CHECK(alphaEq(parseTermText("%12"), Term::freeRef(Val::inter(12))));
  CHECK(alphaEq(parseTermText("-3 0"), Term::app(fr("-3"), fr("0"))));
  // application is left-associative and binds tighter than abstraction bodies
  CHECK(alphaEq(parseTermText("\\f. f a b"),
                Term::abs("f", Term::app(Term::app(Term::var(0), fr("a")), fr("b")))));
  // 'fix' without '(' is an ordinary name
  CHECK(alphaEq(parseTermText("fix x"), Term::app(fr("fix"), fr("x"))));
}

TEST_CASE("parseTermText errors") {
  CHECK_THROWS_AS(parseTermText(""), TermParseError);
  CHECK_THROWS_AS(parseTermText("(x"), TermParseError);
  CHECK_THROWS_AS(parseTermText("\\. x"), TermParseError);
  CHECK_THROWS_AS(parseTermText("x )"), TermParseError);
  CHECK_THROWS_AS(parseTermText("fix(x)"), TermParseError);
  CHECK_THROWS_AS(parseTermText("%x"), TermParseError);
  try {
    parseTermText("x )");
    FAIL("expected a parse error");
  } catch (const TermParseError& e) {
    CHECK(e.position >= 1);
  }
}

TEST_CASE("text round-trip preserves terms up to alpha equivalence") {
  fuzz::Rng rng(2024);
  for (int i = 0; i < 80; ++i) {
    Term t = fuzz::genTerm(rng, 5, 0);
    Term back = parseTermText(renderText(t));
    CHECK(alphaEq(back, t));
  }
}

TEST_CASE("renderJson formats") {
  CHECK(renderJson(Term::abs("k", Term::app(Term::var(0), fr("x")))) ==
        R"({"tag":"Abs","hint":"k","body":{"tag":"App","fun":{"tag":"Var","depth":0},"arg":{"tag":"Free","name":"x"}}})");
  CHECK(renderJson(Term::abs("", Term::var(0))) == R"({"tag":"Abs","body":{"tag":"Var","depth":0}})");
  CHECK(renderJson(Term::freeRef(Val::inter(4))) == R"({"tag":"Inter","index":4})");
  CHECK(renderJson(Term::fix("f", Term::var(0))) ==
        R"({"tag":"Fix","hint":"f","body":{"tag":"Var","depth":0}})");
  CHECK(renderJson(Term::exitHole(1, {fr("a")})) ==
        R"({"tag":"Exit","index":1,"thrown":[{"tag":"Free","name":"a"}]})");
}
