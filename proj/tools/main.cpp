// cpsc: compile a small imperative source language to pure CPS lambda terms.
//
// Exit codes: 0 success, 1 usage, 2 parse/unsupported, 3 scope error,
// 4 runtime stuck or failed assertion, 5 step budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpsc/frontend.hpp"
#include "cpsc/normalize.hpp"
#include "cpsc/term.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitScope = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitBudget = 5;

struct Options {
  std::string command;
  std::string input;
  std::string format = "text";
  bool normalize = false;
  std::string evalOrder = "ltr";
  std::optional<std::string> argsText;
  std::uint64_t maxSteps = 1'000'000;
};

std::string displayName(const std::string& path) {
  return path == "-" ? "<stdin>" : path;
}

void diagnose(const Options& opt, cpsc::frontend::SourcePos pos, const std::string& msg) {
  std::cerr << displayName(opt.input) << ":" << pos.line << ":" << pos.col << ": " << msg
            << "\n";
}

bool readSource(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    out = ss.str();
    return true;
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  out = ss.str();
  return true;
}

bool parseArgList(const std::string& text, std::vector<std::int64_t>& out) {
  if (text.empty()) return true;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      return false;
    }
    if (pos != item.size()) return false;
    out.push_back(v);
  }
  return true;
}

// parse + elaborate, reporting diagnostics; empty result means the exit code
// in `code` applies.
std::optional<cpsc::Term> compileSource(const Options& opt, int& code) {
  std::string src;
  if (!readSource(opt.input, src)) {
    std::cerr << "cannot open " << opt.input << "\n";
    code = kExitUsage;
    return std::nullopt;
  }
  cpsc::frontend::AstPtr ast;
  try {
    ast = cpsc::frontend::parse(src);
  } catch (const cpsc::frontend::ParseError& e) {
    diagnose(opt, e.pos, e.what());
    code = kExitParse;
    return std::nullopt;
  }
  cpsc::EvalOrder order = opt.evalOrder == "rtl" ? cpsc::EvalOrder::RightToLeft
                                                 : cpsc::EvalOrder::LeftToRight;
  std::optional<cpsc::Term> term;
  try {
    term = cpsc::frontend::elaborate(ast, order);
  } catch (const cpsc::frontend::ScopeError& e) {
    diagnose(opt, e.pos, e.what());
    code = kExitScope;
    return std::nullopt;
  } catch (const cpsc::frontend::UnsupportedError& e) {
    diagnose(opt, e.pos, e.what());
    code = kExitParse;
    return std::nullopt;
  }
  if (opt.normalize) {
    cpsc::NormalizeResult r = cpsc::betaEtaNormalize(*term, {opt.maxSteps});
    if (!r.ok()) {
      std::cerr << "normalization exceeded " << opt.maxSteps << " steps\n";
      code = kExitBudget;
      return std::nullopt;
    }
    term = *r.term;
  }
  code = kExitOk;
  return term;
}

int cmdCompile(const Options& opt) {
  int code = kExitOk;
  std::optional<cpsc::Term> term = compileSource(opt, code);
  if (!term) return code;
  if (opt.format == "json")
    std::cout << cpsc::renderJson(*term) << "\n";
  else
    std::cout << cpsc::renderText(*term) << "\n";
  return kExitOk;
}

int cmdRun(const Options& opt) {
  std::vector<std::int64_t> args;
  if (opt.argsText && !parseArgList(*opt.argsText, args)) {
    std::cerr << "--args expects comma-separated integers\n";
    return kExitUsage;
  }
  int code = kExitOk;
  std::optional<cpsc::Term> term = compileSource(opt, code);
  if (!term) return code;
  cpsc::EvalResult r = cpsc::applyCps(*term, args, {opt.maxSteps});
  switch (r.status) {
    case cpsc::EvalResult::Status::Ok:
      std::cout << cpsc::showValue(r.value) << "\n";
      return kExitOk;
    case cpsc::EvalResult::Status::BudgetExceeded:
      std::cerr << "evaluation exceeded " << opt.maxSteps << " steps\n";
      return kExitBudget;
    case cpsc::EvalResult::Status::Stuck:
      std::cerr << "runtime error: " << cpsc::stuckReasonName(*r.stuck)
                << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
      return kExitRuntime;
  }
  return kExitRuntime;
}

int cmdCheck(const Options& opt) {
  int code = kExitOk;
  std::optional<cpsc::Term> term = compileSource(opt, code);
  if (!term) return code;
  std::cout << "ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"compile a small imperative language to pure CPS lambda terms", "cpsc"};
  app.require_subcommand(1);

  auto addCommon = [&](CLI::App* sub) {
    sub->add_option("input", opt.input, "source file, or - for stdin")->required();
    sub->add_option("--eval-order", opt.evalOrder, "application evaluation order")
        ->check(CLI::IsMember({"ltr", "rtl"}));
    sub->add_option("--max-steps", opt.maxSteps, "reduction/evaluation step budget")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* compile = app.add_subcommand("compile", "print the compiled term");
  addCommon(compile);
  compile->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  compile->add_flag("--normalize", opt.normalize, "beta-eta normalize before printing");

  CLI::App* run = app.add_subcommand("run", "compile and evaluate");
  addCommon(run);
  run->add_flag("--normalize", opt.normalize, "beta-eta normalize before evaluating");
  std::string argsText;
  run->add_option("--args", argsText, "comma-separated integer arguments");

  CLI::App* check = app.add_subcommand("check", "parse and scope-check only");
  addCommon(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (run->parsed() && run->count("--args") > 0) opt.argsText = argsText;

  try {
    if (compile->parsed()) return cmdCompile(opt);
    if (run->parsed()) return cmdRun(opt);
    if (check->parsed()) return cmdCheck(opt);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
