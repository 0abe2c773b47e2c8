// Command-line front end for the lambda-box toolchain. Talks to the core
// exclusively through the C API in lambdabox.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lambdabox.h"

namespace {

// Exit codes: 0 success / "yes", 1 "no" / not found, 2 error.
constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

struct TermHandle {
  lb_term* t = nullptr;
  ~TermHandle() { lb_term_free(t); }
};

struct StringHandle {
  char* s = nullptr;
  ~StringHandle() { lb_string_free(s); }
};

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "error: " << msg;
  const char* detail = lb_last_error();
  if (detail && *detail) std::cerr << ": " << detail;
  std::cerr << "\n";
  std::exit(kExitError);
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) die("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lb_term* parse_file(const std::string& path, unsigned flags) {
  lb_term* t = nullptr;
  if (lb_term_parse(slurp(path).c_str(), flags, &t) != LB_OK)
    die("parse failure in '" + path + "'");
  return t;
}

lb_calc calc_of(const std::string& name) {
  if (name == "cbn") return LB_CALC_CBN;
  if (name == "cbv") return LB_CALC_CBV;
  if (name == "comp") return LB_CALC_COMP;
  die("unknown calculus '" + name + "' (expected cbn, cbv or comp)");
}

void print_json_or(bool json, const std::string& command,
                   const std::string& result, const std::string& extra_key = "",
                   const std::string& extra_val = "") {
  if (!json) {
    std::cout << result << "\n";
    return;
  }
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '"' || c == '\\') o += '\\';
      if (c == '\n') {
        o += "\\n";
        continue;
      }
      o += c;
    }
    return o;
  };
  std::cout << "{\"command\": \"" << esc(command) << "\", \"result\": \""
            << esc(result) << "\"";
  if (!extra_key.empty())
    std::cout << ", \"" << esc(extra_key) << "\": " << extra_val;
  std::cout << "}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lambda-box calculi toolchain"};
  app.require_subcommand(1);

  std::string calc = "cbn";
  std::string theory = "all";
  long fuel = 100000;
  std::size_t budget = 1000;
  bool trace = false;
  bool json = false;
  std::uint64_t seed = 1;

  // ---- check ----------------------------------------------------------
  std::string check_file;
  auto* check = app.add_subcommand("check", "infer the type of a closed term");
  check->add_option("file", check_file, "term file ('-' for stdin)")->required();
  check->add_flag("--json", json);

  // ---- norm -----------------------------------------------------------
  std::string norm_file;
  auto* norm = app.add_subcommand("norm", "normalize a term");
  norm->add_option("file", norm_file)->required();
  norm->add_option("--calc", calc, "cbn | cbv | comp");
  norm->add_option("--fuel", fuel);
  norm->add_flag("--trace", trace, "print one line per reduction step");
  norm->add_flag("--json", json);

  // ---- eq -------------------------------------------------------------
  std::string eq_a, eq_b;
  auto* eq = app.add_subcommand("eq", "decide equality of two terms");
  eq->add_option("a", eq_a)->required();
  eq->add_option("b", eq_b)->required();
  eq->add_option("--calc", calc, "cbn | cbv | comp | s4");
  eq->add_option("--fuel", fuel);
  eq->add_option("--budget", budget, "rewrite budget for --calc s4");
  eq->add_option("--theory", theory, "s4 fragments: s4,st,sym,rules | all");
  eq->add_flag("--trace", trace);
  eq->add_flag("--json", json);

  // ---- classify ---------------------------------------------------------
  std::string classify_file;
  auto* classify =
      app.add_subcommand("classify", "value/restricted/CPS-stratum flags");
  classify->add_option("file", classify_file)->required();
  classify->add_flag("--json", json);

  // ---- single-file transforms ------------------------------------------
  struct Xform {
    const char* name;
    const char* help;
    lb_status (*fn)(const lb_term*, lb_term**);
  };
  const Xform xforms[] = {
      {"cps", "CPS-translate a call-by-value term", lb_cps},
      {"cpsx", "modified full-term CPS translation", lb_cpsx},
      {"uncps", "inverse CPS translation", lb_uncps},
      {"ceil", "continuation-monad translation", lb_ceil},
      {"floor", "box elimination into the let fragment", lb_floor},
      {"let-encode", "encode lets as beta redexes", lb_let_encode},
  };
  std::string xform_file;
  for (const auto& x : xforms) {
    auto* sub = app.add_subcommand(x.name, x.help);
    sub->add_option("file", xform_file)->required();
    sub->add_flag("--json", json);
  }
  std::string admin_file, admin_k = "%k0";
  auto* admin = app.add_subcommand("admin-nf", "administrative normal form");
  admin->add_option("file", admin_file)->required();
  admin->add_option("--cont", admin_k, "continuation variable name");
  admin->add_flag("--json", json);

  // ---- translate --------------------------------------------------------
  std::string trans_file, trans_to_str, trans_from_str;
  auto* translate =
      app.add_subcommand("translate", "to/from the dual-context calculus");
  translate->add_option("file", trans_file)->required();
  translate->add_option("--to", trans_to_str, "target calculus: dual");
  translate->add_option("--from", trans_from_str, "source calculus: dual");
  translate->add_flag("--json", json);

  // ---- gen ----------------------------------------------------------------
  int gen_count = 10, gen_size = 25;
  bool gen_restricted = false;
  auto* gen = app.add_subcommand("gen", "generate well-typed terms");
  gen->add_option("--seed", seed);
  gen->add_option("--size", gen_size);
  gen->add_option("--count", gen_count);
  gen->add_option("--calc", calc);
  gen->add_flag("--restricted", gen_restricted);

  // ---- suite ----------------------------------------------------------------
  int suite_terms = 500, suite_size = 25, suite_pairs = 500;
  bool suite_verbose = false;
  auto* suite = app.add_subcommand("suite", "run the acceptance battery");
  suite->add_option("--terms", suite_terms, "terms per calculus");
  suite->add_option("--size", suite_size, "max term size");
  suite->add_option("--pairs", suite_pairs, "equality pairs");
  suite->add_option("--seed", seed);
  suite->add_flag("--json", json);
  suite->add_flag("-v,--verbose", suite_verbose, "progress to stderr");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    TermHandle t{parse_file(check_file, LB_PARSE_DEFAULT)};
    lb_type* ty = nullptr;
    if (lb_infer(t.t, &ty) != LB_OK) die("type error");
    StringHandle s;
    lb_type_print(ty, &s.s);
    lb_type_free(ty);
    print_json_or(json, "check", s.s);
    return kExitYes;
  }

  if (norm->parsed()) {
    TermHandle t{parse_file(norm_file, LB_PARSE_CPS_VARS)};
    TermHandle nf;
    long steps = 0;
    StringHandle tr;
    lb_status st = lb_normalize(t.t, calc_of(calc), fuel, &nf.t, &steps,
                                trace ? &tr.s : nullptr);
    if (st != LB_OK) die("normalization failed");
    if (trace && tr.s) std::cerr << tr.s;
    StringHandle s;
    lb_term_print(nf.t, &s.s);
    print_json_or(json, "norm", s.s, "steps", std::to_string(steps));
    return kExitYes;
  }

  if (eq->parsed()) {
    unsigned flags = LB_PARSE_CPS_VARS;
    TermHandle a{parse_file(eq_a, flags)}, b{parse_file(eq_b, flags)};
    lb_status st;
    StringHandle tr;
    if (calc == "s4") {
      st = lb_s4_equal(a.t, b.t, theory.c_str(), budget,
                       trace ? &tr.s : nullptr);
      if (trace && tr.s) std::cerr << tr.s;
    } else {
      st = lb_equal(a.t, b.t, calc_of(calc), fuel);
    }
    if (st == LB_OK) {
      print_json_or(json, "eq", calc == "s4" ? "proven" : "equal");
      return kExitYes;
    }
    if (st == LB_FALSE) {
      print_json_or(json, "eq",
                    calc == "s4" ? "not-found-within-budget" : "not-equal");
      return kExitNo;
    }
    die("equality check failed");
  }

  if (classify->parsed()) {
    TermHandle t{parse_file(classify_file, LB_PARSE_CPS_VARS)};
    bool value = lb_is_value(t.t) == LB_OK;
    bool restricted = lb_is_restricted(t.t) == LB_OK;
    char stratum = '-';
    bool in_cps = lb_classify_cps(t.t, &stratum) == LB_OK;
    std::ostringstream os;
    os << "value: " << (value ? "yes" : "no")
       << "\nrestricted: " << (restricted ? "yes" : "no") << "\ncps: "
       << (in_cps ? std::string(1, stratum) : std::string("not-in-language"));
    print_json_or(json, "classify", os.str());
    return kExitYes;
  }

  for (const auto& x : xforms) {
    auto* sub = app.get_subcommand(x.name);
    if (!sub->parsed()) continue;
    TermHandle t{parse_file(xform_file, LB_PARSE_CPS_VARS)};
    TermHandle out;
    if (x.fn(t.t, &out.t) != LB_OK) die(std::string(x.name) + " failed");
    StringHandle s;
    lb_term_print(out.t, &s.s);
    print_json_or(json, x.name, s.s);
    return kExitYes;
  }

  if (admin->parsed()) {
    TermHandle t{parse_file(admin_file, LB_PARSE_CPS_VARS)};
    TermHandle out;
    if (lb_admin_nf(t.t, admin_k.c_str(), &out.t) != LB_OK)
      die("admin-nf failed");
    StringHandle s;
    lb_term_print(out.t, &s.s);
    print_json_or(json, "admin-nf", s.s);
    return kExitYes;
  }

  if (translate->parsed()) {
    bool to_dual = trans_to_str == "dual";
    bool from_dual = trans_from_str == "dual";
    if (to_dual == from_dual)
      die("translate needs exactly one of --to dual / --from dual");
    if (to_dual) {
      TermHandle t{parse_file(trans_file, LB_PARSE_DEFAULT)};
      lb_dual* d = nullptr;
      if (lb_to_dual(t.t, &d) != LB_OK) die("translation failed");
      StringHandle s;
      lb_dual_print(d, &s.s);
      lb_dual_free(d);
      print_json_or(json, "translate", s.s);
    } else {
      lb_dual* d = nullptr;
      if (lb_dual_parse(slurp(trans_file).c_str(), &d) != LB_OK)
        die("parse failure (dual term)");
      TermHandle out;
      lb_status st = lb_from_dual(d, &out.t);
      lb_dual_free(d);
      if (st != LB_OK) die("translation failed");
      StringHandle s;
      lb_term_print(out.t, &s.s);
      print_json_or(json, "translate", s.s);
    }
    return kExitYes;
  }

  if (gen->parsed()) {
    StringHandle s;
    if (lb_generate(seed, gen_size, gen_count, calc_of(calc),
                    gen_restricted ? 1 : 0, &s.s) != LB_OK)
      die("generation failed");
    std::cout << s.s;
    return kExitYes;
  }

  if (suite->parsed()) {
    StringHandle s;
    lb_status st = lb_suite_run(suite_terms, suite_size, suite_pairs, seed,
                                json ? 1 : 0, suite_verbose ? 1 : 0, &s.s);
    if (s.s) std::cout << s.s;
    if (st == LB_OK) return kExitYes;
    if (st == LB_FALSE) return kExitNo;
    die("suite failed to run");
  }

  return kExitError;
}
