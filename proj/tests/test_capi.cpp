// Exercises the shared-library C API end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "lambdabox.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  lb_string_free(s);
  return out;
}

lb_term* parse(const char* src, unsigned flags = LB_PARSE_CPS_VARS) {
  lb_term* t = nullptr;
  REQUIRE(lb_term_parse(src, flags, &t) == LB_OK);
  return t;
}

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::string(lb_version()).find("lambdabox") == 0);
  lb_term* t = nullptr;
  CHECK(lb_term_parse("\\x. x", LB_PARSE_DEFAULT, &t) == LB_ERR_PARSE);
  CHECK(std::string(lb_last_error()).size() > 0);
  CHECK(lb_term_parse(nullptr, 0, &t) == LB_ERR_ARG);
}

TEST_CASE("parse, print, infer") {
  lb_term* t = parse(
      "\\f:[](p -> q). \\x:[]p. box [f':p -> q, x':p] <- [f, x] in f' x'");
  char* printed = nullptr;
  REQUIRE(lb_term_print(t, &printed) == LB_OK);
  CHECK(take(printed).find("\\f:[](p -> q).") == 0);

  lb_type* ty = nullptr;
  REQUIRE(lb_infer(t, &ty) == LB_OK);
  char* tp = nullptr;
  REQUIRE(lb_type_print(ty, &tp) == LB_OK);
  CHECK(take(tp) == "[](p -> q) -> []p -> []q");
  lb_type_free(ty);
  lb_term_free(t);

  lb_term* open_term = parse("x y");
  lb_type* ty2 = nullptr;
  CHECK(lb_infer(open_term, &ty2) == LB_ERR_TYPE);
  lb_term_free(open_term);
}

TEST_CASE("normalize and equality") {
  lb_term* t = parse("(\\x:p. x) (c:p)");
  lb_term* nf = nullptr;
  long steps = -1;
  char* trace = nullptr;
  REQUIRE(lb_normalize(t, LB_CALC_CBN, 0, &nf, &steps, &trace) == LB_OK);
  CHECK(steps == 1);
  std::string tr = take(trace);
  CHECK(tr.find("beta->") != std::string::npos);
  char* printed = nullptr;
  lb_term_print(nf, &printed);
  CHECK(take(printed) == "c:p");

  lb_term* rhs = parse("c:p");
  CHECK(lb_equal(t, rhs, LB_CALC_CBN, 0) == LB_OK);
  lb_term* other = parse("d:p");
  CHECK(lb_equal(t, other, LB_CALC_CBN, 0) == LB_FALSE);

  CHECK(lb_is_value(t) == LB_FALSE);
  CHECK(lb_is_value(rhs) == LB_OK);
  CHECK(lb_is_restricted(t) == LB_OK);

  lb_term_free(t);
  lb_term_free(nf);
  lb_term_free(rhs);
  lb_term_free(other);
}

TEST_CASE("cps pipeline") {
  lb_term* t = parse("(\\x:p. x) (c:p)");
  lb_term* w = nullptr;
  REQUIRE(lb_cps(t, &w) == LB_OK);
  char stratum = 0;
  lb_term* anf = nullptr;
  REQUIRE(lb_admin_nf(t, "%k0", &anf) == LB_OK);
  REQUIRE(lb_classify_cps(anf, &stratum) == LB_OK);
  CHECK(stratum == 'A');
  lb_term* back = nullptr;
  REQUIRE(lb_uncps(anf, &back) == LB_OK);

  lb_type* ty = nullptr;
  REQUIRE(lb_type_parse("p -> q", &ty) == LB_OK);
  lb_type* cty = nullptr;
  REQUIRE(lb_cps_type(ty, &cty) == LB_OK);
  char* printed = nullptr;
  lb_type_print(cty, &printed);
  CHECK(take(printed) == "(q -> R) -> p -> R");

  lb_term_free(t);
  lb_term_free(w);
  lb_term_free(anf);
  lb_term_free(back);
  lb_type_free(ty);
  lb_type_free(cty);
}

TEST_CASE("ceil, floor, let-encode") {
  lb_term* t = parse("let x = c:p in x");
  lb_term* enc = nullptr;
  REQUIRE(lb_let_encode(t, &enc) == LB_OK);
  char* printed = nullptr;
  lb_term_print(enc, &printed);
  CHECK(take(printed) == "(\\x:p. x) (c:p)");

  lb_term* boxed = parse("box [x:p] <- [cv:[]p] in x");
  lb_term* floored = nullptr;
  REQUIRE(lb_floor(boxed, &floored) == LB_OK);
  lb_term* ceiled = nullptr;
  REQUIRE(lb_ceil(boxed, &ceiled) == LB_OK);

  // floor rejects unrestricted inputs
  lb_term* bad = parse("box [x:p, y:p -> q] <- [cv:[]p, cw:[](p -> q)] in y x");
  lb_term* out = nullptr;
  CHECK(lb_floor(bad, &out) == LB_ERR_DOMAIN);

  lb_term_free(t);
  lb_term_free(enc);
  lb_term_free(boxed);
  lb_term_free(floored);
  lb_term_free(ceiled);
  lb_term_free(bad);
}

TEST_CASE("s4 equality and dual translation") {
  lb_term* a = parse("counit (comult (n:[]p))");
  lb_term* b = parse("n:[]p");
  char* trace = nullptr;
  CHECK(lb_s4_equal(a, b, "all", 1000, &trace) == LB_OK);
  CHECK(take(trace).size() > 0);

  lb_term* x = parse("box [u:p, v:q] <- [n:[]p, l:[]q] in u");
  lb_term* y = parse("box [v:q, u:p] <- [l:[]q, n:[]p] in u");
  CHECK(lb_s4_equal(x, y, "all", 2000, nullptr) == LB_OK);
  CHECK(lb_s4_equal(x, y, "s4,st,rules", 2000, nullptr) == LB_FALSE);

  lb_term* boxed = parse("box [u:p] <- [n:[]p] in u");
  lb_dual* d = nullptr;
  REQUIRE(lb_to_dual(boxed, &d) == LB_OK);
  char* printed = nullptr;
  lb_dual_print(d, &printed);
  CHECK(take(printed).find("let box") == 0);
  lb_term* back = nullptr;
  REQUIRE(lb_from_dual(d, &back) == LB_OK);
  CHECK(lb_s4_equal(back, boxed, "all", 200000, nullptr) == LB_OK);

  lb_dual* d2 = nullptr;
  REQUIRE(lb_dual_parse("let box a = x in boxup @a", &d2) == LB_OK);

  lb_term_free(a);
  lb_term_free(b);
  lb_term_free(x);
  lb_term_free(y);
  lb_term_free(boxed);
  lb_term_free(back);
  lb_dual_free(d);
  lb_dual_free(d2);
}

TEST_CASE("generator") {
  char* out = nullptr;
  REQUIRE(lb_generate(7, 15, 5, LB_CALC_CBV, 1, &out) == LB_OK);
  std::string lines = take(out);
  int count = 0;
  for (char c : lines)
    if (c == '\n') ++count;
  CHECK(count == 5);
  // each line parses
  std::size_t start = 0;
  while (start < lines.size()) {
    std::size_t end = lines.find('\n', start);
    std::string line = lines.substr(start, end - start);
    lb_term* t = nullptr;
    CHECK(lb_term_parse(line.c_str(), LB_PARSE_DEFAULT, &t) == LB_OK);
    lb_term_free(t);
    start = end + 1;
  }
}

TEST_CASE("suite runs at reduced scale") {
  char* report = nullptr;
  lb_status st = lb_suite_run(12, 12, 12, 1, 1, 0, &report);
  std::string rep = take(report);
  CHECK((st == LB_OK || st == LB_FALSE));
  CHECK(rep.find("AC01") != std::string::npos);
  CHECK(rep.find("entries") != std::string::npos);
}
