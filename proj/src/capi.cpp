#include "lambdabox.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include "lbx/comp.hpp"
#include "lbx/cps.hpp"
#include "lbx/gen.hpp"
#include "lbx/parse.hpp"
#include "lbx/rules.hpp"
#include "lbx/s4.hpp"
#include "lbx/suite.hpp"
#include "lbx/term.hpp"
#include "lbx/typing.hpp"

struct lb_term {
  lbx::TermPtr t;
};
struct lb_type {
  lbx::TypePtr t;
};
struct lb_dual {
  lbx::s4::DualPtr t;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lb_status fail(lb_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Maps C++ failures onto status codes uniformly.
template <typename F>
lb_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const lbx::ParseError& e) {
    return fail(LB_ERR_PARSE, e.what());
  } catch (const lbx::TypeError& e) {
    return fail(LB_ERR_TYPE, e.what());
  } catch (const lbx::s4::DualTypeError& e) {
    return fail(LB_ERR_TYPE, e.what());
  } catch (const lbx::cps::CpsError& e) {
    return fail(LB_ERR_DOMAIN, e.what());
  } catch (const lbx::FuelExhausted& e) {
    return fail(LB_ERR_FUEL, e.what());
  } catch (const std::exception& e) {
    return fail(LB_ERR_ARG, e.what());
  }
}

lbx::Calc to_calc(lb_calc c) {
  switch (c) {
    case LB_CALC_CBN: return lbx::Calc::Cbn;
    case LB_CALC_CBV: return lbx::Calc::Cbv;
    case LB_CALC_COMP: return lbx::Calc::CompC;
  }
  throw std::runtime_error("bad calculus id");
}

}  // namespace

extern "C" {

const char* lb_version(void) { return "lambdabox 1.0.0"; }

const char* lb_last_error(void) { return g_last_error.c_str(); }

void lb_string_free(char* s) { std::free(s); }

lb_status lb_term_parse(const char* src, unsigned flags, lb_term** out) {
  if (!src || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_term{lbx::parse_term(src, flags)};
    return LB_OK;
  });
}

lb_status lb_type_parse(const char* src, lb_type** out) {
  if (!src || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_type{lbx::parse_type(src)};
    return LB_OK;
  });
}

lb_status lb_term_print(const lb_term* t, char** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  *out = dup_string(lbx::print_term(t->t));
  return LB_OK;
}

lb_status lb_type_print(const lb_type* t, char** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  *out = dup_string(lbx::print_type(t->t));
  return LB_OK;
}

void lb_term_free(lb_term* t) { delete t; }
void lb_type_free(lb_type* t) { delete t; }

lb_status lb_term_alpha_eq(const lb_term* a, const lb_term* b) {
  if (!a || !b) return fail(LB_ERR_ARG, "null argument");
  return lbx::alpha_eq(a->t, b->t) ? LB_OK : LB_FALSE;
}

lb_status lb_infer(const lb_term* t, lb_type** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_type{lbx::infer_closed(t->t)};
    return LB_OK;
  });
}

lb_status lb_normalize(const lb_term* t, lb_calc calc, long fuel, lb_term** out,
                       long* steps_out, char** trace_out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    auto r = lbx::normalize(t->t, to_calc(calc), fuel > 0 ? fuel : lbx::kDefaultFuel,
                            {}, trace_out != nullptr);
    if (r.fuel_exhausted) return fail(LB_ERR_FUEL, "fuel exhausted");
    *out = new lb_term{r.term};
    if (steps_out) *steps_out = r.steps;
    if (trace_out) {
      std::ostringstream os;
      for (const auto& s : r.trace) {
        os << lbx::rule_name(s.rule) << " @[";
        for (std::size_t i = 0; i < s.pos.size(); ++i)
          os << (i ? "," : "") << s.pos[i];
        os << "] " << lbx::print_term(s.result) << "\n";
      }
      *trace_out = dup_string(os.str());
    }
    return LB_OK;
  });
}

lb_status lb_equal(const lb_term* a, const lb_term* b, lb_calc calc, long fuel) {
  if (!a || !b) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    return lbx::calc_eq(a->t, b->t, to_calc(calc),
                        fuel > 0 ? fuel : lbx::kDefaultFuel)
               ? LB_OK
               : LB_FALSE;
  });
}

lb_status lb_is_value(const lb_term* t) {
  if (!t) return fail(LB_ERR_ARG, "null argument");
  return lbx::is_value(t->t) ? LB_OK : LB_FALSE;
}

lb_status lb_is_restricted(const lb_term* t) {
  if (!t) return fail(LB_ERR_ARG, "null argument");
  return lbx::is_restricted(t->t) ? LB_OK : LB_FALSE;
}

lb_status lb_cps(const lb_term* t, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_term{lbx::cps::cps_term({}, t->t)};
    return LB_OK;
  });
}

lb_status lb_cpsx(const lb_term* t, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_term{lbx::cps::cpsx_term({}, t->t)};
    return LB_OK;
  });
}

lb_status lb_cps_type(const lb_type* t, lb_type** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  *out = new lb_type{lbx::cps::cps_type(t->t)};
  return LB_OK;
}

lb_status lb_admin_nf(const lb_term* t, const char* cont_name, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    std::string k = cont_name ? cont_name : "%k0";
    *out = new lb_term{lbx::cps::admin_nf({}, t->t, k)};
    return LB_OK;
  });
}

lb_status lb_classify_cps(const lb_term* t, char* stratum_out) {
  if (!t || !stratum_out) return fail(LB_ERR_ARG, "null argument");
  auto cls = lbx::cps::classify_cps(t->t);
  if (!cls) return fail(LB_FALSE, "term is not in the CPS language");
  switch (*cls) {
    case lbx::cps::CpsClass::Value: *stratum_out = 'V'; break;
    case lbx::cps::CpsClass::Continuation: *stratum_out = 'K'; break;
    case lbx::cps::CpsClass::Answer: *stratum_out = 'A'; break;
  }
  return LB_OK;
}

lb_status lb_uncps(const lb_term* t, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_term{lbx::cps::icps(t->t)};
    return LB_OK;
  });
}

lb_status lb_ceil(const lb_term* t, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_term{lbx::cps::ceil({}, t->t)};
    return LB_OK;
  });
}

lb_status lb_floor(const lb_term* t, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    if (!lbx::is_restricted(t->t))
      return fail(LB_ERR_DOMAIN, "floor requires a restricted term");
    *out = new lb_term{lbx::comp::floor(t->t)};
    return LB_OK;
  });
}

lb_status lb_let_encode(const lb_term* t, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_term{lbx::comp::let_encode({}, t->t)};
    return LB_OK;
  });
}

lb_status lb_s4_equal(const lb_term* a, const lb_term* b, const char* theory,
                      size_t budget, char** trace_out) {
  if (!a || !b) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    unsigned th = lbx::s4::TheoryAll;
    if (theory && *theory) {
      std::vector<std::string> names;
      std::string cur;
      for (const char* p = theory;; ++p) {
        if (*p == ',' || *p == '\0') {
          if (!cur.empty()) names.push_back(cur);
          cur.clear();
          if (*p == '\0') break;
        } else {
          cur += *p;
        }
      }
      th = lbx::s4::theory_from_names(names);
    }
    auto r = lbx::s4::eq_bounded(th, a->t, b->t, budget ? budget : 1000);
    if (trace_out) {
      std::string tr;
      for (const auto& line : r.trace) tr += line + "\n";
      *trace_out = dup_string(tr);
    }
    return r.proven ? LB_OK : LB_FALSE;
  });
}

lb_status lb_dual_parse(const char* src, lb_dual** out) {
  if (!src || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_dual{lbx::parse_dual(src)};
    return LB_OK;
  });
}

lb_status lb_dual_print(const lb_dual* t, char** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  *out = dup_string(lbx::print_dual(t->t));
  return LB_OK;
}

void lb_dual_free(lb_dual* t) { delete t; }

lb_status lb_to_dual(const lb_term* t, lb_dual** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    auto elaborated = lbx::infer_elab({}, t->t).second;
    *out = new lb_dual{lbx::s4::floorx(elaborated)};
    return LB_OK;
  });
}

lb_status lb_from_dual(const lb_dual* t, lb_term** out) {
  if (!t || !out) return fail(LB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new lb_term{lbx::s4::ceilx({}, {}, t->t)};
    return LB_OK;
  });
}

lb_status lb_generate(uint64_t seed, int max_size, int count, lb_calc calc,
                      int restricted, char** out) {
  if (!out || count < 0) return fail(LB_ERR_ARG, "bad arguments");
  return guarded([&] {
    lbx::gen::GenConfig cfg;
    cfg.seed = seed;
    cfg.max_size = max_size > 0 ? max_size : 25;
    cfg.calculus = to_calc(calc);
    cfg.restricted = restricted != 0;
    std::ostringstream os;
    for (const auto& [ctx, t] : lbx::gen::gen_terms(cfg, count))
      os << lbx::print_term(t) << "\n";
    *out = dup_string(os.str());
    return LB_OK;
  });
}

lb_status lb_suite_run(int terms_per_calc, int max_size, int pairs,
                       uint64_t seed, int as_json, int verbose,
                       char** report_out) {
  return guarded([&] {
    lbx::suite::SuiteOptions opt;
    if (terms_per_calc > 0) opt.terms_per_calc = terms_per_calc;
    if (max_size > 0) opt.max_size = max_size;
    if (pairs > 0) opt.pairs = pairs;
    if (seed) opt.seed_base = seed;
    auto rep = lbx::suite::run_suite(opt, verbose ? &std::cerr : nullptr);
    if (report_out)
      *report_out = dup_string(as_json ? lbx::suite::report_json(rep)
                                       : lbx::suite::report_table(rep));
    return rep.all_pass() ? LB_OK : LB_FALSE;
  });
}

}  // extern "C"
