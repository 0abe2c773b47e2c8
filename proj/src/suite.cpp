#include "lbx/suite.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lbx/comp.hpp"
#include "lbx/cps.hpp"
#include "lbx/gen.hpp"
#include "lbx/parse.hpp"
#include "lbx/rules.hpp"
#include "lbx/s4.hpp"
#include "lbx/term.hpp"
#include "lbx/typing.hpp"

namespace lbx::suite {

namespace {

using Corpus = std::vector<std::pair<TypingContext, TermPtr>>;

struct Runner {
  const SuiteOptions& opt;
  SuiteReport report;
  std::ostream* progress;

  Corpus cbn_corpus, cbv_corpus, cbv_full_corpus, comp_corpus;

  Runner(const SuiteOptions& o, std::ostream* p) : opt(o), progress(p) {
    gen::GenConfig cfg;
    cfg.max_size = opt.max_size;
    cfg.seed = opt.seed_base;

    cfg.calculus = Calc::Cbn;
    cfg.restricted = false;
    cbn_corpus = gen::gen_terms(cfg, opt.terms_per_calc);

    cfg.calculus = Calc::Cbv;
    cfg.restricted = true;
    cbv_corpus = gen::gen_terms(cfg, opt.terms_per_calc);

    cfg.restricted = false;
    cfg.seed = opt.seed_base + 7000000;
    cbv_full_corpus = gen::gen_terms(cfg, std::max(1, opt.terms_per_calc / 4));

    cfg.calculus = Calc::CompC;
    cfg.restricted = true;
    cfg.seed = opt.seed_base;
    comp_corpus = gen::gen_terms(cfg, opt.terms_per_calc);
  }

  void add(const std::string& id, const std::string& desc, bool pass,
           const std::string& details) {
    report.entries.push_back({id, desc, pass, details});
    if (progress)
      *progress << (pass ? "PASS " : "FAIL ") << id << "  " << desc << "  ("
                << details << ")\n"
                << std::flush;
  }

  const Corpus& corpus_for(Calc c) const {
    switch (c) {
      case Calc::Cbn: return cbn_corpus;
      case Calc::Cbv: return cbv_corpus;
      case Calc::CompC: return comp_corpus;
      default: throw std::logic_error("no corpus");
    }
  }

  // ------------------------------------------------------------- AC 1
  void ac1_k_axiom() {
    TermPtr witness = parse_term(
        "\\f:[](p -> q). \\x:[]p. box [f':p -> q, x':p] <- [f, x] in f' x'");
    std::string printed = print_type(infer_closed(witness));
    std::string expected = "[](p -> q) -> []p -> []q";
    add("AC01", "K-axiom golden type", printed == expected,
        "printed '" + printed + "'");
  }

  // ------------------------------------------------------------- AC 2
  void ac2_subject_reduction() {
    long checked = 0, violations = 0;
    std::string witness;
    for (Calc c : {Calc::Cbn, Calc::Cbv, Calc::CompC}) {
      for (const auto& [ctx, t] : corpus_for(c)) {
        for (const auto& s : redexes(t, c, ctx)) {
          ++checked;
          if (!check_subject_reduction(ctx, t, s.result)) {
            ++violations;
            if (witness.empty())
              witness = calc_name(c) + " " + rule_name(s.rule) + " on " +
                        print_term(t);
          }
        }
      }
    }
    add("AC02", "subject reduction over all single steps", violations == 0,
        std::to_string(checked) + " steps, " + std::to_string(violations) +
            " violations" + (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------- AC 3
  void ac3_normalization() {
    long max_steps = 0, failures = 0;
    for (Calc c : {Calc::Cbn, Calc::Cbv, Calc::CompC}) {
      for (const auto& [ctx, t] : corpus_for(c)) {
        auto r = normalize(t, c, opt.fuel, ctx);
        if (r.fuel_exhausted) ++failures;
        max_steps = std::max(max_steps, r.steps);
      }
    }
    add("AC03", "strong normalization proxy (fuel never exhausted)",
        failures == 0,
        "max step count " + std::to_string(max_steps) + ", " +
            std::to_string(failures) + " fuel exhaustions");
  }

  // ------------------------------------------------------------- AC 4
  void ac4_confluence() {
    long pairs = 0, violations = 0;
    std::string witness;
    for (Calc c : {Calc::Cbn, Calc::Cbv, Calc::CompC}) {
      for (const auto& [ctx, t] : corpus_for(c)) {
        auto steps = redexes(t, c, ctx);
        if (steps.size() < 2) continue;
        TermPtr nf0;
        for (std::size_t i = 0; i < steps.size(); ++i) {
          auto r = normalize(steps[i].result, c, opt.fuel, ctx);
          if (i == 0) {
            nf0 = r.term;
            continue;
          }
          ++pairs;
          if (!alpha_eq(nf0, r.term)) {
            ++violations;
            if (witness.empty()) witness = calc_name(c) + " " + print_term(t);
          }
        }
      }
    }
    bool schemas_ok = true;
    std::string schema_details;
    for (const auto& cp : critical_pair_suite()) {
      schemas_ok &= cp.joined;
      if (!cp.joined) schema_details += " cbn:" + cp.name;
    }
    for (const auto& cp : comp_critical_pair_suite()) {
      schemas_ok &= cp.joined;
      if (!cp.joined) schema_details += " comp:" + cp.name;
    }
    add("AC04", "confluence proxy + critical-pair schemas",
        violations == 0 && schemas_ok,
        std::to_string(pairs) + " reduct pairs, " + std::to_string(violations) +
            " mismatches" + schema_details +
            (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------- AC 5
  void ac5_subformula() {
    long checked = 0, failures = 0;
    std::string witness;
    for (const auto& [ctx, t] : cbn_corpus) {
      auto nf = normalize(t, Calc::Cbn, opt.fuel, ctx).term;
      ++checked;
      if (!subformula_check(ctx, nf)) {
        ++failures;
        if (witness.empty()) witness = print_term(nf);
      }
    }
    add("AC05", "subformula property of cbn normal forms", failures == 0,
        std::to_string(checked) + " normal forms, " + std::to_string(failures) +
            " failures" + (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------- AC 6
  void ac6_cps_typing() {
    long checked = 0, failures = 0;
    std::string witness;
    for (const auto& [ctx, t] : cbv_corpus) {
      ++checked;
      TypePtr tau = infer(ctx, t);
      TypePtr want = Type::make_arrow(
          Type::make_arrow(cps::cps_type(tau), Type::make_atom(kAnswerAtom)),
          Type::make_atom(kAnswerAtom));
      try {
        TypePtr got = infer(cps::map_context(ctx, cps::cps_type),
                            cps::cps_term(ctx, t));
        if (!type_eq(got, want)) throw TypeError(TypeError::Kind::TypeMismatch, "");
      } catch (const std::exception&) {
        ++failures;
        if (witness.empty()) witness = print_term(t);
      }
    }
    add("AC06", "CPS typing contract ((tau' -> R) -> R)", failures == 0,
        std::to_string(checked) + " terms, " + std::to_string(failures) +
            " failures" + (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------- AC 7
  void ac7_cps_closure() {
    long checked = 0, failures = 0;
    std::string witness;
    for (const auto& [ctx, t] : cbv_corpus) {
      TermPtr a = cps::admin_nf(ctx, t, "%k0");
      if (!cps::classify_cps(a)) {
        ++failures;
        if (witness.empty()) witness = print_term(a);
        continue;
      }
      auto level1 = redexes(a, Calc::Cbn);
      for (std::size_t i = 0; i < level1.size(); ++i) {
        ++checked;
        if (!cps::classify_cps(level1[i].result)) {
          ++failures;
          if (witness.empty()) witness = print_term(level1[i].result);
        }
        // one more level for the first few reducts
        if (i < 3) {
          for (const auto& s2 : redexes(level1[i].result, Calc::Cbn)) {
            ++checked;
            if (!cps::classify_cps(s2.result)) {
              ++failures;
              if (witness.empty()) witness = print_term(s2.result);
            }
          }
        }
      }
    }
    add("AC07", "CPS language closed under cbn reduction", failures == 0,
        std::to_string(checked) + " reducts, " + std::to_string(failures) +
            " classification failures" +
            (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------- AC 8
  // Reachability with a cheap leftmost path probe before the full search.
  int plus_reachable(const TermPtr& from, const TermPtr& to, Calc c,
                     const TypingContext& ctx) {
    TermPtr cur = from;
    std::string target = canon_key(to);
    for (int i = 0; i < 200; ++i) {
      auto steps = redexes(cur, c, ctx);
      if (steps.empty()) break;
      cur = steps.front().result;
      if (canon_key(cur) == target) return 1;
    }
    return reachable(from, to, c, {}, 50, 40000, ctx, /*at_least_one=*/true);
  }

  void ac8_lemma1() {
    long violations = 0, conclusive = 0, inconclusive = 0;
    std::string witness;
    const std::string k = "%k0";
    for (const auto& [ctx, t] : cbv_corpus) {
      TermPtr anf_t = cps::admin_nf(ctx, t, k);
      TypingContext cps_ctx = cps::map_context(ctx, cps::cps_type);
      cps_ctx.push(k, Type::make_arrow(cps::cps_type(infer(ctx, t)),
                                       Type::make_atom(kAnswerAtom)));

      for (const auto& s : redexes(t, Calc::Cbv, ctx)) {
        TermPtr anf_n = cps::admin_nf(ctx, s.result, k);
        if (s.rule == Rule::Lift || s.rule == Rule::Flat) {
          // (1) lift/flat leave the admin normal form unchanged
          ++conclusive;
          if (!alpha_eq(anf_t, anf_n)) {
            ++violations;
            if (witness.empty())
              witness = "(1) " + rule_name(s.rule) + " on " + print_term(t);
          }
        } else {
          // (2) the other rules map to one or more cbn steps
          int r = plus_reachable(anf_t, anf_n, Calc::Cbn, cps_ctx);
          if (r == 1) {
            ++conclusive;
          } else if (r == 0) {
            ++violations;
            if (witness.empty())
              witness = "(2) " + rule_name(s.rule) + " on " + print_term(t);
          } else {
            ++inconclusive;
          }
        }
      }

      // (3) cbn steps inside the CPS language map under icps to
      //     zero or more cbv steps
      auto cbn_steps = redexes(anf_t, Calc::Cbn);
      for (std::size_t i = 0; i < cbn_steps.size() && i < 8; ++i) {
        try {
          TermPtr p = cps::icps(anf_t, cps_ctx);
          TermPtr q = cps::icps(cbn_steps[i].result, cps_ctx);
          int r = reachable(p, q, Calc::Cbv, {}, 30, 30000, ctx);
          if (r == 1) {
            ++conclusive;
          } else if (r == 0) {
            ++violations;
            if (witness.empty()) witness = "(3) on " + print_term(anf_t);
          } else {
            ++inconclusive;
          }
        } catch (const cps::CpsError& e) {
          ++violations;
          if (witness.empty())
            witness = std::string("(3) icps failed: ") + e.what();
        }
      }

      // (4) M itself reaches icps(<M,k>) by lift/flat alone
      try {
        TermPtr back = cps::icps(anf_t, cps_ctx);
        int r = reachable(t, back, Calc::Cbv, {Rule::Lift, Rule::Flat}, 40, 40000,
                          ctx);
        if (r == 1) {
          ++conclusive;
        } else if (r == 0) {
          ++violations;
          if (witness.empty()) witness = "(4) on " + print_term(t);
        } else {
          ++inconclusive;
        }
      } catch (const cps::CpsError& e) {
        ++violations;
        if (witness.empty()) witness = std::string("(4) icps failed: ") + e.what();
      }
    }
    double rate =
        conclusive + inconclusive == 0
            ? 0.0
            : 100.0 * static_cast<double>(inconclusive) /
                  static_cast<double>(conclusive + inconclusive);
    std::ostringstream det;
    det << conclusive << " conclusive, " << violations << " violations, "
        << inconclusive << " inconclusive (" << rate << "%)";
    if (!witness.empty()) det << "; first: " << witness;
    add("AC08", "CPS simulation lemma, items (1)-(4)",
        violations == 0 && rate < 1.0, det.str());
  }

  // ------------------------------------------------------------- AC 9
  void ac9_theorem2() {
    long checked = 0, mismatches = 0;
    std::string witness;
    gen::GenConfig cfg;
    cfg.max_size = opt.max_size;
    cfg.calculus = Calc::Cbv;
    cfg.restricted = true;
    for (int i = 0; i < opt.pairs; ++i) {
      cfg.seed = opt.seed_base + 1000000 + static_cast<std::uint64_t>(i);
      TypingContext ctx;
      TermPtr a, b;
      if (i % 2 == 0) {
        auto [c, t] = gen::gen_term(cfg);
        ctx = c;
        a = t;
        b = gen::random_rewrite(t, Calc::Cbv, 1 + i % 3, cfg.seed ^ 0x5a5a, ctx);
      } else {
        auto [c, t, u] = gen::gen_pair(cfg);
        ctx = c;
        a = t;
        b = u;
      }
      ++checked;
      bool lhs = calc_eq(a, b, Calc::Cbv, opt.fuel, ctx);
      bool rhs = calc_eq(cps::cps_term(ctx, a), cps::cps_term(ctx, b), Calc::Cbn,
                         opt.fuel);
      if (lhs != rhs) {
        ++mismatches;
        if (witness.empty())
          witness = print_term(a) + "  vs  " + print_term(b);
      }
    }
    add("AC09", "cbv equality iff cbn equality of CPS images", mismatches == 0,
        std::to_string(checked) + " pairs, " + std::to_string(mismatches) +
            " mismatches" + (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------ AC 10
  void ac10_cpsx() {
    long checked = 0, failures = 0;
    std::string witness;
    for (const auto& [ctx, t] : cbv_full_corpus) {
      auto steps = redexes(t, Calc::Cbv, ctx);
      for (std::size_t i = 0; i < steps.size() && i < 6; ++i) {
        ++checked;
        if (!calc_eq(cps::cpsx_term(ctx, t), cps::cpsx_term(ctx, steps[i].result),
                     Calc::Cbn, opt.fuel)) {
          ++failures;
          if (witness.empty())
            witness = rule_name(steps[i].rule) + " on " + print_term(t);
        }
      }
    }

    // The counterexample: equal images of cbv-inequivalent terms when the
    // inner box body is not a value.
    TermPtr a = parse_term(
        "box [x:p] <- [box [f:p -> p, u:p] <- [cf:[](p -> p), cu:[]p] in f u] "
        "in \\w:p -> p. x");
    TermPtr b = parse_term(
        "box [f:p -> p, u:p] <- [cf:[](p -> p), cu:[]p] in "
        "(\\x:p. \\w:p -> p. x) (f u)");
    bool images_equal = calc_eq(cps::cpsx_term({}, a), cps::cpsx_term({}, b),
                                Calc::Cbn, opt.fuel);
    bool source_equal = calc_eq(a, b, Calc::Cbv, opt.fuel);
    bool counterexample_ok = images_equal && !source_equal;
    add("AC10", "modified CPS: soundness + incompleteness witness",
        failures == 0 && counterexample_ok,
        std::to_string(checked) + " steps, " + std::to_string(failures) +
            " soundness failures; counterexample images_equal=" +
            (images_equal ? "yes" : "no") + " sources_equal=" +
            (source_equal ? "yes" : "no") +
            (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------ AC 11
  void ac11_prop9() {
    long checked = 0, mismatches = 0;
    std::string witness;
    gen::GenConfig cfg;
    cfg.max_size = opt.max_size;
    cfg.calculus = Calc::CompC;
    cfg.restricted = true;
    for (int i = 0; i < opt.pairs; ++i) {
      cfg.seed = opt.seed_base + 2000000 + static_cast<std::uint64_t>(i);
      TypingContext ctx;
      TermPtr a, b;
      if (i % 2 == 0) {
        auto [c, t] = gen::gen_term(cfg);
        ctx = c;
        a = t;
        b = gen::random_rewrite(t, Calc::CompC, 1 + i % 3, cfg.seed ^ 0xa5a5, ctx);
      } else {
        auto [c, t, u] = gen::gen_pair(cfg);
        ctx = c;
        a = t;
        b = u;
      }
      ++checked;
      bool lhs = calc_eq(a, b, Calc::CompC, opt.fuel, ctx);
      bool rhs = calc_eq(comp::let_encode(ctx, a), comp::let_encode(ctx, b),
                         Calc::Cbv, opt.fuel, ctx);
      if (lhs != rhs) {
        ++mismatches;
        if (witness.empty()) witness = print_term(a) + "  vs  " + print_term(b);
      }
    }
    add("AC11", "comp equality iff cbv equality of let encodings",
        mismatches == 0,
        std::to_string(checked) + " pairs, " + std::to_string(mismatches) +
            " mismatches" + (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------ AC 12
  void ac12_ceil_simulation() {
    long checked = 0, failures = 0, inconclusive = 0;
    std::string witness;
    auto run = [&](Calc c, const Corpus& corpus) {
      for (const auto& [ctx, t] : corpus) {
        TermPtr ct = cps::ceil(ctx, t);
        for (const auto& s : redexes(t, c, ctx)) {
          bool box_rule = s.rule == Rule::IdBox || s.rule == Rule::BetaBox ||
                          s.rule == Rule::BetaBoxV;
          bool letintro_at_box =
              s.rule == Rule::LetIntro &&
              subterm_at(t, s.pos)->kind == Term::Kind::BoxIn;
          if (!box_rule && !letintro_at_box) continue;
          ++checked;
          TermPtr cn = cps::ceil(ctx, s.result);
          if (letintro_at_box) {
            if (!alpha_eq(ct, cn)) {
              ++failures;
              if (witness.empty())
                witness = "let-intro at box on " + print_term(t);
            }
            continue;
          }
          int r = reachable(ct, cn, Calc::Cbn,
                            {Rule::BetaArrow, Rule::EtaArrow}, 30, 30000, ctx,
                            /*at_least_one=*/true);
          if (r == 0 || r == -1) {
            // Bounded search is complete here in practice; treat a bound
            // hit as inconclusive, not as a violation.
            if (r == 0) ++failures;
            if (r == -1) ++inconclusive;
            if (witness.empty() && r == 0)
              witness = calc_name(c) + " " + rule_name(s.rule) + " on " +
                        print_term(t);
          }
        }
      }
    };
    run(Calc::Cbn, cbn_corpus);
    run(Calc::CompC, comp_corpus);
    add("AC12", "continuation-monad simulation of the box rules",
        failures == 0 && inconclusive == 0,
        std::to_string(checked) + " steps, " + std::to_string(failures) +
            " failures, " + std::to_string(inconclusive) + " inconclusive" +
            (witness.empty() ? "" : "; first: " + witness));
  }

  // ------------------------------------------------------------ AC 13
  void ac13_s4() {
    std::vector<std::string> fails;
    TypingContext ctx;
    ctx.push("n", parse_type("[]p"));
    ctx.push("l", parse_type("[]q"));
    ctx.push("m", parse_type("[][]q"));
    unsigned full = s4::TheoryAll;

    auto expect_proven = [&](const std::string& what, const TermPtr& a,
                             const TermPtr& b, unsigned theory,
                             std::size_t budget, const TypingContext& c) {
      auto r = s4::eq_bounded(theory, a, b, budget, c);
      if (!r.proven) fails.push_back(what);
      return r;
    };

    // eps (delta M) = M on generated boxed terms
    gen::GenConfig cfg;
    cfg.max_size = 8;
    cfg.calculus = Calc::Cbn;
    for (int i = 0; i < 20; ++i) {
      cfg.seed = opt.seed_base + 3000000 + static_cast<std::uint64_t>(i);
      auto [c, m] = gen::gen_term(cfg);
      TypePtr ty;
      try {
        ty = infer(c, m);
      } catch (const TypeError&) {
        continue;
      }
      if (ty->kind != Type::Kind::Box) continue;
      TermPtr lhs = Term::make_app(s4::make_counit(ty),
                                   Term::make_app(s4::make_comult(ty->boxed), m));
      auto r = expect_proven("eps(delta M) = M #" + std::to_string(i), lhs, m,
                             full, 1000, c);
      if (r.proven && r.path_length > 6)
        fails.push_back("eps-delta path too long #" + std::to_string(i));
    }

    // nat-eps instance
    expect_proven("nat-eps", parse_term("counit (box [x:p] <- [n] in x)"),
                  parse_term("counit n"), full, 1000, ctx);
    // nat-delta instance
    expect_proven(
        "nat-delta", parse_term("comult (box [x:p] <- [n] in \\w:q. x)"),
        parse_term(
            "box [y:[]p] <- [comult n] in box [x:p] <- [y] in \\w:q. x"),
        full, 1000, ctx);
    // mon (delta delta) instance
    expect_proven("mon-dd", parse_term("comult (comult n)"),
                  parse_term("box [x:[]p] <- [comult n] in comult x"), full,
                  1000, ctx);
    // exchange needs symmetricity
    TermPtr ex_a = parse_term("box [x:p, y:q] <- [n, l] in (c:p -> q -> p) x y");
    TermPtr ex_b = parse_term("box [y:q, x:p] <- [l, n] in (c:p -> q -> p) x y");
    if (!s4::eq_bounded(full, ex_a, ex_b, 1000, ctx).proven)
      fails.push_back("exchange under sym");
    if (s4::eq_bounded(full & ~s4::TheorySym, ex_a, ex_b, 1000, ctx).proven)
      fails.push_back("exchange proved without sym");

    // unbox (boxsub ...) = M[Ns/xs] on generated instances
    int unbox_done = 0;
    for (std::uint64_t s = 0; unbox_done < 50 && s < 400; ++s) {
      gen::Rng rng(opt.seed_base + 4000000 + s);
      int n = static_cast<int>(rng.below(3));
      std::vector<Binder> binders;
      std::vector<TermPtr> args;
      std::vector<std::pair<std::string, TermPtr>> sub;
      TypingContext c;
      for (int i = 0; i < n; ++i) {
        TypePtr sigma = i % 2 ? parse_type("q") : parse_type("p");
        std::string x = "x" + std::to_string(i + 1);
        std::string g = "w" + std::to_string(i + 1);
        c.push(g, Type::make_box(sigma));
        binders.push_back({x, sigma});
        args.push_back(Term::make_var(g));
        sub.push_back({x, Term::make_var(g)});
      }
      // Body with each binder used at most twice, so the proof fits the
      // 4n+4 rewrite bound: a constant head applied to all the uses.
      TermPtr body;
      {
        std::vector<TermPtr> uses;
        std::vector<TypePtr> use_tys;
        for (int i = 0; i < n; ++i) {
          int k = 1 + static_cast<int>(rng.below(2));
          for (int j = 0; j < k; ++j) {
            uses.push_back(Term::make_var(binders[i].name));
            use_tys.push_back(Type::make_box(binders[i].type));
          }
        }
        if (uses.empty()) {
          body = Term::make_const("e", parse_type("p"));
        } else {
          TypePtr head_ty = parse_type("p");
          for (std::size_t j = use_tys.size(); j-- > 0;)
            head_ty = Type::make_arrow(use_tys[j], head_ty);
          body = Term::make_const("f", head_ty);
          for (const auto& u : uses) body = Term::make_app(body, u);
        }
      }
      TermPtr lhs = s4::unbox(s4::boxsub(binders, args, body));
      TermPtr rhs = substitute_parallel(body, sub);
      auto r = s4::eq_bounded(full, lhs, rhs, 200000, c);
      if (!r.proven) {
        fails.push_back("unbox/boxsub #" + std::to_string(s));
      } else if (r.path_length > static_cast<std::size_t>(4 * n + 4)) {
        fails.push_back("unbox/boxsub path > 4n+4 #" + std::to_string(s));
      }
      ++unbox_done;
    }

    // dual-context round trip on the curated suite
    TypingContext rt_ctx;
    rt_ctx.push("n", parse_type("[]p"));
    rt_ctx.push("l", parse_type("[]q"));
    rt_ctx.push("m", parse_type("[][]q"));
    rt_ctx.push("h", parse_type("[](p -> q)"));
    std::vector<std::string> roundtrip = {
        "box [] <- [] in c:p",
        "box [x:p] <- [n] in x",
        "box [x:q] <- [l] in x",
        "box [x:p] <- [n] in \\w:q. x",
        "box [x:p, y:q] <- [n, l] in x",
        "box [x:p, y:q] <- [n, l] in y",
        "box [f:p -> q, x:p] <- [h, n] in f x",
        "box [x:[]q] <- [m] in x",
        "\\z:[]p. box [x:p] <- [z] in x",
        "\\z:[]p. box [x:p] <- [z] in \\w:q. x",
        "counit n",
        "comult n",
        "counit (comult n)",
        "box [x:p] <- [box [] <- [] in c:p] in x",
        "box [x:q] <- [box [y:p] <- [n] in c:q] in x",
        "c:p",
        "\\x:p. x",
        "(\\x:[]p. box [y:p] <- [x] in y) n",
        "box [x:p] <- [n] in c:q",
        "\\f:[](p -> q). \\x:[]p. box [f':p -> q, x':p] <- [f, x] in f' x'",
        "counit@q l",
        "comult@q l",
        "box [y:q, x:p] <- [l, n] in x",
        "counit m",
        "box [x:p, y:p] <- [n, n] in x",
    };
    int rt_idx = 0;
    for (const auto& src : roundtrip) {
      TermPtr t = infer_elab(rt_ctx, parse_term(src)).second;
      try {
        s4::DualPtr d = s4::floorx(t);
        TypingContext delta;  // all round-trip free variables are ordinary
        TermPtr back = s4::ceilx(delta, rt_ctx, d);
        if (!s4::eq_bounded(full, back, t, 300000, rt_ctx).proven)
          fails.push_back("roundtrip #" + std::to_string(rt_idx) + " " + src);
      } catch (const std::exception& e) {
        fails.push_back("roundtrip #" + std::to_string(rt_idx) + " threw: " +
                        e.what());
      }
      ++rt_idx;
    }

    std::string details = std::to_string(fails.size()) + " failures";
    for (std::size_t i = 0; i < fails.size() && i < 4; ++i)
      details += "; " + fails[i];
    add("AC13", "IS4 equalities, boxsub/unbox, dual round trip", fails.empty(),
        details);
  }

  // ------------------------------------------------------------ AC 14
  void ac14_roundtrip() {
    long checked = 0, failures = 0;
    std::string witness;
    auto check = [&](const TermPtr& t) {
      ++checked;
      std::string printed = print_term(t);
      try {
        TermPtr again = parse_term(printed, ParseCpsVars);
        if (!alpha_eq(t, again) || print_term(again) != printed) {
          ++failures;
          if (witness.empty()) witness = printed;
        }
      } catch (const ParseError&) {
        ++failures;
        if (witness.empty()) witness = printed;
      }
    };
    for (const auto& corpus : {cbn_corpus, cbv_corpus, comp_corpus})
      for (const auto& [ctx, t] : corpus) check(t);
    // golden corpus
    std::vector<std::string> golden = {
        "\\f:[](p -> q). \\x:[]p. box [f':p -> q, x':p] <- [f, x] in f' x'",
        "box [] <- [] in c:p",
        "box [x:p] <- [y] in x",
        "let x = c:p in x",
        "counit@p (comult@p n)",
        "\\k:p -> R. k (c:p)",
    };
    for (const auto& g : golden) {
      ++checked;
      TermPtr t = parse_term(g, ParseCpsVars);
      if (print_term(t) != g) {
        ++failures;
        if (witness.empty()) witness = g + " printed as " + print_term(t);
      }
    }
    add("AC14", "parser/printer round trips", failures == 0,
        std::to_string(checked) + " terms, " + std::to_string(failures) +
            " failures" + (witness.empty() ? "" : "; first: " + witness));
  }

  void run() {
    ac1_k_axiom();
    ac2_subject_reduction();
    ac3_normalization();
    ac4_confluence();
    ac5_subformula();
    ac6_cps_typing();
    ac7_cps_closure();
    ac8_lemma1();
    ac9_theorem2();
    ac10_cpsx();
    ac11_prop9();
    ac12_ceil_simulation();
    ac13_s4();
    ac14_roundtrip();
  }
};

}  // namespace

SuiteReport run_suite(const SuiteOptions& opt, std::ostream* progress) {
  Runner r(opt, progress);
  r.run();
  return r.report;
}

std::string report_table(const SuiteReport& rep) {
  std::ostringstream out;
  for (const auto& e : rep.entries)
    out << (e.pass ? "PASS" : "FAIL") << "  " << e.id << "  " << e.desc << "\n"
        << "      " << e.details << "\n";
  out << (rep.all_pass() ? "all criteria passed" : "SOME CRITERIA FAILED")
      << "\n";
  return out.str();
}

std::string report_json(const SuiteReport& rep) {
  nlohmann::json j;
  j["all_pass"] = rep.all_pass();
  j["entries"] = nlohmann::json::array();
  for (const auto& e : rep.entries)
    j["entries"].push_back(
        {{"id", e.id}, {"desc", e.desc}, {"pass", e.pass}, {"details", e.details}});
  return j.dump(2);
}

}  // namespace lbx::suite
