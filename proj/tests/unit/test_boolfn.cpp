#include "asimkit/boolfn.hpp"

#include "asimkit/error.hpp"
#include "asimkit/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asimkit;

namespace {

TruthTable T(const char* text) { return from_expr(text); }
TruthTable T2(const char* text) { return table_of(parse_bool_expr(text), 2); }
const char* kXor = "(p1 | p2) & ~(p1 & p2)";

// Every substitution slot must come from the allowed set.
bool uses_only(const Substitution& s, std::initializer_list<Slot> allowed) {
  for (Slot x : s)
    if (std::find(allowed.begin(), allowed.end(), x) == allowed.end()) return false;
  return true;
}

}  // namespace

TEST_CASE("truth tables index tuples with p1 most significant") {
  CHECK(T("p1 & p2").to_string() == "0001");
  CHECK(T("p1").to_string() == "01");
  CHECK(T("p1 & ~p2").to_string() == "0010");
  const TruthTable t = T("T");
  CHECK(t.arity() == 0);
  CHECK(t.size() == 1);
  CHECK(t[0]);
  CHECK(T("(p1 <-> p2) <-> p3").to_string() == "01101001");
}

TEST_CASE("expression grammar") {
  SUBCASE("implication is right associative") {
    CHECK(T("p1 -> p2 -> p3") == T("p1 -> (p2 -> p3)"));
    CHECK(T("p1 -> p2 -> p3") != T("(p1 -> p2) -> p3"));
  }
  SUBCASE("biconditional is left associative") { CHECK(T("p1 <-> p2 <-> p3") == T("(p1 <-> p2) <-> p3")); }
  SUBCASE("precedence") {
    CHECK(T("~p1 & p2 | p3") == T("((~p1) & p2) | p3"));
    CHECK(T("p1 | p2 -> p3") == T("(p1 | p2) -> p3"));
  }
  SUBCASE("whitespace is insignificant") { CHECK(T("  p1&p2 ") == T("p1 & p2")); }
  SUBCASE("errors carry a position") {
    try {
      (void)T("p1 & ");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 5);
    }
    CHECK_THROWS_AS((void)T("p1 & q"), ParseError);
    CHECK_THROWS_AS((void)T("(p1"), ParseError);
    CHECK_THROWS_AS((void)T("p17"), ParseError);
  }
  SUBCASE("printing round-trips") {
    for (const char* e : {"p1 -> p2", "~(p1 & p2) | p3", "(p1 <-> p2) <-> p3", "T", "F", "~~p1"}) {
      const BoolExpr x = parse_bool_expr(e);
      CHECK(table_of(parse_bool_expr(to_string(x)), x.max_var()) == table_of(x, x.max_var()));
    }
  }
}

TEST_CASE("classify: examples") {
  const BoolClass imp = classify(T("p1 -> p2"));
  CHECK(imp.is_rest);
  CHECK(imp.is_tft);
  CHECK_FALSE(imp.is_ftf);
  CHECK(imp.exists_special);
  CHECK_FALSE(imp.forall_special);

  const BoolClass triple = classify(T("(p1 <-> p2) <-> p3"));
  CHECK(triple.is_rest);
  CHECK(triple.is_tft);
  CHECK(triple.is_ftf);
  CHECK_FALSE(triple.forall_special);
  CHECK_FALSE(triple.exists_special);

  const BoolClass top = classify(T("T"));
  CHECK(top.is_constant);
  CHECK(top.is_monotone);
  CHECK(top.is_antimonotone);
  CHECK_FALSE(top.is_rest);
  CHECK(std::string(class_label(top)) == "constant");
  CHECK(std::string(class_label(classify(T("~p1 | ~p2")))) == "anti-monotone");
}

TEST_CASE("classify agrees with the brute-force definitions") {
  for (unsigned n = 0; n <= 4; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << n);
    for (std::uint64_t w = 0; w < count; ++w) {
      const TruthTable f = TruthTable::from_word(n, w);
      const BoolClass c = classify(f);
      REQUIRE(c == oracle::brute_classify(f));
      // Invariants of the flag set.
      CHECK(c.is_rest == (!c.is_monotone && !c.is_antimonotone));
      CHECK(c.forall_special == (c.is_rest && !c.is_tft));
      CHECK(c.exists_special == (c.is_rest && !c.is_ftf));
      CHECK(c.weakly_forall_special == !c.is_tft);
      CHECK(c.weakly_exists_special == !c.is_ftf);
      if (c.is_tft || c.is_ftf) CHECK(c.is_rest);
      CHECK_FALSE((c.forall_special && c.exists_special));
    }
  }
  Rng rng(5);
  for (unsigned n = 5; n <= 6; ++n)
    for (int k = 0; k < 300; ++k) {
      const TruthTable f = oracle::random_table(n, rng);
      REQUIRE(classify(f) == oracle::brute_classify(f));
      const TruthTable g = oracle::random_monotone(n, rng);
      REQUIRE(classify(g) == oracle::brute_classify(g));
    }
}

TEST_CASE("counts at arity 3") {
  int mono = 0, anti = 0, constant = 0, rest = 0;
  for (std::uint64_t w = 0; w < 256; ++w) {
    const BoolClass c = classify(TruthTable::from_word(3, w));
    mono += c.is_monotone;
    anti += c.is_antimonotone;
    constant += c.is_constant;
    rest += c.is_rest;
  }
  CHECK(mono == 20);
  CHECK(anti == 20);
  CHECK(constant == 2);
  CHECK(rest == 218);
}

TEST_CASE("monotone_lattice_expr") {
  const MonotoneDnf conj = monotone_lattice_expr(T("p1 & p2"));
  CHECK(conj.positive_clauses == std::set<std::vector<unsigned>>{{1, 2}});
  CHECK(conj.negative_clauses.empty());

  const TruthTable f = T("p1 | (p2 & p3)");
  const MonotoneDnf form = monotone_lattice_expr(f);
  CHECK(form.positive_clauses == std::set<std::vector<unsigned>>{{1}, {2, 3}});
  CHECK(eval_dnf(form, 3) == f);

  const TruthTable g = T("~(p1 | p2)");
  const MonotoneDnf inner = monotone_lattice_expr(g);
  CHECK(inner.positive_clauses == std::set<std::vector<unsigned>>{{1}, {2}});
  CHECK(eval_dnf(inner, 2).negated() == g);

  CHECK_THROWS_AS(monotone_lattice_expr(T("p1 -> p2")), PreconditionError);
  CHECK_THROWS_AS(monotone_lattice_expr(T("T")), PreconditionError);
}

TEST_CASE("diagonal") {
  CHECK(diagonal(T("(p1 & p2) | (p1 & p3) | (p2 & p3)")) == Unary::p1);
  CHECK(diagonal(T("~(p1 & p2)")) == Unary::not_p1);
  CHECK(diagonal(T("p1 -> p2")) == Unary::top);
  CHECK(diagonal(T("F")) == Unary::bot);
  SUBCASE("idempotent on its own result") {
    for (Unary u : {Unary::top, Unary::bot, Unary::p1, Unary::not_p1}) CHECK(diagonal(unary_table(u)) == u);
  }
}

TEST_CASE("apply_substitution") {
  CHECK(apply_substitution(T("p1 & p2"), {Slot::top, Slot::top}) == TruthTable::constant(2, true));
  CHECK(apply_substitution(T("p1 -> p2"), {Slot::p1, Slot::p1}) == TruthTable::constant(2, true));
  CHECK(apply_substitution(T(kXor), {Slot::p1, Slot::p1_and_p2}) == T("p1 & ~p2"));
  CHECK_THROWS_AS(apply_substitution(T("p1 & p2"), {Slot::p1}), PreconditionError);
  SUBCASE("matches the direct composition oracle") {
    Rng rng(11);
    for (int k = 0; k < 500; ++k) {
      const TruthTable f = oracle::random_table(3, rng);
      Substitution s;
      for (int i = 0; i < 3; ++i) s.push_back(static_cast<Slot>(rng.between(0, 5)));
      REQUIRE(apply_substitution(f, s) == oracle::compose(f, s));
    }
  }
}

TEST_CASE("tft_substitution") {
  const TruthTable imp = T2("p1 -> p2");
  CHECK(tft_substitution(T("p1 -> p2")) == Substitution{Slot::p1, Slot::p2});
  const Substitution s = tft_substitution(T("(p1 <-> p2) <-> p3"));
  CHECK(apply_substitution(T("(p1 <-> p2) <-> p3"), s) == imp);
  const TruthTable vac = T("~p1 | p2 | (p3 & ~p3)");
  const Substitution v = tft_substitution(vac);
  CHECK(v[0] == Slot::p1);
  CHECK(v[1] == Slot::p2);
  CHECK(apply_substitution(vac, v) == imp);
  CHECK_THROWS_AS(tft_substitution(T("p1 & ~p2")), PreconditionError);
}

TEST_CASE("ftf_substitution") {
  const TruthTable target = T("p1 & ~p2");
  CHECK(ftf_substitution(target) == Substitution{Slot::p1, Slot::p2});
  CHECK(ftf_substitution(T(kXor)) == Substitution{Slot::p1, Slot::p1_and_p2});
  const TruthTable triple = T("(p1 <-> p2) <-> p3");
  CHECK(apply_substitution(triple, ftf_substitution(triple)) == target);
  CHECK_THROWS_AS(ftf_substitution(T("p1 -> p2")), PreconditionError);
}

TEST_CASE("chain substitutions agree with exhaustive search on existence") {
  const TruthTable imp = T2("p1 -> p2");
  const TruthTable conj_neg = T2("p1 & ~p2");
  const std::vector<Slot> or_slots{Slot::p1, Slot::p2, Slot::p1_or_p2, Slot::top, Slot::bot};
  const std::vector<Slot> and_slots{Slot::p1, Slot::p2, Slot::p1_and_p2, Slot::top, Slot::bot};
  for (unsigned n = 1; n <= 3; ++n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << (1U << n)); ++w) {
      const TruthTable f = TruthTable::from_word(n, w);
      const BoolClass c = classify(f);
      const auto tft = oracle::search_substitution(f, imp, or_slots);
      REQUIRE(c.is_tft == tft.has_value());
      if (c.is_tft) {
        const Substitution s = tft_substitution(f);
        CHECK(uses_only(s, {Slot::p1, Slot::p2, Slot::p1_or_p2, Slot::top, Slot::bot}));
        CHECK(apply_substitution(f, s) == imp);
      }
      const auto ftf = oracle::search_substitution(f, conj_neg, and_slots);
      REQUIRE(c.is_ftf == ftf.has_value());
      if (c.is_ftf) {
        const Substitution s = ftf_substitution(f);
        CHECK(uses_only(s, {Slot::p1, Slot::p2, Slot::p1_and_p2, Slot::top, Slot::bot}));
        CHECK(apply_substitution(f, s) == conj_neg);
      }
    }
  }
}

TEST_CASE("rest_projections") {
  const TruthTable p1 = T2("p1");
  const TruthTable not_p1 = T2("~p1");
  {
    const auto [b, c] = rest_projections(T("p1 -> p2"));
    CHECK(b == Substitution{Slot::top, Slot::p1});
    CHECK(c == Substitution{Slot::p1, Slot::bot});
  }
  {
    const auto [b, c] = rest_projections(T(kXor));
    CHECK(b == Substitution{Slot::p1, Slot::bot});
    CHECK(c == Substitution{Slot::p1, Slot::top});
  }
  CHECK_THROWS_AS(rest_projections(T("p1 & p2")), PreconditionError);
  for (std::uint64_t w = 0; w < 256; ++w) {
    const TruthTable f = TruthTable::from_word(3, w);
    if (!classify(f).is_rest) continue;
    const auto [b, c] = rest_projections(f);
    CHECK(uses_only(b, {Slot::p1, Slot::top, Slot::bot}));
    CHECK(uses_only(c, {Slot::p1, Slot::top, Slot::bot}));
    CHECK(apply_substitution(f, b) == p1);
    CHECK(apply_substitution(f, c) == not_p1);
  }
}

TEST_CASE("non_ftf_dnf") {
  const MonotoneDnf imp = non_ftf_dnf(T("p1 -> p2"));
  CHECK(imp.positive_clauses == std::set<std::vector<unsigned>>{{2}});
  CHECK(imp.negative_clauses == std::set<std::vector<unsigned>>{{1}});
  CHECK(to_string(dnf_expr(imp)) == "p2 | ~p1");

  const MonotoneDnf conj = non_ftf_dnf(T("p1 & p2"));
  CHECK(conj.positive_clauses == std::set<std::vector<unsigned>>{{1, 2}});
  CHECK(conj.negative_clauses.empty());

  const MonotoneDnf neg = non_ftf_dnf(T("~p1"));
  CHECK(neg.positive_clauses.empty());
  CHECK(neg.negative_clauses == std::set<std::vector<unsigned>>{{1}});

  CHECK_THROWS_AS(non_ftf_dnf(T(kXor)), PreconditionError);
  CHECK_THROWS_AS(non_ftf_dnf(T("F")), PreconditionError);
}

TEST_CASE("non_tft_cnf") {
  const MonotoneDnf a = non_tft_cnf(T("p1 & ~p2"));
  CHECK(a.positive_clauses == std::set<std::vector<unsigned>>{{1}});
  CHECK(a.negative_clauses == std::set<std::vector<unsigned>>{{2}});

  const MonotoneDnf b = non_tft_cnf(T("p1 | p2"));
  CHECK(b.positive_clauses == std::set<std::vector<unsigned>>{{1, 2}});
  CHECK(b.negative_clauses.empty());

  const MonotoneDnf x = non_tft_cnf(T(kXor));
  CHECK(x.positive_clauses == std::set<std::vector<unsigned>>{{1, 2}});
  CHECK(x.negative_clauses == std::set<std::vector<unsigned>>{{1, 2}});
  CHECK(to_string(cnf_expr(x)) == "(p1 | p2) & (~p1 | ~p2)");

  CHECK_THROWS_AS(non_tft_cnf(T("p1 -> p2")), PreconditionError);
}

TEST_CASE("mixed normal forms are exact wherever they apply") {
  for (unsigned n = 1; n <= 4; ++n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << (1U << n)); ++w) {
      const TruthTable f = TruthTable::from_word(n, w);
      const BoolClass c = classify(f);
      if (c.is_constant) continue;
      if (!c.is_ftf) {
        const MonotoneDnf d = non_ftf_dnf(f);
        CHECK_FALSE(d.empty());
        REQUIRE(eval_dnf(d, n) == f);
        REQUIRE(table_of(dnf_expr(d), n) == f);
      }
      if (!c.is_tft) {
        const MonotoneDnf d = non_tft_cnf(f);
        CHECK_FALSE(d.empty());
        REQUIRE(eval_cnf(d, n) == f);
        REQUIRE(table_of(cnf_expr(d), n) == f);
      }
      REQUIRE(table_of(canonical_expr(f), n) == f);
    }
  }
}

TEST_CASE("canonical_expr is deterministic and readable") {
  CHECK(to_string(canonical_expr(T("p1 -> p2"))) == "p2 | ~p1");
  CHECK(to_string(canonical_expr(T("p1 & p2"))) == "p1 & p2");
  CHECK(to_string(canonical_expr(T("T"))) == "T");
}
