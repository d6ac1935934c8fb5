#include "asimkit/asim.hpp"

#include "asimkit/error.hpp"
#include "asimkit/experiment.hpp"
#include "asimkit/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asimkit;

namespace {

Signature with(std::initializer_list<const char*> members) {
  Signature s = Signature::builtins();
  for (const char* m : members) s.add(parse_connective(m));
  return s;
}

Signature modal() { return with({"neg := {~p1}", "box := forall[R1]{p1}", "dia := exists[R1]{p1}"}); }
Signature intuitionistic() { return with({"lambda5 := forall[R1]{~p1 | p2}"}); }

Model M(const char* json) { return parse_model(json); }

// a -> a2 with P1(a2) and an isolated b.
const char* kArrow = R"({"domain": ["a", "a2"], "relations": {"R1": [["a", "a2"]]}, "predicates": {"P1": ["a2"]}})";
const char* kPoint = R"({"domain": ["b"]})";

CrossRelation random_relation(std::size_t n1, std::size_t n2, double p, Rng& rng) {
  CrossRelation r(n1, n2);
  for (auto [d, ab] : oracle::all_pairs(n1, n2))
    if (rng.bernoulli(p)) r.rows(d)[ab.first].set(ab.second);
  return r;
}

}  // namespace

TEST_CASE("cross relations") {
  CrossRelation r(2, 3);
  r.set_fwd(0, 2);
  r.set_bwd(1, 1);
  const CrossRelation inv = r.inverse();
  CHECK(inv.bwd(2, 0));
  CHECK(inv.fwd(1, 1));
  CHECK(inv.count() == 2);
  CHECK(inv.inverse() == r);
  CHECK_FALSE(r.is_symmetric());
  CHECK((r & inv).empty());
  CHECK(r.subset_of(CrossRelation::full(2, 3)));

  const Model m1 = M(kArrow), m2 = M(kPoint);
  const CrossRelation parsed = parse_relation(R"({"fwd": [["a", "b"]], "bwd": [["b", "a2"]]})", m1, m2);
  CHECK(parsed.fwd(0, 0));
  CHECK(parsed.bwd(0, 1));
  CHECK(parse_relation(relation_to_json(parsed, m1, m2), m1, m2) == parsed);
  CHECK_THROWS_AS(parse_relation(R"({"fwd": [["b", "a"]]})", m1, m2), InputError);
  CHECK_THROWS_AS(parse_relation(R"({"fwd": [["a"]]})", m1, m2), InputError);
  CHECK_THROWS_AS(parse_relation(R"({"sideways": []})", m1, m2), InputError);
}

TEST_CASE("atom_preserving") {
  const Model one = M(R"({"domain": ["w"], "predicates": {"P1": ["w"]}})");
  const CrossRelation both = atom_preserving(one, one, {"P1"});
  CHECK(both.fwd(0, 0));
  CHECK(both.bwd(0, 0));

  const Model a = M(R"({"domain": ["a"], "predicates": {"P1": ["a"]}})");
  const Model b = M(R"({"domain": ["b"]})");
  const CrossRelation r = atom_preserving(a, b, {"P1"});
  CHECK_FALSE(r.fwd(0, 0));
  CHECK(r.bwd(0, 0));
  CHECK(atom_preserving(a, b, {}) == CrossRelation::full(1, 1));
}

TEST_CASE("core candidates") {
  Rng rng(1);
  const CrossRelation A = random_relation(3, 2, 0.5, rng);
  CHECK(core_candidate(classify(from_expr("p1 & p2")), A) == A);
  CHECK(core_candidate(classify(from_expr("~p1")), A) == A.inverse());
  CHECK(core_candidate(classify(from_expr("p1 -> p2")), A) == (A & A.inverse()));
  const CrossRelation sym = A & A.inverse();
  CHECK(core_candidate(classify(from_expr("p1 -> p2")), sym) == sym);
  CHECK(core_candidate(classify(from_expr("T")), CrossRelation(3, 2)) == CrossRelation::full(3, 2));
  CHECK(std::string(kind_name(core_candidate_kind(classify(from_expr("p1 <-> p2"))))) == "symmetric-part");
}

TEST_CASE("pair-level conditions") {
  const Model iso = M(R"({"domain": ["a"]})");
  const Model chain = M(R"({"domain": ["b", "b2"], "relations": {"R1": [["b", "b2"]]}})");
  const CrossRelation full = CrossRelation::full(1, 2);
  const Guards g{"R1"};

  SUBCASE("empty outer relations pass") {
    CHECK_FALSE(back_holds(CrossRelation(1, 2), full, g, iso, chain));
    CHECK_FALSE(forth_holds(CrossRelation(1, 2), full, g, iso, chain));
    CHECK_FALSE(sback_holds(CrossRelation(1, 2), full, g, iso, chain));
    CHECK_FALSE(sforth_holds(CrossRelation(1, 2), full, g, iso, chain));
  }
  SUBCASE("back fails when only the partner has a path") {
    CrossRelation outer(1, 2);
    outer.set_fwd(0, 0);
    const auto v = back_holds(outer, full, g, iso, chain);
    REQUIRE(v);
    CHECK(v->condition == "back");
    CHECK(v->first == "a");
    CHECK(v->second == "b");
    CHECK(v->direction == 0);
    CHECK(v->path == std::vector<std::string>{"b", "b2"});
    CHECK_FALSE(forth_holds(outer, full, g, iso, chain));
  }
  SUBCASE("forth fails when only the source has a path") {
    CrossRelation outer(1, 2);
    outer.set_bwd(0, 0);
    const auto v = forth_holds(outer, full, g, iso, chain);
    REQUIRE(v);
    CHECK(v->direction == 1);
    CHECK(v->path == std::vector<std::string>{"b", "b2"});
  }
  SUBCASE("complete graphs with a full target") {
    const Model k2 = random_model(2, {"R1"}, {}, 1.0, 0.0, 1);
    const Model k3 = random_model(3, {"R1"}, {}, 1.0, 0.0, 2);
    const CrossRelation f = CrossRelation::full(2, 3);
    CHECK_FALSE(back_holds(f, f, g, k2, k3));
    CHECK_FALSE(forth_holds(f, f, g, k2, k3));
  }
  SUBCASE("s-back reports the failing conjunct") {
    // b2 on the right is matched by a2 through B but the reversed pair is missing.
    const Model left = M(R"({"domain": ["a", "a2"], "relations": {"R1": [["a", "a2"]]}})");
    const Model right = M(R"({"domain": ["b", "b2"], "relations": {"R1": [["b", "b2"]]}})");
    CrossRelation B(2, 2);
    B.set_fwd(0, 0);
    B.set_fwd(1, 1);
    const auto v = sback_holds(B, B, g, left, right);
    REQUIRE(v);
    CHECK(v->condition == "s-back");
    CHECK(v->first == "a");
    CHECK(v->detail.find("second conjunct") != std::string::npos);
    B.set_bwd(1, 1);
    CHECK_FALSE(sback_holds(B, B, g, left, right));
    // With a symmetric B both conjuncts coincide with back.
    B.set_bwd(0, 0);
    CHECK(B.is_symmetric());
    CHECK(sback_holds(B, B, g, left, right).has_value() == back_holds(B, B, g, left, right).has_value());
  }
}

TEST_CASE("monotonicity in the target relation") {
  Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const Model m1 = random_model(1 + rng.between(0, 3), {"R1", "R2"}, {}, 0.4, 0.0, rng.raw());
    const Model m2 = random_model(1 + rng.between(0, 3), {"R1", "R2"}, {}, 0.4, 0.0, rng.raw());
    const CrossRelation outer = random_relation(m1.size(), m2.size(), 0.5, rng);
    const CrossRelation small = random_relation(m1.size(), m2.size(), 0.4, rng);
    CrossRelation big = small;
    for (auto [d, ab] : oracle::all_pairs(m1.size(), m2.size()))
      if (rng.bernoulli(0.4)) big.rows(d)[ab.first].set(ab.second);
    const Guards g = rng.bernoulli(0.5) ? Guards{"R1"} : Guards{"R1", "R2"};
    if (!back_holds(outer, small, g, m1, m2)) CHECK_FALSE(back_holds(outer, big, g, m1, m2));
    if (!forth_holds(outer, small, g, m1, m2)) CHECK_FALSE(forth_holds(outer, big, g, m1, m2));
    if (!sback_holds(outer, small, g, m1, m2)) CHECK_FALSE(sback_holds(outer, big, g, m1, m2));
    if (!sforth_holds(outer, small, g, m1, m2)) CHECK_FALSE(sforth_holds(outer, big, g, m1, m2));
  }
}

TEST_CASE("max_inner_target") {
  // Three-element chains on both sides.
  const Model c3 = M(R"({"domain": ["a0", "a1", "a2"], "relations": {"R1": [["a0","a1"],["a1","a2"]]}})");
  const Model d3 = M(R"({"domain": ["b0", "b1", "b2"], "relations": {"R1": [["b0","b1"],["b1","b2"]]}})");
  const GuardedConnective dia = parse_connective("exists[R1]{p1}");
  const CrossRelation full = CrossRelation::full(3, 3);
  const CrossRelation X = max_inner_target(dia, full, full, c3, d3);
  // Forth with a full target: the partner needs a successor whenever the source has one.
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) CHECK(X.fwd(a, b) == (a == 2 || b < 2));

  const CrossRelation none = max_inner_target(dia, CrossRelation(3, 3), full, c3, d3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) CHECK(none.fwd(a, b) == (a == 2));

  const Model e1 = M(R"({"domain": ["x", "y"]})");
  CHECK(max_inner_target(dia, CrossRelation(2, 2), full.size1() == 3 ? CrossRelation::full(2, 2) : full, e1, e1) ==
        CrossRelation::full(2, 2));
  CHECK_THROWS_AS(max_inner_target(parse_connective("{p1}"), full, full, c3, d3), PreconditionError);
}

TEST_CASE("connective conditions") {
  Rng rng(9);
  const Model m1 = M(kArrow), m2 = M(kPoint);
  const CrossRelation A = random_relation(2, 1, 0.6, rng);
  CHECK_FALSE(connective_condition(parse_connective("and := {p1 & p2}"), A, m1, m2));

  CrossRelation asym(2, 1);
  asym.set_fwd(0, 0);
  const auto v = connective_condition(parse_connective("neg := {~p1}"), asym, m1, m2);
  REQUIRE(v);
  CHECK(v->condition == "degree0");
  CHECK(v->connective == "neg");
  CHECK(v->first == "a");
  CHECK(v->second == "b");

  CHECK_THROWS_AS(connective_condition(parse_connective("forall[R1] exists[R1] forall[R1]{p1}"), asym, m1, m2),
                  UnsupportedFragment);
  AsimOptions loose;
  loose.allow_nonstandard = true;
  CHECK_NOTHROW(connective_condition(parse_connective("forall[R1] exists[R1] forall[R1]{p1}"), asym, m1, m2, loose));
}

TEST_CASE("is_asimulation") {
  const Signature s = modal();
  const Model m1 = M(kArrow);
  const Model copy = M(R"({"domain": ["u", "u2"], "relations": {"R1": [["u", "u2"]]}, "predicates": {"P1": ["u2"]}})");
  const CrossRelation iso = parse_relation(R"({"fwd": [["a","u"],["a2","u2"]], "bwd": [["u","a"],["u2","a2"]]})", m1, copy);
  CHECK(is_asimulation(s, {"P1"}, m1, copy, iso).empty());

  const auto empty = is_asimulation(s, {"P1"}, m1, copy, CrossRelation(2, 2));
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].condition == "empty");

  CrossRelation bad = iso;
  bad.set_fwd(1, 0);
  bad.set_bwd(0, 1);
  bool atom = false;
  for (const auto& v : is_asimulation(s, {"P1"}, m1, copy, bad))
    if (v.condition == "atom") {
      atom = true;
      CHECK(v.first == "a2");
      CHECK(v.second == "u");
    }
  CHECK(atom);
  CHECK(empty[0].to_json().find("\"condition\":\"empty\"") != std::string::npos);
}

TEST_CASE("largest asimulation: examples") {
  const Signature s = modal();
  const Model one = M(R"({"domain": ["w"], "predicates": {"P1": ["w"]}})");
  const LargestResult r1 = largest_asimulation(s, {"P1"}, one, one);
  CHECK(r1.relation == CrossRelation::full(1, 1));

  const Model m1 = M(kArrow), m2 = M(kPoint);
  const Signature d = with({"dia := exists[R1]{p1}"});
  const LargestResult r = largest_asimulation(d, {"P1"}, m1, m2);
  CHECK_FALSE(r.relation.fwd(0, 0));

  SUBCASE("without negation the result can be asymmetric") {
    const LargestResult asym = largest_asimulation(intuitionistic(), {"P1"}, m1, m2);
    CHECK_FALSE(asym.relation.is_symmetric());
    CHECK(is_asimulation(intuitionistic(), {"P1"}, m1, m2, asym.relation).empty());
  }
  SUBCASE("no asimulation at all") {
    const Model p = M(R"({"domain": ["x"], "predicates": {"P1": ["x"]}})");
    const Model q = M(R"({"domain": ["y"]})");
    const LargestResult none = largest_asimulation(s, {"P1"}, p, q);
    CHECK(none.none);
    CHECK(none.relation.empty());
  }
}

TEST_CASE("largest asimulation is sound and maximal on random pairs") {
  Rng rng(31);
  const std::vector<Signature> sigs{modal(), intuitionistic(),
                                    with({"l2 := forall[R1,R2]{p1}", "l3 := forall[R1] exists[R2]{p1}",
                                          "l5 := forall[R1]{~p1 | p2}", "s := exists[R2]{p1 -> p2}"})};
  int accepted = 0;
  for (int k = 0; k < 400; ++k) {
    const Signature& s = sigs[k % sigs.size()];
    const auto rels = s.relation_symbols();
    const Model m1 = random_model(1 + rng.between(0, 2), rels, {"P1"}, 0.35, 0.5, rng.raw());
    const Model m2 = random_model(1 + rng.between(0, 2), rels, {"P1"}, 0.35, 0.5, rng.raw());
    const LargestResult L = largest_asimulation(s, {"P1"}, m1, m2);
    if (!L.none) CHECK(is_asimulation(s, {"P1"}, m1, m2, L.relation).empty());
    CrossRelation S = random_relation(m1.size(), m2.size(), 0.6, rng);
    if (needs_symmetry(s)) S &= S.inverse();
    if (is_asimulation(s, {"P1"}, m1, m2, S).empty()) {
      ++accepted;
      CHECK(S.subset_of(L.relation));
    }
  }
  CHECK(accepted > 10);
}

TEST_CASE("largest asimulation equals the union of all asimulations on tiny pairs") {
  Rng rng(44);
  const std::vector<Signature> sigs{modal(), intuitionistic(), with({"s := forall[R1]{p1 & ~p2}"})};
  for (int k = 0; k < 30; ++k) {
    const Signature& s = sigs[k % sigs.size()];
    const Model m1 = random_model(1 + rng.between(0, 1), {"R1"}, {"P1", "P2"}, 0.5, 0.4, rng.raw());
    const Model m2 = random_model(1 + rng.between(0, 1), {"R1"}, {"P1", "P2"}, 0.5, 0.4, rng.raw());
    const auto pairs = oracle::all_pairs(m1.size(), m2.size());
    CrossRelation all(m1.size(), m2.size());
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      CrossRelation r(m1.size(), m2.size());
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if ((mask >> i) & 1U) r.rows(pairs[i].first)[pairs[i].second.first].set(pairs[i].second.second);
      if (is_asimulation(s, {"P1", "P2"}, m1, m2, r).empty())
        for (int d = 0; d < 2; ++d)
          for (std::size_t a = 0; a < r.rows(d).size(); ++a) all.rows(d)[a] |= r.rows(d)[a];
    }
    CHECK(largest_asimulation(s, {"P1", "P2"}, m1, m2).relation == all);
  }
}

TEST_CASE("modal asimulations are bisimulations") {
  Rng rng(7);
  for (int k = 0; k < 40; ++k) {
    const Model m1 = random_model(1 + rng.between(0, 5), {"R1"}, {"P1"}, 0.3, 0.5, rng.raw());
    const Model m2 = random_model(1 + rng.between(0, 5), {"R1"}, {"P1"}, 0.3, 0.5, rng.raw());
    const LargestResult L = largest_asimulation(modal(), {"P1"}, m1, m2);
    const auto bis = oracle::bisimulation(m1, m2, {"R1"}, {"P1"});
    for (std::size_t a = 0; a < m1.size(); ++a)
      for (std::size_t b = 0; b < m2.size(); ++b) REQUIRE(L.relation.fwd(a, b) == bis[a][b]);
    CHECK(L.relation.is_symmetric());
  }
}

TEST_CASE("intuitionistic asimulations follow the clause oracle") {
  Rng rng(8);
  for (int k = 0; k < 40; ++k) {
    const Model m1 = random_preorder_model(1 + rng.between(0, 4), "R1", {"P1", "P2"}, 0.3, 0.3, rng.raw());
    const Model m2 = random_preorder_model(1 + rng.between(0, 4), "R1", {"P1", "P2"}, 0.3, 0.3, rng.raw());
    const LargestResult L = largest_asimulation(intuitionistic(), {"P1", "P2"}, m1, m2);
    const auto plain = oracle::to_plain(L.relation);
    CHECK(oracle::intuitionistic_clause(m1, m2, "R1", {"P1", "P2"}, plain));
    CHECK(plain == oracle::largest_intuitionistic(m1, m2, "R1", {"P1", "P2"}));
    CHECK_FALSE(connective_condition(intuitionistic().at("lambda5"), L.relation, m1, m2));
  }
}

TEST_CASE("invariance") {
  const Model m1 = M(R"({"domain": ["a"]})");
  const Model m2 = M(R"({"domain": ["b"], "predicates": {"P1": ["b"]}})");
  CrossRelation A(1, 1);
  A.set_fwd(0, 0);
  CHECK_FALSE(invariance_check(parse_fo("F"), A, m1, m2));
  CHECK_FALSE(invariance_check(parse_fo("~P1(x)"), CrossRelation(1, 1), m1, m2));
  CHECK_FALSE(invariance_check(parse_fo("~P1(x)"), A.inverse(), m1, m2));
  const auto cx = invariance_check(parse_fo("~P1(x)"), A, m1, m2);
  REQUIRE(cx);
  CHECK(cx->direction == 0);
  CHECK_THROWS_AS(invariance_check(parse_fo("R1(x,y)"), A, m1, m2), PreconditionError);

  SUBCASE("fragment formulas are invariant along the largest asimulation") {
    Rng rng(5);
    const Signature s = intuitionistic();
    for (int k = 0; k < 20; ++k) {
      const Model p = random_preorder_model(1 + rng.between(0, 3), "R1", {"P1"}, 0.4, 0.4, rng.raw());
      const Model q = random_preorder_model(1 + rng.between(0, 3), "R1", {"P1"}, 0.4, 0.4, rng.raw());
      const CrossRelation L = largest_asimulation(s, {"P1"}, p, q).relation;
      for (int j = 0; j < 10; ++j) {
        const FragmentFormula f = oracle::random_formula(s, {"P1"}, 3, rng);
        CHECK_FALSE(invariance_check(std_translate(f, "x1", s), L, p, q));
      }
    }
  }
}

TEST_CASE("preservation relation") {
  Rng rng(15);
  const Signature s = modal();
  for (int k = 0; k < 20; ++k) {
    const Model m1 = random_model(1 + rng.between(0, 3), {"R1"}, {"P1"}, 0.4, 0.5, rng.raw());
    const Model m2 = random_model(1 + rng.between(0, 3), {"R1"}, {"P1"}, 0.4, 0.5, rng.raw());
    const Preservation p0 = preservation_relation(s, {"P1"}, m1, m2, 0);
    CHECK(p0.relation == atom_preserving(m1, m2, {"P1"}));
    // Negated atoms appear at depth 1, so from there on related points agree on P1.
    const CrossRelation atoms = atom_preserving(m1, m2, {"P1"});
    CHECK(preservation_relation(s, {"P1"}, m1, m2, 1).relation.subset_of(atoms & atoms.inverse()));
    CrossRelation prev = p0.relation;
    for (unsigned d = 1; d <= 4; ++d) {
      const Preservation pd = preservation_relation(s, {"P1"}, m1, m2, d);
      CHECK(pd.relation.subset_of(prev));
      prev = pd.relation;
    }
    const CrossRelation L = largest_asimulation(s, {"P1"}, m1, m2).relation;
    CHECK(L.subset_of(prev));
    const Sandwich sw = sandwich_test(s, {"P1"}, m1, m2, L, 6);
    CHECK(sw.inclusion_ok);
    CHECK(sw.equal_at.has_value());
  }
  CHECK(joint_predicates(M(R"({"domain":["a"],"predicates":{"P2":["a"]}})"),
                         M(R"({"domain":["b"],"predicates":{"P1":[]}})")) == std::vector<std::string>{"P1", "P2"});
}
