#pragma once

// Boolean functions as explicit truth tables, their monotonicity taxonomy,
// and the constructive representations used by the connective layer.

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asimkit/bits.hpp"

namespace asimkit {

/// Boolean function of fixed arity n. Input tuples are indexed as n-bit
/// binary numbers with p1 in the most significant position, so the tuple
/// (1,0) of a binary function is index 2.
class TruthTable {
 public:
  static constexpr unsigned kMaxArity = 16;

  /// The nullary constant false.
  TruthTable();
  TruthTable(unsigned arity, Bits outputs);

  static TruthTable constant(unsigned arity, bool value);
  /// The i-th projection p_i (1-based).
  static TruthTable variable(unsigned arity, unsigned i);
  /// Low 2^arity bits of `word` become the outputs; arity ≤ 6.
  static TruthTable from_word(unsigned arity, std::uint64_t word);

  unsigned arity() const { return arity_; }
  std::size_t size() const { return outputs_.size(); }
  bool at(std::size_t tuple) const { return outputs_[tuple]; }
  bool operator[](std::size_t tuple) const { return outputs_[tuple]; }
  const Bits& outputs() const { return outputs_; }

  /// Value of argument p_i (1-based) inside tuple index `tuple`.
  bool arg(std::size_t tuple, unsigned i) const { return (tuple >> (arity_ - i)) & 1U; }
  /// Index bit that carries p_i.
  std::size_t var_mask(unsigned i) const { return std::size_t{1} << (arity_ - i); }

  bool is_constant() const { return outputs_.none() || outputs_.all(); }
  TruthTable negated() const;

  /// Outputs as a string of '0'/'1', tuple 0 first.
  std::string to_string() const;

  friend bool operator==(const TruthTable& a, const TruthTable& b) {
    return a.arity_ == b.arity_ && a.outputs_ == b.outputs_;
  }
  friend bool operator!=(const TruthTable& a, const TruthTable& b) { return !(a == b); }
  friend bool operator<(const TruthTable& a, const TruthTable& b) {
    if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
    return a.outputs_ < b.outputs_;
  }

 private:
  unsigned arity_ = 0;
  Bits outputs_;
};

/// Small propositional syntax tree over p1..pn, used both for parsing and
/// for the canonical rendering of cores.
struct BoolExpr {
  enum class Kind { constant, var, neg, conj, disj, imp, iff };
  Kind kind = Kind::constant;
  bool value = false;  // for constant
  unsigned var = 0;    // for var, 1-based
  std::vector<BoolExpr> kids;

  static BoolExpr make_const(bool v);
  static BoolExpr make_var(unsigned i);
  static BoolExpr make_not(BoolExpr e);
  /// n-ary; a single operand is returned unchanged and no operand yields the unit.
  static BoolExpr make_and(std::vector<BoolExpr> es);
  static BoolExpr make_or(std::vector<BoolExpr> es);
  static BoolExpr make_binary(Kind k, BoolExpr a, BoolExpr b);

  unsigned max_var() const;
  bool eval(std::size_t tuple, unsigned arity) const;
};

BoolExpr parse_bool_expr(std::string_view text);
/// Renders with the same ASCII operators the parser accepts.
std::string to_string(const BoolExpr& e);
TruthTable table_of(const BoolExpr& e, unsigned arity);

/// Parses and tabulates; the highest variable index fixes the arity.
TruthTable from_expr(std::string_view text);

struct BoolClass {
  bool is_constant = false;
  bool is_monotone = false;
  bool is_antimonotone = false;
  bool is_rest = false;
  bool is_tft = false;
  bool is_ftf = false;
  bool forall_special = false;
  bool exists_special = false;
  bool weakly_forall_special = false;
  bool weakly_exists_special = false;

  friend bool operator==(const BoolClass&, const BoolClass&) = default;
};

BoolClass classify(const TruthTable& f);
/// constant, monotone, anti-monotone or rest.
const char* class_label(const BoolClass& c);

enum class Slot : std::uint8_t { p1 = 0, p2 = 1, p1_or_p2 = 2, p1_and_p2 = 3, top = 4, bot = 5 };
using Substitution = std::vector<Slot>;

const char* slot_name(Slot s);
std::string to_string(const Substitution& s);

/// Composite f(A_1,...,A_n) as a binary function of p1, p2.
TruthTable apply_substitution(const TruthTable& f, const Substitution& s);

/// Two families of variable-index sets (1-based, sorted). As a DNF it reads
/// OR of (AND of positives) and OR of (AND of negated variables); the CNF
/// reading swaps the roles of AND and OR.
struct MonotoneDnf {
  std::set<std::vector<unsigned>> positive_clauses;
  std::set<std::vector<unsigned>> negative_clauses;

  bool empty() const { return positive_clauses.empty() && negative_clauses.empty(); }
  friend bool operator==(const MonotoneDnf&, const MonotoneDnf&) = default;
};

TruthTable eval_dnf(const MonotoneDnf& form, unsigned arity);
TruthTable eval_cnf(const MonotoneDnf& form, unsigned arity);
BoolExpr dnf_expr(const MonotoneDnf& form);
BoolExpr cnf_expr(const MonotoneDnf& form);

/// Lattice term of a non-constant monotone function. For an anti-monotone
/// function the term represents the negation of f, so that f = ~term.
MonotoneDnf monotone_lattice_expr(const TruthTable& f);

enum class Unary { top, bot, p1, not_p1 };
const char* unary_name(Unary u);
TruthTable unary_table(Unary u);

/// f(p1, ..., p1).
Unary diagonal(const TruthTable& f);

/// Substitution turning a TFT function into p1 -> p2.
Substitution tft_substitution(const TruthTable& f);
/// Substitution turning an FTF function into p1 & ~p2.
Substitution ftf_substitution(const TruthTable& f);
/// Substitutions over {P1, T, F} turning a rest function into p1 and ~p1.
std::pair<Substitution, Substitution> rest_projections(const TruthTable& f);

/// Mixed positive/negative DNF of a non-constant function that is not FTF.
MonotoneDnf non_ftf_dnf(const TruthTable& f);
/// Mixed positive/negative CNF of a non-constant function that is not TFT.
MonotoneDnf non_tft_cnf(const TruthTable& f);

/// Deterministic readable expression for any table: constants, lattice
/// terms, negated lattice terms, the mixed DNF, the mixed CNF, and a
/// minterm expansion as the last resort.
BoolExpr canonical_expr(const TruthTable& f);

}  // namespace asimkit
