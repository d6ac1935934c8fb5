#pragma once

// Formulas of a guarded fragment: atoms P<k> and applications of named
// connectives from a Signature.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asimkit/connective.hpp"
#include "asimkit/fo.hpp"
#include "asimkit/model.hpp"

namespace asimkit {

struct FragmentFormula {
  enum class Kind { atom, apply };
  Kind kind = Kind::atom;
  std::string name;  // predicate or connective
  std::vector<FragmentFormula> kids;

  static FragmentFormula atom(std::string pred);
  static FragmentFormula apply(std::string connective, std::vector<FragmentFormula> args);

  friend bool operator==(const FragmentFormula&, const FragmentFormula&) = default;
};

/// `F := P<k> | name | name "(" F ("," F)* ")"`; a nullary connective may
/// be written with or without "()".
FragmentFormula parse_fragment(std::string_view text, const Signature& sig);
std::string to_string(const FragmentFormula& f);

/// Nesting depth of applications with arguments; atoms and nullary
/// applications have depth 0.
unsigned depth(const FragmentFormula& f);

/// Throws InputError on unknown connectives or arity mismatches.
void check_formula(const FragmentFormula& f, const Signature& sig);

/// Truth set over the whole domain, by direct guard-path evaluation.
Bits eval_fragment_set(const Model& m, const FragmentFormula& f, const Signature& sig);
bool eval_fragment(const Model& m, std::size_t point, const FragmentFormula& f, const Signature& sig);

/// Bound variables are numbered x2, x3, ... top-down and left to right.
FoFormula std_translate(const FragmentFormula& f, const std::string& var, const Signature& sig);

// ---------------------------------------------------------------------------
// Bounded enumeration

struct EnumerationLimits {
  std::size_t max_formulas = 200000;
  std::size_t max_candidates = 20000000;
};

enum class EnumStatus { complete, budget_exhausted, stopped };
const char* status_name(EnumStatus s);

/// Representatives stored as a DAG; node i's children precede it.
class Enumeration {
 public:
  struct Node {
    int connective = -1;  // index into connective_names, -1 for atoms
    std::string atom;
    std::vector<std::uint32_t> kids;
    unsigned depth = 0;
  };

  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  FragmentFormula formula(std::size_t i) const;
  /// Truth vector over U1 followed by U2 (semantic mode only).
  const Bits& vector(std::size_t i) const { return vectors_.at(i); }

  EnumStatus status = EnumStatus::complete;
  /// Semantic mode: the last level added nothing, so deeper levels add nothing.
  bool closed = false;
  /// Deepest level that was fully generated.
  unsigned depth_reached = 0;
  std::size_t candidates = 0;
  std::vector<std::string> connective_names;

 private:
  friend class Enumerator;
  std::vector<Node> nodes_;
  std::vector<Bits> vectors_;
};

/// Syntactic enumeration of every formula of depth at most `depth`.
Enumeration enumerate_fragment(const Signature& sig, const std::vector<std::string>& preds, unsigned depth,
                               const EnumerationLimits& limits = {});

/// Enumeration up to equivalence on the disjoint union of m1 and m2: one
/// representative per truth vector. `on_new` may stop the search early by
/// returning true.
Enumeration enumerate_fragment(const Signature& sig, const std::vector<std::string>& preds, unsigned depth,
                               const Model& m1, const Model& m2, const EnumerationLimits& limits = {},
                               const std::function<bool(const Enumeration&, std::size_t)>& on_new = {});

struct Distinction {
  std::optional<FragmentFormula> formula;
  EnumStatus status = EnumStatus::complete;
};

/// A formula of depth at most `depth` true at p1 and false at p2. With an
/// empty `preds` the predicate symbols of both models are used.
Distinction distinguishing_formula(const Signature& sig, const PointedModel& p1, const PointedModel& p2,
                                   unsigned depth, std::vector<std::string> preds = {},
                                   const EnumerationLimits& limits = {});

// ---------------------------------------------------------------------------
// Distribution laws for degree-1 modalities

enum class FoldMode { conjunction, disjunction };

/// psi_1 op psi_2 op ... folded to the left with the signature's and/or.
FragmentFormula fold(const Signature& sig, FoldMode mode, const std::vector<FragmentFormula>& psis);

/// The left side of the distribution law: op_i mu(psi_i, ..., psi_i).
FragmentFormula distribution_lhs(const Signature& sig, const std::string& mu, const std::vector<FragmentFormula>& psis,
                                 FoldMode mode);

/// The single application mu(op' psi_i, ..., op' psi_i) equivalent to the
/// fold. Forall-guarded modalities pair with conjunction, exists-guarded
/// ones with disjunction; op' flips when the core is anti-monotone.
FragmentFormula collapse_fold(const Signature& sig, const std::string& mu, const std::vector<FragmentFormula>& psis,
                                FoldMode mode);

/// mu(F(psis), ..., F(psis)) with F the lattice term of the core.
FragmentFormula unify_args(const Signature& sig, const std::string& mu, const std::vector<FragmentFormula>& psis);

}  // namespace asimkit
