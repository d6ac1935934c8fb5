#pragma once

// First-order formulas of the correspondence language: unary predicates
// P<k>, binary relations R<k>, no identity.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asimkit/bits.hpp"

namespace asimkit {

class Model;

struct FoFormula {
  enum class Kind { top, bot, pred, rel, neg, conj, disj, imp, iff, forall, exists };

  Kind kind = Kind::top;
  std::string symbol;              // predicate / relation name
  std::vector<std::string> vars;   // atom arguments, or the bound variable
  std::vector<FoFormula> kids;

  static FoFormula top();
  static FoFormula bot();
  static FoFormula pred(std::string p, std::string v);
  static FoFormula rel(std::string r, std::string v1, std::string v2);
  static FoFormula negation(FoFormula a);
  /// Flattening n-ary constructors; the empty list yields the unit.
  static FoFormula conjunction(std::vector<FoFormula> parts);
  static FoFormula disjunction(std::vector<FoFormula> parts);
  static FoFormula implies(FoFormula a, FoFormula b);
  static FoFormula iff(FoFormula a, FoFormula b);
  static FoFormula forall(std::string v, FoFormula body);
  static FoFormula exists(std::string v, FoFormula body);

  friend bool operator==(const FoFormula&, const FoFormula&) = default;
};

FoFormula parse_fo(std::string_view text);
std::string to_string(const FoFormula& phi);

std::set<std::string> free_vars(const FoFormula& phi);
/// Every variable name occurring anywhere, bound or free.
std::set<std::string> all_vars(const FoFormula& phi);
/// Replaces free occurrences of `from`. The caller guarantees `to` is not
/// captured (it does not occur bound in `phi`).
FoFormula rename_free(const FoFormula& phi, const std::string& from, const std::string& to);

using Assignment = std::map<std::string, std::size_t>;

/// Tarskian satisfaction; quantifiers range over the whole domain.
bool eval_fo(const Model& m, const Assignment& alpha, const FoFormula& phi);
/// The set of elements a with m, {var := a} |= phi.
Bits eval_fo_set(const Model& m, const FoFormula& phi, const std::string& var);

}  // namespace asimkit
