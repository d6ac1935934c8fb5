#pragma once

// Guarded connectives: a propositional core under alternating guarded
// quantifier blocks, e.g. forall[R1] exists[R3]{p1}.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asimkit/boolfn.hpp"
#include "asimkit/fo.hpp"
#include "asimkit/model.hpp"

namespace asimkit {

enum class Quantifier { forall, exists };

const char* quantifier_name(Quantifier q);

struct GuardBlock {
  Quantifier quantifier = Quantifier::forall;
  Guards guards;

  friend bool operator==(const GuardBlock&, const GuardBlock&) = default;
};

class GuardedConnective {
 public:
  GuardedConnective() = default;
  /// Adjacent blocks with the same quantifier are merged into one block
  /// with the concatenated guard list, which denotes the same formula.
  GuardedConnective(std::string name, std::vector<GuardBlock> blocks, TruthTable core);

  const std::string& name() const { return name_; }
  unsigned arity() const { return core_.arity(); }
  unsigned degree() const { return static_cast<unsigned>(blocks_.size()); }
  /// Outermost block first.
  const std::vector<GuardBlock>& blocks() const { return blocks_; }
  const TruthTable& core() const { return core_; }

  GuardedConnective renamed(std::string name) const;

  /// Identity is structural: the name is a label and does not take part.
  friend bool operator==(const GuardedConnective& a, const GuardedConnective& b) {
    return a.blocks_ == b.blocks_ && a.core_ == b.core_;
  }
  friend bool operator!=(const GuardedConnective& a, const GuardedConnective& b) { return !(a == b); }

 private:
  std::string name_;
  std::vector<GuardBlock> blocks_;
  TruthTable core_;
};

/// Accepts "name := forall[R1] exists[R3]{ p1 }" or the bare body, which
/// then takes `default_name`.
GuardedConnective parse_connective(std::string_view text, std::string default_name = "mu");
/// Body syntax, core rendered canonically. Re-parses to an equal connective
/// whenever every core variable is essential.
std::string to_string(const GuardedConnective& mu);

unsigned degree(const GuardedConnective& mu);
/// mu^i keeps the innermost i blocks; mu^0 is the bare core.
GuardedConnective ancestor(const GuardedConnective& mu, unsigned i);
/// Strips innermost forall blocks over T and innermost exists blocks over F.
GuardedConnective normalize(const GuardedConnective& mu);
bool is_normalized(const GuardedConnective& mu);

struct ConnectiveClass {
  unsigned degree = 0;
  std::string nu_prefix;  // one letter per block, "A" or "E", outermost first
  BoolClass core_class;
  bool is_flat = false;
  bool is_modality = false;
  bool is_regular = false;
  bool is_special = false;
  bool is_weakly_special = false;
  bool is_standard = false;
};

ConnectiveClass classify_connective(const GuardedConnective& mu);

/// A degree-1 connective is special when its core is Q-special for its
/// own quantifier. Always false for other degrees.
bool is_special(const GuardedConnective& mu);

/// Ordered set of named connectives.
class Signature {
 public:
  Signature() = default;

  /// and, or, top, bot.
  static Signature builtins();

  void add(GuardedConnective mu);
  const GuardedConnective* find(std::string_view name) const;
  const GuardedConnective& at(std::string_view name) const;
  /// First connective (in name order) with this degree-0 core.
  std::optional<std::string> find_degree0(const TruthTable& core) const;
  std::string conj_name() const;
  std::string disj_name() const;

  std::size_t size() const { return members_.size(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  std::vector<std::string> names() const;
  /// Relation symbols used by any guard.
  std::vector<std::string> relation_symbols() const;

 private:
  std::map<std::string, GuardedConnective, std::less<>> members_;
};

/// {"connectives": {"name": "body", ...}, "builtins": true}. Built-ins are
/// included unless "builtins" is false; members are normalized on load.
Signature parse_signature(std::string_view json_text);
Signature read_signature_file(const std::string& path);

struct SignatureViolation {
  std::string connective;  // empty for signature-wide problems
  std::string reason;
};

/// Empty when the signature generates a standard fragment.
std::vector<SignatureViolation> validate_standard_fragment(const Signature& sig);

/// Fresh bound-variable supply x2, x3, ... skipping reserved names.
class FreshVars {
 public:
  explicit FreshVars(std::set<std::string> reserved = {}, unsigned next = 2)
      : reserved_(std::move(reserved)), next_(next) {}
  std::string take();
  void reserve(const std::string& v) { reserved_.insert(v); }

 private:
  std::set<std::string> reserved_;
  unsigned next_;
};

/// Bound variables the connective introduces, outermost block first.
std::vector<std::string> allocate_bound_vars(const GuardedConnective& mu, FreshVars& fresh);

/// The guard chain of `mu` starting at `var` around `core_args`, which are
/// already formulas in the innermost bound variable (`var` at degree 0).
FoFormula build_translation(const GuardedConnective& mu, const std::string& var,
                            const std::vector<std::string>& bound, std::vector<FoFormula> core_args);

/// mu applied to `args`, each a formula whose only free variable is `var`.
FoFormula std_translation(const GuardedConnective& mu, const std::vector<FoFormula>& args,
                          const std::string& var);

/// Core as a first-order formula over the given argument formulas.
FoFormula core_formula(const TruthTable& core, const std::vector<FoFormula>& args);

/// Truth set of mu at every element given the truth sets of its arguments.
Bits apply_connective(const Model& m, const GuardedConnective& mu, const std::vector<Bits>& args);

}  // namespace asimkit
