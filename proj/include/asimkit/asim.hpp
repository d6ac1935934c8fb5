#pragma once

// Cross-model relations and asimulations between two finite models.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asimkit/bits.hpp"
#include "asimkit/boolfn.hpp"
#include "asimkit/connective.hpp"
#include "asimkit/fo.hpp"
#include "asimkit/fragment.hpp"
#include "asimkit/model.hpp"

namespace asimkit {

/// Pairs from U1 x U2 (fwd) together with pairs from U2 x U1 (bwd), kept as
/// bit rows. A pair always carries its direction.
class CrossRelation {
 public:
  CrossRelation() = default;
  CrossRelation(std::size_t n1, std::size_t n2);
  static CrossRelation full(std::size_t n1, std::size_t n2);

  std::size_t size1() const { return fwd_.size(); }
  std::size_t size2() const { return bwd_.size(); }

  /// Direction 0 is fwd (U1 to U2), direction 1 is bwd (U2 to U1).
  const std::vector<Bits>& rows(int dir) const { return dir == 0 ? fwd_ : bwd_; }
  std::vector<Bits>& rows(int dir) { return dir == 0 ? fwd_ : bwd_; }

  bool fwd(std::size_t a, std::size_t b) const { return fwd_[a].test(b); }
  bool bwd(std::size_t b, std::size_t a) const { return bwd_[b].test(a); }
  void set_fwd(std::size_t a, std::size_t b, bool v = true) { fwd_[a][b] = v; }
  void set_bwd(std::size_t b, std::size_t a, bool v = true) { bwd_[b][a] = v; }

  /// fwd' is the transpose of bwd and bwd' the transpose of fwd.
  CrossRelation inverse() const;
  CrossRelation& operator&=(const CrossRelation& o);
  friend CrossRelation operator&(CrossRelation a, const CrossRelation& b) { return a &= b; }
  bool subset_of(const CrossRelation& o) const;
  bool is_symmetric() const;
  std::size_t count() const;
  bool empty() const { return count() == 0; }

  friend bool operator==(const CrossRelation&, const CrossRelation&) = default;

 private:
  std::vector<Bits> fwd_;
  std::vector<Bits> bwd_;
};

/// {"fwd": [["a","b"]], "bwd": [["b","a"]]} with names checked against the models.
CrossRelation parse_relation(std::string_view json_text, const Model& m1, const Model& m2);
std::string relation_to_json(const CrossRelation& r, const Model& m1, const Model& m2, int indent = -1);
CrossRelation read_relation_file(const std::string& path, const Model& m1, const Model& m2);

enum class CoreCandidateKind { full, same, inverse, symmetric_part };
const char* kind_name(CoreCandidateKind k);
CoreCandidateKind core_candidate_kind(const BoolClass& c);
/// constant: full; monotone: A; anti-monotone: inverse(A); rest: A & inverse(A).
CrossRelation core_candidate(const BoolClass& c, const CrossRelation& A);

struct Violation {
  std::string connective;
  /// back, forth, s-back, s-forth, atom, degree0 or empty.
  std::string condition;
  std::string first, second;  // the pair, in its own direction
  int direction = 0;          // 0 fwd, 1 bwd
  std::vector<std::string> path;
  std::string detail;

  std::string to_json() const;
};

/// Pair-level conditions over every outer pair in both directions. An
/// empty result means the condition holds.
std::optional<Violation> back_holds(const CrossRelation& outer, const CrossRelation& target, const Guards& guards,
                                    const Model& m1, const Model& m2);
std::optional<Violation> forth_holds(const CrossRelation& outer, const CrossRelation& target, const Guards& guards,
                                     const Model& m1, const Model& m2);
std::optional<Violation> sback_holds(const CrossRelation& outer, const CrossRelation& B, const Guards& guards,
                                     const Model& m1, const Model& m2);
std::optional<Violation> sforth_holds(const CrossRelation& outer, const CrossRelation& B, const Guards& guards,
                                      const Model& m1, const Model& m2);

/// Largest X such that every pair of X meets the condition of the degree-1
/// connective `mu_minus`: back/forth towards A1, or the special variant
/// with B = A_for_special.
CrossRelation max_inner_target(const GuardedConnective& mu_minus, const CrossRelation& A1,
                               const CrossRelation& A_for_special, const Model& m1, const Model& m2);

struct AsimOptions {
  /// Accept connectives outside the standard classes and treat them with
  /// the same block-by-block schema. Experimental; no correctness claim.
  bool allow_nonstandard = false;
};

/// Whether A meets the existential clause for mu. Throws
/// UnsupportedFragment for non-standard connectives unless allowed.
std::optional<Violation> connective_condition(const GuardedConnective& mu, const CrossRelation& A, const Model& m1,
                                              const Model& m2, const AsimOptions& opts = {});

/// Every pair (both directions) whose outer condition for mu holds given
/// the relations derived from A. Degree-0 connectives admit everything.
CrossRelation admissible_pairs(const GuardedConnective& mu, const CrossRelation& A, const Model& m1,
                               const Model& m2, const AsimOptions& opts = {});

CrossRelation atom_preserving(const Model& m1, const Model& m2, const std::vector<std::string>& preds);

/// Empty when A is an asimulation; otherwise the violations found (at most
/// one per connective, all atom violations).
std::vector<Violation> is_asimulation(const Signature& sig, const std::vector<std::string>& preds, const Model& m1,
                                      const Model& m2, const CrossRelation& A, const AsimOptions& opts = {});

/// True when some degree-0 connective has an anti-monotone or rest core,
/// which forces every asimulation to be symmetric.
bool needs_symmetry(const Signature& sig);

struct LargestResult {
  CrossRelation relation;
  /// No asimulation exists between these models for this fragment.
  bool none = false;
  unsigned rounds = 0;
};

LargestResult largest_asimulation(const Signature& sig, const std::vector<std::string>& preds, const Model& m1,
                                  const Model& m2, const AsimOptions& opts = {});

struct Counterexample {
  std::size_t first = 0, second = 0;
  int direction = 0;
};

/// phi must have exactly one free variable.
std::optional<Counterexample> invariance_check(const FoFormula& phi, const CrossRelation& A, const Model& m1,
                                               const Model& m2);

struct Preservation {
  CrossRelation relation;
  EnumStatus status = EnumStatus::complete;
  bool closed = false;
  std::size_t formulas = 0;
};

/// Pairs (c, d) such that every fragment formula of depth at most `depth`
/// true at c is true at d.
Preservation preservation_relation(const Signature& sig, const std::vector<std::string>& preds, const Model& m1,
                                   const Model& m2, unsigned depth, const EnumerationLimits& limits = {});

/// Predicates occurring in either model, sorted.
std::vector<std::string> joint_predicates(const Model& m1, const Model& m2);

}  // namespace asimkit
