#pragma once

// Seeded trials over random model pairs. Each trial computes the largest
// asimulation and then compares it with enumerated formulas of bounded depth.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asimkit/asim.hpp"
#include "asimkit/connective.hpp"
#include "asimkit/fragment.hpp"

namespace asimkit {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  unsigned trials = 10;
  std::size_t min_size = 1;
  std::size_t max_size = 4;
  double edge_prob = 0.35;
  double pred_prob = 0.4;
  std::vector<std::string> preds{"P1", "P2"};
  /// Generate reflexive-transitive models with upward-closed predicates.
  bool preorder = false;
  /// Depth for the invariance check.
  unsigned depth = 3;
  /// Deepest level tried when looking for equality with the preservation preorder.
  unsigned max_sandwich_depth = 6;
  /// Representatives additionally checked through their first-order translation.
  std::size_t fo_checks = 10;
  EnumerationLimits limits;

  /// Throws InputError when trials or sizes are out of range.
  void validate() const;
};

struct TrialReport {
  unsigned index = 0;
  std::uint64_t seed = 0;
  std::size_t size1 = 0, size2 = 0;
  std::size_t largest_pairs = 0;
  bool none = false;
  unsigned rounds = 0;
  std::size_t classes = 0;
  std::size_t invariance_violations = 0;
  std::size_t fo_checked = 0;
  /// Largest asimulation not contained in the preservation preorder at some depth.
  bool inclusion_ok = true;
  std::optional<unsigned> sandwich_depth;
  EnumStatus status = EnumStatus::complete;

  bool pass() const;
  std::string to_json() const;
};

/// The two models of trial `index`, drawn from seed + index.
std::pair<Model, Model> trial_models(const Signature& sig, const ExperimentConfig& cfg, unsigned index);

TrialReport run_trial(const Signature& sig, const ExperimentConfig& cfg, unsigned index);
std::vector<TrialReport> run_experiment(const Signature& sig, const ExperimentConfig& cfg);
std::string summary_json(const std::vector<TrialReport>& reports);

/// Result of comparing a largest asimulation with the preservation preorder.
struct Sandwich {
  Preservation reached;  // preorder at the last depth examined
  bool inclusion_ok = true;
  std::optional<unsigned> equal_at;
  EnumStatus status = EnumStatus::complete;
};

/// Enumerates once up to `max_depth` and compares the preorder of every
/// depth with `largest`, stopping at the first equality.
Sandwich sandwich_test(const Signature& sig, const std::vector<std::string>& preds, const Model& m1, const Model& m2,
                       const CrossRelation& largest, unsigned max_depth, const EnumerationLimits& limits = {});

}  // namespace asimkit
