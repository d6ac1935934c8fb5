#include "asimkit/experiment.hpp"

#include <algorithm>

#include "asimkit/error.hpp"
#include "asimkit/rng.hpp"
#include "json.hpp"

namespace asimkit {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (trials < 1) throw InputError("experiment: trials must be at least 1");
  if (min_size < 1) throw InputError("experiment: model size must be at least 1");
  if (max_size < min_size) throw InputError("experiment: max size is below min size");
  if (edge_prob < 0 || edge_prob > 1 || pred_prob < 0 || pred_prob > 1)
    throw InputError("experiment: probabilities must lie in [0, 1]");
}

bool TrialReport::pass() const {
  return invariance_violations == 0 && inclusion_ok && sandwich_depth.has_value();
}

std::string TrialReport::to_json() const {
  json j;
  j["trial"] = index;
  j["seed"] = seed;
  j["size1"] = size1;
  j["size2"] = size2;
  j["largest_pairs"] = largest_pairs;
  j["none"] = none;
  j["rounds"] = rounds;
  j["classes"] = classes;
  j["invariance_violations"] = invariance_violations;
  j["fo_checked"] = fo_checked;
  j["inclusion_ok"] = inclusion_ok;
  j["sandwich_depth"] = sandwich_depth ? json(*sandwich_depth) : json(nullptr);
  j["enumeration"] = status_name(status);
  j["pass"] = pass();
  return j.dump();
}

std::pair<Model, Model> trial_models(const Signature& sig, const ExperimentConfig& cfg, unsigned index) {
  Rng rng(cfg.seed + index);
  const auto rels = sig.relation_symbols();
  const std::size_t n1 = rng.between(cfg.min_size, cfg.max_size);
  const std::size_t n2 = rng.between(cfg.min_size, cfg.max_size);
  const std::uint64_t s1 = rng.raw(), s2 = rng.raw();
  if (cfg.preorder) {
    if (rels.size() > 1) throw InputError("experiment: preorder models need a signature with one relation symbol");
    const std::string rel = rels.empty() ? "R1" : rels.front();
    return {random_preorder_model(n1, rel, cfg.preds, cfg.edge_prob, cfg.pred_prob, s1),
            random_preorder_model(n2, rel, cfg.preds, cfg.edge_prob, cfg.pred_prob, s2)};
  }
  return {random_model(n1, rels, cfg.preds, cfg.edge_prob, cfg.pred_prob, s1),
          random_model(n2, rels, cfg.preds, cfg.edge_prob, cfg.pred_prob, s2)};
}

namespace {

void restrict_by(CrossRelation& P, const Bits& v, std::size_t n1, std::size_t n2) {
  Bits p1(n1), p2(n2);
  for (std::size_t a = 0; a < n1; ++a) p1[a] = v[a];
  for (std::size_t b = 0; b < n2; ++b) p2[b] = v[n1 + b];
  for (auto a = p1.find_first(); a != Bits::npos; a = p1.find_next(a)) P.rows(0)[a] &= p2;
  for (auto b = p2.find_first(); b != Bits::npos; b = p2.find_next(b)) P.rows(1)[b] &= p1;
}

// Pairs of L along which the truth vector v fails to transfer.
std::size_t broken_pairs(const CrossRelation& L, const Bits& v, std::size_t n1) {
  std::size_t count = 0;
  for (int d = 0; d < 2; ++d) {
    const auto& rows = L.rows(d);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const bool here = d == 0 ? v[a] : v[n1 + a];
      if (!here) continue;
      for (auto b = rows[a].find_first(); b != Bits::npos; b = rows[a].find_next(b))
        if (!(d == 0 ? v[n1 + b] : v[b])) ++count;
    }
  }
  return count;
}

}  // namespace

Sandwich sandwich_test(const Signature& sig, const std::vector<std::string>& preds, const Model& m1, const Model& m2,
                       const CrossRelation& largest, unsigned max_depth, const EnumerationLimits& limits) {
  const Enumeration e = enumerate_fragment(sig, preds, max_depth, m1, m2, limits);
  const std::size_t n1 = m1.size(), n2 = m2.size();
  Sandwich out;
  out.status = e.status;
  out.reached.relation = CrossRelation::full(n1, n2);
  out.reached.status = e.status;
  std::size_t i = 0;
  const unsigned last = e.status == EnumStatus::complete ? max_depth : e.depth_reached;
  for (unsigned d = 0; d <= last; ++d) {
    for (; i < e.size() && e.node(i).depth <= d; ++i) restrict_by(out.reached.relation, e.vector(i), n1, n2);
    out.reached.formulas = i;
    if (!largest.subset_of(out.reached.relation)) out.inclusion_ok = false;
    if (out.reached.relation == largest) {
      out.equal_at = d;
      break;
    }
    // Once a level adds nothing the preorder is final.
    if (e.closed && i == e.size()) {
      out.reached.closed = true;
      break;
    }
  }
  return out;
}

TrialReport run_trial(const Signature& sig, const ExperimentConfig& cfg, unsigned index) {
  TrialReport r;
  r.index = index;
  r.seed = cfg.seed + index;
  const auto [m1, m2] = trial_models(sig, cfg, index);
  r.size1 = m1.size();
  r.size2 = m2.size();
  const LargestResult L = largest_asimulation(sig, cfg.preds, m1, m2);
  r.largest_pairs = L.relation.count();
  r.none = L.none;
  r.rounds = L.rounds;

  const Enumeration e = enumerate_fragment(sig, cfg.preds, cfg.depth, m1, m2, cfg.limits);
  r.classes = e.size();
  r.status = e.status;
  for (std::size_t i = 0; i < e.size(); ++i) r.invariance_violations += broken_pairs(L.relation, e.vector(i), m1.size());
  // A sample of representatives goes through the first-order translation
  // so invariance is also checked independently of the direct semantics.
  const std::size_t step = std::max<std::size_t>(1, e.size() / std::max<std::size_t>(1, cfg.fo_checks));
  for (std::size_t i = 0; i < e.size() && r.fo_checked < cfg.fo_checks; i += step) {
    const FoFormula phi = std_translate(e.formula(i), "x1", sig);
    if (invariance_check(phi, L.relation, m1, m2)) ++r.invariance_violations;
    ++r.fo_checked;
  }

  const Sandwich s = sandwich_test(sig, cfg.preds, m1, m2, L.relation, cfg.max_sandwich_depth, cfg.limits);
  r.inclusion_ok = s.inclusion_ok;
  r.sandwich_depth = s.equal_at;
  if (s.status != EnumStatus::complete) r.status = s.status;
  return r;
}

std::vector<TrialReport> run_experiment(const Signature& sig, const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TrialReport> out;
  out.reserve(cfg.trials);
  for (unsigned i = 0; i < cfg.trials; ++i) out.push_back(run_trial(sig, cfg, i));
  return out;
}

std::string summary_json(const std::vector<TrialReport>& reports) {
  std::size_t passed = 0, violations = 0, equal = 0, budget = 0, none = 0;
  for (const auto& r : reports) {
    passed += r.pass();
    violations += r.invariance_violations;
    equal += r.sandwich_depth.has_value();
    budget += r.status == EnumStatus::budget_exhausted;
    none += r.none;
  }
  json j;
  j["summary"] = true;
  j["trials"] = reports.size();
  j["passed"] = passed;
  j["failed"] = reports.size() - passed;
  j["invariance_violations"] = violations;
  j["sandwich_equal"] = equal;
  j["no_asimulation"] = none;
  j["budget_exhausted"] = budget;
  return j.dump();
}

}  // namespace asimkit
